#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "gtm/gtm.hpp"
#include "support.hpp"

using namespace gtm;

TEST_CASE("alphabets require 0 and 1 and reject duplicates") {
    CHECK_NOTHROW(Alphabet("01ab"));
    CHECK_THROWS_AS(Alphabet("ab"), AlphabetError);
    CHECK_THROWS_AS(Alphabet("0"), AlphabetError);
    CHECK_THROWS_AS(Alphabet("011"), AlphabetError);
    CHECK_THROWS_AS(Alphabet(""), AlphabetError);
}

TEST_CASE("prefix order on words") {
    Alphabet abc("01abc");
    Word ab(abc, "ab"), abc_w(abc, "abc"), ba(abc, "ba"), empty(abc, ""), x(abc, "c");
    CHECK(prefix_leq(ab, abc_w));
    CHECK(prefix_leq(empty, x));
    CHECK_FALSE(prefix_leq(ba, abc_w));
    CHECK_THROWS_AS(prefix_leq(Word::binary("0"), abc_w), AlphabetError);
}

TEST_CASE("prefix order is a partial order on random triples") {
    SplitMix64 rng(7);
    for (int i = 0; i < 500; ++i) {
        Word u = testsupport::random_binary_word(rng, 6);
        Word v = testsupport::random_binary_word(rng, 6);
        Word w = testsupport::random_binary_word(rng, 6);
        CHECK(prefix_leq(u, u));
        if (prefix_leq(u, v) && prefix_leq(v, u)) CHECK(u == v);
        if (prefix_leq(u, v) && prefix_leq(v, w)) CHECK(prefix_leq(u, w));
    }
}

TEST_CASE("stream prefixes") {
    Stream s = Stream::periodic(Word::binary(""), Word::binary("01"));
    std::vector<Stream> q{s};
    CHECK(stream_prefix(q, 3)[0] == Word::binary("010"));

    Stream t = Stream::periodic(Word::binary(""), Word::binary("1"));
    std::vector<Stream> q2{s, t};
    auto p0 = stream_prefix(q2, 0);
    CHECK(p0[0] == Word::binary(""));
    CHECK(p0[1] == Word::binary(""));

    Stream u = Stream::periodic(Word::binary("1"), Word::binary("0"));
    std::vector<Stream> q3{u};
    CHECK(stream_prefix(q3, 2)[0] == Word::binary("10"));
}

TEST_CASE("prefix_leq against a stream probes exactly the prefix length") {
    Stream s = Stream::periodic(Word::binary(""), Word::binary("10"));
    CHECK(s.cached_length() == 0);
    CHECK(prefix_leq(Word::binary("101"), s));
    CHECK(s.cached_length() == 3);
    CHECK_FALSE(prefix_leq(Word::binary("1010111"), s));  // mismatch at index 4
}

TEST_CASE("stream prefix stability") {
    SplitMix64 rng(11);
    for (int i = 0; i < 200; ++i) {
        Stream s = testsupport::random_periodic_stream(rng);
        std::size_t e = rng.below(20);
        std::size_t e2 = e + rng.below(20);
        Word a = s.prefix(e);
        Word b = s.prefix(e2);
        CHECK(prefix_leq(a, b));
    }
}

TEST_CASE("stateful chunk producers stay consistent under repeated probing") {
    int calls = 0;
    Stream s = Stream::from_chunks(Alphabet::binary(), [&calls](std::size_t) {
        ++calls;
        return Word::binary("01");
    });
    Word first = s.prefix(5);
    Word again = s.prefix(5);
    CHECK(first == again);
    CHECK(calls == 3);  // memoized: three chunks cover five symbols
    CHECK(s.prefix(2) == Word::binary("01"));
    CHECK(calls == 3);
}

TEST_CASE("iota encoding of the examples") {
    CHECK(iota_encode(Word::binary("1")) == Word::binary("1101011"));
    CHECK(iota_encode(Word::binary("")) == Word::binary("11011"));
    CHECK(iota_encode(Word::binary("01")) == Word::binary("110001011"));
    CHECK_THROWS_AS(iota_encode(Word(Alphabet("01x"), "x")), AlphabetError);
}

TEST_CASE("iota block decoding from streams") {
    Word two_blocks = iota_encode(Word::binary("1")) + iota_encode(Word::binary(""));
    Stream p = Stream::periodic(two_blocks, Word::binary("0"));
    IotaBlockReader r = iota_decode_stream(p);
    CHECK(r.next() == Word::binary("1"));
    CHECK(r.next() == Word::binary(""));

    Stream rep = Stream::periodic(Word::binary(""), Word::binary("110001011"));
    IotaBlockReader r2 = iota_decode_stream(rep);
    for (int i = 0; i < 3; ++i) CHECK(r2.next() == Word::binary("01"));

    Stream zeros = Stream::periodic(Word::binary(""), Word::binary("0"));
    IotaBlockReader r3 = iota_decode_stream(zeros);
    try {
        r3.next();
        FAIL("expected a decode error");
    } catch (const DecodeError& e) {
        CHECK(e.offset() == 0);
    }
}

TEST_CASE("iota decode demands only the symbols it needs") {
    Stream p = Stream::periodic(iota_encode(Word::binary("0")), Word::binary("1"));
    IotaBlockReader r = iota_decode_stream(p);
    CHECK(r.next() == Word::binary("0"));
    CHECK(p.cached_length() == 7);  // exactly the block
}

TEST_CASE("beta decode") {
    CHECK(beta_decode(beta_encode(Word::binary("1"))) == Word::binary("1"));
    CHECK(beta_decode(beta_encode(Word::binary(""))) == Word::binary(""));
    Stream not_a_name = Stream::periodic(Word::binary("1"), Word::binary("0"));
    CHECK_THROWS_AS(beta_decode(not_a_name), NotANameError);
}

TEST_CASE("beta inverts iota exhaustively to length 8") {
    for (std::size_t len = 0; len <= 8; ++len) {
        for (std::uint64_t bits = 0; bits < (1ull << len); ++bits) {
            std::string s;
            for (std::size_t i = 0; i < len; ++i) s += (bits >> i) & 1 ? '1' : '0';
            Word w = Word::binary(s);
            CHECK(beta_decode(beta_encode(w)) == w);
        }
    }
}

// Unique parseability: every concatenation of blocks decodes back to exactly
// the original block list. Exhaustive over lists where each block costs
// |payload| + 1 and the total cost is at most 12.
namespace {
void enumerate_block_lists(std::vector<Word>& current, std::size_t budget, int& checked) {
    if (!current.empty()) {
        Word cat = Word::binary("");
        for (const Word& b : current) cat = cat + iota_encode(b);
        std::vector<Word> decoded = iota_decode_words(cat);
        if (decoded != current) REQUIRE(decoded == current);  // macro only on failure
        ++checked;
    }
    for (std::size_t len = 0; len + 1 <= budget; ++len) {
        for (std::uint64_t bits = 0; bits < (1ull << len); ++bits) {
            std::string s;
            for (std::size_t i = 0; i < len; ++i) s += (bits >> i) & 1 ? '1' : '0';
            current.push_back(Word::binary(s));
            enumerate_block_lists(current, budget - len - 1, checked);
            current.pop_back();
        }
    }
}
} // namespace

TEST_CASE("iota block lists are uniquely parseable") {
    std::vector<Word> current;
    int checked = 0;
    enumerate_block_lists(current, 12, checked);
    CHECK(checked > 100000);
}

TEST_CASE("natural and integer formats") {
    CHECK(encode_natural(Natural(0)) == Word::binary("0"));
    CHECK(encode_natural(Natural(1)) == Word::binary("1"));
    CHECK(encode_natural(Natural(6)) == Word::binary("110"));
    CHECK(decode_natural(Word::binary("110")) == 6);
    CHECK_THROWS_AS(decode_natural(Word::binary("01")), DecodeError);
    CHECK_THROWS_AS(decode_natural(Word::binary("")), DecodeError);

    CHECK(encode_integer(Integer(-5)) == Word::binary("1101"));
    CHECK(encode_integer(Integer(0)) == Word::binary("00"));
    CHECK(decode_integer(Word::binary("1101")) == -5);
    CHECK_THROWS_AS(decode_integer(Word::binary("10")), DecodeError);  // negative zero
}

TEST_CASE("rational and interval record formats round-trip") {
    SplitMix64 rng(23);
    for (int i = 0; i < 300; ++i) {
        Rational x = testsupport::random_rational(rng);
        CHECK(decode_rational(encode_rational(x)) == x);
    }
    Rational zero(0);
    CHECK(decode_rational(encode_rational(zero)) == zero);
    for (int i = 0; i < 100; ++i) {
        Rational a = testsupport::random_rational(rng);
        Rational b = a + Rational(Integer(rng.below(50) + 1), Integer(7));
        Interval iv(a, b);
        CHECK(decode_interval(encode_interval(iv)) == iv);
    }
}

TEST_CASE("rational decoding is strict about canonical form") {
    // 2/4 is not in lowest terms.
    Word w = iota_encode(Word::binary("0")) + iota_encode(Word::binary("10")) +
             iota_encode(Word::binary("100"));
    CHECK_THROWS_AS(decode_rational(w), DecodeError);
    // sign block must be one symbol
    Word w2 = iota_encode(Word::binary("00")) + iota_encode(Word::binary("1")) +
              iota_encode(Word::binary("1"));
    CHECK_THROWS_AS(decode_rational(w2), DecodeError);
    // zero denominator
    Word w3 = iota_encode(Word::binary("0")) + iota_encode(Word::binary("1")) +
              iota_encode(Word::binary("0"));
    CHECK_THROWS_AS(decode_rational(w3), DecodeError);
}

TEST_CASE("interval record streams") {
    Stream s = interval_record_stream([](std::size_t n) {
        Rational lo(Integer(n), Integer(1));
        return Interval(lo, lo + 1);
    });
    IntervalRecordReader r(s);
    CHECK(r.next() == Interval(Rational(0), Rational(1)));
    CHECK(r.next() == Interval(Rational(1), Rational(2)));
}

TEST_CASE("eventually periodic equality") {
    Stream a = Stream::periodic(Word::binary("0"), Word::binary("10"));
    Stream b = Stream::periodic(Word::binary("01"), Word::binary("01"));
    Stream c = Stream::periodic(Word::binary(""), Word::binary("1"));
    CHECK(eventually_periodic_equal(a, b) == std::optional(true));
    CHECK(eventually_periodic_equal(a, c) == std::optional(false));
    Stream lazy = Stream::from_producer(Alphabet::binary(), [](std::size_t) { return '0'; });
    CHECK_FALSE(eventually_periodic_equal(a, lazy).has_value());
}
