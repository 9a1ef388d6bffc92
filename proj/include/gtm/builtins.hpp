#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gtm/analysis.hpp"
#include "gtm/machine.hpp"
#include "gtm/realize.hpp"
#include "gtm/represent.hpp"
#include "gtm/wordfn.hpp"

namespace gtm {

// The built-in subroutines resolvable by name from the machine format and the
// realizer/generator configuration files.
//
//   identities        id_word id_stream id_rat id_real id_nat id_int
//                     id_interval id_sri
//   multi-valued      coin                  ()            -> word {"0","1"}
//   abstract          real_add              real, real    -> real
//                     rat_add               rat,  rat     -> rat
//                     sri_add               sri,  sri     -> sri
//   stream level      ivadd                 stream,stream -> stream
//                     s_not s_tail s_dup s_even           (1-ary)
//                     s_interleave          stream,stream -> stream
//   stream test       s_first_is0           stream        -> {0,1}
//   word level        w_id w_droplast w_half w_evenpos w_not w_tail w_dup
//                     w_zip w_ivadd         (prefix-monotone word functions)
//   word test         w_first_is0           word          -> {0,1}

namespace builtin_detail {

inline Word map_symbols(const Word& u, char (*f)(char)) {
    std::string s;
    s.reserve(u.size());
    for (char c : u.symbols()) s += f(c);
    return Word(u.alphabet(), std::move(s));
}

inline char flip01(char c) { return c == '0' ? '1' : c == '1' ? '0' : c; }

} // namespace builtin_detail

// ---- monotone / monotone-constant word functions ----------------------------

inline WordFunction wf_identity(std::string name = "w_id") {
    return {std::move(name), 1, WordFunction::Class::Monotone,
            [](std::span<const Word> a) -> std::optional<Word> { return a[0]; }};
}

// u restricted to its first |u|-1 symbols.
inline WordFunction wf_droplast(std::string name = "w_droplast") {
    return {std::move(name), 1, WordFunction::Class::Monotone,
            [](std::span<const Word> a) -> std::optional<Word> {
                return a[0].prefix(a[0].empty() ? 0 : a[0].size() - 1);
            }};
}

inline WordFunction wf_half(std::string name = "w_half") {
    return {std::move(name), 1, WordFunction::Class::Monotone,
            [](std::span<const Word> a) -> std::optional<Word> {
                return a[0].prefix(a[0].size() / 2);
            }};
}

// Symbols at even positions; generates the even-position stream function.
inline WordFunction wf_evenpos(std::string name = "w_evenpos") {
    return {std::move(name), 1, WordFunction::Class::Monotone,
            [](std::span<const Word> a) -> std::optional<Word> {
                std::string s;
                for (std::size_t i = 0; i < a[0].size(); i += 2) s += a[0].at(i);
                return Word(a[0].alphabet(), std::move(s));
            }};
}

inline WordFunction wf_not(std::string name = "w_not") {
    return {std::move(name), 1, WordFunction::Class::Monotone,
            [](std::span<const Word> a) -> std::optional<Word> {
                return builtin_detail::map_symbols(a[0], builtin_detail::flip01);
            }};
}

inline WordFunction wf_tail(std::string name = "w_tail") {
    return {std::move(name), 1, WordFunction::Class::Monotone,
            [](std::span<const Word> a) -> std::optional<Word> { return a[0].drop(1); }};
}

inline WordFunction wf_dup(std::string name = "w_dup") {
    return {std::move(name), 1, WordFunction::Class::Monotone,
            [](std::span<const Word> a) -> std::optional<Word> {
                std::string s;
                for (char c : a[0].symbols()) {
                    s += c;
                    s += c;
                }
                return Word(a[0].alphabet(), std::move(s));
            }};
}

// u0 v0 u1 v1 ... up to the shorter argument; generates interleaving.
inline WordFunction wf_zip(std::string name = "w_zip") {
    return {std::move(name), 2, WordFunction::Class::Monotone,
            [](std::span<const Word> a) -> std::optional<Word> {
                std::string s;
                std::size_t n = std::min(a[0].size(), a[1].size());
                for (std::size_t i = 0; i < n; ++i) {
                    s += a[0].at(i);
                    s += a[1].at(i);
                }
                return Word(a[0].alphabet(), std::move(s));
            }};
}

// The generating word function of componentwise interval addition: sums the
// complete records present in both prefixes. A contradicting tail stops the
// parse (it stays contradicting under every extension), so the function is
// total and monotone.
inline WordFunction wf_ivadd(std::string name = "w_ivadd") {
    return {std::move(name), 2, WordFunction::Class::Monotone,
            [](std::span<const Word> a) -> std::optional<Word> {
                ParsedRecords pa = parse_interval_records(a[0]);
                ParsedRecords pb = parse_interval_records(a[1]);
                std::size_t n = std::min(pa.records.size(), pb.records.size());
                Word out = Word::binary("");
                for (std::size_t i = 0; i < n; ++i)
                    out = out + encode_interval(pa.records[i] + pb.records[i]);
                return out;
            }};
}

// First symbol as a {0,1} answer; undefined on the empty word. The
// monotone-constant generator of the stream head test.
inline WordFunction wf_first_is0(std::string name = "w_first_is0") {
    return {std::move(name), 1, WordFunction::Class::MonotoneConstant,
            [](std::span<const Word> a) -> std::optional<Word> {
                if (a[0].empty()) return std::nullopt;
                return Word::binary(a[0].at(0) == '0' ? "0" : "1");
            }};
}

// First symbol as a word; undefined on the empty word.
inline WordFunction wf_first_symbol(std::string name = "w_first") {
    return {std::move(name), 1, WordFunction::Class::MonotoneConstant,
            [](std::span<const Word> a) -> std::optional<Word> {
                if (a[0].empty()) return std::nullopt;
                return a[0].prefix(1);
            }};
}

inline std::map<std::string, WordFunction> builtin_word_functions() {
    std::map<std::string, WordFunction> t;
    for (WordFunction wf : {wf_identity(), wf_droplast(), wf_half(), wf_evenpos(), wf_not(),
                            wf_tail(), wf_dup(), wf_zip(), wf_ivadd(), wf_first_is0(),
                            wf_first_symbol()})
        t.emplace(wf.name, std::move(wf));
    return t;
}

// ---- stream-level subroutines ------------------------------------------------

namespace builtin_detail {

inline MultiFunction unary_stream(std::string name, std::function<Stream(const Stream&)> f) {
    return MultiFunction::single_valued(
        std::move(name), {"stream"}, "stream",
        [f = std::move(f)](std::span<const CarrierValue> a) -> std::optional<CarrierValue> {
            return stream_value(f(a[0].as_stream()));
        });
}

inline MultiFunction identity_fn(std::string name, std::string carrier) {
    return MultiFunction::single_valued(
        std::move(name), {carrier}, carrier,
        [](std::span<const CarrierValue> a) -> std::optional<CarrierValue> { return a[0]; });
}

} // namespace builtin_detail

inline Stream stream_not(const Stream& p) {
    return Stream::from_producer(p.alphabet(),
                                 [p](std::size_t i) { return builtin_detail::flip01(p.at(i)); });
}

inline Stream stream_tail(const Stream& p) {
    return Stream::from_producer(p.alphabet(), [p](std::size_t i) { return p.at(i + 1); });
}

inline Stream stream_dup(const Stream& p) {
    return Stream::from_producer(p.alphabet(), [p](std::size_t i) { return p.at(i / 2); });
}

inline Stream stream_even(const Stream& p) {
    return Stream::from_producer(p.alphabet(), [p](std::size_t i) { return p.at(2 * i); });
}

inline Stream stream_interleave(const Stream& p, const Stream& q) {
    return Stream::from_producer(p.alphabet(), [p, q](std::size_t i) {
        return i % 2 == 0 ? p.at(i / 2) : q.at(i / 2);
    });
}

// ---- the registry -------------------------------------------------------------

inline SubroutineRegistry builtin_subroutines() {
    using namespace builtin_detail;
    SubroutineRegistry reg;

    reg.add(identity_fn("id_word", "word"));
    reg.add(identity_fn("id_stream", "stream"));
    reg.add(identity_fn("id_rat", "rat"));
    reg.add(identity_fn("id_real", "real"));
    reg.add(identity_fn("id_nat", "nat"));
    reg.add(identity_fn("id_int", "int"));
    reg.add(identity_fn("id_interval", "interval"));
    reg.add(identity_fn("id_sri", "sri"));

    reg.add(MultiFunction::enumerated("coin", {}, "word", [](std::span<const CarrierValue>) {
        return std::vector<CarrierValue>{word_value(Word::binary("0")),
                                         word_value(Word::binary("1"))};
    }));

    reg.add(MultiFunction::single_valued(
        "real_add", {"real", "real"}, "real",
        [](std::span<const CarrierValue> a) -> std::optional<CarrierValue> {
            return real_value(a[0].as_rational() + a[1].as_rational());
        }));
    reg.add(MultiFunction::single_valued(
        "rat_add", {"rat", "rat"}, "rat",
        [](std::span<const CarrierValue> a) -> std::optional<CarrierValue> {
            return rational_value(a[0].as_rational() + a[1].as_rational());
        }));
    reg.add(MultiFunction::single_valued(
        "sri_add", {"sri", "sri"}, "sri",
        [](std::span<const CarrierValue> a) -> std::optional<CarrierValue> {
            return sri_value(IntervalSequence::sum(as_sri(a[0]), as_sri(a[1])));
        }));

    reg.add(MultiFunction::single_valued(
        "ivadd", {"stream", "stream"}, "stream",
        [](std::span<const CarrierValue> a) -> std::optional<CarrierValue> {
            return stream_value(interval_add(a[0].as_stream(), a[1].as_stream()));
        }));
    reg.add(unary_stream("s_not", stream_not));
    reg.add(unary_stream("s_tail", stream_tail));
    reg.add(unary_stream("s_dup", stream_dup));
    reg.add(unary_stream("s_even", stream_even));
    reg.add(MultiFunction::single_valued(
        "s_interleave", {"stream", "stream"}, "stream",
        [](std::span<const CarrierValue> a) -> std::optional<CarrierValue> {
            return stream_value(stream_interleave(a[0].as_stream(), a[1].as_stream()));
        }));

    TestFunction head_test;
    head_test.name = "s_first_is0";
    head_test.arg_carriers = {"stream"};
    head_test.evaluate = [](std::span<const CarrierValue> a) -> std::optional<char> {
        return a[0].as_stream().at(0) == '0' ? '0' : '1';
    };
    reg.add(head_test);

    for (const auto& [name, wf] : builtin_word_functions()) {
        if (name == "w_first_is0")
            reg.add(to_test_function(wf));
        else
            reg.add(to_multi_function(wf));
    }
    return reg;
}

// Generating word functions for the stream-level subroutines, keyed by the
// subroutine id they generate.
inline std::map<std::string, WordFunction> builtin_generators() {
    std::map<std::string, WordFunction> g;
    g.emplace("id_stream", wf_identity("id_stream"));
    g.emplace("ivadd", wf_ivadd("ivadd"));
    g.emplace("s_not", wf_not("s_not"));
    g.emplace("s_tail", wf_tail("s_tail"));
    g.emplace("s_dup", wf_dup("s_dup"));
    g.emplace("s_even", wf_evenpos("s_even"));
    g.emplace("s_interleave", wf_zip("s_interleave"));
    g.emplace("s_first_is0", wf_first_is0("s_first_is0"));
    return g;
}

} // namespace gtm
