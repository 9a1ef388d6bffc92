#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtm/error.hpp"
#include "gtm/numbers.hpp"
#include "gtm/stream.hpp"
#include "gtm/word.hpp"

namespace gtm {

// Self-delimiting block code over {0,1} and the canonical name formats built
// from it:
//
//   iota(a1..an) = 110 a1 0 a2 0 ... an 0 11      (blocks)
//   natural      = binary, most significant bit first, no leading zeros
//   integer      = sign symbol ('0' >= 0, '1' < 0), then |z| as natural
//   rational p/q = iota(sign) iota(bin |p|) iota(bin q)   (q > 0, gcd = 1)
//   interval     = the six blocks of the two endpoint rationals (lo < hi)
//   interval stream = infinite concatenation of interval records
//
// These formats are normative for every other part of the library.

inline Word iota_encode(const Word& w) {
    std::string out = "110";
    for (char c : w.symbols()) {
        if (c != '0' && c != '1')
            throw AlphabetError(std::string("iota_encode: symbol '") + c + "' outside {0,1}");
        out += c;
        out += '0';
    }
    out += "11";
    return Word::binary(out);
}

// Symbol source abstraction shared by word-backed (finite, may run out) and
// stream-backed (total) readers.
using SymbolSource = std::function<std::optional<char>(std::size_t)>;

inline SymbolSource word_source(Word w) {
    return [w = std::move(w)](std::size_t i) -> std::optional<char> {
        if (i >= w.size()) return std::nullopt;
        return w.at(i);
    };
}

inline SymbolSource stream_source(Stream s) {
    return [s = std::move(s)](std::size_t i) -> std::optional<char> { return s.at(i); };
}

enum class ScanStatus { Block, Incomplete, Malformed };

struct BlockScan {
    ScanStatus status = ScanStatus::Incomplete;
    Word payload;                  // valid when status == Block
    std::size_t end = 0;           // one past the block when status == Block
    std::size_t error_offset = 0;  // first contradicting position when Malformed
};

// Scans one iota block starting at `start`. Malformed-ness is a point event:
// once a position contradicts the grammar, every extension contradicts it at
// the same position (this keeps prefix-parsing word functions monotone).
inline BlockScan scan_iota_block(const SymbolSource& src, std::size_t start) {
    auto get = [&](std::size_t i) { return src(start + i); };
    static const char header[3] = {'1', '1', '0'};
    for (std::size_t i = 0; i < 3; ++i) {
        auto c = get(i);
        if (!c) return {ScanStatus::Incomplete, {}, 0, 0};
        if (*c != header[i]) return {ScanStatus::Malformed, {}, 0, start + i};
    }
    std::string payload;
    for (std::size_t p = 3;; p += 2) {
        auto s1 = get(p);
        if (!s1) return {ScanStatus::Incomplete, {}, 0, 0};
        auto s2 = get(p + 1);
        if (!s2) return {ScanStatus::Incomplete, {}, 0, 0};
        if (*s1 == '1' && *s2 == '1')
            return {ScanStatus::Block, Word::binary(payload), start + p + 2, 0};
        if (*s2 == '0') {
            if (*s1 != '0' && *s1 != '1')
                return {ScanStatus::Malformed, {}, 0, start + p};
            payload += *s1;
            continue;
        }
        // s2 == '1' with s1 == '0': neither a continuation pair nor an end marker.
        return {ScanStatus::Malformed, {}, 0, start + p + 1};
    }
}

// Lazy reader for a concatenation of iota blocks; demands only the symbols it
// needs. next() throws DecodeError at the offending offset on malformed input.
class IotaBlockReader {
public:
    explicit IotaBlockReader(SymbolSource src, std::size_t start = 0)
        : src_(std::move(src)), offset_(start) {}

    explicit IotaBlockReader(const Stream& p) : src_(stream_source(p)) {}

    BlockScan try_next() {
        BlockScan s = scan_iota_block(src_, offset_);
        if (s.status == ScanStatus::Block) offset_ = s.end;
        return s;
    }

    Word next() {
        BlockScan s = try_next();
        if (s.status == ScanStatus::Malformed)
            throw DecodeError("malformed iota block", s.error_offset);
        if (s.status == ScanStatus::Incomplete)
            throw DecodeError("input ended inside an iota block", offset_);
        return s.payload;
    }

    std::size_t offset() const { return offset_; }

private:
    SymbolSource src_;
    std::size_t offset_ = 0;
};

inline IotaBlockReader iota_decode_stream(const Stream& p) { return IotaBlockReader(p); }

// Decodes a finite word that must consist of exactly a concatenation of
// blocks; throws on leftovers or malformed content.
inline std::vector<Word> iota_decode_words(const Word& w) {
    IotaBlockReader r(word_source(w));
    std::vector<Word> blocks;
    while (r.offset() < w.size()) blocks.push_back(r.next());
    return blocks;
}

// beta(iota(w) 0^omega) = w. Only the block prefix is inspected; the all-zero
// tail is part of the caller's contract.
inline Word beta_decode(const Stream& p) {
    IotaBlockReader r(p);
    BlockScan s = r.try_next();
    if (s.status != ScanStatus::Block)
        throw NotANameError("stream does not start with an iota block", s.error_offset);
    return s.payload;
}

inline Stream beta_encode(const Word& w) {
    return Stream::periodic(iota_encode(w), Word::binary("0"));
}

// ---- canonical number formats ----------------------------------------------

inline Word encode_natural(const Natural& n) {
    if (n < 0) throw Error("encode_natural of negative value");
    if (n == 0) return Word::binary("0");
    std::string bits;
    for (Natural v = n; v > 0; v >>= 1) bits += (v & 1) != 0 ? '1' : '0';
    return Word::binary(std::string(bits.rbegin(), bits.rend()));
}

inline Natural decode_natural(const Word& w) {
    const std::string& s = w.symbols();
    if (s.empty()) throw DecodeError("empty natural", 0);
    if (s.size() > 1 && s[0] == '0') throw DecodeError("leading zero in natural", 0);
    Natural n = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') throw DecodeError("natural symbol outside {0,1}", i);
        n = (n << 1) + (s[i] == '1' ? 1 : 0);
    }
    return n;
}

inline Word encode_integer(const Integer& z) {
    std::string sign = z < 0 ? "1" : "0";
    return Word::binary(sign) + encode_natural(z < 0 ? Integer(-z) : z);
}

inline Integer decode_integer(const Word& w) {
    if (w.size() < 2) throw DecodeError("integer too short", 0);
    char sign = w.at(0);
    if (sign != '0' && sign != '1') throw DecodeError("bad sign symbol", 0);
    Natural mag = decode_natural(w.drop(1));
    if (sign == '1' && mag == 0) throw DecodeError("negative zero", 0);
    return sign == '1' ? Integer(-mag) : Integer(mag);
}

// The three block payloads of a rational: sign word, |p| as natural, q as
// natural. The rational must arrive canonical (cpp_rational keeps q > 0 and
// gcd(|p|, q) = 1).
inline std::array<Word, 3> rational_parts(const Rational& x) {
    Integer p = rat_num(x), q = rat_den(x);
    return {Word::binary(p < 0 ? "1" : "0"), encode_natural(p < 0 ? Integer(-p) : p),
            encode_natural(q)};
}

inline Word encode_rational(const Rational& x) {
    auto parts = rational_parts(x);
    return iota_encode(parts[0]) + iota_encode(parts[1]) + iota_encode(parts[2]);
}

namespace detail {
// Semantic validation of the three payloads of a rational. Returns nullopt
// with `error` set when the payloads are present but contradictory; such a
// contradiction is definite and survives any extension of the input.
inline std::optional<Rational> rational_from_parts(const Word& sign, const Word& mag,
                                                   const Word& den, std::string* error) {
    auto fail = [&](const char* msg) -> std::optional<Rational> {
        if (error) *error = msg;
        return std::nullopt;
    };
    if (sign.size() != 1) return fail("bad rational sign block");
    const std::string& m = mag.symbols();
    const std::string& d = den.symbols();
    if (m.empty() || (m.size() > 1 && m[0] == '0')) return fail("bad natural in rational");
    if (d.empty() || (d.size() > 1 && d[0] == '0')) return fail("bad natural in rational");
    Natural p = decode_natural(mag);
    Natural q = decode_natural(den);
    if (q == 0) return fail("rational with zero denominator");
    if (sign.at(0) == '1' && p == 0) return fail("negative zero rational");
    Rational x(p, q);
    if (rat_num(x) != p || rat_den(x) != q) return fail("rational not in lowest terms");
    return sign.at(0) == '1' ? Rational(-x) : x;
}
} // namespace detail

struct RationalScan {
    ScanStatus status = ScanStatus::Incomplete;
    Rational value;
    std::size_t end = 0;
    std::size_t error_offset = 0;
    std::string error;
};

// Scans one rational record (three blocks) starting at `start`.
inline RationalScan scan_rational(const SymbolSource& src, std::size_t start) {
    Word parts[3];
    std::size_t at = start;
    for (int i = 0; i < 3; ++i) {
        BlockScan s = scan_iota_block(src, at);
        if (s.status != ScanStatus::Block)
            return {s.status, {}, 0, s.error_offset, "malformed iota block"};
        parts[i] = s.payload;
        at = s.end;
    }
    std::string err;
    auto x = detail::rational_from_parts(parts[0], parts[1], parts[2], &err);
    if (!x) return {ScanStatus::Malformed, {}, 0, start, err};
    return {ScanStatus::Block, *x, at, 0, {}};
}

struct IntervalScan {
    ScanStatus status = ScanStatus::Incomplete;
    Interval value;
    std::size_t end = 0;
    std::size_t error_offset = 0;
    std::string error;
};

// Scans one interval record (six blocks) starting at `start`.
inline IntervalScan scan_interval(const SymbolSource& src, std::size_t start) {
    RationalScan lo = scan_rational(src, start);
    if (lo.status != ScanStatus::Block) return {lo.status, {}, 0, lo.error_offset, lo.error};
    RationalScan hi = scan_rational(src, lo.end);
    if (hi.status != ScanStatus::Block) return {hi.status, {}, 0, hi.error_offset, hi.error};
    if (!(lo.value < hi.value))
        return {ScanStatus::Malformed, {}, 0, start, "interval record with lo >= hi"};
    return {ScanStatus::Block, Interval(lo.value, hi.value), hi.end, 0, {}};
}

// Reads one rational (three blocks) from a block reader.
inline Rational read_rational(IotaBlockReader& r) {
    std::size_t at = r.offset();
    Word sign = r.next(), mag = r.next(), den = r.next();
    std::string err;
    auto x = detail::rational_from_parts(sign, mag, den, &err);
    if (!x) throw DecodeError(err, at);
    return *x;
}

inline Rational decode_rational(const Word& w) {
    IotaBlockReader r(word_source(w));
    Rational x = read_rational(r);
    if (r.offset() != w.size()) throw DecodeError("trailing symbols after rational", r.offset());
    return x;
}

inline Word encode_interval(const Interval& iv) {
    if (!(iv.lo < iv.hi)) throw Error("interval name requires lo < hi");
    return encode_rational(iv.lo) + encode_rational(iv.hi);
}

// Reads one interval record (six blocks) from a block reader.
inline Interval read_interval(IotaBlockReader& r) {
    std::size_t at = r.offset();
    Rational lo = read_rational(r);
    Rational hi = read_rational(r);
    if (!(lo < hi)) throw DecodeError("interval record with lo >= hi", at);
    return Interval(std::move(lo), std::move(hi));
}

inline Interval decode_interval(const Word& w) {
    IotaBlockReader r(word_source(w));
    Interval iv = read_interval(r);
    if (r.offset() != w.size()) throw DecodeError("trailing symbols after interval", r.offset());
    return iv;
}

// Infinite concatenation of interval records fed by `record`.
inline Stream interval_record_stream(std::function<Interval(std::size_t)> record) {
    return Stream::from_chunks(Alphabet::binary(),
                               [record = std::move(record)](std::size_t j) {
                                   return encode_interval(record(j));
                               });
}

class IntervalRecordReader {
public:
    explicit IntervalRecordReader(const Stream& p) : src_(stream_source(p)) {}

    Interval next() {
        IntervalScan s = scan_interval(src_, offset_);
        if (s.status != ScanStatus::Block)
            throw DecodeError(s.error.empty() ? "malformed interval record" : s.error,
                              s.error_offset);
        offset_ = s.end;
        return s.value;
    }

    std::size_t offset() const { return offset_; }

private:
    SymbolSource src_;
    std::size_t offset_ = 0;
};

// Greedy prefix parse used by generating word functions: collects the
// complete, well-formed interval records of u and stops at the first
// incomplete or contradicting tail. The result only grows under extensions
// of u, which is what makes the parsing word functions monotone.
struct ParsedRecords {
    std::vector<Interval> records;
    std::size_t consumed = 0;  // symbols of u covered by `records`
    bool malformed_tail = false;
};

inline ParsedRecords parse_interval_records(const Word& u) {
    ParsedRecords out;
    SymbolSource src = word_source(u);
    for (;;) {
        IntervalScan s = scan_interval(src, out.consumed);
        if (s.status == ScanStatus::Block) {
            out.records.push_back(s.value);
            out.consumed = s.end;
            continue;
        }
        out.malformed_tail = s.status == ScanStatus::Malformed;
        return out;
    }
}

} // namespace gtm
