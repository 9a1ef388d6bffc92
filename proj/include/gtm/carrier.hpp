#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "gtm/error.hpp"
#include "gtm/numbers.hpp"
#include "gtm/stream.hpp"
#include "gtm/word.hpp"

namespace gtm {

// Payload kinds a tape cell can hold besides work-alphabet symbols. Carrier
// sets are disjoint from the work alphabet by construction: payloads and
// symbols live in different universes of the cell variant.
enum class PayloadKind { Word, Stream, Natural, Integer, Rational, Interval, Opaque };

// Escape hatch for carrier sets the kernel does not know (interval sequences,
// user-defined abstract data). Identity-based comparison; `display` is used
// in traces.
struct Opaque {
    std::string tag;
    std::shared_ptr<const void> value;
    std::string display;

    template <typename T>
    const T* get() const { return static_cast<const T*>(value.get()); }
};

inline const char* to_string(PayloadKind k) {
    switch (k) {
        case PayloadKind::Word: return "word";
        case PayloadKind::Stream: return "stream";
        case PayloadKind::Natural: return "natural";
        case PayloadKind::Integer: return "integer";
        case PayloadKind::Rational: return "rational";
        case PayloadKind::Interval: return "interval";
        case PayloadKind::Opaque: return "opaque";
    }
    return "?";
}

// Natural and Integer share their arithmetic type; these boxes keep them
// distinct payload alternatives.
struct NaturalBox { Natural v; };
struct IntegerBox { Integer v; };

// An element of some carrier set X_i, tagged with the carrier's identifier.
// Distinct carrier ids may share a payload kind (e.g. "rat" and "real" both
// hold exact rationals) but remain distinct carriers.
class CarrierValue {
public:
    using Payload = std::variant<Word, Stream, NaturalBox, IntegerBox, Rational, Interval, Opaque>;

    CarrierValue(std::string carrier, Payload payload)
        : carrier_(std::move(carrier)), payload_(std::move(payload)) {}

    const std::string& carrier() const { return carrier_; }

    PayloadKind kind() const { return static_cast<PayloadKind>(payload_.index()); }

    const Word& as_word() const { return get<Word>("word"); }
    const Stream& as_stream() const { return get<Stream>("stream"); }
    const Natural& as_natural() const { return get<NaturalBox>("natural").v; }
    const Integer& as_integer() const { return get<IntegerBox>("integer").v; }
    const Rational& as_rational() const { return get<Rational>("rational"); }
    const Interval& as_interval() const { return get<Interval>("interval"); }
    const Opaque& as_opaque() const { return get<Opaque>("opaque"); }

    const Payload& payload() const { return payload_; }

private:
    template <typename T>
    const T& get(const char* what) const {
        if (const T* p = std::get_if<T>(&payload_)) return *p;
        throw CarrierError(std::string("carrier value of '") + carrier_ + "' is not a " + what);
    }

    std::string carrier_;
    Payload payload_;
};

inline CarrierValue word_value(Word w, std::string carrier = "word") {
    return CarrierValue(std::move(carrier), std::move(w));
}
inline CarrierValue stream_value(Stream s, std::string carrier = "stream") {
    return CarrierValue(std::move(carrier), std::move(s));
}
inline CarrierValue natural_value(Natural n, std::string carrier = "nat") {
    if (n < 0) throw CarrierError("natural carrier value must be >= 0");
    return CarrierValue(std::move(carrier), NaturalBox{std::move(n)});
}
inline CarrierValue integer_value(Integer z, std::string carrier = "int") {
    return CarrierValue(std::move(carrier), IntegerBox{std::move(z)});
}
inline CarrierValue rational_value(Rational q, std::string carrier = "rat") {
    return CarrierValue(std::move(carrier), std::move(q));
}
inline CarrierValue real_value(Rational q) {
    // Abstract real sampled at an exact rational point.
    return CarrierValue("real", std::move(q));
}
inline CarrierValue interval_value(Interval iv, std::string carrier = "interval") {
    return CarrierValue(std::move(carrier), std::move(iv));
}

// Registered carrier sets: id -> expected payload kind.
class CarrierRegistry {
public:
    static CarrierRegistry standard() {
        CarrierRegistry r;
        r.add("word", PayloadKind::Word);
        r.add("stream", PayloadKind::Stream);
        r.add("nat", PayloadKind::Natural);
        r.add("int", PayloadKind::Integer);
        r.add("rat", PayloadKind::Rational);
        r.add("interval", PayloadKind::Interval);
        r.add("real", PayloadKind::Rational);
        r.add("sri", PayloadKind::Opaque);
        return r;
    }

    void add(std::string id, PayloadKind kind) { kinds_.emplace(std::move(id), kind); }
    bool has(const std::string& id) const { return kinds_.count(id) != 0; }

    PayloadKind kind_of(const std::string& id) const {
        auto it = kinds_.find(id);
        if (it == kinds_.end()) throw CarrierError("unknown carrier '" + id + "'");
        return it->second;
    }

    // Payload kind matches the registered carrier.
    bool value_fits(const CarrierValue& v) const {
        auto it = kinds_.find(v.carrier());
        return it != kinds_.end() && it->second == v.kind();
    }

private:
    std::map<std::string, PayloadKind> kinds_;
};

// Total order on values, used for outcome sets. Streams compare by identity
// (value equality of streams is undecidable); opaques by tag and identity.
inline bool carrier_value_less(const CarrierValue& a, const CarrierValue& b) {
    if (a.carrier() != b.carrier()) return a.carrier() < b.carrier();
    if (a.kind() != b.kind()) return a.kind() < b.kind();
    switch (a.kind()) {
        case PayloadKind::Word: return a.as_word() < b.as_word();
        case PayloadKind::Stream: return a.as_stream().identity() < b.as_stream().identity();
        case PayloadKind::Natural: return a.as_natural() < b.as_natural();
        case PayloadKind::Integer: return a.as_integer() < b.as_integer();
        case PayloadKind::Rational: return a.as_rational() < b.as_rational();
        case PayloadKind::Interval: {
            const Interval &x = a.as_interval(), &y = b.as_interval();
            return x.lo != y.lo ? x.lo < y.lo : x.hi < y.hi;
        }
        case PayloadKind::Opaque: {
            const Opaque &x = a.as_opaque(), &y = b.as_opaque();
            return x.tag != y.tag ? x.tag < y.tag : x.value.get() < y.value.get();
        }
    }
    return false;
}

inline bool carrier_value_equal(const CarrierValue& a, const CarrierValue& b) {
    return !carrier_value_less(a, b) && !carrier_value_less(b, a);
}

// Deterministic rendering for traces and CLI output. Streams render their
// construction-time periodic form when they have one; probing a stream just
// to print it would change its cache, so nothing is probed here.
inline std::string render_value(const CarrierValue& v) {
    switch (v.kind()) {
        case PayloadKind::Word: return "word:" + v.as_word().symbols();
        case PayloadKind::Stream: {
            if (auto p = v.as_stream().periodic_form())
                return "stream:" + p->first.symbols() + "^" + p->second.symbols();
            return "stream:<lazy>";
        }
        case PayloadKind::Natural: return "nat:" + v.as_natural().str();
        case PayloadKind::Integer: return "int:" + v.as_integer().str();
        case PayloadKind::Rational: return v.carrier() + ":" + v.as_rational().str();
        case PayloadKind::Interval: return "interval:" + to_string(v.as_interval());
        case PayloadKind::Opaque: {
            const Opaque& o = v.as_opaque();
            return o.display.empty() ? "opaque:" + o.tag : o.display;
        }
    }
    return "?";
}

} // namespace gtm
