#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtm/carrier.hpp"
#include "gtm/encoding.hpp"
#include "gtm/error.hpp"
#include "gtm/numbers.hpp"
#include "gtm/stream.hpp"

namespace gtm {

// Name validity is only semidecidable, so membership answers are one-sided:
// Refuted is definite evidence (and monotone in the precision: once refuted
// at d, refuted at every d' >= d); Consistent means no refutation was found
// while probing to precision d.
enum class Membership { Consistent, Refuted };

struct ApproxResult {
    enum class Status { Ok, Insufficient, NotAName };
    Status status = Status::Insufficient;
    std::optional<CarrierValue> value;  // approximation with error bound 2^{-d} when Ok
};

// A naming relation delta : names => objects, packaged as the three facets an
// artifact can actually compute with: a canonical encoder, membership checking
// at finite precision, and approximate decoding. The name set may be symbol
// streams or any other carrier (a generalized multi-representation).
struct MultiRepresentation {
    std::string name;
    std::string name_carrier;
    std::string object_carrier;
    std::function<CarrierValue(const CarrierValue& object)> encode;
    std::function<Membership(const CarrierValue& name, const CarrierValue& object, unsigned d)>
        member_at_precision;
    std::function<ApproxResult(const CarrierValue& name, unsigned d)> approx_decode;
};

// Relational composition: x names z via (outer . inner) iff some witness y has
// x naming y via inner and y naming z via outer. The witness is obtained from
// inner's approximate decode (the canonical witness; sufficient for
// single-valued inner, which is the only kind composed here), and both factor
// memberships are checked on it.
inline MultiRepresentation compose_rel(const MultiRepresentation& outer,
                                       const MultiRepresentation& inner) {
    if (outer.name_carrier != inner.object_carrier)
        throw CarrierError("compose_rel: outer names '" + outer.name_carrier +
                           "' but inner objects are '" + inner.object_carrier + "'");
    MultiRepresentation r;
    r.name = outer.name + "." + inner.name;
    r.name_carrier = inner.name_carrier;
    r.object_carrier = outer.object_carrier;
    r.encode = [outer, inner](const CarrierValue& z) { return inner.encode(outer.encode(z)); };
    r.member_at_precision = [outer, inner](const CarrierValue& x, const CarrierValue& z,
                                           unsigned d) {
        ApproxResult witness = inner.approx_decode(x, d);
        if (witness.status != ApproxResult::Status::Ok) return Membership::Refuted;
        if (inner.member_at_precision(x, *witness.value, d) != Membership::Consistent)
            return Membership::Refuted;
        return outer.member_at_precision(*witness.value, z, d);
    };
    r.approx_decode = [outer, inner](const CarrierValue& x, unsigned d) {
        ApproxResult witness = inner.approx_decode(x, d);
        if (witness.status != ApproxResult::Status::Ok) return witness;
        return outer.approx_decode(*witness.value, d);
    };
    return r;
}

// ---- interval sequences (the SRI carrier) -----------------------------------

// A lazily evaluated, memoized sequence of rational intervals. Backed either
// by a function or by parsing an interval-record stream (in which case access
// can throw DecodeError).
class IntervalSequence {
public:
    static std::shared_ptr<const IntervalSequence> from_function(
        std::function<Interval(std::size_t)> f) {
        return std::shared_ptr<const IntervalSequence>(new IntervalSequence(std::move(f)));
    }

    static std::shared_ptr<const IntervalSequence> from_stream(const Stream& p) {
        auto reader = std::make_shared<IntervalRecordReader>(p);
        auto cache = std::make_shared<std::vector<Interval>>();
        auto mu = std::make_shared<std::mutex>();
        return from_function([reader, cache, mu](std::size_t n) {
            std::lock_guard<std::mutex> lock(*mu);
            while (cache->size() <= n) cache->push_back(reader->next());
            return (*cache)[n];
        });
    }

    static std::shared_ptr<const IntervalSequence> sum(
        std::shared_ptr<const IntervalSequence> a, std::shared_ptr<const IntervalSequence> b) {
        return from_function([a, b](std::size_t n) { return a->at(n) + b->at(n); });
    }

    Interval at(std::size_t n) const {
        std::lock_guard<std::mutex> lock(mu_);
        while (cache_.size() <= n) cache_.push_back(fn_(cache_.size()));
        return cache_[n];
    }

private:
    explicit IntervalSequence(std::function<Interval(std::size_t)> f) : fn_(std::move(f)) {}

    std::function<Interval(std::size_t)> fn_;
    mutable std::vector<Interval> cache_;
    mutable std::mutex mu_;
};

using IntervalSequencePtr = std::shared_ptr<const IntervalSequence>;

inline CarrierValue sri_value(IntervalSequencePtr seq) {
    Opaque o;
    o.tag = "sri";
    o.value = std::move(seq);
    o.display = "sri:<sequence>";
    return CarrierValue("sri", std::move(o));
}

inline IntervalSequencePtr as_sri(const CarrierValue& v) {
    const Opaque& o = v.as_opaque();
    if (o.tag != "sri") throw CarrierError("opaque value is not an interval sequence");
    return std::static_pointer_cast<const IntervalSequence>(o.value);
}

// Renders an interval sequence back into its record stream.
inline Stream sri_to_stream(const IntervalSequencePtr& seq) {
    return interval_record_stream([seq](std::size_t n) { return seq->at(n); });
}

// ---- the real-number representation via interval streams --------------------

// Canonical name of x: records [x - 2^{-n}; x + 2^{-n}]. A custom depth
// schedule may replace the exponent sequence n.
inline Stream rho_encode(const Rational& x,
                         std::function<long(std::size_t)> depth_schedule = nullptr) {
    return interval_record_stream([x, depth_schedule](std::size_t n) {
        long depth = depth_schedule ? depth_schedule(n) : static_cast<long>(n);
        Rational radius = pow2(-depth);
        return Interval(x - radius, x + radius);
    });
}

struct RhoDecodeResult {
    enum class Status { Ok, Insufficient };
    Status status = Status::Insufficient;
    Interval interval;               // running intersection reached
    std::size_t records_scanned = 0;
};

namespace detail {
// Core of interval-name decoding: scan records, keep the running
// intersection, stop at width <= 2^{-d}. Throws NotANameError when the
// intersection becomes empty.
inline RhoDecodeResult shrink_intersection(const std::function<Interval(std::size_t)>& record,
                                           unsigned d, std::size_t probe_limit) {
    Rational target = pow2(-static_cast<long>(d));
    std::optional<Interval> running;
    for (std::size_t n = 0; n < probe_limit; ++n) {
        Interval next = record(n);
        if (!running) {
            running = next;
        } else {
            auto meet = intersect(*running, next);
            if (!meet)
                throw NotANameError("empty running intersection in interval stream", n);
            running = *meet;
        }
        if (running->width() <= target)
            return {RhoDecodeResult::Status::Ok, *running, n + 1};
    }
    return {RhoDecodeResult::Status::Insufficient, running.value_or(Interval(Rational(0), Rational(0))),
            probe_limit};
}
} // namespace detail

// Scans an interval-record stream and returns the first running intersection
// of width <= 2^{-d}. Throws DecodeError on malformed records and
// NotANameError on an empty intersection.
inline RhoDecodeResult rho_decode(const Stream& p, unsigned d, std::size_t probe_limit) {
    auto reader = std::make_shared<IntervalRecordReader>(p);
    return detail::shrink_intersection([reader](std::size_t) { return reader->next(); }, d,
                                       probe_limit);
}

// Default record budget for reaching precision d: canonical names shrink one
// binary digit per record, so a linear budget with headroom is enough for
// every name this library produces.
inline std::size_t default_probe_limit(unsigned d) { return 4 * static_cast<std::size_t>(d) + 64; }

// ---- concrete representations ------------------------------------------------

// Identity representation of a carrier: every value names itself. Streams are
// compared to depth d (refutation is definite, agreement is consistency).
inline MultiRepresentation identity_representation(const std::string& carrier) {
    MultiRepresentation r;
    r.name = "id_" + carrier;
    r.name_carrier = carrier;
    r.object_carrier = carrier;
    r.encode = [](const CarrierValue& v) { return v; };
    r.member_at_precision = [](const CarrierValue& x, const CarrierValue& y, unsigned d) {
        if (x.kind() == PayloadKind::Stream && y.kind() == PayloadKind::Stream) {
            const Stream &a = x.as_stream(), &b = y.as_stream();
            if (a.same_object(b)) return Membership::Consistent;
            return a.prefix(d) == b.prefix(d) ? Membership::Consistent : Membership::Refuted;
        }
        return carrier_value_equal(x, y) ? Membership::Consistent : Membership::Refuted;
    };
    r.approx_decode = [](const CarrierValue& x, unsigned) {
        return ApproxResult{ApproxResult::Status::Ok, x};
    };
    return r;
}

// beta as a representation of finite words by streams: beta(iota(w)0^omega) = w.
inline MultiRepresentation beta_representation() {
    MultiRepresentation r;
    r.name = "beta";
    r.name_carrier = "stream";
    r.object_carrier = "word";
    r.encode = [](const CarrierValue& w) { return stream_value(beta_encode(w.as_word())); };
    r.member_at_precision = [](const CarrierValue& p, const CarrierValue& w, unsigned) {
        try {
            return beta_decode(p.as_stream()) == w.as_word() ? Membership::Consistent
                                                             : Membership::Refuted;
        } catch (const DecodeError&) {
            return Membership::Refuted;
        }
    };
    r.approx_decode = [](const CarrierValue& p, unsigned) {
        try {
            return ApproxResult{ApproxResult::Status::Ok, word_value(beta_decode(p.as_stream()))};
        } catch (const DecodeError&) {
            return ApproxResult{ApproxResult::Status::NotAName, std::nullopt};
        }
    };
    return r;
}

// Canonical word names of naturals and rationals (Sigma*-names used directly).
inline MultiRepresentation natural_notation() {
    MultiRepresentation r;
    r.name = "nu_nat";
    r.name_carrier = "word";
    r.object_carrier = "nat";
    r.encode = [](const CarrierValue& n) { return word_value(encode_natural(n.as_natural())); };
    r.member_at_precision = [](const CarrierValue& w, const CarrierValue& n, unsigned) {
        try {
            return decode_natural(w.as_word()) == n.as_natural() ? Membership::Consistent
                                                                 : Membership::Refuted;
        } catch (const DecodeError&) {
            return Membership::Refuted;
        }
    };
    r.approx_decode = [](const CarrierValue& w, unsigned) {
        try {
            return ApproxResult{ApproxResult::Status::Ok, natural_value(decode_natural(w.as_word()))};
        } catch (const DecodeError&) {
            return ApproxResult{ApproxResult::Status::NotAName, std::nullopt};
        }
    };
    return r;
}

inline MultiRepresentation rational_notation() {
    MultiRepresentation r;
    r.name = "nu_rat";
    r.name_carrier = "word";
    r.object_carrier = "rat";
    r.encode = [](const CarrierValue& q) { return word_value(encode_rational(q.as_rational())); };
    r.member_at_precision = [](const CarrierValue& w, const CarrierValue& q, unsigned) {
        try {
            return decode_rational(w.as_word()) == q.as_rational() ? Membership::Consistent
                                                                   : Membership::Refuted;
        } catch (const DecodeError&) {
            return Membership::Refuted;
        }
    };
    r.approx_decode = [](const CarrierValue& w, unsigned) {
        try {
            return ApproxResult{ApproxResult::Status::Ok,
                                rational_value(decode_rational(w.as_word()))};
        } catch (const DecodeError&) {
            return ApproxResult{ApproxResult::Status::NotAName, std::nullopt};
        }
    };
    return r;
}

namespace detail {
// Membership of x in the real named by the interval sequence `record`:
// refuted by any probed record excluding x or by an empty intersection;
// otherwise consistent once the intersection width reaches 2^{-d} (or the
// probe budget runs out without refutation).
inline Membership interval_member(const std::function<Interval(std::size_t)>& record,
                                  const Rational& x, unsigned d, std::size_t probe_limit) {
    Rational target = pow2(-static_cast<long>(d));
    std::optional<Interval> running;
    try {
        for (std::size_t n = 0; n < probe_limit; ++n) {
            Interval next = record(n);
            if (!next.contains(x)) return Membership::Refuted;
            if (!running) {
                running = next;
            } else {
                auto meet = intersect(*running, next);
                if (!meet) return Membership::Refuted;  // not a name of anything
                running = *meet;
            }
            if (running->width() <= target) return Membership::Consistent;
        }
    } catch (const DecodeError&) {
        return Membership::Refuted;
    }
    return Membership::Consistent;  // no refutation found within budget
}
} // namespace detail

// The generalized representation of the reals by interval sequences
// (abstract names: the "sri" carrier).
inline MultiRepresentation interval_representation(std::size_t probe_limit_for(unsigned) =
                                                       default_probe_limit) {
    MultiRepresentation r;
    r.name = "delta_int";
    r.name_carrier = "sri";
    r.object_carrier = "real";
    r.encode = [](const CarrierValue& x) {
        Rational q = x.as_rational();
        return sri_value(IntervalSequence::from_function([q](std::size_t n) {
            Rational radius = pow2(-static_cast<long>(n));
            return Interval(q - radius, q + radius);
        }));
    };
    r.member_at_precision = [probe_limit_for](const CarrierValue& s, const CarrierValue& x,
                                              unsigned d) {
        IntervalSequencePtr seq = as_sri(s);
        return detail::interval_member([seq](std::size_t n) { return seq->at(n); },
                                       x.as_rational(), d, probe_limit_for(d));
    };
    r.approx_decode = [probe_limit_for](const CarrierValue& s, unsigned d) {
        IntervalSequencePtr seq = as_sri(s);
        try {
            RhoDecodeResult res = detail::shrink_intersection(
                [seq](std::size_t n) { return seq->at(n); }, d, probe_limit_for(d));
            if (res.status != RhoDecodeResult::Status::Ok)
                return ApproxResult{ApproxResult::Status::Insufficient, std::nullopt};
            return ApproxResult{ApproxResult::Status::Ok, interval_value(res.interval)};
        } catch (const DecodeError&) {
            return ApproxResult{ApproxResult::Status::NotAName, std::nullopt};
        }
    };
    return r;
}

// The encoding of interval sequences by binary streams (record format).
// Single-valued: a well-formed stream names exactly the sequence it spells.
inline MultiRepresentation sri_encoding_representation() {
    MultiRepresentation r;
    r.name = "gamma_sri";
    r.name_carrier = "stream";
    r.object_carrier = "sri";
    r.encode = [](const CarrierValue& s) { return stream_value(sri_to_stream(as_sri(s))); };
    r.member_at_precision = [](const CarrierValue& p, const CarrierValue& s, unsigned d) {
        IntervalSequencePtr want = as_sri(s);
        try {
            IntervalRecordReader reader(p.as_stream());
            for (std::size_t n = 0; n <= d; ++n)
                if (!(reader.next() == want->at(n))) return Membership::Refuted;
            return Membership::Consistent;
        } catch (const DecodeError&) {
            return Membership::Refuted;
        }
    };
    r.approx_decode = [](const CarrierValue& p, unsigned) {
        return ApproxResult{ApproxResult::Status::Ok,
                            sri_value(IntervalSequence::from_stream(p.as_stream()))};
    };
    return r;
}

// The real-number representation used everywhere downstream: interval
// sequences encoded as record streams. Behaviorally the relational
// composition of interval_representation with sri_encoding_representation;
// this direct form scans the stream without materializing the middle layer.
inline MultiRepresentation rho_representation(std::size_t probe_limit_for(unsigned) =
                                                  default_probe_limit) {
    MultiRepresentation r;
    r.name = "rho";
    r.name_carrier = "stream";
    r.object_carrier = "real";
    r.encode = [](const CarrierValue& x) { return stream_value(rho_encode(x.as_rational())); };
    r.member_at_precision = [probe_limit_for](const CarrierValue& p, const CarrierValue& x,
                                              unsigned d) {
        auto reader = std::make_shared<IntervalRecordReader>(p.as_stream());
        return detail::interval_member([reader](std::size_t) { return reader->next(); },
                                       x.as_rational(), d, probe_limit_for(d));
    };
    r.approx_decode = [probe_limit_for](const CarrierValue& p, unsigned d) {
        try {
            RhoDecodeResult res = rho_decode(p.as_stream(), d, probe_limit_for(d));
            if (res.status != RhoDecodeResult::Status::Ok)
                return ApproxResult{ApproxResult::Status::Insufficient, std::nullopt};
            return ApproxResult{ApproxResult::Status::Ok, interval_value(res.interval)};
        } catch (const DecodeError&) {
            return ApproxResult{ApproxResult::Status::NotAName, std::nullopt};
        }
    };
    return r;
}

} // namespace gtm
