#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "gtm/encoding.hpp"
#include "gtm/error.hpp"
#include "gtm/numbers.hpp"
#include "gtm/represent.hpp"
#include "gtm/stream.hpp"

namespace gtm {

// Componentwise interval addition on record streams, lazily: record n of the
// output is the endpoint sum of record n of each input. This is the
// name-level realizer of addition on the reals.
inline Stream interval_add(const Stream& a, const Stream& b) {
    auto ra = std::make_shared<IntervalRecordReader>(a);
    auto rb = std::make_shared<IntervalRecordReader>(b);
    auto mu = std::make_shared<std::mutex>();
    return Stream::from_chunks(Alphabet::binary(), [ra, rb, mu](std::size_t) {
        std::lock_guard<std::mutex> lock(*mu);
        return encode_interval(ra->next() + rb->next());
    });
}

// Approximate comparison on the reals: always tt when x < y, always ff when
// x > y + 2^{-k}, and either answer acceptable inside the gap. The
// multi-valuedness is resolved deterministically by comparing interval upper
// bounds against the middle of the gap; callers may rely only on the
// one-sided guarantees.
enum class ApproxBool { tt, ff };

inline ApproxBool approx_leq_k(const Stream& x, const Stream& y, unsigned k, std::size_t budget) {
    unsigned d = k + 2;
    RhoDecodeResult ix = rho_decode(x, d, budget);
    RhoDecodeResult iy = rho_decode(y, d, budget);
    if (ix.status != RhoDecodeResult::Status::Ok || iy.status != RhoDecodeResult::Status::Ok)
        throw PrecisionError("approx_leq_k: names not decodable to width 2^-(k+2) within budget");
    // tt iff upper(x) < upper(y) + 2^{-(k+1)}.
    return ix.interval.hi < iy.interval.hi + pow2(-static_cast<long>(k) - 1) ? ApproxBool::tt
                                                                             : ApproxBool::ff;
}

// A sequence of complex rational approximations; the caller guarantees
// |b_k - s| <= 2^{-k} for the limit s.
using ComplexSequence = std::function<RationalComplex(std::size_t)>;

// The limit operator: turns a fast-converging sequence into a name of its
// limit, one interval stream for the real and one for the imaginary part.
// Record n uses b_{n+2} with radius 2^{-(n+1)}, so record n has width 2^{-n}
// and contains the limit whenever the input satisfies its contract.
inline std::pair<Stream, Stream> limit(const ComplexSequence& b) {
    auto record = [b](bool imaginary) {
        return [b, imaginary](std::size_t n) {
            RationalComplex approx = b(n + 2);
            Rational center = imaginary ? approx.im : approx.re;
            Rational radius = pow2(-static_cast<long>(n) - 1);
            return Interval(center - radius, center + radius);
        };
    };
    return {interval_record_stream(record(false)), interval_record_stream(record(true))};
}

// A power series sum(j) a_j z^j with certified tail bounds: r is a rational
// below the radius of convergence and M a Cauchy constant for it, i.e.
// |a_j| <= M r^{-j} for all j. Evaluation points satisfy |z| < r.
struct PowerSeriesInput {
    std::function<RationalComplex(std::size_t)> coefficients;
    Rational r;
    Rational cauchy_constant;  // M
    RationalComplex z;
};

struct SeriesPartial {
    RationalComplex value;  // b_k with |b_k - s| <= 2^{-k}
    Rational q;             // the chosen ratio bound, c <= q < 1
    std::size_t terms;      // n: number of summed terms
};

// One certified partial sum:
//   c = |z| / r,  pick rational q with c < q < 1,
//   pick minimal n with M q^n / (1 - q) < 2^{-k},
//   return s_n = sum_{j<n} a_j z^j  (exact Horner evaluation).
//
// c is irrational in general; a rational upper bound c_bar with
// c <= c_bar < 1 is computed by directed-rounding square root, refining until
// it drops below 1, and q = (c_bar + 1) / 2. Input invariants (|z| < r,
// |a_j| <= M r^{-j} at every fetched j) are checked exactly and breaches are
// errors.
inline SeriesPartial series_partial(const PowerSeriesInput& in, unsigned k) {
    if (in.r <= 0) throw Error("power series: r must be positive");
    if (in.cauchy_constant <= 0) throw Error("power series: M must be positive");
    Rational z_norm_sq = in.z.norm_sq();
    if (!(z_norm_sq < in.r * in.r)) throw Error("power series: |z| < r violated");

    // c_bar: rational upper bound on sqrt(|z|^2 / r^2), strictly below 1.
    Rational t = z_norm_sq / (in.r * in.r);
    long prec = static_cast<long>(k) + 4;
    Rational c_bar = sqrt_upper(t, pow2(-prec));
    while (c_bar >= 1) {
        prec += 4;
        c_bar = sqrt_upper(t, pow2(-prec));
    }
    Rational q = (c_bar + 1) / 2;

    // Minimal n with M q^n / (1-q) < 2^{-k}, by doubling then binary search.
    Rational bound = pow2(-static_cast<long>(k)) * (1 - q) / in.cauchy_constant;
    auto pow_q = [&q](std::size_t n) {
        Rational p = 1;
        Rational base = q;
        while (n) {
            if (n & 1) p *= base;
            base *= base;
            n >>= 1;
        }
        return p;
    };
    std::size_t n = 0;
    if (!(Rational(1) < bound)) {
        std::size_t hi = 1;
        while (!(pow_q(hi) < bound)) hi *= 2;
        std::size_t lo = hi / 2;  // q^lo >= bound
        while (lo + 1 < hi) {
            std::size_t mid = lo + (hi - lo) / 2;
            if (pow_q(mid) < bound)
                hi = mid;
            else
                lo = mid;
        }
        n = hi;
    }

    // Exact Horner evaluation of s_n, checking the Cauchy bound at every
    // fetched coefficient: |a_j|^2 <= (M r^{-j})^2.
    RationalComplex s{Rational(0), Rational(0)};
    Rational m_rj = in.cauchy_constant;  // M r^{-j} for the current j
    std::vector<RationalComplex> coeffs;
    coeffs.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        RationalComplex aj = in.coefficients(j);
        if (!(aj.norm_sq() <= m_rj * m_rj))
            throw Error("power series: Cauchy bound |a_j| <= M r^-j violated at j = " +
                        std::to_string(j));
        coeffs.push_back(aj);
        m_rj /= in.r;
    }
    for (std::size_t j = n; j-- > 0;) s = s * in.z + coeffs[j];
    return {s, q, n};
}

// The summation operator H: materializes the stream k -> b_k and feeds it to
// the limit operator. Partial sums are memoized across records.
inline std::pair<Stream, Stream> series_sum(const PowerSeriesInput& in) {
    auto cache = std::make_shared<std::map<std::size_t, RationalComplex>>();
    auto mu = std::make_shared<std::mutex>();
    ComplexSequence b = [in, cache, mu](std::size_t kk) {
        std::lock_guard<std::mutex> lock(*mu);
        auto it = cache->find(kk);
        if (it != cache->end()) return it->second;
        RationalComplex v = series_partial(in, static_cast<unsigned>(kk)).value;
        cache->emplace(kk, v);
        return v;
    };
    return limit(b);
}

} // namespace gtm
