#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

#include "gtm/error.hpp"

namespace gtm {

// Exact arithmetic types. All number-valued computation in the library is
// exact; there are no floating-point code paths.
using Natural = boost::multiprecision::cpp_int;  // used with value >= 0
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer rat_num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer rat_den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw Error("rational with zero denominator");
    return Rational(num, den);
}

// 2^e for signed e.
inline Rational pow2(long e) {
    Integer one = 1;
    if (e >= 0) return Rational(one << e);
    return Rational(one, one << (-e));
}

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Smallest-interval upper bound for sqrt: returns a rational u with
// u*u >= t and u - sqrt(t) <= eps. Requires t >= 0, eps > 0.
inline Rational sqrt_upper(const Rational& t, const Rational& eps) {
    if (t < 0) throw Error("sqrt_upper of negative value");
    if (t == 0) return Rational(0);
    Rational lo = 0;
    Rational hi = t < 1 ? Rational(1) : t;  // sqrt(t) <= max(1, t)
    while (hi - lo > eps) {
        Rational mid = (lo + hi) / 2;
        if (mid * mid >= t)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// Complex number with exact rational parts. |z| is irrational in general, so
// magnitude comparisons go through norm_sq.
struct RationalComplex {
    Rational re;
    Rational im;

    RationalComplex() = default;
    RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    Rational norm_sq() const { return re * re + im * im; }

    friend RationalComplex operator+(const RationalComplex& a, const RationalComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend RationalComplex operator-(const RationalComplex& a, const RationalComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const RationalComplex& a, const RationalComplex& b) = default;
};

// Closed rational interval [lo; hi]. Interval *names* require lo < hi; decode
// results may be degenerate (lo == hi), so only lo <= hi is enforced here.
struct Interval {
    Rational lo;
    Rational hi;

    Interval() = default;
    Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw Error("interval with lo > hi");
    }

    Rational width() const { return hi - lo; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }

    friend Interval operator+(const Interval& a, const Interval& b) {
        return {a.lo + b.lo, a.hi + b.hi};
    }
    friend bool operator==(const Interval& a, const Interval& b) = default;
};

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    Rational lo = a.lo > b.lo ? a.lo : b.lo;
    Rational hi = a.hi < b.hi ? a.hi : b.hi;
    if (lo > hi) return std::nullopt;
    return Interval(lo, hi);
}

inline std::string to_string(const Rational& q) { return q.str(); }

inline std::string to_string(const Interval& iv) {
    return "[" + iv.lo.str() + ";" + iv.hi.str() + "]";
}

inline std::string to_string(const RationalComplex& z) {
    return z.re.str() + (z.im < 0 ? "" : "+") + z.im.str() + "i";
}

} // namespace gtm
