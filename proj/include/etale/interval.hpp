#pragma once

#include "etale/rational.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace etale {

// Certified rational interval arithmetic.  Endpoints are exact rationals;
// every operation widens outward, so an interval always brackets the true
// value.  Trig enclosures come from alternating Taylor series whose partial
// sums bracket the limit, with pi from the Machin formula.  Precision is the
// number of requested bits; series are truncated once terms drop below
// 2^-(prec+8).

struct RatInterval {
    Rat lo, hi;

    RatInterval() : lo(0), hi(0) {}
    RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {}
    static RatInterval point(const Rat& r) { return {r, r}; }

    bool contains_zero() const { return lo <= 0 && 0 <= hi; }
    // Sign certificate: +1, -1, or 0 when undecided.
    int sign() const {
        if (lo > 0) return 1;
        if (hi < 0) return -1;
        return 0;
    }
    Rat width() const { return hi - lo; }

    RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    RatInterval operator-(const RatInterval& o) const { return {lo - o.hi, hi - o.lo}; }
    RatInterval operator-() const { return {-hi, -lo}; }
    RatInterval operator*(const RatInterval& o) const {
        Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        return {std::min(std::min(a, b), std::min(c, d)),
                std::max(std::max(a, b), std::max(c, d))};
    }
    RatInterval operator*(const Rat& r) const {
        if (r >= 0) return {lo * r, hi * r};
        return {hi * r, lo * r};
    }
    RatInterval& operator+=(const RatInterval& o) {
        lo += o.lo;
        hi += o.hi;
        return *this;
    }
};

namespace detail {

inline Rat pow2_inv(long bits) { // 2^-bits
    Int d = Int(1) << bits;
    return Rat(1, d);
}

// Shrinks endpoint denominators to keep arithmetic cheap; keeps enclosure valid.
inline RatInterval coarsen(const RatInterval& iv, long prec) {
    Int scale = Int(1) << (prec + 8);
    Int lo_n = rat_num(iv.lo) * scale / rat_den(iv.lo);
    if (Rat(lo_n, scale) > iv.lo) lo_n -= 1;
    Int hi_n = rat_num(iv.hi) * scale / rat_den(iv.hi);
    if (Rat(hi_n, scale) < iv.hi) hi_n += 1;
    return {Rat(lo_n, scale), Rat(hi_n, scale)};
}

// arctan(1/x) for integer x >= 2, bracketed by alternating partial sums.
inline RatInterval arctan_inv(long x, long prec) {
    Rat term(1, x);
    Rat sum = term;
    Rat x2(Int(x) * x);
    Rat eps = pow2_inv(prec + 8);
    RatInterval out;
    for (long k = 1;; ++k) {
        term = term / x2;
        Rat t = term / Rat(2 * k + 1);
        if (k % 2 == 1)
            sum -= t;
        else
            sum += t;
        if (t < eps) {
            // Alternating and decreasing: the limit lies within t of sum.
            out = {sum - t, sum + t};
            break;
        }
    }
    return coarsen(out, prec);
}

inline RatInterval pi_enclosure(long prec) {
    static std::map<long, RatInterval> cache;
    auto it = cache.find(prec);
    if (it != cache.end()) return it->second;
    RatInterval a = arctan_inv(5, prec + 8);
    RatInterval b = arctan_inv(239, prec + 8);
    RatInterval pi = a * Rat(16) - b * Rat(4);
    pi = coarsen(pi, prec);
    cache[prec] = pi;
    return pi;
}

// cos at an exact rational point t with |t| <= 1 (radians), bracketed.
inline RatInterval cos_point(const Rat& t, long prec) {
    Rat t2 = t * t;
    Rat term(1);
    Rat sum(1);
    Rat eps = pow2_inv(prec + 8);
    for (long k = 1;; ++k) {
        term = term * t2 / Rat(Int(2 * k - 1) * Int(2 * k));
        if (k % 2 == 1)
            sum -= term;
        else
            sum += term;
        if (term < eps) return coarsen({sum - term, sum + term}, prec);
    }
}

inline RatInterval sin_point(const Rat& t, long prec) {
    Rat t2 = t * t;
    Rat term = t;
    Rat sum = t;
    Rat eps = pow2_inv(prec + 8);
    for (long k = 1;; ++k) {
        term = term * t2 / Rat(Int(2 * k) * Int(2 * k + 1));
        if (k % 2 == 1)
            sum -= term;
        else
            sum += term;
        if (term < eps && term > -eps) return coarsen({sum - term, sum + term}, prec);
    }
}

// cos on an interval within [0, pi/4 + slack] where cos is decreasing.
inline RatInterval cos_decreasing(const RatInterval& th, long prec) {
    RatInterval a = cos_point(th.hi, prec);
    RatInterval b = cos_point(th.lo, prec);
    return {a.lo, b.hi};
}

inline RatInterval sin_increasing(const RatInterval& th, long prec) {
    RatInterval a = sin_point(th.lo, prec);
    RatInterval b = sin_point(th.hi, prec);
    return {a.lo, b.hi};
}

} // namespace detail

// Certified enclosure of cos(2*pi*t) for exact rational t.
inline RatInterval cos_2pi(const Rat& t_in, long prec) {
    struct Key {
        Int n, d;
        long p;
        bool operator<(const Key& o) const {
            if (p != o.p) return p < o.p;
            if (d != o.d) return d < o.d;
            return n < o.n;
        }
    };
    static std::map<Key, RatInterval> cache;
    Rat t = mod1(t_in);
    Key key{rat_num(t), rat_den(t), prec};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    // Fold into [0, 1/8] tracking the needed kernel and sign.
    Rat u = t;
    int sign = 1;
    if (u > Rat(1, 2)) u = 1 - u;           // cos symmetric about 1/2
    if (u > Rat(1, 4)) {                     // cos(2pi u) = -cos(2pi(1/2-u))
        u = Rat(1, 2) - u;
        sign = -sign;
    }
    bool use_sin = false;
    if (u > Rat(1, 8)) {                     // cos(2pi u) = sin(2pi(1/4-u))
        u = Rat(1, 4) - u;
        use_sin = true;
    }
    RatInterval pi = detail::pi_enclosure(prec + 4);
    RatInterval theta = pi * (u * 2);        // 2*pi*u, u in [0,1/8] => theta in [0, pi/4]
    RatInterval r = use_sin ? detail::sin_increasing(theta, prec)
                            : detail::cos_decreasing(theta, prec);
    if (sign < 0) r = -r;
    r = detail::coarsen(r, prec);
    cache[key] = r;
    return r;
}

inline RatInterval sin_2pi(const Rat& t, long prec) {
    return cos_2pi(Rat(1, 4) - t, prec); // sin(x) = cos(pi/2 - x)
}

} // namespace etale
