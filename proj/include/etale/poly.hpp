#pragma once

#include "etale/interval.hpp"
#include "etale/rational.hpp"

#include <vector>

namespace etale {

// Dense polynomials over Q, coefficient index = degree.
using Poly = std::vector<Rat>;

namespace poly {

inline void trim(Poly& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}
inline long deg(const Poly& p) { return (long)p.size() - 1; }
inline bool is_zero(const Poly& p) { return p.size() == 1 && p[0] == 0; }

inline Poly add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}
inline Poly sub(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}
inline Poly mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}
inline Poly scale(const Poly& a, const Rat& s) {
    Poly r = a;
    for (auto& c : r) c *= s;
    trim(r);
    return r;
}

// quotient + remainder, b != 0
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b_in) {
    Poly b = b_in;
    trim(b);
    if (is_zero(b)) throw std::runtime_error("poly division by zero");
    Poly rem = a;
    trim(rem);
    long db = deg(b);
    Poly q(std::max<long>(1, deg(rem) - db + 1), Rat(0));
    for (long i = deg(rem); i >= db; --i) {
        if (rem[i] == 0) continue;
        Rat f = rem[i] / b[db];
        q[i - db] = f;
        for (long j = 0; j <= db; ++j) rem[i - db + j] -= f * b[j];
    }
    trim(rem);
    trim(q);
    return {q, rem};
}

inline Poly mod(const Poly& a, const Poly& b) { return divmod(a, b).second; }

inline Poly derivative(const Poly& p) {
    if (p.size() <= 1) return {Rat(0)};
    Poly r(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * Rat((long)i);
    return r;
}

inline Poly monic(const Poly& p) {
    if (is_zero(p)) return p;
    return scale(p, Rat(1) / p.back());
}

inline Poly gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!is_zero(b)) {
        Poly r = mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

inline Rat eval(const Poly& p, const Rat& x) {
    Rat r(0);
    for (long i = deg(p); i >= 0; --i) r = r * x + p[i];
    return r;
}

inline RatInterval eval_interval(const Poly& p, const RatInterval& x) {
    RatInterval r = RatInterval::point(p.back());
    for (long i = deg(p) - 1; i >= 0; --i) r = r * x + RatInterval::point(p[i]);
    return r;
}

// Sturm chain for real-root isolation.
inline std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain{p, derivative(p)};
    while (!is_zero(chain.back())) {
        Poly r = mod(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        trim(r);
        if (is_zero(r)) break;
        chain.push_back(std::move(r));
    }
    return chain;
}

inline long sign_changes(const std::vector<Poly>& chain, const Rat& x) {
    long changes = 0;
    int prev = 0;
    for (const auto& q : chain) {
        Rat v = eval(q, x);
        int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s != 0) {
            if (prev != 0 && s != prev) ++changes;
            prev = s;
        }
    }
    return changes;
}

// All real roots of a squarefree polynomial, as disjoint open isolating
// intervals refined to width <= 2^-prec_bits, sorted increasing.
inline std::vector<RatInterval> isolate_real_roots(const Poly& p, long prec_bits = 80) {
    auto chain = sturm_chain(p);
    // Cauchy bound
    Rat bound(1);
    for (long i = 0; i < deg(p); ++i) {
        Rat c = boost::multiprecision::abs(p[i] / p.back());
        if (c > bound) bound = c;
    }
    bound += 1;
    std::vector<RatInterval> pending{{-bound, bound}}, found;
    auto count = [&](const RatInterval& iv) {
        return sign_changes(chain, iv.lo) - sign_changes(chain, iv.hi);
    };
    while (!pending.empty()) {
        RatInterval iv = pending.back();
        pending.pop_back();
        long k = count(iv);
        if (k == 0) continue;
        if (k == 1) {
            found.push_back(iv);
            continue;
        }
        Rat mid = (iv.lo + iv.hi) / 2;
        if (eval(p, mid) == 0) {
            // Nudge: squarefree => the root at mid is simple, isolate tightly.
            Rat eps = (iv.hi - iv.lo) / 1024;
            found.push_back({mid - eps, mid + eps});
            pending.push_back({iv.lo, mid - eps});
            pending.push_back({mid + eps, iv.hi});
            continue;
        }
        pending.push_back({iv.lo, mid});
        pending.push_back({mid, iv.hi});
    }
    // Refine each isolating interval by bisection on sign of p.
    Rat width_target = detail::pow2_inv(prec_bits);
    for (auto& iv : found) {
        int slo = eval(p, iv.lo) > 0 ? 1 : -1;
        while (iv.width() > width_target) {
            Rat mid = (iv.lo + iv.hi) / 2;
            Rat v = eval(p, mid);
            if (v == 0) {
                Rat eps = std::min(Rat(width_target / 4), Rat(iv.width() / 1024));
                iv = {mid - eps, mid + eps};
                break;
            }
            if ((v > 0 ? 1 : -1) == slo)
                iv.lo = mid;
            else
                iv.hi = mid;
        }
    }
    std::sort(found.begin(), found.end(),
              [](const RatInterval& a, const RatInterval& b) { return a.lo < b.lo; });
    return found;
}

// Further refine a known isolating interval.
inline RatInterval refine_root(const Poly& p, RatInterval iv, long prec_bits) {
    Rat width_target = detail::pow2_inv(prec_bits);
    Rat vlo = eval(p, iv.lo);
    int slo = vlo > 0 ? 1 : (vlo < 0 ? -1 : 0);
    if (slo == 0) return {iv.lo, iv.lo};
    while (iv.width() > width_target) {
        Rat mid = (iv.lo + iv.hi) / 2;
        Rat v = eval(p, mid);
        if (v == 0) return {mid, mid};
        if ((v > 0 ? 1 : -1) == slo)
            iv.lo = mid;
        else
            iv.hi = mid;
    }
    return iv;
}

} // namespace poly
} // namespace etale
