#pragma once

#include "etale/interval.hpp"
#include "etale/rational.hpp"

#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace etale {

inline constexpr long kConductorCap = 1000;

inline long euler_phi(long n) {
    long result = n;
    long m = n;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            result -= result / p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

namespace detail {

// Monic integer coefficients of Phi_n, index = degree.
inline const std::vector<Int>& cyclotomic_poly(long n) {
    static std::map<long, std::vector<Int>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    // x^n - 1 divided by all Phi_d with d | n, d < n.
    std::vector<Int> poly(n + 1);
    poly[0] = -1;
    poly[n] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        const std::vector<Int>& phi_d = cyclotomic_poly(d);
        // exact division of poly by monic phi_d
        std::vector<Int> q(poly.size() - phi_d.size() + 1);
        std::vector<Int> rem = poly;
        for (long i = (long)rem.size() - 1; i >= (long)phi_d.size() - 1; --i) {
            Int c = rem[i];
            if (c == 0) continue;
            long shift = i - ((long)phi_d.size() - 1);
            q[shift] = c;
            for (size_t j = 0; j < phi_d.size(); ++j) rem[shift + j] -= c * phi_d[j];
        }
        poly = std::move(q);
    }
    return cache.emplace(n, std::move(poly)).first->second;
}

inline const std::vector<long>& cyclotomic_nonzero(long n) {
    static std::map<long, std::vector<long>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    const auto& phi = cyclotomic_poly(n);
    std::vector<long> idx;
    for (long j = 0; j + 1 < (long)phi.size(); ++j)
        if (phi[j] != 0) idx.push_back(j);
    return cache.emplace(n, std::move(idx)).first->second;
}

// Reduces a coefficient vector (any length) modulo x^n - 1 then Phi_n,
// returning exactly phi(n) coefficients.
inline std::vector<Rat> reduce_mod_phi(std::vector<Rat> c, long n) {
    long D = euler_phi(n);
    if ((long)c.size() > n) {
        for (long i = (long)c.size() - 1; i >= n; --i) {
            if (c[i] != 0) c[i % n] += c[i];
            c[i] = 0;
        }
        c.resize(n);
    }
    const auto& phi = cyclotomic_poly(n);
    const auto& nz = cyclotomic_nonzero(n);
    for (long i = (long)c.size() - 1; i >= D; --i) {
        if (c[i] == 0) continue;
        Rat f = c[i];
        c[i] = 0;
        long shift = i - D;
        for (long j : nz) c[shift + j] -= f * phi[j];
    }
    c.resize(D);
    return c;
}

inline long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

} // namespace detail

struct cyc_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact element of the cyclotomic field Q(zeta_n), stored as rational
// coefficients in the power basis 1, z, ..., z^{phi(n)-1} with z = e^{2*pi*i/n}.
class Cyc {
public:
    Cyc() : n_(1), c_(1, Rat(0)) {}
    explicit Cyc(const Rat& r) : n_(1), c_(1, r) {}
    explicit Cyc(long v) : n_(1), c_(1, Rat(v)) {}

    Cyc(long conductor, std::vector<Rat> coeffs) : n_(conductor), c_(std::move(coeffs)) {
        check_conductor(conductor);
        if ((long)c_.size() != euler_phi(n_))
            c_ = detail::reduce_mod_phi(std::move(c_), n_);
    }

    long conductor() const { return n_; }
    const std::vector<Rat>& coeffs() const { return c_; }

    static void check_conductor(long n) {
        if (n < 1 || n > kConductorCap)
            throw cyc_error("conductor " + std::to_string(n) + " out of range [1, " +
                            std::to_string(kConductorCap) + "]");
    }

    // e^{2*pi*i*num/den}
    static Cyc root_of_unity(Int num, Int den) {
        if (den < 0) {
            den = -den;
            num = -num;
        }
        Int g = boost::multiprecision::gcd(boost::multiprecision::abs(num), den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        num %= den;
        if (num < 0) num += den;
        if (den > kConductorCap) throw cyc_error("root of unity order exceeds conductor cap");
        long n = (long)den, k = (long)num;
        if (n == 1) return Cyc(1);
        std::vector<Rat> c(n);
        c[k] = 1;
        return Cyc(n, std::move(c));
    }
    static Cyc root_of_unity(const Phase& p) {
        return root_of_unity(rat_num(p.value()), rat_den(p.value()));
    }

    // sin(k*pi/n) as an exact element; conductor lcm(4, 2n).
    static Cyc sin_pi(long k, long n) {
        if (n < 1) throw cyc_error("sin_pi: n must be positive");
        long N = detail::lcm_long(4, 2 * n);
        check_conductor(N);
        // sin(k pi/n) = (w^k - w^-k) / (2i), w = e^{i pi/n} = zeta_N^{N/(2n)}
        long step = N / (2 * n);
        Cyc plus = root_of_unity(Int(k) * step, Int(N));
        Cyc minus = root_of_unity(Int(-k) * step, Int(N));
        Cyc inv_2i = root_of_unity(3, 4) * Cyc(Rat(1, 2)); // 1/(2i) = -i/2
        return (plus - minus) * inv_2i;
    }

    // sin(k*pi/n) / sin(m*pi/n); requires sin(m*pi/n) != 0.
    static Cyc sin_ratio(long k, long m, long n) {
        Cyc den = sin_pi(m, n);
        if (den.is_zero()) throw cyc_error("sin_ratio: zero denominator");
        return sin_pi(k, n) / den;
    }

    // sqrt of a non-negative rational, via Gauss sums.
    static Cyc sqrt_nonneg(const Rat& r) {
        if (r < 0) throw cyc_error("sqrt of negative rational");
        if (r == 0) return Cyc();
        Int m = rat_num(r) * rat_den(r); // sqrt(p/q) = sqrt(p*q)/q
        Int square(1);
        Int f(1);
        Int rem = m;
        for (Int p = 2; p * p <= rem; ++p) {
            while (rem % (p * p) == 0) {
                square *= p;
                rem /= p * p;
            }
            if (rem % p == 0) {
                f *= p;
                rem /= p;
            }
        }
        if (rem > 1) f *= rem;
        Cyc out(Rat(square, rat_den(r)));
        // multiply sqrt of each squarefree prime factor
        Int ff = f;
        for (Int p = 2; p <= ff; ++p) {
            if (ff % p != 0) continue;
            ff /= p;
            out = out * sqrt_prime((long)p);
        }
        return out;
    }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t j = 1; j < c_.size(); ++j)
            if (c_[j] != 0) return false;
        return true;
    }
    Rat as_rational() const {
        if (!is_rational()) throw cyc_error("not rational");
        return c_[0];
    }

    Cyc embed(long m) const {
        if (m == n_) return *this;
        if (m % n_ != 0) throw cyc_error("embed: target conductor not a multiple");
        check_conductor(m);
        long s = m / n_;
        std::vector<Rat> c(m);
        for (size_t j = 0; j < c_.size(); ++j)
            if (c_[j] != 0) c[j * s] = c_[j];
        return Cyc(m, std::move(c));
    }

    Cyc conj() const {
        std::vector<Rat> c(n_);
        for (size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            c[j == 0 ? 0 : n_ - j] += c_[j];
        }
        return Cyc(n_, std::move(c));
    }

    bool is_real() const { return (*this - conj()).is_zero(); }

    friend Cyc operator+(const Cyc& a, const Cyc& b) {
        long n = detail::lcm_long(a.n_, b.n_);
        Cyc x = a.embed(n), y = b.embed(n);
        for (size_t j = 0; j < x.c_.size(); ++j) x.c_[j] += y.c_[j];
        return x;
    }
    friend Cyc operator-(const Cyc& a, const Cyc& b) {
        long n = detail::lcm_long(a.n_, b.n_);
        Cyc x = a.embed(n), y = b.embed(n);
        for (size_t j = 0; j < x.c_.size(); ++j) x.c_[j] -= y.c_[j];
        return x;
    }
    Cyc operator-() const {
        Cyc x = *this;
        for (auto& v : x.c_) v = -v;
        return x;
    }
    friend Cyc operator*(const Cyc& a, const Cyc& b) {
        long n = detail::lcm_long(a.n_, b.n_);
        Cyc x = a.embed(n), y = b.embed(n);
        std::vector<std::pair<long, const Rat*>> xs, ys;
        for (long j = 0; j < (long)x.c_.size(); ++j)
            if (x.c_[j] != 0) xs.emplace_back(j, &x.c_[j]);
        for (long j = 0; j < (long)y.c_.size(); ++j)
            if (y.c_[j] != 0) ys.emplace_back(j, &y.c_[j]);
        std::vector<Rat> prod(n > 1 ? n : 1);
        for (auto& [i, ci] : xs)
            for (auto& [j, cj] : ys) {
                long e = i + j;
                if (e >= n) e -= n;
                prod[e] += (*ci) * (*cj);
            }
        return Cyc(n, detail::reduce_mod_phi(std::move(prod), n));
    }
    friend Cyc operator*(const Cyc& a, const Rat& r) {
        Cyc x = a;
        for (auto& v : x.c_) v *= r;
        return x;
    }

    Cyc inverse() const {
        if (is_zero()) throw cyc_error("division by zero");
        if (is_rational()) return Cyc(Rat(1) / c_[0]);
        // extended Euclid of this (as polynomial) with Phi_n over Q
        const auto& phi_int = detail::cyclotomic_poly(n_);
        std::vector<Rat> r0(phi_int.begin(), phi_int.end());
        std::vector<Rat> r1 = c_;
        trim(r1);
        std::vector<Rat> s0{Rat(0)}, s1{Rat(1)}; // coefficients on 'this'
        while (true) {
            // divide r0 by r1
            std::vector<Rat> q(std::max<long>(1, (long)r0.size() - (long)r1.size() + 1));
            std::vector<Rat> rem = r0;
            long d1 = (long)r1.size() - 1;
            for (long i = (long)rem.size() - 1; i >= d1; --i) {
                if (rem[i] == 0) continue;
                Rat f = rem[i] / r1[d1];
                q[i - d1] = f;
                for (long j = 0; j <= d1; ++j) rem[i - d1 + j] -= f * r1[j];
            }
            trim(rem);
            // s_next = s0 - q * s1
            std::vector<Rat> s2(std::max(s0.size(), q.size() + s1.size()));
            for (size_t i = 0; i < s0.size(); ++i) s2[i] += s0[i];
            for (size_t i = 0; i < q.size(); ++i)
                for (size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
            trim(s2);
            if (rem.size() == 1 && rem[0] != 0) {
                // gcd is the constant rem[0]; inverse = s2 / rem[0]
                for (auto& v : s2) v /= rem[0];
                return Cyc(n_, detail::reduce_mod_phi(std::move(s2), n_));
            }
            if (rem.size() == 1 && rem[0] == 0)
                throw cyc_error("inverse: element not invertible (unexpected)");
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
    }
    friend Cyc operator/(const Cyc& a, const Cyc& b) { return a * b.inverse(); }

    bool operator==(const Cyc& o) const { return (*this - o).is_zero(); }
    bool operator!=(const Cyc& o) const { return !(*this == o); }

    // Certified enclosure of the real and imaginary parts.
    std::pair<RatInterval, RatInterval> enclosure(long prec) const {
        RatInterval re, im;
        for (size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            Rat t = Rat((long)j, n_);
            re += cos_2pi(t, prec) * c_[j];
            im += sin_2pi(t, prec) * c_[j];
        }
        return {re, im};
    }
    RatInterval enclosure_re(long prec) const {
        RatInterval re;
        for (size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            re += cos_2pi(Rat((long)j, n_), prec) * c_[j];
        }
        return re;
    }

    // Exact sign of a real element: zero decided by coefficients, nonzero by
    // interval evaluation with doubling precision.
    int sign() const {
        if (is_zero()) return 0;
        for (long prec = 64; prec <= 1L << 16; prec *= 2) {
            RatInterval re = enclosure_re(prec);
            int s = re.sign();
            if (s != 0) return s;
        }
        throw cyc_error("sign: could not separate from zero (is the element real?)");
    }

    double approx() const {
        RatInterval re = enclosure_re(64);
        return static_cast<double>(Rat((re.lo + re.hi) / 2));
    }

    std::string str() const {
        std::ostringstream os;
        os << "cyc(" << n_ << ";";
        for (size_t j = 0; j < c_.size(); ++j) {
            os << (j ? "," : " ") << rational_str(c_[j]);
        }
        os << ")";
        return os.str();
    }

private:
    static void trim(std::vector<Rat>& v) {
        while (v.size() > 1 && v.back() == 0) v.pop_back();
    }

    static Cyc sqrt_prime(long p) {
        if (p == 2) { // zeta_8 + zeta_8^-1
            std::vector<Rat> c(8);
            c[1] = 1;
            c[7] = 1;
            return Cyc(8, detail::reduce_mod_phi(std::move(c), 8));
        }
        // Gauss sum over the Legendre symbol
        std::vector<Rat> c(p);
        for (long k = 1; k < p; ++k) c[k] = legendre(k, p);
        Cyc g(p, detail::reduce_mod_phi(std::move(c), p));
        if (p % 4 == 1) return g;   // g = sqrt(p)
        return g * root_of_unity(3, 4); // g = i*sqrt(p), so sqrt(p) = -i*g
    }

    static int legendre(long a, long p) {
        long r = 1, base = a % p, e = (p - 1) / 2;
        while (e) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return r == 1 ? 1 : (r == p - 1 ? -1 : 0);
    }

    long n_;
    std::vector<Rat> c_;
};

// Convenience: exact comparison helpers for real cyclotomic values.
inline int cyc_sign(const Cyc& a) { return a.sign(); }
inline bool cyc_less(const Cyc& a, const Cyc& b) { return (a - b).sign() < 0; }
inline bool cyc_leq(const Cyc& a, const Cyc& b) { return (a - b).sign() <= 0; }

} // namespace etale
