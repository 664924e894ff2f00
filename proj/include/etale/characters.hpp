#pragma once

#include "etale/fusion_ring.hpp"
#include "etale/poly.hpp"

#include <functional>
#include <map>
#include <optional>

namespace etale {

// A real-valued character of a commutative fusion ring: one exact value per
// simple object, value 1 at the unit and every value nonzero.  These are the
// candidate quantum-dimension assignments.
struct Character {
    std::vector<Cyc> values;

    bool all_positive() const {
        for (const auto& v : values)
            if (v.sign() <= 0) return false;
        return true;
    }
    bool operator==(const Character& o) const {
        if (values.size() != o.values.size()) return false;
        for (size_t i = 0; i < values.size(); ++i)
            if (!(values[i] == o.values[i])) return false;
        return true;
    }
};

struct character_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Arithmetic in K = Q[x]/(q) with q irreducible over Q.
struct KField {
    Poly q;

    Poly reduce(Poly p) const { return poly::mod(std::move(p), q); }
    Poly mul(const Poly& a, const Poly& b) const { return reduce(poly::mul(a, b)); }
    // Invariant of the extended Euclid loop: s_k * a == r_k (mod q).
    Poly inv(const Poly& a) const {
        Poly r0 = q, r1 = reduce(a), s0{Rat(0)}, s1{Rat(1)};
        if (poly::is_zero(r1)) throw character_error("K inverse of zero");
        while (poly::deg(r1) > 0) {
            auto [qq, rem] = poly::divmod(r0, r1);
            Poly s2 = poly::sub(s0, poly::mul(qq, s1));
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
            if (poly::is_zero(r1))
                throw character_error("K inverse of zero divisor (modulus not irreducible?)");
        }
        return reduce(poly::scale(s1, Rat(1) / r1[0]));
    }
};

// Exact integer characteristic polynomial via Newton's identities.
inline Poly charpoly(const std::vector<std::vector<Int>>& M) {
    long r = (long)M.size();
    std::vector<Rat> pt(r + 1);
    std::vector<std::vector<Int>> P = M;
    auto trace = [&](const std::vector<std::vector<Int>>& X) {
        Int t = 0;
        for (long i = 0; i < r; ++i) t += X[i][i];
        return t;
    };
    pt[1] = Rat(trace(M));
    for (long k = 2; k <= r; ++k) {
        std::vector<std::vector<Int>> next(r, std::vector<Int>(r, Int(0)));
        for (long i = 0; i < r; ++i)
            for (long l = 0; l < r; ++l) {
                if (P[i][l] == 0) continue;
                for (long j = 0; j < r; ++j) next[i][j] += P[i][l] * M[l][j];
            }
        P = std::move(next);
        pt[k] = Rat(trace(P));
    }
    std::vector<Rat> e(r + 1);
    e[0] = 1;
    for (long k = 1; k <= r; ++k) {
        Rat acc(0);
        for (long i = 1; i <= k; ++i) {
            Rat term = e[k - i] * pt[i];
            if (i % 2 == 0) term = -term;
            acc += term;
        }
        e[k] = acc / Rat(k);
    }
    Poly p(r + 1);
    for (long k = 0; k <= r; ++k) {
        Rat c = e[r - k];
        if ((r - k) % 2 == 1) c = -c;
        p[k] = c;
    }
    return p; // monic
}

// Splits a squarefree integer polynomial into the irreducible factors whose
// roots are all real, by forming subset products of certified root
// enclosures and verifying candidates with exact division.  Real roots whose
// minimal polynomial also has complex roots end up in `uncovered`.
inline void factor_over_real_roots(const Poly& p, const std::vector<RatInterval>& roots,
                                   std::vector<std::pair<Poly, std::vector<long>>>& factors,
                                   std::vector<long>& uncovered) {
    long m = (long)roots.size();
    std::vector<char> used(m, 0);
    std::vector<RatInterval> refined = roots;
    Poly remaining = p;

    auto try_subset = [&](const std::vector<long>& pick) -> bool {
        for (long prec = 160; prec <= 4096; prec *= 2) {
            std::vector<RatInterval> coeff{RatInterval::point(Rat(1))};
            for (long idx : pick) {
                const RatInterval& rt = refined[idx];
                std::vector<RatInterval> next(coeff.size() + 1, RatInterval::point(Rat(0)));
                for (size_t d = 0; d < coeff.size(); ++d) {
                    next[d + 1] += coeff[d];
                    next[d] += coeff[d] * (-rt);
                }
                coeff = std::move(next);
            }
            Poly cand(coeff.size());
            bool determined = true;
            for (size_t d = 0; d < coeff.size() && determined; ++d) {
                if (coeff[d].width() > Rat(1, 2)) {
                    determined = false;
                    break;
                }
                bool hit = false;
                Int base = rat_num(coeff[d].lo) / rat_den(coeff[d].lo) - 1;
                for (Int c = base; c <= base + 3; ++c)
                    if (Rat(c) >= coeff[d].lo && Rat(c) <= coeff[d].hi) {
                        cand[d] = Rat(c);
                        hit = true;
                        break;
                    }
                if (!hit) return false; // interval tight but no integer inside
            }
            if (!determined) {
                for (long idx : pick) refined[idx] = poly::refine_root(p, refined[idx], prec * 2);
                continue;
            }
            auto [quot, rem] = poly::divmod(remaining, cand);
            if (poly::is_zero(rem)) {
                factors.emplace_back(cand, pick);
                for (long idx : pick) used[idx] = 1;
                remaining = quot;
                return true;
            }
            return false;
        }
        return false;
    };

    for (long size = 1; size <= m; ++size) {
        bool progress = true;
        while (progress) {
            progress = false;
            std::vector<long> avail;
            for (long i = 0; i < m; ++i)
                if (!used[i]) avail.push_back(i);
            if ((long)avail.size() < size) break;
            std::vector<long> pick(size);
            std::function<bool(long, long)> choose = [&](long pos, long start) -> bool {
                if (pos == size) return try_subset(pick);
                for (long s = start; s < (long)avail.size(); ++s) {
                    pick[pos] = avail[s];
                    if (choose(pos + 1, s + 1)) return true;
                }
                return false;
            };
            if (choose(0, 0)) progress = true;
        }
    }
    for (long i = 0; i < m; ++i)
        if (!used[i]) uncovered.push_back(i);
}

} // namespace detail

// Candidate exact values used to express computed character values in
// cyclotomic form.  Proposals are always certified exactly afterwards, so
// the dictionary only has to be good enough, never trusted.
class ValueDictionary {
public:
    void add(const Cyc& v) { atoms_.push_back(v); }
    void add_vector(const std::vector<Cyc>& vec) { vectors_.push_back(vec); }

    static const ValueDictionary& standard() {
        static const ValueDictionary d = [] {
            ValueDictionary v;
            for (long k = -12; k <= 12; ++k) v.add(Cyc(k));
            for (long n = 2; n <= 60; ++n) {
                Cyc s = Cyc::sqrt_nonneg(Rat(n));
                for (const Cyc& base :
                     {s, s * Rat(1, 2), (Cyc(1) + s) * Rat(1, 2), (Cyc(1) - s) * Rat(1, 2),
                      (Cyc(3) + s) * Rat(1, 2), (Cyc(3) - s) * Rat(1, 2)}) {
                    v.add(base);
                    v.add(-base);
                }
            }
            for (long n = 4; n <= 20; ++n)
                for (long k = 1; k < n; ++k)
                    for (long mm = 1; mm < n; ++mm) {
                        if (k == mm) continue;
                        try {
                            Cyc x = Cyc::sin_ratio(k, mm, n);
                            v.add(x);
                            v.add(-x);
                        } catch (const cyc_error&) {
                        }
                    }
            return v;
        }();
        return d;
    }

    // Atoms whose rigorous enclosure at `prec` overlaps the target interval.
    // A fast double-precision prefilter keeps the rigorous checks rare.
    std::vector<const Cyc*> lookup(const RatInterval& target, long prec) const {
        ensure_approx();
        double lo = static_cast<double>(target.lo), hi = static_cast<double>(target.hi);
        double slack = std::max(1e-9, (hi - lo)) + 1e-9;
        std::vector<const Cyc*> out;
        for (size_t i = 0; i < atoms_.size(); ++i) {
            if (approx_[i] < lo - slack || approx_[i] > hi + slack) continue;
            RatInterval e = atoms_[i].enclosure_re(prec);
            if (e.hi < target.lo || e.lo > target.hi) continue;
            out.push_back(&atoms_[i]);
        }
        return out;
    }

    const std::vector<std::vector<Cyc>>& vectors() const { return vectors_; }

private:
    void ensure_approx() const {
        if (approx_.size() == atoms_.size()) return;
        approx_.clear();
        for (const auto& a : atoms_) approx_.push_back(a.approx());
    }
    std::vector<Cyc> atoms_;
    std::vector<std::vector<Cyc>> vectors_;
    mutable std::vector<double> approx_;
};

// All real nonzero-valued characters, exactly.  Found as the simultaneous
// eigenvectors of the commuting fusion matrices: a weighted fusion matrix
// with squarefree characteristic polynomial has one-dimensional eigenspaces,
// each fixed by every N_i.  Values are enumerated in Q[x]/(q) per
// irreducible factor q and certified against exact cyclotomic proposals.
inline std::vector<Character> characters(const FusionRing& R,
                                         const ValueDictionary* dict_in = nullptr) {
    if (!R.is_commutative()) throw character_error("ring " + R.name + " is not commutative");
    long r = R.rank;
    const ValueDictionary& dict = dict_in ? *dict_in : ValueDictionary::standard();

    Poly p;
    std::vector<std::vector<Int>> M;
    bool ok = false;
    for (long attempt = 0; attempt < 32 && !ok; ++attempt) {
        M.assign(r, std::vector<Int>(r, Int(0)));
        for (long i = 0; i < r; ++i) {
            long w = 1;
            for (long e = 0; e < i; ++e) w = w * (attempt + 2) % 1009;
            for (long j = 0; j < r; ++j)
                for (long k = 0; k < r; ++k)
                    if (R.N[i][j][k]) M[j][k] += Int(w) * R.N[i][j][k];
        }
        p = detail::charpoly(M);
        ok = poly::deg(poly::gcd(p, poly::derivative(p))) == 0;
    }
    if (!ok)
        throw character_error("ring " + R.name +
                              ": fusion matrices not simultaneously diagonalizable with "
                              "distinct eigenvalues (non-multiplicity-free or corrupt input?)");

    auto roots = poly::isolate_real_roots(p, 96);
    std::vector<std::pair<Poly, std::vector<long>>> factors;
    std::vector<long> uncovered;
    detail::factor_over_real_roots(p, roots, factors, uncovered);

    std::vector<Character> out;
    for (auto& [q, root_ids] : factors) {
        long d = poly::deg(q);
        detail::KField K{poly::monic(q)};

        // kernel of (M - x I) over K; one dimensional since p is squarefree
        std::vector<std::vector<Poly>> A(r, std::vector<Poly>(r));
        for (long i = 0; i < r; ++i)
            for (long j = 0; j < r; ++j) {
                Poly c{Rat(M[i][j])};
                if (i == j) {
                    c.resize(2);
                    c[1] = Rat(-1);
                }
                A[i][j] = K.reduce(std::move(c));
            }
        std::vector<long> col_pivot(r, -1);
        long row = 0;
        for (long col = 0; col < r && row < r; ++col) {
            long pr = -1;
            for (long i = row; i < r; ++i)
                if (!poly::is_zero(A[i][col])) {
                    pr = i;
                    break;
                }
            if (pr < 0) continue;
            std::swap(A[row], A[pr]);
            Poly inv = K.inv(A[row][col]);
            for (long j = 0; j < r; ++j) A[row][j] = K.mul(A[row][j], inv);
            for (long i = 0; i < r; ++i) {
                if (i == row || poly::is_zero(A[i][col])) continue;
                Poly f = A[i][col];
                for (long j = 0; j < r; ++j)
                    A[i][j] = K.reduce(poly::sub(A[i][j], poly::mul(f, A[row][j])));
            }
            col_pivot[col] = row;
            ++row;
        }
        if (row != r - 1)
            throw character_error("ring " + R.name + ": unexpected eigenspace dimension");
        long free_col = -1;
        for (long c = 0; c < r; ++c)
            if (col_pivot[c] < 0) free_col = c;
        std::vector<Poly> v(r, Poly{Rat(0)});
        v[free_col] = Poly{Rat(1)};
        for (long c = 0; c < r; ++c)
            if (col_pivot[c] >= 0)
                v[c] = K.reduce(poly::scale(A[col_pivot[c]][free_col], Rat(-1)));

        // normalize at the unit: the coordinates then ARE the character
        // values, since (N_i v)_unit = v_i and N_i v = chi_i v.
        if (poly::is_zero(v[0])) continue;
        Poly inv0 = K.inv(v[0]);
        for (auto& x : v) x = K.mul(x, inv0);
        const std::vector<Poly>& chi = v;

        // exact multiplicativity in K
        for (long i = 0; i < r; ++i)
            for (long j = i; j < r; ++j) {
                Poly lhs = K.mul(chi[i], chi[j]);
                Poly rhs{Rat(0)};
                for (long k = 0; k < r; ++k)
                    if (R.N[i][j][k]) rhs = poly::add(rhs, poly::scale(chi[k], Rat(R.N[i][j][k])));
                if (!poly::is_zero(K.reduce(poly::sub(lhs, rhs))))
                    throw character_error("ring " + R.name + ": eigenvector not multiplicative");
            }

        bool has_zero = false;
        for (long i = 0; i < r; ++i)
            if (poly::is_zero(chi[i])) has_zero = true;
        if (has_zero) continue; // not a candidate quantum-dimension set

        if (d == 1) {
            Character c;
            for (long i = 0; i < r; ++i) c.values.emplace_back(chi[i][0]);
            out.push_back(std::move(c));
            continue;
        }

        for (long root_id : root_ids) {
            RatInterval rt0 = roots[root_id];
            auto value_iv = [&](long i, long pr) {
                RatInterval x = poly::refine_root(p, rt0, pr);
                return poly::eval_interval(chi[i], x);
            };

            std::optional<Character> match;
            for (long pr = 96; pr <= 3072 && !match; pr *= 2) {
                std::vector<const std::vector<Cyc>*> vec_hits;
                for (const auto& vec : dict.vectors()) {
                    if ((long)vec.size() != r) continue;
                    bool all = true;
                    for (long i = 0; i < r && all; ++i) {
                        RatInterval a = value_iv(i, pr);
                        RatInterval b = vec[i].enclosure_re(pr);
                        if (a.hi < b.lo || a.lo > b.hi) all = false;
                    }
                    if (all) {
                        // keep one representative per exactly-equal vector
                        bool dup = false;
                        for (auto* v2 : vec_hits) {
                            bool eq = true;
                            for (long i = 0; i < r && eq; ++i)
                                if (!((*v2)[i] == vec[i])) eq = false;
                            if (eq) dup = true;
                        }
                        if (!dup) vec_hits.push_back(&vec);
                    }
                }
                if (vec_hits.size() == 1) {
                    Character c;
                    c.values = *vec_hits[0];
                    match = std::move(c);
                    break;
                }
                if (vec_hits.size() > 1) continue; // refine until unique
                Character c;
                bool built = true;
                for (long i = 0; i < r && built; ++i) {
                    RatInterval a = value_iv(i, pr);
                    auto hits = dict.lookup(a, pr);
                    // collapse exactly-equal atoms written in different forms
                    std::vector<const Cyc*> distinct;
                    for (const Cyc* h : hits) {
                        bool dup = false;
                        for (const Cyc* d2 : distinct)
                            if (*d2 == *h) dup = true;
                        if (!dup) distinct.push_back(h);
                    }
                    if (distinct.size() != 1)
                        built = false;
                    else
                        c.values.push_back(*distinct[0]);
                }
                if (built) match = std::move(c);
            }
            if (!match)
                throw character_error("ring " + R.name +
                                      ": could not express a character in cyclotomic form");
            for (long i = 0; i < r; ++i)
                for (long j = i; j < r; ++j) {
                    Cyc lhs = match->values[i] * match->values[j];
                    Cyc rhs;
                    for (long k = 0; k < r; ++k)
                        if (R.N[i][j][k]) rhs = rhs + match->values[k] * Rat(R.N[i][j][k]);
                    if (lhs != rhs)
                        throw character_error("ring " + R.name +
                                              ": recognized character failed certification");
                }
            if (!(match->values[0] == Cyc(1)))
                throw character_error("ring " + R.name + ": character unit value != 1");
            out.push_back(std::move(*match));
        }
    }

    std::sort(out.begin(), out.end(), [](const Character& a, const Character& b) {
        for (size_t i = 0; i < a.values.size(); ++i) {
            double x = a.values[i].approx(), y = b.values[i].approx();
            if (std::abs(x - y) > 1e-9) return x < y;
        }
        return false;
    });
    for (size_t i = 0; i + 1 < out.size(); ++i)
        for (size_t j = i + 1; j < out.size(); ++j)
            if (out[i] == out[j])
                throw character_error("ring " + R.name +
                                      ": duplicate characters (recognition too coarse)");
    return out;
}

// The unique character with all values strictly positive.
inline Character fp_dims(const FusionRing& R, const ValueDictionary* dict = nullptr) {
    auto chars = characters(R, dict);
    std::optional<Character> fp;
    for (auto& c : chars) {
        if (c.all_positive()) {
            if (fp) throw character_error("ring " + R.name + ": multiple positive characters");
            fp = std::move(c);
        }
    }
    if (!fp) throw character_error("ring " + R.name + ": no all-positive character");
    return *fp;
}

inline Cyc fp_dim_total(const Character& fp) {
    Cyc total;
    for (const auto& v : fp.values) total = total + v * v;
    return total;
}

} // namespace etale
