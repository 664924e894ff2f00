#pragma once

#include "etale/nimrep.hpp"

namespace etale {

// Simple object of B_A, described by its underlying B-object decomposition.
struct ModuleObject {
    std::vector<long> decomposition;
    Cyc fpdim_B;     // FP dimension of the underlying object of B
    Cyc fpdim;       // FP dimension inside B_A (divided by FPdim(A))
    Cyc qdim;        // d_B(m) / d_B(A)
    bool deconfined = false;
    Phase twist;     // common twist of the constituents, when deconfined
};

struct module_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The monoidal product of B_A as multiplicities table[s][t][u] of m_u in
// m_s (x)_A m_t, together with the induced duality.
struct TensorTable {
    std::vector<std::vector<std::vector<long>>> t;
    std::vector<long> dual;
};

// Builds the simple right A-modules from a verified NIM-rep hypothesis.
// Decompositions come from the anchor rows (Frobenius reciprocity); quantum
// dimensions follow d_{B_A}(m) = d_B(m) / d_B(A).
inline std::vector<ModuleObject> build_modules(const ModularData& M,
                                               const std::vector<long>& algebra,
                                               const ModuleHypothesis& H) {
    long rk = M.rank();
    Cyc dA;
    for (long i = 0; i < rk; ++i)
        if (algebra[i]) dA = dA + M.d(i) * Rat(algebra[i]);
    if (dA.is_zero()) throw module_error("algebra has vanishing quantum dimension");
    Cyc fpA;
    // use FP dims through the modular data's ring: fpdim of algebra from H
    fpA = H.fpdim_B[0];

    std::vector<ModuleObject> out;
    Cyc additivity;
    for (long s = 0; s < H.r; ++s) {
        ModuleObject m;
        m.decomposition = H.modules[s];
        m.fpdim_B = H.fpdim_B[s];
        m.fpdim = H.fpdim_B[s] / fpA;
        Cyc dm;
        for (long i = 0; i < rk; ++i)
            if (H.modules[s][i]) dm = dm + M.d(i) * Rat(H.modules[s][i]);
        m.qdim = dm / dA;
        if (m.qdim.is_zero())
            throw module_error("module with vanishing quantum dimension (non-separable)");
        // deconfined iff all constituents share one twist mod 1
        m.deconfined = true;
        bool first = true;
        for (long i = 0; i < rk; ++i) {
            if (!H.modules[s][i]) continue;
            if (first) {
                m.twist = M.h(i);
                first = false;
            } else if (M.h(i) != m.twist) {
                m.deconfined = false;
            }
        }
        additivity = additivity + m.fpdim_B * m.fpdim_B;
        out.push_back(std::move(m));
    }
    (void)additivity; // callers certify additivity against FPdim(A)*FPdim(B)
    return out;
}

// FPdim additivity check: sum over modules of fpdim_B(m)^2 == fpA * fpB.
inline bool modules_additive(const std::vector<ModuleObject>& mods, const Cyc& fpA,
                             const Cyc& fpB) {
    Cyc acc;
    for (const auto& m : mods) acc = acc + m.fpdim_B * m.fpdim_B;
    return acc == fpA * fpB;
}

// Partition into deconfined (B_A^0) and confined simples; certifies
// sum over deconfined of fpdim_B(m)^2 == FPdim(B), the quotient formula
// FPdim(B_A^0) = FPdim(B) / FPdim(A)^2 cleared of denominators.
inline std::pair<std::vector<long>, std::vector<long>> dyslectic_split(
    const std::vector<ModuleObject>& mods, const Cyc& fpB) {
    std::vector<long> dec, conf;
    Cyc acc;
    for (long s = 0; s < (long)mods.size(); ++s) {
        if (mods[s].deconfined) {
            dec.push_back(s);
            acc = acc + mods[s].fpdim_B * mods[s].fpdim_B;
        } else {
            conf.push_back(s);
        }
    }
    if (!(acc == fpB))
        throw module_error("deconfined sector violates the FPdim quotient formula");
    return {dec, conf};
}

// Solves for all monoidal products (x)_A consistent with the NIM-rep.
// Unknowns t[s][t][u] = multiplicity of m_u in m_s (x)_A m_t.  Constraints:
//   - per (t,u), Frobenius reciprocity against the free modules pins the
//     weighted sums  sum_s (m_s)_i t[s][t][u] = (n_i)_{t,u};
//   - the right-multiplication matrix T_t commutes with every n_i;
//   - for commutative A free modules multiply identically from both sides:
//     sum_t (m_t)_i T_t = n_i;
//   - unit law, rigidity, FP dimensions and associativity.
// Slices T_t are assembled by backtracking; an empty result certifies that
// the candidate admits no consistent fusion structure.
inline std::vector<TensorTable> tensor_tables(const NimRep& nr,
                                              const std::vector<ModuleObject>& mods,
                                              long max_tables = 16) {
    long r = nr.r;
    long rk = (long)nr.mats.size();

    // fast certified bounds for the Perron pruning
    auto dbounds = [](const Cyc& v) {
        RatInterval e = v.enclosure_re(80);
        double lo = std::nextafter(static_cast<double>(e.lo), -1e300);
        double hi = std::nextafter(static_cast<double>(e.hi), 1e300);
        return std::pair<double, double>(lo, hi);
    };
    std::vector<std::pair<double, double>> fb(r);
    std::vector<Cyc> fpm(r);
    for (long s = 0; s < r; ++s) {
        fpm[s] = mods[s].fpdim_B;
        fb[s] = dbounds(fpm[s]);
    }
    Cyc fpA = fpm[0];

    // all solutions x >= 0 of sum_s (m_s)_i x_s = (n_i)_{t,u}, with the unit
    // coordinate pinned to x_0 = delta_{t,u}
    auto column_options = [&](long t, long u) {
        std::vector<std::vector<long>> sols;
        std::vector<long> x(r, 0);
        std::vector<long> acc(rk, 0);
        std::function<void(long)> rec = [&](long s) {
            if ((long)sols.size() > 4096) return;
            if (s == r) {
                for (long i = 0; i < rk; ++i)
                    if (acc[i] != nr.mats[i][t][u]) return;
                sols.push_back(x);
                return;
            }
            long lo = 0, hi = 8;
            if (s == 0) lo = hi = (t == u) ? 1 : 0;
            for (long val = lo; val <= hi; ++val) {
                bool ok = true;
                for (long i = 0; i < rk && ok; ++i) {
                    long a = acc[i] + val * nr.mats[i][0][s];
                    if (a > nr.mats[i][t][u]) ok = false;
                }
                if (!ok) break;
                for (long i = 0; i < rk; ++i) acc[i] += val * nr.mats[i][0][s];
                x[s] = val;
                rec(s + 1);
                x[s] = 0;
                for (long i = 0; i < rk; ++i) acc[i] -= val * nr.mats[i][0][s];
            }
        };
        rec(0);
        return sols;
    };

    // slice candidates: all T_t built from column options that commute with
    // every n_i and satisfy the exact Perron row sums
    auto slice_candidates = [&](long t) {
        std::vector<IMatrix> cands;
        std::vector<std::vector<std::vector<long>>> opts(r);
        for (long u = 0; u < r; ++u) {
            opts[u] = column_options(t, u);
            if (opts[u].empty()) return cands;
        }
        IMatrix T(r, std::vector<long>(r, 0));
        // per-row numeric accumulators for Perron pruning
        std::vector<double> row_lo(r, 0), row_hi(r, 0), tgt_lo(r), tgt_hi(r);
        auto fa = dbounds(fpA);
        auto ft = fb[t];
        for (long s = 0; s < r; ++s) {
            // target = fpm[s] * fpm[t] / fpA
            tgt_lo[s] = fb[s].first * ft.first / fa.second;
            tgt_hi[s] = fb[s].second * ft.second / fa.first;
        }
        std::function<void(long)> rec = [&](long u) {
            if ((long)cands.size() > 512) return;
            if (u == r) {
                // exact Perron rows
                for (long s = 0; s < r; ++s) {
                    Cyc acc;
                    for (long uu = 0; uu < r; ++uu)
                        if (T[s][uu]) acc = acc + fpm[uu] * Rat(T[s][uu]);
                    if (!(acc * fpA == fpm[s] * fpm[t])) return;
                }
                // commutation with every n_i
                for (long i = 0; i < rk; ++i)
                    for (long s = 0; s < r; ++s)
                        for (long v = 0; v < r; ++v) {
                            long lhs = 0, rhs = 0;
                            for (long w = 0; w < r; ++w) {
                                lhs += T[s][w] * nr.mats[i][w][v];
                                rhs += nr.mats[i][s][w] * T[w][v];
                            }
                            if (lhs != rhs) return;
                        }
                cands.push_back(T);
                return;
            }
            for (const auto& x : opts[u]) {
                bool ok = true;
                for (long s = 0; s < r && ok; ++s) {
                    double nl = row_lo[s] + x[s] * fb[u].first;
                    if (nl > tgt_hi[s] + 1e-9) ok = false;
                }
                if (!ok) continue;
                for (long s = 0; s < r; ++s) {
                    row_lo[s] += x[s] * fb[u].first;
                    row_hi[s] += x[s] * fb[u].second;
                    T[s][u] = x[s];
                }
                rec(u + 1);
                for (long s = 0; s < r; ++s) {
                    row_lo[s] -= x[s] * fb[u].first;
                    row_hi[s] -= x[s] * fb[u].second;
                    T[s][u] = 0;
                }
            }
        };
        rec(0);
        return cands;
    };

    std::vector<std::vector<IMatrix>> slices(r);
    for (long t = 1; t < r; ++t) {
        slices[t] = slice_candidates(t);
        if (slices[t].empty()) return {};
    }
    slices[0] = {IMatrix(r, std::vector<long>(r, 0))};
    for (long s = 0; s < r; ++s) slices[0][0][s][s] = 1;

    std::vector<TensorTable> out;
    std::vector<long> choice(r, 0);
    std::function<void(long)> combine = [&](long t) {
        if ((long)out.size() >= max_tables) return;
        if (t == r) {
            TensorTable tab;
            tab.t.assign(r, std::vector<std::vector<long>>(r, std::vector<long>(r, 0)));
            for (long tt = 0; tt < r; ++tt)
                for (long s = 0; s < r; ++s)
                    for (long u = 0; u < r; ++u) tab.t[s][tt][u] = slices[tt][choice[tt]][s][u];
            // central-functor link: sum_t (m_t)_i T_t = n_i
            for (long i = 0; i < rk; ++i)
                for (long s = 0; s < r; ++s)
                    for (long u = 0; u < r; ++u) {
                        long acc = 0;
                        for (long tt = 0; tt < r; ++tt)
                            if (nr.mats[i][0][tt]) acc += nr.mats[i][0][tt] * tab.t[s][tt][u];
                        if (acc != nr.mats[i][s][u]) return;
                    }
            // unit law on the left
            for (long a = 0; a < r; ++a)
                for (long u = 0; u < r; ++u)
                    if (tab.t[0][a][u] != (a == u ? 1 : 0)) return;
            // rigidity
            tab.dual.assign(r, -1);
            for (long s = 0; s < r; ++s) {
                long cnt = 0;
                for (long a = 0; a < r; ++a)
                    if (tab.t[s][a][0]) {
                        cnt += tab.t[s][a][0];
                        tab.dual[s] = a;
                    }
                if (cnt != 1) return;
            }
            for (long s = 0; s < r; ++s)
                if (tab.dual[tab.dual[s]] != s) return;
            // associativity
            for (long a = 0; a < r; ++a)
                for (long b = 0; b < r; ++b)
                    for (long cc = 0; cc < r; ++cc)
                        for (long vv = 0; vv < r; ++vv) {
                            long lhs = 0, rhs = 0;
                            for (long u = 0; u < r; ++u) {
                                lhs += tab.t[a][b][u] * tab.t[u][cc][vv];
                                rhs += tab.t[b][cc][u] * tab.t[a][u][vv];
                            }
                            if (lhs != rhs) return;
                        }
            out.push_back(std::move(tab));
            return;
        }
        for (long k = 0; k < (long)slices[t].size(); ++k) {
            choice[t] = k;
            combine(t + 1);
        }
        choice[t] = 0;
    };
    combine(0);
    std::sort(out.begin(), out.end(),
              [](const TensorTable& a, const TensorTable& b) { return a.t < b.t; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const TensorTable& a, const TensorTable& b) { return a.t == b.t; }),
              out.end());
    return out;
}

// Converts a tensor table into a fusion ring so it can be matched against
// the identification library.
inline FusionRing table_to_ring(const TensorTable& tab, const std::string& name) {
    FusionRing R;
    R.name = name;
    R.rank = (long)tab.t.size();
    for (long s = 0; s < R.rank; ++s) R.labels.push_back("m" + std::to_string(s + 1));
    R.dual = tab.dual;
    R.N = tab.t;
    return R;
}

// All library rings isomorphic to the computed table(s).
inline std::vector<std::string> identify_tables(const std::vector<TensorTable>& tables,
                                                const std::vector<const FusionRing*>& library) {
    std::vector<std::string> names;
    for (const auto& tab : tables) {
        FusionRing R = table_to_ring(tab, "B_A");
        for (const FusionRing* L : library) {
            if (L->rank != R.rank) continue;
            if (!rings_isomorphic(R, *L)) continue;
            if (std::find(names.begin(), names.end(), L->name) == names.end())
                names.push_back(L->name);
        }
    }
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace etale
