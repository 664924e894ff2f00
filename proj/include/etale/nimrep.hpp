#pragma once

#include "etale/modular.hpp"

#include <functional>
#include <set>

namespace etale {

using IMatrix = std::vector<std::vector<long>>;

// Non-negative integer matrix representation of a fusion ring: one r x r
// matrix per simple object with (n_i)_{st} = multiplicity of m_t in b_i > m_s.
struct NimRep {
    long r = 0;
    std::vector<IMatrix> mats;
};

struct SearchBudget {
    long max_entry = 3;
    unsigned long long max_nodes = 50'000'000;
};

// Candidate set of simple modules for B_A: content vectors over the simples
// of B.  Row 0 is the algebra itself (the anchor module).  Multiplicities of
// m_t inside F_A(b_i) equal (m_t)_i by Frobenius reciprocity, which forces
// sum_t (m_t)_i (m_t)_j = G_ij with G_ij = multiplicity of b_j in b_i (x) A.
struct ModuleHypothesis {
    long r = 0;
    std::vector<std::vector<long>> modules;
    std::vector<Cyc> fpdim_B; // unnormalized FP dimension of each module in B
};

namespace detail {

inline IMatrix gram_matrix(const FusionRing& R, const std::vector<long>& algebra) {
    long rk = R.rank;
    IMatrix G(rk, std::vector<long>(rk, 0));
    for (long i = 0; i < rk; ++i)
        for (long j = 0; j < rk; ++j) {
            long acc = 0;
            for (long k = 0; k < rk; ++k)
                if (algebra[k]) acc += algebra[k] * R.N[i][k][j];
            G[i][j] = acc;
        }
    return G;
}

} // namespace detail

// Enumerates all module hypotheses: non-negative integer factorizations
// X^T X = G whose first row is the algebra vector, up to row order (rows
// after the anchor are produced in non-increasing lexicographic order).
// Every module must satisfy fpdim_B(m) >= fpdim_B(A).
inline std::vector<ModuleHypothesis> derive_target_rank(const FusionRing& R,
                                                        const Character& fp,
                                                        const std::vector<long>& algebra,
                                                        long max_hypotheses = 64) {
    long rk = R.rank;
    IMatrix G = detail::gram_matrix(R, algebra);
    Cyc fpA;
    for (long i = 0; i < rk; ++i)
        if (algebra[i]) fpA = fpA + fp.values[i] * Rat(algebra[i]);

    auto fp_of = [&](const std::vector<long>& v) {
        Cyc acc;
        for (long i = 0; i < rk; ++i)
            if (v[i]) acc = acc + fp.values[i] * Rat(v[i]);
        return acc;
    };

    std::vector<ModuleHypothesis> out;
    IMatrix res = G;
    std::vector<std::vector<long>> rows;

    auto subtract = [&](const std::vector<long>& v, long sgn) {
        for (long i = 0; i < rk; ++i)
            if (v[i])
                for (long j = 0; j < rk; ++j)
                    if (v[j]) res[i][j] -= sgn * v[i] * v[j];
    };

    // anchor
    for (long i = 0; i < rk; ++i)
        for (long j = 0; j < rk; ++j)
            if (algebra[i] * algebra[j] > G[i][j]) return out; // no factorization at all
    rows.push_back(algebra);
    subtract(algebra, +1);

    std::function<void(std::vector<long>, bool)> rec = [&](std::vector<long> bound,
                                                           bool have_bound) {
        if ((long)out.size() >= max_hypotheses) return;
        bool done = true;
        for (long i = 0; i < rk && done; ++i)
            for (long j = 0; j < rk && done; ++j)
                if (res[i][j] != 0) done = false;
        if (done) {
            ModuleHypothesis H;
            H.r = (long)rows.size();
            H.modules = rows;
            for (auto& v : rows) H.fpdim_B.push_back(fp_of(v));
            out.push_back(std::move(H));
            return;
        }
        // enumerate next row v with v <= bound (lex), v_i v_j <= res_ij
        std::vector<long> v(rk, 0);
        std::function<void(long, bool)> build = [&](long pos, bool tight) {
            if ((long)out.size() >= max_hypotheses) return;
            if (pos == rk) {
                bool nonzero = false;
                for (long i = 0; i < rk; ++i)
                    if (v[i]) nonzero = true;
                if (!nonzero) return;
                // fusion-category constraint: fpdim(m) >= fpdim(A)
                if ((fp_of(v) - fpA).sign() < 0) return;
                subtract(v, +1);
                rows.push_back(v);
                rec(v, true);
                rows.pop_back();
                subtract(v, -1);
                return;
            }
            long cap = tight ? bound[pos] : std::numeric_limits<long>::max();
            // v_pos^2 <= res[pos][pos] and cross bounds against chosen coords
            for (long val = std::min<long>(cap, 8); val >= 0; --val) {
                if (val * val > res[pos][pos]) continue;
                bool ok = true;
                for (long q = 0; q < pos && ok; ++q)
                    if (v[q] * val > res[q][pos]) ok = false;
                if (!ok) continue;
                v[pos] = val;
                build(pos + 1, tight && val == bound[pos]);
                v[pos] = 0;
            }
        };
        build(0, have_bound);
    };
    rec({}, false);

    // dedup by sorted row multiset (order of equal rows is immaterial)
    std::vector<ModuleHypothesis> dedup;
    std::set<std::vector<std::vector<long>>> seen;
    for (auto& h : out) {
        auto key = h.modules;
        std::sort(key.begin() + 1, key.end());
        if (seen.insert(key).second) dedup.push_back(std::move(h));
    }
    return dedup;
}

struct NimSearchResult {
    std::vector<NimRep> solutions;
    bool budget_exhausted = false;
};

// Re-checks all NIM-rep axioms exactly.  The strictly positive Perron vector
// is reconstructed from the anchor row: fp_B(m_t) = sum_i (n_i)_{0t} fp(b_i).
inline std::vector<std::string> verify_nimrep(const FusionRing& R, const Character& fp,
                                              const NimRep& nr) {
    std::vector<std::string> bad;
    long rk = R.rank, r = nr.r;
    if ((long)nr.mats.size() != rk) {
        bad.push_back("matrix count != rank");
        return bad;
    }
    for (long i = 0; i < rk; ++i)
        if ((long)nr.mats[i].size() != r) {
            bad.push_back("matrix shape broken");
            return bad;
        }
    for (long s = 0; s < r; ++s)
        for (long t = 0; t < r; ++t)
            if (nr.mats[0][s][t] != (s == t ? 1 : 0)) {
                bad.push_back("n_1 is not the identity");
                s = t = r;
            }
    for (long i = 0; i < rk; ++i)
        for (long s = 0; s < r; ++s)
            for (long t = 0; t < r; ++t) {
                if (nr.mats[i][s][t] < 0) bad.push_back("negative entry");
                if (nr.mats[R.dual[i]][s][t] != nr.mats[i][t][s]) {
                    bad.push_back("n_{i*} != transpose(n_i) at " + R.labels[i]);
                    i = rk;
                    s = t = r;
                }
            }
    if (!bad.empty()) return bad;
    for (long i = 0; i < rk; ++i)
        for (long j = 0; j < rk; ++j) {
            for (long s = 0; s < r; ++s)
                for (long t = 0; t < r; ++t) {
                    long lhs = 0;
                    for (long u = 0; u < r; ++u) lhs += nr.mats[i][s][u] * nr.mats[j][u][t];
                    long rhs = 0;
                    for (long k = 0; k < rk; ++k)
                        if (R.N[i][j][k]) rhs += R.N[i][j][k] * nr.mats[k][s][t];
                    if (lhs != rhs) {
                        bad.push_back("product identity fails at (" + R.labels[i] + "," +
                                      R.labels[j] + ") entry (" + std::to_string(s) + "," +
                                      std::to_string(t) + ")");
                        return bad;
                    }
                }
        }
    // Perron compatibility
    std::vector<Cyc> v(r);
    for (long t = 0; t < r; ++t) {
        Cyc acc;
        for (long i = 0; i < rk; ++i)
            if (nr.mats[i][0][t]) acc = acc + fp.values[i] * Rat(nr.mats[i][0][t]);
        v[t] = acc;
        if (v[t].sign() <= 0) bad.push_back("Perron vector not strictly positive");
    }
    for (long i = 0; i < rk && bad.empty(); ++i)
        for (long s = 0; s < r; ++s) {
            Cyc acc;
            for (long t = 0; t < r; ++t)
                if (nr.mats[i][s][t]) acc = acc + v[t] * Rat(nr.mats[i][s][t]);
            if (!(acc == fp.values[i] * v[s])) {
                bad.push_back("Perron compatibility fails at " + R.labels[i]);
                break;
            }
        }
    return bad;
}

namespace detail {

// Canonical form under simultaneous permutations of module labels that fix
// the anchor and permute only modules with identical content vectors.
inline std::vector<IMatrix> canonical_nimrep(const std::vector<IMatrix>& mats,
                                             const std::vector<std::vector<long>>& modules) {
    long r = (long)modules.size();
    // group indices 1..r-1 by content vector
    std::vector<std::vector<long>> classes;
    std::map<std::vector<long>, long> class_of;
    for (long s = 1; s < r; ++s) {
        auto it = class_of.find(modules[s]);
        if (it == class_of.end()) {
            class_of[modules[s]] = (long)classes.size();
            classes.push_back({s});
        } else {
            classes[it->second].push_back(s);
        }
    }
    std::vector<std::vector<std::vector<long>>> class_perms;
    unsigned long long total = 1;
    for (auto& cls : classes) {
        std::vector<std::vector<long>> perms;
        std::vector<long> p = cls;
        std::sort(p.begin(), p.end());
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
        total *= perms.size();
        class_perms.push_back(std::move(perms));
        if (total > 100000) { // give up on canonicalization, return as-is
            return mats;
        }
    }
    std::vector<IMatrix> best = mats;
    std::vector<long> perm(r);
    std::function<void(size_t)> iter = [&](size_t ci) {
        if (ci == classes.size()) {
            std::vector<IMatrix> cand(mats.size(), IMatrix(r, std::vector<long>(r)));
            for (size_t m = 0; m < mats.size(); ++m)
                for (long s = 0; s < r; ++s)
                    for (long t = 0; t < r; ++t) cand[m][perm[s]][perm[t]] = mats[m][s][t];
            if (cand < best) best = std::move(cand);
            return;
        }
        for (auto& p : class_perms[ci]) {
            for (size_t k = 0; k < classes[ci].size(); ++k) perm[classes[ci][k]] = p[k];
            iter(ci + 1);
        }
    };
    perm[0] = 0;
    iter(0);
    return best;
}

} // namespace detail

// Backtracking search for all NIM-reps consistent with a module hypothesis,
// up to simultaneous basis permutations fixing the anchor module.  Variable
// order: matrices of ring generators are filled row by row (rows constrained
// by the exact Perron sum), everything else is propagated through products.
inline NimSearchResult search_nimreps(const FusionRing& R, const Character& fp,
                                      const ModuleHypothesis& H,
                                      const SearchBudget& budget = SearchBudget{}) {
    NimSearchResult result;
    long rk = R.rank, r = H.r;

    // anchor rows/columns of every matrix are pinned by reciprocity
    std::vector<IMatrix> mats(rk, IMatrix(r, std::vector<long>(r, -1)));
    for (long s = 0; s < r; ++s)
        for (long t = 0; t < r; ++t) mats[0][s][t] = (s == t) ? 1 : 0;
    for (long i = 0; i < rk; ++i)
        for (long t = 0; t < r; ++t) {
            mats[i][0][t] = H.modules[t][i];
            mats[i][t][0] = H.modules[t][R.dual[i]];
        }
    if (mats[0][0][0] != 1) return result;

    // derivation plan
    std::vector<char> known(rk, 0);
    known[0] = 1;
    std::vector<long> free_gens;
    struct Derive {
        long target, i, j; // n_target = (n_i n_j - sum_{known l} N_ij^l n_l)/N_ij^target
    };
    std::vector<std::pair<long, std::vector<Derive>>> plan; // (generator, derived steps)

    auto closure = [&](std::vector<Derive>& steps) {
        bool progress = true;
        while (progress) {
            progress = false;
            for (long i = 0; i < rk; ++i) {
                if (!known[i]) continue;
                if (known[R.dual[i]] == 0) { // transpose is free
                    known[R.dual[i]] = 1;
                    steps.push_back({R.dual[i], -1, i});
                    progress = true;
                }
                for (long j = 0; j < rk; ++j) {
                    if (!known[j]) continue;
                    long unknown_k = -1, cnt = 0;
                    for (long k = 0; k < rk; ++k)
                        if (R.N[i][j][k] && !known[k]) {
                            ++cnt;
                            unknown_k = k;
                        }
                    if (cnt == 1 && R.N[i][j][unknown_k] == 1) {
                        known[unknown_k] = 1;
                        steps.push_back({unknown_k, i, j});
                        progress = true;
                    }
                }
            }
        }
    };
    {
        std::vector<Derive> steps0;
        closure(steps0);
        plan.emplace_back(-1, std::move(steps0));
        while (true) {
            long best = -1;
            for (long i = 0; i < rk; ++i)
                if (!known[i] && (best < 0 || (fp.values[i] - fp.values[best]).sign() < 0))
                    best = i;
            if (best < 0) break;
            free_gens.push_back(best);
            known[best] = 1;
            std::vector<Derive> steps;
            closure(steps);
            plan.emplace_back(best, std::move(steps));
        }
    }

    unsigned long long nodes = 0;
    std::set<std::vector<IMatrix>> seen;

    // exact row values plus certified double bounds for fast pruning
    std::vector<Cyc> fpm = H.fpdim_B;
    auto dbounds = [](const Cyc& v) {
        RatInterval e = v.enclosure_re(80);
        double lo = std::nextafter(static_cast<double>(e.lo), -1e300);
        double hi = std::nextafter(static_cast<double>(e.hi), 1e300);
        return std::pair<double, double>(lo, hi);
    };
    std::vector<std::pair<double, double>> fpm_b(r), fpo_b(rk);
    for (long t = 0; t < r; ++t) fpm_b[t] = dbounds(fpm[t]);
    for (long i = 0; i < rk; ++i) fpo_b[i] = dbounds(fp.values[i]);

    std::function<bool(size_t)> run_stage; // returns false on budget stop

    auto check_partial_products = [&](const std::vector<char>& kn) {
        for (long i = 0; i < rk; ++i) {
            if (!kn[i]) continue;
            for (long j = 0; j < rk; ++j) {
                if (!kn[j]) continue;
                bool all_known = true;
                for (long k = 0; k < rk; ++k)
                    if (R.N[i][j][k] && !kn[k]) all_known = false;
                if (!all_known) continue;
                for (long s = 0; s < r; ++s)
                    for (long t = 0; t < r; ++t) {
                        long lhs = 0;
                        for (long u = 0; u < r; ++u) lhs += mats[i][s][u] * mats[j][u][t];
                        long rhs = 0;
                        for (long k = 0; k < rk; ++k)
                            if (R.N[i][j][k]) rhs += R.N[i][j][k] * mats[k][s][t];
                        if (lhs != rhs) return false;
                    }
            }
        }
        return true;
    };

    std::vector<char> kn(rk, 0);
    kn[0] = 1;

    std::function<bool(size_t)> stage = [&](size_t idx) -> bool {
        if (idx == plan.size()) {
            NimRep nr;
            nr.r = r;
            nr.mats = mats;
            if (verify_nimrep(R, fp, nr).empty()) {
                auto canon = detail::canonical_nimrep(nr.mats, H.modules);
                if (seen.insert(canon).second) {
                    nr.mats = canon;
                    result.solutions.push_back(std::move(nr));
                }
            }
            return true;
        }
        auto& [gen, steps] = plan[idx];
        auto apply_steps = [&]() -> bool {
            for (auto& st : steps) {
                if (st.i < 0) { // transpose derivation
                    for (long s = 0; s < r; ++s)
                        for (long t = 0; t < r; ++t) mats[st.target][s][t] = mats[st.j][t][s];
                    kn[st.target] = 1;
                    continue;
                }
                for (long s = 0; s < r; ++s)
                    for (long t = 0; t < r; ++t) {
                        long val = 0;
                        for (long u = 0; u < r; ++u) val += mats[st.i][s][u] * mats[st.j][u][t];
                        for (long k = 0; k < rk; ++k)
                            if (R.N[st.i][st.j][k] && k != st.target && kn[k])
                                val -= R.N[st.i][st.j][k] * mats[k][s][t];
                        if (val < 0) return false;
                        // anchor row/col already pinned: consistency check
                        if ((s == 0 || t == 0) && mats[st.target][s][t] >= 0 &&
                            mats[st.target][s][t] != val)
                            return false;
                        mats[st.target][s][t] = val;
                    }
                kn[st.target] = 1;
            }
            return true;
        };
        auto clear_steps = [&]() {
            for (auto& st : steps) {
                kn[st.target] = 0;
                for (long s = 1; s < r; ++s)
                    for (long t = 1; t < r; ++t) mats[st.target][s][t] = -1;
                for (long t = 0; t < r; ++t) {
                    mats[st.target][0][t] = H.modules[t][st.target];
                    mats[st.target][t][0] = H.modules[t][R.dual[st.target]];
                }
            }
        };

        if (gen < 0) { // initial closure only
            if (!apply_steps()) {
                clear_steps();
                return true;
            }
            if (check_partial_products(kn)) {
                if (!stage(idx + 1)) return false;
            }
            clear_steps();
            return true;
        }

        long g = gen;
        bool self_dual = (R.dual[g] == g);
        // enumerate rows 1..r-1 of mats[g] (row 0/col 0 pinned)
        std::function<bool(long)> fill_row = [&](long s) -> bool {
            if (++nodes > budget.max_nodes) {
                result.budget_exhausted = true;
                return false;
            }
            if (s == r) {
                kn[g] = 1;
                bool go = true;
                if (!check_partial_products(kn)) go = false;
                if (go && !apply_steps()) go = false;
                if (go && !check_partial_products(kn)) go = false;
                if (go) {
                    if (!stage(idx + 1)) {
                        clear_steps();
                        kn[g] = 0;
                        return false;
                    }
                }
                clear_steps();
                kn[g] = 0;
                return true;
            }
            // choose entries t = 1..r-1 of row s; prune with certified double
            // bounds on the Perron sum, verify complete rows exactly.
            double tgt_lo = fpo_b[g].first * fpm_b[s].first - fpm_b[0].second * mats[g][s][0];
            double tgt_hi = fpo_b[g].second * fpm_b[s].second - fpm_b[0].first * mats[g][s][0];
            auto exact_row_ok = [&](long srow) {
                Cyc acc;
                for (long t = 0; t < r; ++t)
                    if (mats[g][srow][t]) acc = acc + fpm[t] * Rat(mats[g][srow][t]);
                return acc == fp.values[g] * fpm[srow];
            };
            std::function<bool(long, double, double)> fill_entry = [&](long t, double rlo,
                                                                       double rhi) -> bool {
                if (++nodes > budget.max_nodes) {
                    result.budget_exhausted = true;
                    return false;
                }
                if (t == r) {
                    if (rlo > 1e-9 || rhi < -1e-9) return true; // cannot be zero
                    if (!exact_row_ok(s)) return true;
                    return fill_row(s + 1);
                }
                long lo = 0, hi = budget.max_entry;
                if (self_dual && t < s) lo = hi = mats[g][t][s]; // symmetry pins it
                for (long val = lo; val <= hi; ++val) {
                    double nlo = rlo - val * fpm_b[t].second;
                    double nhi = rhi - val * fpm_b[t].first;
                    if (nhi < -1e-9) break; // fpm positive: further values overshoot
                    mats[g][s][t] = val;
                    if (!fill_entry(t + 1, nlo, nhi)) return false;
                }
                mats[g][s][t] = -1;
                return true;
            };
            return fill_entry(1, tgt_lo, tgt_hi);
        };
        return fill_row(1);
    };

    stage(0);
    std::sort(result.solutions.begin(), result.solutions.end(),
              [](const NimRep& a, const NimRep& b) { return a.mats < b.mats; });
    return result;
}

} // namespace etale
