#pragma once

#include "etale/cyclotomic.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace etale {

// Fusion ring with unit at index 0: labels, duality permutation and the
// multiplicity tensor N[i][j][k] for b_i (x) b_j = sum_k N_ij^k b_k.
struct FusionRing {
    std::string name;
    long rank = 0;
    std::vector<std::string> labels;
    std::vector<long> dual;
    std::vector<std::vector<std::vector<long>>> N;
    long conductor_hint = 0;

    // Set for Deligne products assembled from factor rings: object index i
    // corresponds to the pair (factor_index[i][0], factor_index[i][1]).
    std::vector<const FusionRing*> factors;
    std::vector<std::vector<long>> factor_index;

    long mult(long i, long j, long k) const { return N[i][j][k]; }

    std::vector<long> tensor(const std::vector<long>& a, const std::vector<long>& b) const {
        std::vector<long> out(rank, 0);
        for (long i = 0; i < rank; ++i) {
            if (!a[i]) continue;
            for (long j = 0; j < rank; ++j) {
                if (!b[j]) continue;
                for (long k = 0; k < rank; ++k)
                    if (N[i][j][k]) out[k] += a[i] * b[j] * N[i][j][k];
            }
        }
        return out;
    }

    std::vector<long> dual_vector(const std::vector<long>& v) const {
        std::vector<long> out(rank, 0);
        for (long i = 0; i < rank; ++i) out[dual[i]] = v[i];
        return out;
    }

    bool is_multiplicity_free() const {
        for (const auto& a : N)
            for (const auto& b : a)
                for (long m : b)
                    if (m > 1) return false;
        return true;
    }

    bool is_commutative() const {
        for (long i = 0; i < rank; ++i)
            for (long j = i + 1; j < rank; ++j)
                for (long k = 0; k < rank; ++k)
                    if (N[i][j][k] != N[j][i][k]) return false;
        return true;
    }

    long label_index(const std::string& s) const {
        for (long i = 0; i < rank; ++i)
            if (labels[i] == s) return i;
        throw parse_error("unknown object label '" + s + "' in ring " + name);
    }

    std::string describe_vector(const std::vector<long>& v) const {
        std::string out;
        for (long i = 0; i < rank; ++i) {
            if (!v[i]) continue;
            if (!out.empty()) out += "+";
            if (v[i] > 1) out += std::to_string(v[i]);
            out += labels[i];
        }
        return out.empty() ? "0" : out;
    }
};

// Reports every violated fusion-ring axiom; empty result means valid.
inline std::vector<std::string> verify_ring(const FusionRing& R) {
    std::vector<std::string> bad;
    long r = R.rank;
    auto at = [&](long i, long j, long k) { return R.N[i][j][k]; };
    if ((long)R.N.size() != r) {
        bad.push_back("tensor first dimension != rank");
        return bad;
    }
    for (long i = 0; i < r; ++i) {
        if ((long)R.N[i].size() != r) {
            bad.push_back("tensor shape broken at i=" + std::to_string(i));
            return bad;
        }
        for (long j = 0; j < r; ++j)
            if ((long)R.N[i][j].size() != r) {
                bad.push_back("tensor shape broken at (i,j)=(" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
                return bad;
            }
    }
    for (long j = 0; j < r; ++j)
        for (long k = 0; k < r; ++k) {
            if (at(0, j, k) != (j == k ? 1 : 0))
                bad.push_back("unit violation at (1," + std::to_string(j) + "," +
                              std::to_string(k) + ")");
            if (at(j, 0, k) != (j == k ? 1 : 0))
                bad.push_back("unit violation at (" + std::to_string(j) + ",1," +
                              std::to_string(k) + ")");
        }
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j)
            for (long k = 0; k < r; ++k)
                if (at(i, j, k) < 0)
                    bad.push_back("negative multiplicity at (" + std::to_string(i) + "," +
                                  std::to_string(j) + "," + std::to_string(k) + ")");
    // duality
    if (R.dual.size() != (size_t)r || R.dual[0] != 0) bad.push_back("dual map broken at unit");
    for (long i = 0; i < r; ++i)
        if (R.dual[i] < 0 || R.dual[i] >= r || R.dual[R.dual[i]] != i)
            bad.push_back("dual map not an involution at " + std::to_string(i));
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j)
            if (at(i, j, 0) != (j == R.dual[i] ? 1 : 0))
                bad.push_back("duality violation at (" + std::to_string(i) + "," +
                              std::to_string(j) + ",1)");
    // associativity
    for (long i = 0; i < r && bad.size() < 64; ++i)
        for (long j = 0; j < r; ++j)
            for (long k = 0; k < r; ++k)
                for (long l = 0; l < r; ++l) {
                    long lhs = 0, rhs = 0;
                    for (long m = 0; m < r; ++m) {
                        lhs += at(i, j, m) * at(m, k, l);
                        rhs += at(j, k, m) * at(i, m, l);
                    }
                    if (lhs != rhs)
                        bad.push_back("associativity violation at (" + std::to_string(i) + "," +
                                      std::to_string(j) + "," + std::to_string(k) + "," +
                                      std::to_string(l) + ")");
                }
    // Frobenius reciprocity of multiplicities
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j)
            for (long k = 0; k < r; ++k) {
                if (at(i, j, k) != at(R.dual[i], k, j) || at(i, j, k) != at(k, R.dual[j], i))
                    bad.push_back("Frobenius reciprocity violation at (" + std::to_string(i) +
                                  "," + std::to_string(j) + "," + std::to_string(k) + ")");
            }
    return bad;
}

// ---- builders ----------------------------------------------------------

// Group ring of an abelian group given as cyclic factor sizes; `elements`
// lists the group element (one coordinate per factor) assigned to each label.
inline FusionRing make_group_ring(const std::string& name,
                                  const std::vector<long>& cyclic_factors,
                                  const std::vector<std::string>& labels,
                                  const std::vector<std::vector<long>>& elements) {
    FusionRing R;
    R.name = name;
    R.rank = (long)labels.size();
    R.labels = labels;
    long order = 1;
    for (long f : cyclic_factors) order *= f;
    if (order != R.rank) throw parse_error("group ring " + name + ": order != label count");
    auto find = [&](const std::vector<long>& e) {
        for (long i = 0; i < R.rank; ++i)
            if (elements[i] == e) return i;
        throw parse_error("group ring " + name + ": element table incomplete");
    };
    R.N.assign(R.rank, std::vector<std::vector<long>>(R.rank, std::vector<long>(R.rank, 0)));
    R.dual.assign(R.rank, 0);
    for (long i = 0; i < R.rank; ++i) {
        std::vector<long> inv(cyclic_factors.size());
        for (size_t f = 0; f < cyclic_factors.size(); ++f)
            inv[f] = (cyclic_factors[f] - elements[i][f]) % cyclic_factors[f];
        R.dual[i] = find(inv);
        for (long j = 0; j < R.rank; ++j) {
            std::vector<long> sum(cyclic_factors.size());
            for (size_t f = 0; f < cyclic_factors.size(); ++f)
                sum[f] = (elements[i][f] + elements[j][f]) % cyclic_factors[f];
            R.N[i][j][find(sum)] = 1;
        }
    }
    return R;
}

// Tambara-Yamagami ring over an abelian group (all elements invertible plus
// one non-invertible object m with g(x)m = m and m(x)m = sum of all g).
inline FusionRing make_ty_ring(const std::string& name, const std::vector<long>& cyclic_factors) {
    long order = 1;
    for (long f : cyclic_factors) order *= f;
    std::vector<std::vector<long>> elements;
    std::vector<long> cur(cyclic_factors.size(), 0);
    for (long i = 0; i < order; ++i) {
        elements.push_back(cur);
        for (size_t f = 0; f < cur.size(); ++f) {
            if (++cur[f] < cyclic_factors[f]) break;
            cur[f] = 0;
        }
    }
    std::vector<std::string> labels;
    for (long i = 0; i < order; ++i) labels.push_back(i == 0 ? "1" : "g" + std::to_string(i));
    FusionRing G = make_group_ring(name, cyclic_factors, labels, elements);
    FusionRing R;
    R.name = name;
    R.rank = order + 1;
    R.labels = labels;
    R.labels.push_back("m");
    R.dual = G.dual;
    R.dual.push_back(order);
    R.N.assign(R.rank, std::vector<std::vector<long>>(R.rank, std::vector<long>(R.rank, 0)));
    for (long i = 0; i < order; ++i)
        for (long j = 0; j < order; ++j)
            for (long k = 0; k < order; ++k) R.N[i][j][k] = G.N[i][j][k];
    for (long i = 0; i < order; ++i) {
        R.N[i][order][order] = 1;
        R.N[order][i][order] = 1;
    }
    for (long k = 0; k < order; ++k) R.N[order][order][k] = 1;
    return R;
}

// Deligne product at the ring level. Index order: (i, j) -> i*rank(B) + j.
inline FusionRing deligne_product_ring(const FusionRing& A, const FusionRing& B,
                                       const std::string& name,
                                       const std::vector<std::string>& labels = {}) {
    FusionRing R;
    R.name = name;
    R.rank = A.rank * B.rank;
    auto idx = [&](long i, long j) { return i * B.rank + j; };
    R.labels.resize(R.rank);
    for (long i = 0; i < A.rank; ++i)
        for (long j = 0; j < B.rank; ++j)
            R.labels[idx(i, j)] = A.labels[i] + "." + B.labels[j];
    if (!labels.empty()) {
        if ((long)labels.size() != R.rank)
            throw parse_error("product ring " + name + ": wrong label count");
        R.labels = labels;
    }
    R.dual.resize(R.rank);
    R.N.assign(R.rank, std::vector<std::vector<long>>(R.rank, std::vector<long>(R.rank, 0)));
    for (long i1 = 0; i1 < A.rank; ++i1)
        for (long j1 = 0; j1 < B.rank; ++j1) {
            R.dual[idx(i1, j1)] = idx(A.dual[i1], B.dual[j1]);
            for (long i2 = 0; i2 < A.rank; ++i2)
                for (long j2 = 0; j2 < B.rank; ++j2)
                    for (long i3 = 0; i3 < A.rank; ++i3)
                        for (long j3 = 0; j3 < B.rank; ++j3)
                            R.N[idx(i1, j1)][idx(i2, j2)][idx(i3, j3)] =
                                A.N[i1][i2][i3] * B.N[j1][j2][j3];
        }
    R.factor_index.resize(R.rank);
    for (long i = 0; i < A.rank; ++i)
        for (long j = 0; j < B.rank; ++j) R.factor_index[idx(i, j)] = {i, j};
    return R;
}

// ---- permutation searches ----------------------------------------------

// All bijections f: A -> B with f(0) = 0 preserving the fusion tensor.
// With A == B these are the ring automorphisms.
inline std::vector<std::vector<long>> ring_isomorphisms(const FusionRing& A, const FusionRing& B,
                                                        bool first_only = false) {
    std::vector<std::vector<long>> found;
    if (A.rank != B.rank) return found;
    long r = A.rank;

    // local invariants for pruning
    auto signature = [](const FusionRing& R, long i) {
        std::vector<long> sig;
        sig.push_back(R.N[i][R.dual[i]][0]);
        sig.push_back(R.dual[i] == i ? 1 : 0);
        sig.push_back(R.N[i][i][i]);
        long row = 0, diag = 0;
        for (long j = 0; j < R.rank; ++j)
            for (long k = 0; k < R.rank; ++k) {
                row += R.N[i][j][k];
                if (j == k) diag += R.N[i][j][k];
            }
        sig.push_back(row);
        sig.push_back(diag);
        return sig;
    };
    std::vector<std::vector<long>> sigA(r), sigB(r);
    for (long i = 0; i < r; ++i) {
        sigA[i] = signature(A, i);
        sigB[i] = signature(B, i);
    }

    std::vector<long> f(r, -1), used(r, 0);
    f[0] = 0;
    used[0] = 1;

    std::function<bool(long)> rec = [&](long i) -> bool {
        if (i == r) {
            found.push_back(f);
            return first_only;
        }
        for (long t = 1; t < r; ++t) {
            if (used[t] || sigA[i] != sigB[t]) continue;
            long di = A.dual[i];
            if (di == i && B.dual[t] != t) continue;
            if (di < i && f[di] != B.dual[t]) continue;
            f[i] = t;
            used[t] = 1;
            bool ok = true;
            for (long a = 0; a <= i && ok; ++a) {
                if (f[a] < 0) continue;
                for (long b = 0; b <= i && ok; ++b) {
                    if (f[b] < 0) continue;
                    for (long c = 0; c <= i && ok; ++c) {
                        if (f[c] < 0) continue;
                        if (a != i && b != i && c != i) continue;
                        if (A.N[a][b][c] != B.N[f[a]][f[b]][f[c]]) ok = false;
                    }
                }
            }
            if (ok && rec(i + 1)) return true;
            f[i] = -1;
            used[t] = 0;
        }
        return false;
    };
    rec(1);
    return found;
}

inline std::vector<std::vector<long>> ring_automorphisms(const FusionRing& R) {
    return ring_isomorphisms(R, R, false);
}

inline bool rings_isomorphic(const FusionRing& A, const FusionRing& B) {
    return !ring_isomorphisms(A, B, true).empty();
}

} // namespace etale
