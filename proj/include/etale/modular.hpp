#pragma once

#include "etale/characters.hpp"

#include <numeric>

namespace etale {

using CMatrix = std::vector<std::vector<Cyc>>;

// Braiding/spin data on top of a fusion ring: quantum dimensions (a real
// character), conformal dimensions mod 1 with h_1 = 0, and the sign choice
// among the two square roots of the categorical dimension D^2.
struct ModularData {
    const FusionRing* ring = nullptr;
    Character qdims;
    std::vector<Phase> twists;
    int dim_sign = +1;
    std::string name;

    long rank() const { return ring->rank; }
    const Cyc& d(long i) const { return qdims.values[i]; }
    const Phase& h(long i) const { return twists[i]; }

    Cyc global_dim_sq() const {
        Cyc t;
        for (const auto& v : qdims.values) t = t + v * v;
        return t;
    }

    // Gauss sum: sum_i d_i^2 e^{2 pi i h_i}
    Cyc gauss_sum() const {
        Cyc g;
        for (long i = 0; i < rank(); ++i) g = g + d(i) * d(i) * Cyc::root_of_unity(h(i));
        return g;
    }

    std::vector<Phase> twist_multiset() const {
        std::vector<Phase> t = twists;
        std::sort(t.begin(), t.end());
        return t;
    }

    bool unitary() const {
        // unitary iff d = FPdim, i.e. all quantum dimensions positive
        for (const auto& v : qdims.values)
            if (v.sign() <= 0) return false;
        return true;
    }
};

// Unnormalized S-matrix: S~_{ij} = sum_k N_ij^k e^{2 pi i(h_k - h_i - h_j)} d_k.
inline CMatrix s_matrix(const ModularData& M) {
    long r = M.rank();
    CMatrix S(r, std::vector<Cyc>(r));
    for (long i = 0; i < r; ++i)
        for (long j = i; j < r; ++j) {
            Cyc acc;
            for (long k = 0; k < r; ++k) {
                long mult = M.ring->N[i][j][k];
                if (!mult) continue;
                Phase ph = M.h(k) - M.h(i) - M.h(j);
                Cyc term = Cyc::root_of_unity(ph) * M.d(k);
                if (mult > 1) term = term * Rat(mult);
                acc = acc + term;
            }
            S[i][j] = acc;
            if (j != i) S[j][i] = S[i][j];
        }
    return S;
}

struct ModularReport {
    bool modular = false;
    std::vector<std::string> violations;
};

// true iff S~ / D is invertible with S^2 = C; checked exactly through
// S~^2 == D^2 * C (the right side is always invertible).
inline ModularReport check_modular(const ModularData& M, const CMatrix* s_cache = nullptr) {
    ModularReport rep;
    long r = M.rank();
    CMatrix S = s_cache ? *s_cache : s_matrix(M);
    if (M.twists[0] != Phase())
        rep.violations.push_back("unit twist h_1 != 0");
    for (long i = 0; i < r; ++i)
        if (M.h(M.ring->dual[i]) != M.h(i))
            rep.violations.push_back("twist not dual-invariant at " + M.ring->labels[i]);
    // S~_{i,j*} = conj(S~_{i,j})
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j)
            if (!(S[i][M.ring->dual[j]] == S[i][j].conj())) {
                rep.violations.push_back("S~ conjugation symmetry fails at (" +
                                         M.ring->labels[i] + "," + M.ring->labels[j] + ")");
                i = j = r;
            }
    Cyc D2 = M.global_dim_sq();
    for (long i = 0; i < r && rep.violations.empty(); ++i)
        for (long j = 0; j < r; ++j) {
            Cyc acc;
            for (long k = 0; k < r; ++k) acc = acc + S[i][k] * S[k][j];
            Cyc want = (M.ring->dual[i] == j) ? D2 : Cyc();
            if (!(acc == want)) {
                rep.violations.push_back("S~^2 != D^2 C at (" + M.ring->labels[i] + "," +
                                         M.ring->labels[j] + ")");
                i = j = r;
            }
        }
    rep.modular = rep.violations.empty();
    return rep;
}

struct GaussSumResult {
    Rat c_mod_8;       // representative in (-4, 4]
    bool consistent = false;
};

struct modular_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat normalize_c(Rat c) {
    // into (-4, 4] mod 8
    c = mod1(c / 8) * 8;
    if (c > 4) c -= 8;
    return c;
}

// Additive central charge mod 8 from the Gauss sum G = sum d_i^2 theta_i:
// e^{2 pi i c/8} = G / D with D = dim_sign * sqrt(D^2).  `consistent`
// additionally certifies (S~T)^3 == G * S~^2, which is the matrix identity
// (ST)^3 = e^{2 pi i c/8} S^2 cleared of denominators.
inline GaussSumResult central_charge(const ModularData& M, const CMatrix* s_cache = nullptr,
                                     bool check_matrix_identity = true) {
    Cyc G = M.gauss_sum();
    Cyc D2 = M.global_dim_sq();
    if (G.is_zero()) throw modular_error(M.name + ": vanishing Gauss sum (degenerate data)");
    if (!(G * G.conj() == D2)) throw modular_error(M.name + ": Gauss sum modulus != D");

    // phase^2 = G^2 / D^2 is a root of unity in the field of G
    Cyc r2 = G * G / D2;
    long L = std::lcm<long>(2, r2.conductor());
    long hit = -1;
    for (long t = 0; t < L; ++t)
        if (r2 == Cyc::root_of_unity(t, L)) {
            hit = t;
            break;
        }
    if (hit < 0) throw modular_error(M.name + ": Gauss-sum phase is not a root of unity");
    Rat c0 = Rat(4 * hit, L); // e^{2 pi i c0/4} = r2, so c = c0 or c0 + 4
    // D_candidate = G e^{-2 pi i c/8} must be real with sign dim_sign
    Cyc Dc = G * Cyc::root_of_unity(Phase(-c0 / 8));
    if (!Dc.is_real() || !(Dc * Dc == D2))
        throw modular_error(M.name + ": could not resolve Gauss-sum phase");
    Rat c = (Dc.sign() == M.dim_sign) ? c0 : c0 + 4;

    GaussSumResult out;
    out.c_mod_8 = normalize_c(c);
    out.consistent = true;
    if (check_matrix_identity) {
        long rk = M.rank();
        CMatrix S = s_cache ? *s_cache : s_matrix(M);
        CMatrix ST(rk, std::vector<Cyc>(rk));
        for (long i = 0; i < rk; ++i)
            for (long j = 0; j < rk; ++j) ST[i][j] = S[i][j] * Cyc::root_of_unity(M.h(j));
        auto matmul = [&](const CMatrix& A, const CMatrix& B) {
            CMatrix C(rk, std::vector<Cyc>(rk));
            for (long i = 0; i < rk; ++i)
                for (long j = 0; j < rk; ++j) {
                    Cyc acc;
                    for (long k = 0; k < rk; ++k) acc = acc + A[i][k] * B[k][j];
                    C[i][j] = acc;
                }
            return C;
        };
        CMatrix ST2 = matmul(ST, ST);
        CMatrix ST3 = matmul(ST2, ST);
        CMatrix S2 = matmul(S, S);
        for (long i = 0; i < rk && out.consistent; ++i)
            for (long j = 0; j < rk; ++j)
                if (!(ST3[i][j] == G * S2[i][j])) {
                    out.consistent = false;
                    break;
                }
    }
    return out;
}

inline std::vector<Phase> twist_spectrum(const ModularData& M) { return M.twist_multiset(); }

// Componentwise Deligne product; `product_ring` must be the ring built by
// deligne_product_ring(A.ring, B.ring, ...) with matching index order.
inline ModularData deligne_product(const ModularData& A, const ModularData& B,
                                   const FusionRing* product_ring) {
    ModularData M;
    M.ring = product_ring;
    M.dim_sign = A.dim_sign * B.dim_sign;
    M.name = A.name + " x " + B.name;
    long rb = B.rank();
    M.qdims.values.resize(product_ring->rank);
    M.twists.resize(product_ring->rank);
    for (long i = 0; i < A.rank(); ++i)
        for (long j = 0; j < rb; ++j) {
            M.qdims.values[i * rb + j] = A.d(i) * B.d(j);
            M.twists[i * rb + j] = A.h(i) + B.h(j);
        }
    return M;
}

// Verlinde reconstruction of the fusion tensor from the S-matrix:
// N_ij^k = (1/D^2) sum_m S~_im S~_jm conj(S~_km) / d_m.  Exact.
inline bool verlinde_reconstructs(const ModularData& M) {
    long r = M.rank();
    CMatrix S = s_matrix(M);
    Cyc D2 = M.global_dim_sq();
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j)
            for (long k = 0; k < r; ++k) {
                Cyc acc;
                for (long m = 0; m < r; ++m)
                    acc = acc + S[i][m] * S[j][m] * S[k][m].conj() / S[0][m];
                if (!(acc == D2 * Rat(M.ring->N[i][j][k]))) return false;
            }
    return true;
}

} // namespace etale
