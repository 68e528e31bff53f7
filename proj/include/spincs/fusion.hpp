#pragma once

#include <string>
#include <vector>

#include "spincs/bethe.hpp"
#include "spincs/xxx_chain.hpp"

// Fusion at theta_{j+1} = theta_j +- i: detection and classification of the
// resonance pattern, Yangian-invariant subspaces and leakage measurement,
// fused R-matrices, the special Bethe root, and reduced chains.

namespace spincs {

enum class FusionClass {
    generic,
    independent,
    three_site_antisymmetric,
    three_site_symmetric,
    three_site_mixed,
    unclassified,
};

std::string to_string(FusionClass c);

struct FusionPattern {
    // (j, sign): theta_{j+1} = theta_j - sign * i, so sign = -1 is a singlet
    // pair and sign = +1 a triplet pair (delta_{j+1} - delta_j = sign in the
    // multiplicative conventions).
    std::vector<std::pair<int, int>> pairs;
    FusionClass cls = FusionClass::generic;
    // all resonances theta_a - theta_b = +-i (a < b, possibly non-adjacent)
    std::vector<std::pair<int, int>> resonances;

    std::string to_json() const;
};

FusionPattern detect_fusion(const std::vector<cplx>& theta, double tol = 1e-9);

struct InvariantSubspace {
    int site = 0;   // j of the fused pair (j, j+1)
    int sign = 0;   // projector sign: Pi^- for singlet fusion, Pi^+ for triplet
    Mat projector;  // idempotent, Hermitian, acting on the full space
    Mat basis;      // orthonormal columns spanning the image
    int dimension = 0;
};

InvariantSubspace invariant_subspace(int j, int sign, int L);

struct LeakageReport {
    double inside = 0.0;      // max ||(1-P) X P|| over X in {A,B,C,D} at 3 points
    double complement = 0.0;  // same for the complementary projector
};

LeakageReport invariance_check(const ChainSpec& spec, const InvariantSubspace& sub);

// Fused R-matrices in the unitarity-normalized convention R(u) = (u + iP)/(u+i):
// the 6x6 spin-(1/2,1) R-matrix and the scalar qdet (u-i/2)/(u+i/2).
struct FusedR {
    Mat spin1;   // on C^2 x C^3
    cplx spin0;  // scalar on C^2 x C^1
};
FusedR fused_r_matrices(cplx u);

// u0 = (theta_j + theta_{j+1})/2 for a fused pair.
cplx special_root(const std::vector<cplx>& theta, int j, double tol = 1e-9);

// B(u0)|0>: proportional to the embedded two-site singlet for singlet fusion,
// exactly zero for triplet fusion.
Vec b_at_special_root(const ChainSpec& spec, int j);

struct ReducedChain {
    ChainSpec spec;            // fused pairs' inhomogeneities dropped
    std::vector<cplx> u0;      // special roots of the removed pairs
    Poly prefactor;            // prod over pairs of (u - u0 + i)(u - u0 - i)
    std::vector<int> dropped;  // sites removed (j and j+1 per pair)
};

ReducedChain reduced_chain(const ChainSpec& spec, const FusionPattern& pattern);

struct AdjacentizedChain {
    ChainSpec spec;             // resonant partners brought adjacent
    Mat transport;              // product of Rcheck conjugators: T_new = C T C^{-1}
    std::vector<int> site_map;  // new position of each original site (1-based)
};

// Reorder the inhomogeneities by exchange_conjugation chains so that every
// resonance theta_a - theta_b = +-i sits on adjacent sites, accumulating the
// similarity transform for state transport. Throws if a swap along the way
// would itself cross a fused difference.
AdjacentizedChain make_adjacent(const ChainSpec& spec, double tol = 1e-9);

}  // namespace spincs
