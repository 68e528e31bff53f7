#pragma once

#include <string>
#include <vector>

#include "spincs/spin_cs.hpp"

// Freezing beta -> infinity with evaluation at consecutive N-th roots of
// unity: the Haldane-Shastry chain, its new twisted charges, motif spectra,
// frozen Bethe roots, and the complete N = 4 worked example.

namespace spincs {

// ev: z_k -> exp(2 pi i (k-1)/N), componentwise on the spin-polynomial vector.
Vec evaluate(const SpinPolyVector& v);
Vec evaluate(const JackSpinVector& v, JackTable& table);

// H^HS = sum_{i<j} (1 + P_ij) / (4 sin^2[pi (i-j)/N]).
Mat hs_hamiltonian(int N);
// Frozen twisted charge t2^HS(kappa).
Mat hs_t2(int N, cplx kappa);
// Frozen periodic charge t3^HS (cotangent-weighted triple sum).
Mat hs_t3(int N);
// The operator displayed in the introduction (t2^HS(i) is proportional to it).
Mat hs_intro_twist(int N);

struct LegacyCharges {
    Mat H3, I3, H4;
};
// Inozemtsev's H3/I3 and the quartic H4 (H4 requires N >= 4).
LegacyCharges legacy_charges(int N);
// Haldane's rapidity operator combination: I3 = -i S.Lambda.
Mat rapidity_dot_s(int N);

struct Motif {
    int N = 0;
    std::vector<int> J;        // subset of {1..N-1}, no two consecutive
    std::vector<int> content;  // string lengths p: one V_{p+1} factor each
    long dim = 0;              // prod (p_k + 1)
    bool valid = false;

    std::string to_json() const;
};

Motif motif_info(int N, std::vector<int> J);
std::vector<Motif> enumerate_motifs(int N);

// Frozen effective chain for a motif: inhomogeneities (N+1-2i)/2 with the
// fused pairs dropped; solved through the Wronskian QQ system. Only
// solutions whose Q and Qt share no root survive freezing.
std::vector<BetheSolution> frozen_bethe(int N, const std::vector<int>& J, int M, cplx kappa,
                                        unsigned seed = 2024);

// Large-x series of the frozen transfer eigenvalue tau(x + 1/2; kappa) for a
// motif solution (prefactor from the dropped pairs included); series[2] is
// the t2^HS(kappa) eigenvalue.
std::vector<cplx> frozen_charges(int N, const std::vector<int>& J,
                                 const std::vector<cplx>& roots_x, cplx kappa, int nmax = 3);

struct N4Report {
    cplx kappa;
    cplx x_plus, x_minus;          // Bethe roots at finite beta (from xb1)
    cplx x0_plus, x0_minus;        // frozen roots
    Vec hw_frozen;                 // ev|0_lambda>
    Vec psi_plus, psi_minus;       // ev[B(x0_pm)|0_lambda>]
    cplx c_plus, c_minus;          // scalars against the reference states
    cplx t2_eig_plus, t2_eig_minus;
    double max_error = 0.0;        // worst deviation across the checks
    std::string to_json() const;
};

// End-to-end reproduction of the paper-scale N=4 example at twist kappa
// (kappa not 0, +-1), including frozen Bethe states and t2^HS eigenvalues.
N4Report n4_example(cplx kappa, const Rational& beta_freeze = Rational(1000000000000L));

// kappa -> 1 limit data: the sl2 descendant and highest-weight combinations.
struct N4PeriodicReport {
    Vec descendant;      // ev[B(x -> infinity)] direction = S^- ev|0_lambda>
    Vec highest_weight;  // ev[B(0)|0_lambda>] direction
    double max_error = 0.0;
};
N4PeriodicReport n4_periodic_limit(const Rational& beta_freeze = Rational(1000000000000L));

}  // namespace spincs
