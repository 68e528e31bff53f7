#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spincs/poly.hpp"
#include "spincs/xxx_chain.hpp"

// Bethe-equation machinery for the twisted inhomogeneous chain: TQ extraction
// from exact diagonalization, damped Newton with twist homotopy seeded at the
// Gelfand-Tsetlin point, Wronskian QQ solving, on-shell states and charges.

namespace spincs {

struct QFunction {
    std::vector<cplx> roots;

    static QFunction from_roots(std::vector<cplx> r) { return QFunction{std::move(r)}; }
    // Roots of a monic polynomial given by coefficients (low to high, monic).
    static QFunction from_coeffs(const Poly& monic);
    int degree() const { return static_cast<int>(roots.size()); }
    Poly poly() const { return Poly::from_roots(roots); }
};

struct BetheSolution {
    int M = 0;
    std::vector<cplx> roots;
    std::vector<cplx> dual_roots;  // optional, from QQ solves
    Poly tau;                      // transfer eigenvalue polynomial, degree L
    double residual = 0.0;         // max |log LHS/RHS| over the Bethe equations
    bool admissible = true;        // no repeated roots
    int multiplicity = 1;          // eigenvalue multiplicity seen in tq_extract
    std::string flag;              // diagnostics: "singular-string", "fused-candidate", ...

    std::string to_json() const;
};

// tau(u) = kappa Q_theta^+ Q^{--}/Q + kappa^{-1} Q_theta^- Q^{++}/Q.
// On shell the division is exact; off shell the remainder norm is written to
// pole_remainder (if given), otherwise a nonzero remainder throws.
Poly tau_from_Q(const ChainSpec& spec, const QFunction& q, double* pole_remainder = nullptr);

// Principal-branch log of LHS/RHS of each Bethe equation; zero on shell.
std::vector<cplx> bethe_residual(const ChainSpec& spec, const std::vector<cplx>& roots);

// Coefficient-wise residual of the Wronskian QQ-relation.
// Twisted:  kappa Q^- Qt^+ - kappa^{-1} Q^+ Qt^- - (kappa - kappa^{-1}) Q_theta,
//   with deg Qt = L - M.
// Periodic: Q^- Qt^+ - Q^+ Qt^- - i (L - 2M + 1) Q_theta, with deg Qt = L - M + 1
//   (the factor i(L-2M+1) is what monic normalization forces in u-conventions).
Poly qq_residual(const ChainSpec& spec, const QFunction& q, const QFunction& qt,
                 bool periodic = false);

// Exact-diagonalization route: diagonalize the transfer matrix in the
// M-magnon sector, reconstruct each eigenvalue polynomial, and solve the TQ
// relation for a monic Q of degree M.
std::vector<BetheSolution> tq_extract(const ChainSpec& spec, int M);

struct NewtonOptions {
    double kappa_start = 1e6;  // GT seeding twist
    int steps = 80;            // homotopy steps in log kappa
    int max_newton = 60;
    double target_tol = 1e-12;
    double accept_tol = 1e-9;
    double infinite_root = 1e6;
    int threads = 1;
};

std::vector<BetheSolution> newton_solve(const ChainSpec& spec, int M,
                                        const NewtonOptions& opt = {});

// B(u_1)...B(u_M) |vacuum>; the vacuum must be annihilated by C.
Vec aba_state(const Monodromy& m, const std::vector<cplx>& roots, const Vec& vacuum);
Vec aba_state(const ChainSpec& spec, const std::vector<cplx>& roots, const Vec& vacuum);

struct ChargeEigenvalues {
    cplx tau1;              // (kappa+1/kappa) L/2 + (kappa-1/kappa)(L/2 - M)
    cplx tau2;              // twisted tau_2(kappa)
    cplx tau2_periodic;     // tau_2 at kappa = 1 (same roots)
    std::optional<cplx> tau3_periodic;  // tau_3(1)
};
ChargeEigenvalues charge_eigenvalues(const ChainSpec& spec, const BetheSolution& sol);

// Gelfand-Tsetlin solution for a subset I (1-based sites): roots theta_i - i/2,
// A-eigenvalue prod_{i in I}(u - theta_i - i/2) prod_{j notin I}(u - theta_j + i/2).
BetheSolution gt_solution(const ChainSpec& spec, const std::vector<int>& subset);
Poly gt_alpha(const ChainSpec& spec, const std::vector<int>& subset);

// Multi-start Newton on the QQ-relation coefficient system. Returns (Q, Qt)
// pairs, deduplicated by the root multiset of Q.
struct QQOptions {
    int starts = 2000;
    unsigned seed = 1234;
    int max_newton = 100;
    double tol = 1e-11;
    bool periodic = false;
};
std::vector<std::pair<QFunction, QFunction>> qq_solve(const ChainSpec& spec, int M,
                                                      const QQOptions& opt = {});

}  // namespace spincs
