#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "spincs/bethe.hpp"
#include "spincs/jack.hpp"

// Fermionic spin-Calogero-Sutherland machinery: the fermionic space, the
// gauge-transformed Hamiltonian and momentum, the twisted charges t2/t3,
// sector bases F_lambda, highest-weight vectors, effective spin chains and
// the internal Bethe ansatz, all in exact rational arithmetic until the
// spin-chain boundary.

namespace spincs {

// Element of (C^2)^{tensor N} (x) C[z1^pm, ..., zN^pm]; spin codes use the
// same convention as tensoralg (site 1 = most significant bit, up = 0).
struct SpinPolyVector {
    int N = 0;
    std::map<std::uint32_t, LaurentPoly> comps;

    explicit SpinPolyVector(int n = 0) : N(n) {}
    bool is_zero() const;
    void add_component(std::uint32_t code, const LaurentPoly& f);
    SpinPolyVector operator+(const SpinPolyVector& o) const;
    SpinPolyVector operator-(const SpinPolyVector& o) const;
    SpinPolyVector operator*(const Rational& s) const;
    bool operator==(const SpinPolyVector& o) const;

    SpinPolyVector swap_spins(int i, int j) const;   // P_ij
    SpinPolyVector swap_coords(int i, int j) const;  // s_ij
    SpinPolyVector sigma_z(int i) const;
    SpinPolyVector euler(int i) const;  // z_i d/dz_i on every component
    SpinPolyVector mul_poly(const LaurentPoly& p) const;
    // apply P_sigma s_sigma for a site permutation (1-based, perm[i] = image)
    SpinPolyVector permute_both(const std::vector<int>& perm) const;
    SpinPolyVector div_zij(int i, int j) const;  // exact per component
};

// (1/N!) sum_sigma sgn(sigma) P_sigma s_sigma; idempotent.
SpinPolyVector total_antisymmetrize(const SpinPolyVector& v);
// P_ij s_ij v = -v for all pairs.
bool is_fermionic(const SpinPolyVector& v);

// lambda in P: weakly decreasing with multiplicities at most 2.
bool allowed_partition(const Composition& lambda);

struct FermionicSector {
    Composition lambda;
    Rational beta;
    std::vector<SpinPolyVector> basis;
    int dimension = 0;
};

FermionicSector sector_basis(const Composition& lambda, const Rational& beta);

// Gauge-transformed total momentum P' = sum_i z_i d_i.
SpinPolyVector apply_momentum(const SpinPolyVector& v);
// Gauge-transformed Hamiltonian on the fermionic space.
SpinPolyVector apply_hamiltonian(const SpinPolyVector& v, const Rational& beta);
// Twisted charge t2(kappa); exact for rational twist.
SpinPolyVector apply_t2(const SpinPolyVector& v, const Rational& beta, const Rational& kappa);
// Periodic charge t3.
SpinPolyVector apply_t3(const SpinPolyVector& v, const Rational& beta);

// Eigenvalues on F_lambda.
Rational momentum_eigenvalue(const Composition& lambda);
Rational energy_eigenvalue(const Composition& lambda, const Rational& beta);
// E^0 = N(N^2-1)/12.
Rational e0_constant(int N);

// Yangian highest-weight vector |0_lambda>, normalized so the coefficient of
// the lexicographically leading monomial of the first coordinate-basis
// component equals one; the removed scalar is reported if requested.
SpinPolyVector highest_weight_vector(const Composition& lambda, const Rational& beta,
                                     Rational* removed_scalar = nullptr);

struct EffectiveChain {
    Composition lambda;
    Rational beta;
    cplx kappa{1.0, 0.0};
    std::vector<int> I, J;  // unique / repeated part positions, 1-based
    int L_eff = 0, M_lam = 0;
    std::vector<Rational> delta;  // delta_i(lambda), i = 1..N

    ChainSpec chain() const;      // theta_k = -i delta_{i_k}
    cplx prefactor(cplx x) const; // prod_{j in J} (x+delta_j+1/2)/(x+delta_j-1/2)
    std::string to_json() const;
};

EffectiveChain effective_chain(const Composition& lambda, const Rational& beta, cplx kappa);

// Bethe solutions of the effective chain, roots reported in the x-convention
// (u = i x); for real beta and kappa the Q polynomial is real.
std::vector<BetheSolution> cs_bethe_solutions(const Composition& lambda, const Rational& beta,
                                              cplx kappa, int M);

struct CsTransferEigenvalue {
    std::vector<cplx> series;  // tau(x + 1/2; kappa) = sum_n series[n] x^{-n}
    cplx tau2_periodic{};      // untwisted tau_2 for the same sector data
    cplx tau3_periodic{};      // untwisted tau_3 (uses the solution's roots)
    std::function<cplx(cplx)> eval;
};

CsTransferEigenvalue cs_transfer_eigenvalue(const Composition& lambda, const Rational& beta,
                                            cplx kappa, const BetheSolution& sol_x);

// Quantum determinant series Delta(x) = prod_i (x+delta_i+1/2)/(x+delta_i-1/2).
std::vector<cplx> qdet_series(const Composition& lambda, const Rational& beta, int nmax);

struct FreeFermionReport {
    std::vector<cplx> series_roots;     // x_m through O(beta^2), Eq-level expansion
    std::vector<cplx> solver_roots;     // matched solver roots
    double max_root_deviation = 0.0;    // expected O(beta^2) after rescaling
    double max_tau_deviation = 0.0;     // |tau - kappa alpha_I - kappa^{-1} alpha_Ic|, O(beta^3)
    std::function<cplx(cplx)> alpha_I, alpha_Ic;
};

FreeFermionReport free_fermion_report(const Composition& lambda, const std::vector<int>& I,
                                      cplx kappa, const Rational& beta);

// ---- Jack-basis representation and the CS monodromy action on F_lambda ----

struct JackSpinVector {
    int N = 0;
    std::map<Composition, Vec> comps;  // per composition: 2^N complex amplitudes
    bool is_zero(double tol = 0.0) const;
    double norm() const;
};

JackSpinVector to_jack_basis(const SpinPolyVector& v, JackTable& table);

enum class MonodromyEntry { A, B, C, D };

// Option (ii) for the Dunkl denominators: on the Jack basis each d_i acts by
// its eigenvalue, so T_0(x) = prod_i (1 + P_{0i}/(x + delta_i(mu) - 1/2))
// becomes an ordinary 2x2 auxiliary-matrix product per composition.
JackSpinVector cs_monodromy_apply(const JackSpinVector& v, MonodromyEntry entry, cplx x,
                                  const Rational& beta);

// Exact operator matrix in a sector basis (columns act on basis vectors).
std::vector<std::vector<Rational>> operator_matrix_exact(
    const FermionicSector& sector,
    const std::function<SpinPolyVector(const SpinPolyVector&)>& op);
Mat to_complex_matrix(const std::vector<std::vector<Rational>>& m);

std::string sector_report_json(const Composition& lambda, const Rational& beta, cplx kappa);

}  // namespace spincs
