#pragma once

#include <string>
#include <vector>

#include "spincs/poly.hpp"
#include "spincs/tensoralg.hpp"

// Inhomogeneous twisted XXX chain in the "bar" conventions: R(u) = u + i P,
// T_0(u) = R_01(u - theta_1 - i/2) ... R_0L(u - theta_L - i/2), and twisted
// transfer t(u;kappa) = kappa A(u) + kappa^{-1} D(u). The twist lives in the
// trace only, so A,B,C,D are kappa-independent.

namespace spincs {

struct ChainSpec {
    int L = 0;
    std::vector<cplx> theta;
    cplx kappa{1.0, 0.0};

    void validate() const;
    std::string to_json() const;
    static ChainSpec from_json(const std::string& text);
};

// R-matrix u + iP on C^2 x C^2 (first factor = auxiliary/left site).
Mat r_matrix(cplx u);
// Rcheck(u) = P R(u) = i + uP; at u = +-i proportional to (anti)symmetriser.
Mat r_check(cplx u);

struct Monodromy {
    int L = 0;
    OpPoly A, B, C, D;
    const OpPoly& entry(char name) const;
};

Monodromy monodromy(const ChainSpec& spec);
OpPoly transfer(const Monodromy& m, cplx kappa);
OpPoly transfer(const ChainSpec& spec);

// Q_theta(u) = prod_i (u - theta_i); shifts give the A/D eigenvalues on |0>.
Poly q_theta(const ChainSpec& spec);

// G_j = -i t(theta_j + i/2; kappa); product over j equals kappa^{2 S^z}.
std::vector<Mat> scattering_operators(const ChainSpec& spec, bool* coincident_warning = nullptr);

// Coefficient t_n(kappa), n in {1,2,3}, of the expansion of
// t(u + i/2; kappa)/Q_theta(u) in powers of (-i u)^{-1}.
Mat charge_coefficients(const ChainSpec& spec, int n);

// Monodromy with theta_j, theta_{j+1} swapped plus the conjugator
// Rcheck_{j+1,j}(theta_{j+1} - theta_j) realising the similarity transform.
std::pair<Monodromy, Mat> exchange_conjugation(const ChainSpec& spec, int j);

// Quantum determinant A(u+i)D(u) - B(u+i)C(u) as an operator polynomial.
OpPoly quantum_determinant(const Monodromy& m);

// Series coefficients c_n of t(u + i/2;kappa)/Q_theta(u) = sum c_n (-iu)^{-n},
// n = 0..nmax, by exact coefficient convolution.
std::vector<Mat> transfer_series(const ChainSpec& spec, int nmax);

}  // namespace spincs
