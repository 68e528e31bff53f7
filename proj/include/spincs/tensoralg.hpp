#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spincs/types.hpp"

// Dense linear algebra on (C^2)^{tensor L}. Basis convention: site 1 is the
// most significant bit of the index, up = 0, so |up...up> has index 0 and the
// magnon number of a basis state is the popcount of its index.

namespace spincs {

using LinearOperator = Mat;
using StateVector = Vec;

inline int space_dim(int L) { return 1 << L; }

// Bit of site i (1-based) in basis code; 1 means spin down.
inline int site_bit(std::uint32_t code, int i, int L) { return (code >> (L - i)) & 1u; }

inline std::uint32_t flip_site(std::uint32_t code, int i, int L) { return code ^ (1u << (L - i)); }

inline int magnon_count(std::uint32_t code) {
    int m = 0;
    while (code) { m += code & 1u; code >>= 1; }
    return m;
}

// Codes of the M-magnon sector, increasing.
std::vector<std::uint32_t> sector_codes(int L, int M);

Mat restrict_to_codes(const Mat& op, const std::vector<std::uint32_t>& codes);

Mat identity_op(int L);
Mat permutation_operator(int i, int j, int L);
// Operator permuting the sites: maps site i content to site perm[i] (perm is
// 1-based with perm[0] unused).
Mat site_permutation_operator(const std::vector<int>& perm, int L);

Mat sigma_x(int i, int L);
Mat sigma_y(int i, int L);
Mat sigma_z(int i, int L);
Mat sigma_plus(int i, int L);
Mat sigma_minus(int i, int L);
// kappa^{sigma^z_i} = diag(kappa on up, 1/kappa on down) at site i.
Mat kappa_sigma_z(int i, int L, cplx kappa);

struct GlobalSl2 {
    Mat Sp, Sm, Sz;
};
GlobalSl2 global_sl2(int L);

// S.S built from the global generators; equals sum_{i<j} P_ij - L(L-4)/4.
Mat casimir_operator(int L);

// Projectors (1 +- P_ij)/2 acting on the full space.
Mat pair_projector(int i, int j, int L, int sign);

// Operator-valued polynomial in the spectral parameter; coeff[k] multiplies u^k.
class OpPoly {
  public:
    OpPoly() = default;
    explicit OpPoly(std::vector<Mat> coeffs) : c_(std::move(coeffs)) {}
    static OpPoly constant(const Mat& m) { return OpPoly({m}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool empty() const { return c_.empty(); }
    int dim() const { return c_.empty() ? 0 : static_cast<int>(c_.front().rows()); }
    const Mat& coeff(int k) const { return c_.at(k); }
    std::vector<Mat>& coeffs() { return c_; }
    const std::vector<Mat>& coeffs() const { return c_; }

    Mat eval(cplx u) const;
    OpPoly shifted(cplx a) const;  // p(u + a)
    OpPoly operator+(const OpPoly& o) const;
    OpPoly operator-(const OpPoly& o) const;
    OpPoly operator*(const OpPoly& o) const;  // coefficient convolution
    OpPoly operator*(cplx s) const;
    // Apply coefficient-wise to a vector: returns per-power vectors.
    std::vector<Vec> apply(const Vec& v) const;
    void trim(double tol = 0.0);

  private:
    std::vector<Mat> c_;
};

Mat op_poly_eval(const OpPoly& p, cplx u);

}  // namespace spincs
