#pragma once

#include <vector>

#include "spincs/types.hpp"

// Dense complex polynomials in one variable, coefficient c[k] on u^k.

namespace spincs {

class Poly {
  public:
    Poly() : c_{cplx{0.0, 0.0}} {}
    explicit Poly(std::vector<cplx> c) : c_(std::move(c)) { if (c_.empty()) c_ = {cplx{}}; }
    static Poly one() { return Poly({cplx{1.0, 0.0}}); }
    static Poly monomial(int k, cplx a = 1.0);
    static Poly from_roots(const std::vector<cplx>& roots);  // monic

    int degree() const;  // -1 for the zero polynomial
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx coeff(int k) const { return k < static_cast<int>(c_.size()) ? c_[k] : cplx{}; }
    cplx leading() const;

    cplx eval(cplx u) const;
    Poly shifted(cplx a) const;  // p(u + a)
    Poly derivative() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(cplx s) const;
    // Euclidean division; remainder has degree < divisor.
    std::pair<Poly, Poly> divmod(const Poly& d) const;
    std::vector<cplx> roots() const;  // companion-matrix eigenvalues
    double max_abs_coeff() const;
    Poly trimmed(double tol = 0.0) const;

  private:
    std::vector<cplx> c_;
};

}  // namespace spincs
