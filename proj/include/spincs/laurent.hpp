#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "spincs/types.hpp"

// Exact multivariate Laurent polynomials over Q: term map from integer
// exponent vectors to GMP rationals. All ring operations are exact; floating
// point enters only through eval().

namespace spincs {

using Rational = mpq_class;
using ExpVec = std::vector<int>;

class LaurentPoly {
  public:
    LaurentPoly() = default;
    explicit LaurentPoly(int nvars) : n_(nvars) {}
    static LaurentPoly constant(int nvars, const Rational& c);
    static LaurentPoly monomial(int nvars, const ExpVec& e, const Rational& c = 1);
    static LaurentPoly variable(int nvars, int i);  // z_i, 1-based

    int nvars() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    int term_count() const { return static_cast<int>(terms_.size()); }
    const std::map<ExpVec, Rational>& terms() const { return terms_; }
    Rational coeff(const ExpVec& e) const;
    void set_coeff(const ExpVec& e, const Rational& c);

    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly operator*(const Rational& s) const;
    LaurentPoly operator-() const;
    bool operator==(const LaurentPoly& o) const { return n_ == o.n_ && terms_ == o.terms_; }

    LaurentPoly mul_monomial(const ExpVec& e, const Rational& c = 1) const;
    // z_i d/dz_i (Euler derivative in variable i, 1-based)
    LaurentPoly euler_derivative(int i) const;
    // swap variables z_i <-> z_j
    LaurentPoly swapped(int i, int j) const;
    // permute variables: result(z_{perm[1]}, ...) = this; perm is 1-based
    LaurentPoly permuted(const std::vector<int>& perm) const;
    // exact division by (z_i - z_j); throws if the remainder is nonzero
    LaurentPoly div_zij(int i, int j) const;
    // total degree bounds of the support
    std::pair<int, int> degree_range(int i) const;

    cplx eval(const std::vector<cplx>& z) const;

    std::string to_string() const;  // for diagnostics and reports

  private:
    int n_ = 0;
    std::map<ExpVec, Rational> terms_;
    void add_term(const ExpVec& e, const Rational& c);
    friend class LaurentBuilder;
};

}  // namespace spincs
