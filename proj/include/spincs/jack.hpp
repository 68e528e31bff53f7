#pragma once

#include <map>
#include <string>
#include <vector>

#include "spincs/laurent.hpp"

// Dunkl operators, the degenerate affine Hecke relations, and nonsymmetric
// Jack polynomials built by the intertwiner recursion with an exact
// eigenvalue postcondition.

namespace spincs {

using Composition = std::vector<int>;

// sigma^mu(i) = #{j : mu_j > mu_i} + #{j <= i : mu_j = mu_i}, 1-based i.
int sigma_mu(const Composition& mu, int i);

// delta_i(mu) = mu_i / beta + (N + 1 - 2 sigma^mu(i)) / 2, all i.
std::vector<Rational> delta_eigenvalue(const Composition& mu, const Rational& beta);

// Dominance-type order used for the triangular expansion of E_mu: strictly
// lower means same weight and either sorted(nu) strictly below sorted(mu) in
// dominance, or equal sorted parts with componentwise partial sums below.
bool dominance_lower(const Composition& nu, const Composition& mu);

// Dunkl operator d_i applied to an exact Laurent polynomial.
LaurentPoly dunkl_apply(int i, const LaurentPoly& f, const Rational& beta);

struct DahaReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Exhaustively verify the degenerate affine Hecke algebra relations on all
// monomials with exponents in [-d, d]^N.
DahaReport daha_check(int N, int degree_bound, const Rational& beta);

// Memoizing table of nonsymmetric Jack polynomials at fixed (N, beta).
class JackTable {
  public:
    JackTable(int N, Rational beta, bool verify = true)
        : n_(N), beta_(std::move(beta)), verify_(verify) {}

    int nvars() const { return n_; }
    const Rational& beta() const { return beta_; }
    const LaurentPoly& E(const Composition& mu);

  private:
    int n_;
    Rational beta_;
    bool verify_;
    std::map<Composition, LaurentPoly> cache_;
    LaurentPoly build(const Composition& mu);
};

LaurentPoly nonsym_jack(const Composition& mu, const Rational& beta);

LaurentPoly vandermonde(int N);

// Total antisymmetrization sum_sigma sgn(sigma) s_sigma E_lambda; zero unless
// lambda is strict, in which case it equals Vand(z) P'_nu(z) up to a scalar.
LaurentPoly antisym_reduce(const Composition& lambda, const Rational& beta);

}  // namespace spincs
