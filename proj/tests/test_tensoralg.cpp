#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "spincs/tensoralg.hpp"

using namespace spincs;

namespace {
double norm_of(const Mat& m) { return m.norm(); }
}  // namespace

TEST_CASE("permutation operator defining action") {
    // L=2: P12 |up down> -> |down up>
    Mat p = permutation_operator(1, 2, 2);
    Vec v = Vec::Zero(4);
    v(1) = 1.0;  // |up down> = code 01
    Vec w = p * v;
    CHECK(std::abs(w(2) - 1.0) < 1e-15);  // |down up> = code 10

    // L=3: P13 |up up down> -> |down up up>
    Mat p13 = permutation_operator(1, 3, 3);
    Vec x = Vec::Zero(8);
    x(1) = 1.0;
    CHECK(std::abs((p13 * x)(4) - 1.0) < 1e-15);
}

TEST_CASE("permutation operator equals (1 + sigma.sigma)/2 and is an involution") {
    for (int L : {2, 3}) {
        for (int i = 1; i <= L; ++i)
            for (int j = i + 1; j <= L; ++j) {
                Mat p = permutation_operator(i, j, L);
                Mat s = 0.5 * (identity_op(L) + sigma_x(i, L) * sigma_x(j, L) +
                               sigma_y(i, L) * sigma_y(j, L) + sigma_z(i, L) * sigma_z(j, L));
                CHECK(norm_of(p - s) < 1e-14);
                CHECK(norm_of(p * p - identity_op(L)) == 0.0);
                CHECK(norm_of(p - p.adjoint()) == 0.0);
            }
    }
    CHECK_THROWS_AS(permutation_operator(1, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(permutation_operator(0, 2, 3), std::invalid_argument);
}

TEST_CASE("global sl2 relations") {
    for (int L : {1, 2, 4}) {
        GlobalSl2 g = global_sl2(L);
        CHECK(norm_of(g.Sz * g.Sp - g.Sp * g.Sz - g.Sp) < 1e-13);
        CHECK(norm_of(g.Sz * g.Sm - g.Sm * g.Sz + g.Sm) < 1e-13);
        CHECK(norm_of(g.Sp * g.Sm - g.Sm * g.Sp - 2.0 * g.Sz) < 1e-13);
    }
    // S^z |up...up> = L/2, S^- |up up> = |down up> + |up down>
    GlobalSl2 g = global_sl2(2);
    Vec vac = Vec::Zero(4);
    vac(0) = 1.0;
    CHECK(std::abs((g.Sz * vac)(0) - 1.0) < 1e-15);
    Vec lowered = g.Sm * vac;
    CHECK(std::abs(lowered(1) - 1.0) < 1e-15);
    CHECK(std::abs(lowered(2) - 1.0) < 1e-15);
}

TEST_CASE("casimir identities") {
    for (int L : {2, 3}) {
        Mat cas = casimir_operator(L);
        Mat sum = Mat::Zero(space_dim(L), space_dim(L));
        for (int i = 1; i <= L; ++i)
            for (int j = i + 1; j <= L; ++j) sum += permutation_operator(i, j, L);
        sum -= (L * (L - 4) / 4.0) * identity_op(L);
        CHECK(norm_of(cas - sum) < 1e-13);
    }
    // highest weight eigenvalue (L/2)(L/2+1)
    Mat cas = casimir_operator(4);
    Vec vac = Vec::Zero(16);
    vac(0) = 1.0;
    CHECK(std::abs((cas * vac)(0) - 6.0) < 1e-13);
    // L=2 spectrum {2,2,2,0}
    Eigen::ComplexEigenSolver<Mat> es(casimir_operator(2));
    std::vector<double> ev;
    for (int k = 0; k < 4; ++k) ev.push_back(es.eigenvalues()(k).real());
    std::sort(ev.begin(), ev.end());
    CHECK(std::abs(ev[0] - 0.0) < 1e-12);
    for (int k = 1; k < 4; ++k) CHECK(std::abs(ev[k] - 2.0) < 1e-12);
}

TEST_CASE("casimir eigenvalues lie in s(s+1) for random states") {
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    for (int L : {3, 4, 5, 6}) {
        Mat cas = casimir_operator(L);
        // minimal polynomial: prod over s of (C - s(s+1)) annihilates any vector
        Vec v = Vec::NullaryExpr(space_dim(L), [&](Eigen::Index) { return cplx{gauss(rng), gauss(rng)}; });
        Vec w = v;
        for (int twos = L % 2; twos <= L; twos += 2) {
            double s = twos / 2.0;
            w = cas * w - s * (s + 1.0) * w;
        }
        CHECK(w.norm() < 1e-9 * v.norm());
    }
}

TEST_CASE("operators built from P and sigma_z are block diagonal in magnon number") {
    int L = 4;
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Mat op = Mat::Zero(space_dim(L), space_dim(L));
    for (int i = 1; i <= L; ++i) {
        op += unif(rng) * sigma_z(i, L);
        for (int j = i + 1; j <= L; ++j) op += unif(rng) * permutation_operator(i, j, L);
    }
    GlobalSl2 g = global_sl2(L);
    CHECK(norm_of(op * g.Sz - g.Sz * op) < 1e-13);
    int total = 0;
    for (int M = 0; M <= L; ++M) {
        auto codes = sector_codes(L, M);
        total += static_cast<int>(codes.size());
        long binom = 1;
        for (int k = 0; k < M; ++k) binom = binom * (L - k) / (k + 1);
        CHECK(static_cast<long>(codes.size()) == binom);
    }
    CHECK(total == space_dim(L));
}

TEST_CASE("operator polynomials") {
    Mat p = permutation_operator(1, 2, 2);
    OpPoly q({Mat::Identity(4, 4), p});  // 1 + uP
    CHECK(norm_of(q.eval(0.0) - Mat::Identity(4, 4)) == 0.0);
    CHECK(norm_of(op_poly_eval(q, 1.0) - (Mat::Identity(4, 4) + p)) == 0.0);
    OpPoly c = OpPoly::constant(p);
    CHECK(norm_of(c.eval(cplx{2.3, -0.4}) - p) == 0.0);
    OpPoly q2 = q * q;
    CHECK(q2.degree() == 2);
    Mat sum = q2.coeff(0) + q2.coeff(1) + q2.coeff(2);
    CHECK(norm_of(q2.eval(1.0) - sum) < 1e-14);
    // shift consistency: q(u+a) evaluated at u equals q(u+a)
    cplx a{0.3, 0.7}, u{-1.1, 0.2};
    CHECK(norm_of(q2.shifted(a).eval(u) - q2.eval(u + a)) < 1e-13);
}
