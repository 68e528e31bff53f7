#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "spincs/spin_cs.hpp"

using namespace spincs;

namespace {

SpinPolyVector basis_state(int n, std::uint32_t code, const LaurentPoly& f) {
    SpinPolyVector v(n);
    v.add_component(code, f);
    return v;
}

std::vector<double> sorted_real_eigs(const Mat& m) {
    Eigen::ComplexEigenSolver<Mat> es(m, false);
    std::vector<double> out;
    for (int k = 0; k < m.rows(); ++k) out.push_back(es.eigenvalues()(k).real());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("total antisymmetrizer") {
    // N=2: E_(0,0) (x) |up down> projects onto the spin singlet
    SpinPolyVector v = basis_state(2, 0b01, LaurentPoly::constant(2, 1));
    SpinPolyVector w = total_antisymmetrize(v);
    CHECK(w.comps.at(0b01) == LaurentPoly::constant(2, Rational(1, 2)));
    CHECK(w.comps.at(0b10) == LaurentPoly::constant(2, Rational(-1, 2)));
    CHECK(is_fermionic(w));
    // idempotent
    CHECK(total_antisymmetrize(w) == w);

    // strict lambda: Pi(E_lambda (x) |up...up>) is Vand * P'_nu |up...up>
    Rational beta(2);
    SpinPolyVector s = total_antisymmetrize(basis_state(3, 0, nonsym_jack({2, 1, 0}, beta)));
    REQUIRE(!s.is_zero());
    CHECK(s.comps.size() == 1);
    LaurentPoly ratio = s.comps.at(0).div_zij(1, 2).div_zij(1, 3).div_zij(2, 3);
    CHECK(ratio.term_count() == 1);  // P'_0 = 1 up to the normalization scalar
}

TEST_CASE("sector bases and dimensions") {
    Rational beta(2);
    auto s10 = sector_basis({1, 0}, beta);
    CHECK(s10.dimension == 4);
    auto s11 = sector_basis({1, 1}, beta);
    CHECK(s11.dimension == 1);
    auto s2110 = sector_basis({2, 1, 1, 0}, beta);
    CHECK(s2110.dimension == 4);
    for (const auto& b : s2110.basis) CHECK(is_fermionic(b));
    CHECK_THROWS_AS(sector_basis({1, 1, 1}, beta), std::invalid_argument);
}

TEST_CASE("momentum and Hamiltonian eigenvalues on F_lambda") {
    Rational beta(2);
    // lambda = (2,1,1,0): P' = 4, E' = 3(1+beta) = 9
    CHECK(momentum_eigenvalue({2, 1, 1, 0}) == 4);
    CHECK(energy_eigenvalue({2, 1, 1, 0}, beta) == 9);
    CHECK(momentum_eigenvalue({0, 0}) == 0);
    CHECK(energy_eigenvalue({0, 0}, beta) == 0);
    CHECK(e0_constant(4) == 5);

    auto sector = sector_basis({2, 1, 1, 0}, beta);
    for (const auto& b : sector.basis) {
        CHECK(apply_momentum(b) == b * momentum_eigenvalue({2, 1, 1, 0}));
        CHECK(apply_hamiltonian(b, beta) == b * energy_eigenvalue({2, 1, 1, 0}, beta));
    }
}

TEST_CASE("t2 at kappa=1 is Casimir-like and commutes with conserved charges") {
    Rational beta(2);
    auto sector = sector_basis({2, 1, 1, 0}, beta);
    for (const auto& b : sector.basis) {
        // kappa = 1: action equals sum_{i<j} P_ij - P'/beta
        SpinPolyVector lhs = apply_t2(b, beta, Rational(1));
        SpinPolyVector rhs(4);
        for (int i = 1; i <= 4; ++i)
            for (int j = i + 1; j <= 4; ++j) rhs = rhs + b.swap_spins(i, j);
        rhs = rhs - apply_momentum(b) * (Rational(1) / beta);
        CHECK(lhs == rhs);
    }
    // exact commutators on the sector basis
    Rational kappa(3, 2);
    for (const auto& b : sector.basis) {
        SpinPolyVector hb = apply_hamiltonian(b, beta);
        CHECK(apply_t2(hb, beta, kappa) == apply_hamiltonian(apply_t2(b, beta, kappa), beta));
        SpinPolyVector pb = apply_momentum(b);
        CHECK(apply_t2(pb, beta, kappa) == apply_momentum(apply_t2(b, beta, kappa)));
        // [t2(1), t3] = 0
        SpinPolyVector t3b = apply_t3(b, beta);
        CHECK(apply_t2(t3b, beta, Rational(1)) == apply_t3(apply_t2(b, beta, Rational(1)), beta));
        // S^z commutation: t2 preserves the weight
        SpinPolyVector sz(4);
        for (int i = 1; i <= 4; ++i) sz = sz + b.sigma_z(i);
        SpinPolyVector t2b = apply_t2(b, beta, kappa);
        SpinPolyVector lhs(4);
        for (int i = 1; i <= 4; ++i) lhs = lhs + t2b.sigma_z(i);
        CHECK(lhs == apply_t2(sz, beta, kappa));
    }
    // fermionic closure under every operator
    for (const auto& b : sector.basis) {
        CHECK(is_fermionic(apply_t2(b, beta, kappa)));
        CHECK(is_fermionic(apply_t3(b, beta)));
        CHECK(is_fermionic(apply_hamiltonian(b, beta)));
    }
}

TEST_CASE("effective chain bookkeeping") {
    Rational beta(2);
    // the paper's 9-part example
    auto ec = effective_chain({7, 6, 6, 2, 2, -5, -6, -6, -8}, beta, cplx{1.0, 0.0});
    CHECK(ec.I == std::vector<int>{1, 6, 9});
    CHECK(ec.J == std::vector<int>{2, 4, 7});
    CHECK(ec.L_eff == 3);

    // strict lambda: no fused pairs
    auto strict = effective_chain({5, 3, 1}, beta, cplx{1.0, 0.0});
    CHECK(strict.J.empty());
    CHECK(strict.L_eff == 3);

    // lambda = (2,1,1,0), beta = 2: effective length 2, delta_1 and delta_4
    auto ex = effective_chain({2, 1, 1, 0}, beta, cplx{1.0, 0.0});
    CHECK(ex.L_eff == 2);
    CHECK(ex.I == std::vector<int>{1, 4});
    CHECK(ex.delta[0] == Rational(2) / beta + Rational(3, 2));
    CHECK(ex.delta[3] == Rational(-3, 2));
    ChainSpec chain = ex.chain();
    CHECK(chain.L == 2);
    CHECK(std::abs(chain.theta[0] - cplx{0.0, -2.5}) < 1e-15);
}

TEST_CASE("highest weight vectors") {
    Rational beta(2);
    // strict lambda: Vand * P'_nu (x) |up...up>
    SpinPolyVector hw = highest_weight_vector({2, 1, 0}, beta);
    CHECK(hw.comps.size() == 1);
    CHECK(hw.comps.count(0) == 1);

    // lambda = (2,1,1,0): f = z1 (z2-z3)(z2-z4)(z3-z4)
    Rational scalar;
    SpinPolyVector hw4 = highest_weight_vector({2, 1, 1, 0}, beta, &scalar);
    LaurentPoly z1 = LaurentPoly::variable(4, 1), z2 = LaurentPoly::variable(4, 2);
    LaurentPoly z3 = LaurentPoly::variable(4, 3), z4 = LaurentPoly::variable(4, 4);
    LaurentPoly f = z1 * (z2 - z3) * (z2 - z4) * (z3 - z4);
    CHECK(hw4.comps.at(0b1000) == f);
    // coordinate-basis alternating signs: component at |i> is +- f(z_i; rest)
    CHECK(hw4.comps.at(0b0100) == -f.swapped(1, 2));
    CHECK(hw4.comps.at(0b0010) == f.permuted({0, 3, 1, 2, 4}));
    CHECK(hw4.comps.at(0b0001) == -f.permuted({0, 4, 1, 2, 3}));
    CHECK(is_fermionic(hw4));
    CHECK(scalar != 0);

    // equator: f = Vand(z1..z_{N/2}) Vand(z_{N/2+1}..z_N)
    SpinPolyVector eq = highest_weight_vector({1, 1, 0, 0}, beta);
    LaurentPoly expected = (z1 - z2) * (z3 - z4);
    CHECK(eq.comps.at(0b1100) == expected);

    // eigenvector of t2 at two random twists, with the right eigenvalue
    auto ec = effective_chain({2, 1, 1, 0}, beta, cplx{1.0, 0.0});
    for (Rational kappa : {Rational(7, 5), Rational(3)}) {
        SpinPolyVector tv = apply_t2(hw4, beta, kappa);
        // expected eigenvalue: x^{-2} series coefficient of tau(x+1/2) at M=0
        BetheSolution vac;
        vac.M = 0;
        auto tau = cs_transfer_eigenvalue({2, 1, 1, 0}, beta,
                                          cplx{kappa.get_d(), 0.0}, vac);
        // tv should be proportional to hw4 with that eigenvalue
        const LaurentPoly& lead = hw4.comps.at(0b1000);
        const LaurentPoly& img = tv.comps.at(0b1000);
        Rational ratio = img.terms().rbegin()->second / lead.terms().rbegin()->second;
        CHECK((tv - hw4 * ratio).is_zero());
        CHECK(std::abs(ratio.get_d() - tau.series[2].real()) < 1e-9);
    }
}

TEST_CASE("highest weight vector is annihilated by the effective C-operator") {
    Rational beta(2);
    SpinPolyVector hw = highest_weight_vector({2, 1, 1, 0}, beta);
    JackTable table(4, beta);
    JackSpinVector jv = to_jack_basis(hw, table);
    for (cplx x : {cplx{0.83, 0.21}, cplx{-1.4, 0.6}, cplx{2.2, -0.9}}) {
        auto cv = cs_monodromy_apply(jv, MonodromyEntry::C, x, beta);
        CHECK(cv.norm() < 1e-11 * jv.norm());
        // and it is an A- and D-eigenvector (Yangian highest weight)
        auto av = cs_monodromy_apply(jv, MonodromyEntry::A, x, beta);
        auto dv = cs_monodromy_apply(jv, MonodromyEntry::D, x, beta);
        // find scalar from one component and check proportionality
        const auto& [mu0, v0] = *jv.comps.begin();
        Eigen::Index idx = 0;
        v0.cwiseAbs().maxCoeff(&idx);
        cplx la = av.comps.at(mu0)(idx) / v0(idx);
        cplx ld = dv.comps.at(mu0)(idx) / v0(idx);
        for (const auto& [mu, vec] : jv.comps) {
            CHECK((av.comps.at(mu) - la * vec).norm() < 1e-9 * jv.norm());
            CHECK((dv.comps.at(mu) - ld * vec).norm() < 1e-9 * jv.norm());
        }
    }
}

TEST_CASE("cs bethe roots match the closed form") {
    // x_{1,+-} for N=4, lambda=(2,1,1,0)
    auto closed_form = [](double beta, double kappa) {
        double k2 = kappa * kappa;
        double disc = (3 * beta + 2) * (3 * beta + 2) * k2 * k2 -
                      2 * (7 * beta * beta + 12 * beta + 4) * k2 +
                      (3 * beta + 2) * (3 * beta + 2);
        cplx root = std::sqrt(cplx{disc, 0.0});
        cplx base = -((beta + 2) * kappa + (beta - 2) / kappa);
        cplx den = 2 * beta * (kappa - 1 / kappa);
        return std::pair<cplx, cplx>{(base + root / kappa) / den, (base - root / kappa) / den};
    };
    for (auto [beta_r, kappa_r] : std::vector<std::pair<Rational, Rational>>{
             {Rational(2), Rational(3, 2)}, {Rational(5), Rational(2)}, {Rational(1000), Rational(3)}}) {
        auto sols = cs_bethe_solutions({2, 1, 1, 0}, beta_r, cplx{kappa_r.get_d(), 0.0}, 1);
        std::vector<cplx> roots;
        for (const auto& s : sols)
            if (s.admissible) roots.push_back(s.roots[0]);
        REQUIRE(roots.size() == 2);
        auto [xp, xm] = closed_form(beta_r.get_d(), kappa_r.get_d());
        CHECK(oracles::multiset_distance(roots, {xp, xm}) < 1e-10);
    }
}

TEST_CASE("t2 spectrum on F_lambda matches the effective chain prediction") {
    Rational beta(2);
    auto sector = sector_basis({2, 1, 1, 0}, beta);
    for (Rational kappa : {Rational(3, 2), Rational(5)}) {
        auto m = operator_matrix_exact(sector, [&](const SpinPolyVector& v) {
            return apply_t2(v, beta, kappa);
        });
        auto spectrum = sorted_real_eigs(to_complex_matrix(m));
        // hermiticity surrogate: eigenvalues real
        Eigen::ComplexEigenSolver<Mat> es(to_complex_matrix(m), false);
        for (int k = 0; k < 4; ++k) CHECK(std::abs(es.eigenvalues()(k).imag()) < 1e-9);

        cplx kap{kappa.get_d(), 0.0};
        std::vector<double> predicted;
        for (int M = 0; M <= 2; ++M)
            for (const auto& s : cs_bethe_solutions({2, 1, 1, 0}, beta, kap, M)) {
                if (!s.admissible) continue;
                auto tau = cs_transfer_eigenvalue({2, 1, 1, 0}, beta, kap, s);
                predicted.push_back(tau.series[2].real());
            }
        REQUIRE(predicted.size() == 4);
        std::sort(predicted.begin(), predicted.end());
        for (int k = 0; k < 4; ++k) CHECK(std::abs(spectrum[k] - predicted[k]) < 1e-9);
    }
}

TEST_CASE("Takemura-Uglov isomorphism across small sectors") {
    for (auto& [lambda, n] : std::vector<std::pair<Composition, int>>{
             {{1, 0}, 2}, {{1, 1}, 2}, {{2, 1, 0}, 3}, {{2, 1, 1, 0}, 4}}) {
        Rational beta(5, 2);
        auto sector = sector_basis(lambda, beta);
        for (Rational kappa : {Rational(7, 5), Rational(2)}) {
            auto m = operator_matrix_exact(sector, [&](const SpinPolyVector& v) {
                return apply_t2(v, beta, kappa);
            });
            auto spectrum = sorted_real_eigs(to_complex_matrix(m));
            cplx kap{kappa.get_d(), 0.0};
            auto ec = effective_chain(lambda, beta, kap);
            std::vector<double> predicted;
            for (int M = 0; M <= ec.L_eff; ++M)
                for (const auto& s : cs_bethe_solutions(lambda, beta, kap, M)) {
                    if (!s.admissible) continue;
                    auto tau = cs_transfer_eigenvalue(lambda, beta, kap, s);
                    predicted.push_back(tau.series[2].real());
                }
            REQUIRE(predicted.size() == spectrum.size());
            std::sort(predicted.begin(), predicted.end());
            for (size_t k = 0; k < predicted.size(); ++k)
                CHECK(std::abs(spectrum[k] - predicted[k]) < 1e-9);
        }
    }
}

TEST_CASE("qdet series") {
    Rational beta(2);
    auto s = qdet_series({2, 1, 1, 0}, beta, 3);
    CHECK(std::abs(s[0] - 1.0) < 1e-14);
    CHECK(std::abs(s[1] - 4.0) < 1e-12);  // x^{-1} coefficient = N
    // x^{-2}: N^2/2 - P'/beta = 8 - 2 = 6
    CHECK(std::abs(s[2] - 6.0) < 1e-11);
    // x^{-3}: N^3/4 - N P'/beta + 2 H'/beta^2 = 16 - 8 + 2*9/4 = 12.5
    CHECK(std::abs(s[3] - 12.5) < 1e-10);

    // lambda = 0: deltas are pure half-integers
    auto s0 = qdet_series({0, 0}, beta, 2);
    CHECK(std::abs(s0[1] - 2.0) < 1e-12);
    CHECK(std::abs(s0[2] - 2.0) < 1e-11);  // N^2/2 - 0
}

TEST_CASE("free fermion limit") {
    Rational beta(1, 1000);
    cplx kappa{1.7, 0.0};
    Composition lambda{5, 2, 0};  // strict, N=3
    auto rep = free_fermion_report(lambda, {1}, kappa, beta);
    // beta x_1 = -lambda_1 + O(beta); root deviation from the series is O(beta^3)
    CHECK(std::abs(rep.series_roots[0] * beta.get_d() + 5.0) < 0.01);
    CHECK(rep.max_root_deviation < 1e-7);
    CHECK(rep.max_tau_deviation < 1e-7);

    // kappa -> infinity: roots approach -delta_{i_m} - 1/2
    auto ec = effective_chain(lambda, beta, cplx{1e6, 0.0});
    auto rep_inf = free_fermion_report(lambda, {2}, cplx{1e6, 0.0}, beta);
    double expected = -ec.delta[1].get_d() - 0.5;
    CHECK(std::abs(rep_inf.solver_roots[0] - expected) < 1e-3);

    CHECK_THROWS_AS(free_fermion_report(lambda, {4}, kappa, beta), std::invalid_argument);
}

TEST_CASE("sector report json fields") {
    auto text = sector_report_json({2, 1, 1, 0}, Rational(2), cplx{1.0, 0.0});
    CHECK(text.find("\"lambda\"") != std::string::npos);
    CHECK(text.find("\"L_eff\":2") != std::string::npos);
    CHECK(text.find("\"delta\"") != std::string::npos);
    CHECK(text.find("\"dim\":4") != std::string::npos);
}
