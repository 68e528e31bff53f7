#include <doctest.h>

#include "oracles.hpp"
#include "spincs/fusion.hpp"

using namespace spincs;

namespace {
ChainSpec make_spec(std::vector<cplx> theta, cplx kappa) {
    ChainSpec s;
    s.L = static_cast<int>(theta.size());
    s.theta = std::move(theta);
    s.kappa = kappa;
    return s;
}
}  // namespace

TEST_CASE("detect_fusion classification") {
    // two independent pairs, signs (-,+)
    auto p = detect_fusion({cplx{0, 0}, cplx{0, 1}, cplx{5, 0}, cplx{5, -1}});
    CHECK(p.cls == FusionClass::independent);
    REQUIRE(p.pairs.size() == 2);
    CHECK(p.pairs[0] == std::pair<int, int>{1, -1});
    CHECK(p.pairs[1] == std::pair<int, int>{3, +1});

    // three-site antisymmetric
    auto a = detect_fusion({cplx{0, 0}, cplx{0, 1}, cplx{0, 2}});
    CHECK(a.cls == FusionClass::three_site_antisymmetric);

    // three-site symmetric and mixed
    CHECK(detect_fusion({cplx{0, 0}, cplx{0, -1}, cplx{0, -2}}).cls ==
          FusionClass::three_site_symmetric);
    CHECK(detect_fusion({cplx{0, 0}, cplx{0, 1}, cplx{0, 0}}).cls == FusionClass::three_site_mixed);
    CHECK(detect_fusion({cplx{0, 0}, cplx{0, -1}, cplx{0, 0}}).cls == FusionClass::three_site_mixed);

    // generic
    auto g = detect_fusion(oracles::random_complex(4, 7));
    CHECK(g.cls == FusionClass::generic);
    CHECK(g.pairs.empty());

    // non-adjacent resonance shows up in the resonance list
    auto r = detect_fusion({cplx{0, 0}, cplx{7, 0}, cplx{0, 1}});
    CHECK(r.pairs.empty());
    REQUIRE(r.resonances.size() == 1);
    CHECK(r.resonances[0] == std::pair<int, int>{1, 3});
    CHECK(r.cls == FusionClass::independent);
}

TEST_CASE("invariant subspace leakage") {
    // L=4 with a singlet pair at sites (2,3)
    std::vector<cplx> theta{cplx{0.21, 0.11}, cplx{-0.43, 0.0}, cplx{-0.43, 1.0}, cplx{0.95, -0.3}};
    auto spec = make_spec(theta, cplx{1.0, 0.0});
    auto sub = invariant_subspace(2, -1, 4);
    CHECK(sub.dimension == 4);
    CHECK((sub.projector * sub.projector - sub.projector).norm() < 1e-14);
    CHECK((sub.projector - sub.projector.adjoint()).norm() < 1e-14);
    CHECK((sub.projector * sub.basis - sub.basis).norm() < 1e-13);

    auto rep = invariance_check(spec, sub);
    CHECK(rep.inside < 1e-11);      // singlet subspace is Yangian invariant
    CHECK(rep.complement > 0.1);    // the triplet complement leaks

    // generic inhomogeneities: both subspaces leak
    auto spec_g = make_spec(oracles::random_complex(4, 13), cplx{1.0, 0.0});
    auto rep_g = invariance_check(spec_g, sub);
    CHECK(rep_g.inside > 0.01);
    CHECK(rep_g.complement > 0.01);

    // triplet fusion preserves the symmetric subspace
    std::vector<cplx> theta_t{theta[0], theta[1], theta[1] - II, theta[3]};
    auto sub_t = invariant_subspace(2, +1, 4);
    CHECK(sub_t.dimension == 12);
    auto rep_t = invariance_check(make_spec(theta_t, cplx{1.0, 0.0}), sub_t);
    CHECK(rep_t.inside < 1e-11);
    CHECK(rep_t.complement > 0.1);

    // dimension bookkeeping
    CHECK(sub.dimension + sub_t.dimension == space_dim(4));
}

TEST_CASE("three-site mixed fusion decomposes the space completely") {
    // theta_3 = theta_2 - i = theta_1: singlet at (1,2) viewed as Pi-_{12},
    // triplet at (2,3): both invariant with complementary dimensions
    std::vector<cplx> theta{cplx{0.3, 0.0}, cplx{0.3, 1.0}, cplx{0.3, 0.0}, cplx{-1.2, 0.4}};
    auto spec = make_spec(theta, cplx{1.0, 0.0});
    CHECK(detect_fusion(theta).cls == FusionClass::three_site_mixed);
    auto sub1 = invariant_subspace(1, -1, 4);
    auto sub2 = invariant_subspace(2, +1, 4);
    auto rep1 = invariance_check(spec, sub1);
    auto rep2 = invariance_check(spec, sub2);
    CHECK(rep1.inside < 1e-11);
    CHECK(rep2.inside < 1e-11);
    CHECK(sub1.dimension + sub2.dimension == space_dim(4));
}

TEST_CASE("fused R-matrices against the projected product") {
    const cplx a{0.7, -0.2};  // argument relative to u0
    // spaces: aux(1), j(2), j+1(3) embedded in (C^2)^3, normalized R-factors
    auto rn = [&](cplx u, int x, int y) {
        return Mat((u * identity_op(3) + II * permutation_operator(x, y, 3)) / (u + II));
    };
    Mat prod = rn(a, 1, 2) * rn(a + II, 1, 3);
    Mat pi_m = pair_projector(2, 3, 3, -1);
    Mat pi_p = pair_projector(2, 3, 3, +1);

    // coupled basis on sites (j, j+1)
    double s = 1.0 / std::sqrt(2.0);
    Mat b3 = Mat::Zero(8, 6), b1 = Mat::Zero(8, 2);
    auto basis_vec = [&](int aux, std::initializer_list<std::pair<int, double>> terms) {
        Vec v = Vec::Zero(8);
        for (auto [code, w] : terms) v(aux * 4 + code) = w;
        return v;
    };
    int col = 0;
    for (int aux : {0, 1}) {
        b3.col(col++) = basis_vec(aux, {{0, 1.0}});
        b3.col(col++) = basis_vec(aux, {{1, s}, {2, s}});
        b3.col(col++) = basis_vec(aux, {{3, 1.0}});
    }
    // reorder to (up x triplet..., down x triplet...) => already in that order
    b1.col(0) = basis_vec(0, {{1, s}, {2, -s}});
    b1.col(1) = basis_vec(1, {{1, s}, {2, -s}});

    FusedR fr = fused_r_matrices(a + II * 0.5);
    Mat proj3 = b3.adjoint() * (pi_p * prod * pi_p) * b3;
    CHECK((proj3 - fr.spin1).norm() < 1e-12);
    Mat proj1 = b1.adjoint() * (pi_m * prod * pi_m) * b1;
    CHECK((proj1 - fr.spin0 * Mat::Identity(2, 2)).norm() < 1e-12);

    // displayed entries and the qdet zero
    cplx u{0.7, -0.2};
    auto f = fused_r_matrices(u);
    CHECK(std::abs(f.spin1(1, 1) - (u + II * 0.5) / (u + II * 1.5)) < 1e-14);
    CHECK(std::abs(fused_r_matrices(II * 0.5).spin0) < 1e-14);
    CHECK_THROWS_AS(fused_r_matrices(-II * 1.5), std::domain_error);
    CHECK_THROWS_AS(fused_r_matrices(-II * 0.5), std::domain_error);
}

TEST_CASE("special root") {
    std::vector<cplx> theta{cplx{0, 0}, cplx{0, 1}};
    CHECK(std::abs(special_root(theta, 1) - II * 0.5) < 1e-15);
    std::vector<cplx> theta2{cplx{3, 0}, cplx{3, -1}};
    CHECK(std::abs(special_root(theta2, 1) - cplx{3.0, -0.5}) < 1e-15);
    std::swap(theta2[0], theta2[1]);
    CHECK(std::abs(special_root(theta2, 1) - cplx{3.0, -0.5}) < 1e-15);
    CHECK_THROWS_AS(special_root({cplx{0, 0}, cplx{5, 0}}, 1), std::invalid_argument);
}

TEST_CASE("B at the special root: singlet pattern and triplet kill") {
    // L=2 singlet: result proportional to |0,0>
    auto spec2 = make_spec({cplx{0.4, 0.1}, cplx{0.4, 1.1}}, cplx{1.0, 0.0});
    Vec v2 = b_at_special_root(spec2, 1);
    CHECK(std::abs(v2(1) + v2(2)) < 1e-13);  // antisymmetric combination
    CHECK(std::abs(v2(1)) > 1e-3);
    CHECK(std::abs(v2(0)) + std::abs(v2(3)) < 1e-13);

    // L=4 singlet at sites (2,3): matches (sigma^-_2 - sigma^-_3)|0> pattern
    std::vector<cplx> theta{cplx{0.21, 0.11}, cplx{-0.43, 0.0}, cplx{-0.43, 1.0}, cplx{0.95, -0.3}};
    auto spec4 = make_spec(theta, cplx{1.0, 0.0});
    Vec v4 = b_at_special_root(spec4, 2);
    Vec expected = Vec::Zero(16);
    expected(0b0100) = 1.0;
    expected(0b0010) = -1.0;
    cplx scale = v4(0b0100);
    CHECK(std::abs(scale) > 1e-6);
    CHECK((v4 - scale * expected).norm() < 1e-12 * std::abs(scale));

    // C(u) annihilates it (suitable vacuum)
    Monodromy m = monodromy(spec4);
    for (cplx u : {cplx{0.3, 0.4}, cplx{-0.9, 0.0}})
        CHECK((m.C.eval(u) * v4).norm() < 1e-11 * v4.norm());

    // the unwanted terms vanish separately: B(u0)|0> is an eigenvector of A
    // and D individually, with the shifted vacuum eigenvalues
    cplx u0 = special_root(theta, 2);
    Poly qth = q_theta(spec4);
    for (cplx u : {cplx{0.7, -0.2}, cplx{-1.3, 0.5}}) {
        cplx a_eig = (u - u0 - II) / (u - u0) * qth.shifted(II * 0.5).eval(u);
        cplx d_eig = (u - u0 + II) / (u - u0) * qth.shifted(-II * 0.5).eval(u);
        CHECK((m.A.eval(u) * v4 - a_eig * v4).norm() < 1e-10 * v4.norm() * std::abs(a_eig));
        CHECK((m.D.eval(u) * v4 - d_eig * v4).norm() < 1e-10 * v4.norm() * std::abs(d_eig));
    }

    // triplet: B(u0)|0> = 0
    std::vector<cplx> theta_t{theta[0], theta[1], theta[1] - II, theta[3]};
    Vec vt = b_at_special_root(make_spec(theta_t, cplx{1.0, 0.0}), 2);
    CHECK(vt.norm() < 1e-12);
}

TEST_CASE("make_adjacent moves non-adjacent resonances together with transport") {
    std::vector<cplx> theta{cplx{0.0, 0.0}, cplx{7.0, 0.0}, cplx{0.0, 1.0}, cplx{-3.0, 0.0}};
    auto spec = ChainSpec{4, theta, cplx{1.2, 0.0}};
    auto adj = make_adjacent(spec);
    CHECK(std::abs(adj.spec.theta[1] - cplx{0.0, 1.0}) < 1e-14);
    CHECK(std::abs(adj.spec.theta[2] - cplx{7.0, 0.0}) < 1e-14);
    CHECK(adj.site_map == std::vector<int>{0, 1, 3, 2, 4});
    REQUIRE(detect_fusion(adj.spec.theta).pairs.size() == 1);

    // similarity transform: T_new = C T C^{-1} entrywise
    Monodromy m_old = monodromy(spec), m_new = monodromy(adj.spec);
    Mat cinv = adj.transport.inverse();
    for (char e : {'A', 'B', 'C', 'D'}) {
        cplx u{0.29, -0.41};
        Mat lhs = m_new.entry(e).eval(u);
        Mat rhs = adj.transport * m_old.entry(e).eval(u) * cinv;
        CHECK((lhs - rhs).norm() < 1e-10 * std::max(1.0, rhs.norm()));
    }
    // the reordered chain now exposes the singlet-fused invariant subspace
    auto rep = invariance_check(adj.spec, invariant_subspace(1, -1, 4));
    CHECK(rep.inside < 1e-11);

    // a swap that would cross a fused difference fails loudly
    auto bad = ChainSpec{3, {cplx{0.0, 0.0}, cplx{0.0, 2.0}, cplx{0.0, 1.0}}, cplx{1.0, 0.0}};
    CHECK_THROWS_AS(make_adjacent(bad), std::domain_error);

    // already-adjacent patterns are untouched
    auto same = make_adjacent(ChainSpec{2, {cplx{0, 0}, cplx{0, 1}}, cplx{1.0, 0.0}});
    CHECK((same.transport - identity_op(2)).norm() < 1e-14);
}

TEST_CASE("reduced chain and spectral inclusion") {
    std::vector<cplx> theta{cplx{0.21, 0.11}, cplx{-0.43, 0.0}, cplx{-0.43, 1.0}, cplx{0.95, -0.3}};
    cplx kappa{1.0, 0.0};
    auto spec = make_spec(theta, kappa);
    auto pattern = detect_fusion(theta);
    REQUIRE(pattern.pairs.size() == 1);
    auto red = reduced_chain(spec, pattern);
    CHECK(red.spec.L == 2);
    CHECK(std::abs(red.spec.theta[0] - theta[0]) < 1e-15);
    CHECK(std::abs(red.spec.theta[1] - theta[3]) < 1e-15);
    CHECK(std::abs(red.u0[0] - (theta[1] + II * 0.5)) < 1e-15);

    // reduced M=1 root u' = (theta_1 + theta_4)/2 from the reduced Bethe eqs
    auto sols = tq_extract(red.spec, 1);
    cplx uprime = 0.5 * (theta[0] + theta[3]);
    bool found = false;
    for (const auto& s : sols)
        if (s.admissible && std::abs(s.roots[0] - uprime) < 1e-9) found = true;
    CHECK(found);

    // spectral inclusion: reduced eigenvalues x prefactor form a sub-multiset
    cplx us{0.37, 0.18};
    auto full_ev = oracles::sorted_eigenvalues(transfer(spec).eval(us));
    auto red_ev = oracles::sorted_eigenvalues(transfer(red.spec).eval(us));
    cplx pf = red.prefactor.eval(us);
    for (cplx ev : red_ev) {
        double best = 1e300;
        for (cplx fe : full_ev) best = std::min(best, std::abs(fe - pf * ev));
        CHECK(best < 1e-9);
    }

    // full solution set: reduced roots + u0 solve the original QQ-relation
    for (const auto& s : sols) {
        if (!s.admissible) continue;
        std::vector<cplx> aug = s.roots;
        aug.push_back(red.u0[0]);
        auto res = bethe_residual(spec, aug);
        // the u0 equation itself is 0/0 (both sides vanish); check the others
        for (size_t k = 0; k + 1 < aug.size(); ++k) CHECK(std::abs(res[k]) < 1e-8);
    }

    // no pairs: spec unchanged
    FusionPattern none;
    auto same = reduced_chain(spec, none);
    CHECK(same.spec.L == 4);

    // triplet pairs are not reducible
    FusionPattern trip;
    trip.pairs = {{2, +1}};
    CHECK_THROWS_AS(reduced_chain(spec, trip), std::invalid_argument);
}

TEST_CASE("ABA completeness inside the invariant subspace (singlet) and rank deficit (triplet)") {
    std::vector<cplx> theta{cplx{0.21, 0.11}, cplx{-0.43, 0.0}, cplx{-0.43, 1.0}, cplx{0.95, -0.3}};
    cplx kappa{1.37, 0.0};  // generic twist so eigenstates are nondegenerate
    auto spec = make_spec(theta, kappa);
    Monodromy m = monodromy(spec);
    Vec vac = Vec::Zero(16);
    vac(0) = 1.0;

    // singlet: {B-products over reduced solutions} U {u0-augmented} spans the
    // 2^{L-2}-dimensional invariant subspace
    auto pattern = detect_fusion(theta);
    auto red = reduced_chain(spec, pattern);
    Vec v0p = b_at_special_root(spec, 2);
    std::vector<Vec> inv_states{v0p};
    for (int M = 1; M <= 2; ++M)
        for (const auto& s : tq_extract(red.spec, M)) {
            if (!s.admissible || s.residual > 1e-8) continue;
            std::vector<cplx> aug = s.roots;
            aug.push_back(red.u0[0]);
            inv_states.push_back(aba_state(m, aug, vac));
        }
    // plus the vacuum-sector state of the reduced chain (M=0) is v0p itself
    Mat span(16, static_cast<int>(inv_states.size()));
    for (size_t k = 0; k < inv_states.size(); ++k)
        span.col(static_cast<int>(k)) = inv_states[k] / inv_states[k].norm();
    Eigen::JacobiSVD<Mat> svd(span);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()(k) > 1e-8) ++rank;
    CHECK(rank == 4);  // 2^{L-2}
    auto sub = invariant_subspace(2, -1, 4);
    for (const auto& st : inv_states)
        CHECK((sub.projector * st - st).norm() < 1e-9 * st.norm());

    // triplet: ABA from |0> spans exactly 3 * 2^{L-2} eigenvectors
    std::vector<cplx> theta_t{theta[0], theta[1], theta[1] - II, theta[3]};
    auto spec_t = make_spec(theta_t, kappa);
    Monodromy mt = monodromy(spec_t);
    std::vector<Vec> states;
    Vec vac16 = Vec::Zero(16);
    vac16(0) = 1.0;
    states.push_back(vac16);
    for (int M = 1; M <= 4; ++M)
        for (const auto& s : tq_extract(spec_t, M)) {
            if (!s.admissible || s.residual > 1e-7) continue;
            Vec st = aba_state(mt, s.roots, vac16);
            if (st.norm() > 1e-8) states.push_back(st / st.norm());
        }
    Mat all(16, static_cast<int>(states.size()));
    for (size_t k = 0; k < states.size(); ++k) all.col(static_cast<int>(k)) = states[k];
    Eigen::JacobiSVD<Mat> svd_t(all);
    int rank_t = 0;
    for (int k = 0; k < svd_t.singularValues().size(); ++k)
        if (svd_t.singularValues()(k) > 1e-7) ++rank_t;
    CHECK(rank_t == 12);  // misses 2^{L-2} = 4 eigenvectors
}
