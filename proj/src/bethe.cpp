#include "spincs/bethe.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <future>
#include <nlohmann/json.hpp>
#include <random>

#include "spincs/report.hpp"

namespace spincs {

namespace {

Poly shifted_up(const Poly& p) { return p.shifted(II); }
Poly shifted_dn(const Poly& p) { return p.shifted(-II); }

bool has_repeated_roots(const std::vector<cplx>& roots, double fuzz = 1e-7) {
    for (size_t a = 0; a < roots.size(); ++a)
        for (size_t b = a + 1; b < roots.size(); ++b)
            if (std::abs(roots[a] - roots[b]) < fuzz) return true;
    return false;
}

bool has_singular_string(const std::vector<cplx>& roots, double fuzz = 1e-6) {
    for (size_t a = 0; a < roots.size(); ++a)
        for (size_t b = 0; b < roots.size(); ++b)
            if (a != b && std::abs(roots[a] - roots[b] - II) < fuzz) return true;
    return false;
}

std::vector<cplx> sorted_roots(std::vector<cplx> r, double fuzz = 1e-7) {
    std::sort(r.begin(), r.end(), [fuzz](cplx a, cplx b) {
        if (std::abs(a.real() - b.real()) > fuzz) return a.real() < b.real();
        return a.imag() < b.imag() - fuzz;
    });
    return r;
}

}  // namespace

QFunction QFunction::from_coeffs(const Poly& monic) {
    QFunction q;
    q.roots = monic.roots();
    return q;
}

std::string BetheSolution::to_json() const {
    nlohmann::ordered_json j;
    j["M"] = M;
    j["roots"] = nlohmann::ordered_json::array();
    for (cplx r : sorted_roots(roots)) j["roots"].push_back(json_complex(r));
    if (!dual_roots.empty()) {
        j["dual_roots"] = nlohmann::ordered_json::array();
        for (cplx r : sorted_roots(dual_roots)) j["dual_roots"].push_back(json_complex(r));
    }
    j["residual"] = residual;
    j["admissible"] = admissible;
    if (multiplicity != 1) j["multiplicity"] = multiplicity;
    if (!flag.empty()) j["flag"] = flag;
    j["tau_coeffs"] = nlohmann::ordered_json::array();
    for (cplx c : tau.coeffs()) j["tau_coeffs"].push_back(json_complex(c));
    return j.dump();
}

Poly tau_from_Q(const ChainSpec& spec, const QFunction& q, double* pole_remainder) {
    spec.validate();
    const Poly qt = q_theta(spec);
    const Poly qp = q.poly();
    Poly num = qt.shifted(II * 0.5) * qp.shifted(-II) * spec.kappa +
               qt.shifted(-II * 0.5) * qp.shifted(II) * (1.0 / spec.kappa);
    if (q.degree() == 0) {
        if (pole_remainder) *pole_remainder = 0.0;
        return num;
    }
    auto [quot, rem] = num.divmod(qp);
    double rel = rem.max_abs_coeff() / std::max(1.0, num.max_abs_coeff());
    if (pole_remainder)
        *pole_remainder = rel;
    else if (rel > 1e-8)
        throw std::domain_error("roots are not on shell: tau has a pole remainder");
    return quot;
}

std::vector<cplx> bethe_residual(const ChainSpec& spec, const std::vector<cplx>& roots) {
    spec.validate();
    // Log-form difference of the two sides, scaled by the diagonal of the
    // analytic Jacobian. The scaling keeps the residual a Newton-step estimate
    // (root displacement), which stays finite and small when a root sits on a
    // zero of one side, as at the Gelfand-Tsetlin point.
    auto safe = [](cplx z) {
        double a = std::abs(z);
        if (a < 1e-280) return cplx{1e-280, 0.0};
        return z;
    };
    std::vector<cplx> out;
    out.reserve(roots.size());
    for (size_t m = 0; m < roots.size(); ++m) {
        cplx f = 2.0 * std::log(spec.kappa);
        cplx jac{0.0, 0.0};
        for (cplx t : spec.theta) {
            cplx a = safe(roots[m] - t + II * 0.5), b = safe(roots[m] - t - II * 0.5);
            f += std::log(a) - std::log(b);
            jac += 1.0 / a - 1.0 / b;
        }
        for (size_t n = 0; n < roots.size(); ++n) {
            if (n == m) continue;
            cplx a = safe(roots[m] - roots[n] + II), b = safe(roots[m] - roots[n] - II);
            f -= std::log(a) - std::log(b);
            jac -= 1.0 / a - 1.0 / b;
        }
        // fold to the principal branch
        double two_pi = 2.0 * 3.141592653589793;
        f -= II * (two_pi * std::round(f.imag() / two_pi));
        out.push_back(f / std::max(1.0, std::abs(jac)));
    }
    return out;
}

Poly qq_residual(const ChainSpec& spec, const QFunction& q, const QFunction& qt, bool periodic) {
    spec.validate();
    const int M = q.degree();
    const int expected = periodic ? spec.L - M + 1 : spec.L - M;
    if (qt.degree() != expected)
        throw std::invalid_argument("dual Q-function degree mismatch: expected " +
                                    std::to_string(expected));
    const Poly qp = q.poly(), qtp = qt.poly(), qth = q_theta(spec);
    Poly lhs;
    if (periodic) {
        lhs = qp.shifted(-II * 0.5) * qtp.shifted(II * 0.5) -
              qp.shifted(II * 0.5) * qtp.shifted(-II * 0.5);
        return lhs - qth * (II * static_cast<double>(spec.L - 2 * M + 1));
    }
    lhs = qp.shifted(-II * 0.5) * qtp.shifted(II * 0.5) * spec.kappa -
          qp.shifted(II * 0.5) * qtp.shifted(-II * 0.5) * (1.0 / spec.kappa);
    return lhs - qth * (spec.kappa - 1.0 / spec.kappa);
}

namespace {

// Solve the TQ relation for a monic Q of degree M given tau.
// Returns the relative least-squares residual.
double tq_solve(const ChainSpec& spec, const Poly& tau, int M, Poly* q_out, double* cond_out) {
    const Poly qtp = q_theta(spec).shifted(II * 0.5) * spec.kappa;
    const Poly qtm = q_theta(spec).shifted(-II * 0.5) * (1.0 / spec.kappa);
    const int rows = spec.L + M + 1;
    auto column = [&](const Poly& basis) {
        Poly col = qtp * shifted_dn(basis) + qtm * shifted_up(basis) - tau * basis;
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(rows);
        for (int k = 0; k < rows; ++k) v(k) = col.coeff(k);
        return v;
    };
    Eigen::VectorXcd rhs = -column(Poly::monomial(M));
    if (M == 0) {
        double res = rhs.norm() / std::max(1.0, qtp.max_abs_coeff());
        if (q_out) *q_out = Poly::one();
        if (cond_out) *cond_out = 1.0;
        return res;
    }
    Eigen::MatrixXcd A(rows, M);
    for (int k = 0; k < M; ++k) A.col(k) = column(Poly::monomial(k));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXcd sol = svd.solve(rhs);
    if (cond_out)
        *cond_out = svd.singularValues()(0) /
                    std::max(svd.singularValues()(svd.singularValues().size() - 1), 1e-300);
    std::vector<cplx> coeffs(M + 1);
    for (int k = 0; k < M; ++k) coeffs[k] = sol(k);
    coeffs[M] = 1.0;
    Poly q(coeffs);
    if (q_out) *q_out = q;
    double scale = std::max(1.0, (qtp * Poly::monomial(M)).max_abs_coeff());
    return (A * sol - rhs).norm() / scale;
}

}  // namespace

std::vector<BetheSolution> tq_extract(const ChainSpec& spec, int M) {
    spec.validate();
    if (spec.L > 12) throw std::invalid_argument("tq_extract limited to 2^L <= 2^12");
    if (M < 0 || M > spec.L) throw std::invalid_argument("bad magnon number");
    Monodromy mono = monodromy(spec);
    OpPoly t = transfer(mono, spec.kappa);
    auto codes = sector_codes(spec.L, M);
    const int n = static_cast<int>(codes.size());
    const cplx ustar{0.4711, 0.3181};
    const cplx ustar2{-0.9173, 0.1525};
    Mat block = restrict_to_codes(t.eval(ustar), codes);
    Eigen::ComplexEigenSolver<Mat> es(block);
    Mat vecs = es.eigenvectors();
    Vec vals = es.eigenvalues();

    // group (nearly) degenerate eigenvalues and refine inside each group with a
    // second evaluation point, so every vector is a joint eigenvector
    double scale = std::max(1.0, block.norm());
    std::vector<int> order(n);
    for (int k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (std::abs(vals(a).real() - vals(b).real()) > 1e-8 * scale)
            return vals(a).real() < vals(b).real();
        return vals(a).imag() < vals(b).imag();
    });
    Mat block2 = restrict_to_codes(t.eval(ustar2), codes);
    std::vector<std::pair<Vec, int>> eigvecs;  // (sector eigenvector, multiplicity)
    for (int start = 0; start < n;) {
        int end = start + 1;
        while (end < n && std::abs(vals(order[end]) - vals(order[start])) < 1e-7 * scale) ++end;
        int g = end - start;
        if (g == 1) {
            eigvecs.push_back({vecs.col(order[start]), 1});
        } else {
            Mat W(n, g);
            for (int k = 0; k < g; ++k) W.col(k) = vecs.col(order[start + k]);
            Mat small = (W.adjoint() * W).inverse() * (W.adjoint() * (block2 * W));
            Eigen::ComplexEigenSolver<Mat> es2(small);
            for (int k = 0; k < g; ++k) {
                Vec v = W * es2.eigenvectors().col(k);
                eigvecs.push_back({v / v.norm(), g});
            }
        }
        start = end;
    }

    std::vector<BetheSolution> out;
    for (auto& [v, mult] : eigvecs) {
        // reconstruct the eigenvalue polynomial coefficient-wise
        int imax = 0;
        double best = 0.0;
        for (int k = 0; k < n; ++k)
            if (std::abs(v(k)) > best) { best = std::abs(v(k)); imax = k; }
        Vec full = Vec::Zero(space_dim(spec.L));
        for (int k = 0; k < n; ++k) full(codes[k]) = v(k);
        std::vector<cplx> tau_coeffs(t.degree() + 1);
        double recon_err = 0.0;
        for (int k = 0; k <= t.degree(); ++k) {
            Vec w = t.coeff(k) * full;
            tau_coeffs[k] = w(codes[imax]) / v(imax);
            recon_err = std::max(recon_err, (w - tau_coeffs[k] * full).norm() /
                                                std::max(1.0, w.norm()));
        }
        Poly tau(tau_coeffs);
        BetheSolution sol;
        sol.M = M;
        sol.tau = tau;
        sol.multiplicity = mult;
        Poly q;
        double cond = 1.0;
        double lsq = tq_solve(spec, tau, M, &q, &cond);
        if (lsq > 1e-6) {
            sol.admissible = false;
            sol.flag = "tq-unsolvable (descendant or non-polynomial Q)";
            sol.residual = lsq;
            out.push_back(std::move(sol));
            continue;
        }
        if (cond > 1e8) sol.flag = "fused-candidate (rank-deficient TQ solve)";
        sol.roots = q.roots();
        auto res = bethe_residual(spec, sol.roots);
        for (cplx r : res) sol.residual = std::max(sol.residual, std::abs(r));
        sol.admissible = !has_repeated_roots(sol.roots);
        if (!sol.admissible && sol.flag.empty()) sol.flag = "repeated roots";
        if (has_singular_string(sol.roots)) sol.flag = "singular-string";
        for (cplx r : sol.roots)
            for (cplx th : spec.theta)
                if (std::abs(r - th - II * 0.5) < 1e-9 && sol.flag.empty())
                    sol.flag = "root-on-pole";
        if (recon_err > 1e-6 && sol.flag.empty()) sol.flag = "degenerate-reconstruction";
        out.push_back(std::move(sol));
    }
    return out;
}

namespace {

// Bethe equations in log form, with roots parametrized as displacements from
// fixed base points u_m = base_m + v_m. Near the Gelfand-Tsetlin regime the
// displacements are ~kappa^{-2}; keeping them as separate variables avoids the
// catastrophic cancellation of computing u_m - theta_{i_m} - i/2 directly.
struct LogBae {
    const ChainSpec* spec;
    cplx kappa;
    std::vector<cplx> base;

    cplx diff_theta(const std::vector<cplx>& v, int m, int i, cplx shift) const {
        return v[m] + (base[m] - spec->theta[i] + shift);
    }
    cplx diff_root(const std::vector<cplx>& v, int m, int n, cplx shift) const {
        return (v[m] - v[n]) + (base[m] - base[n]) + shift;
    }

    // Log-form equations folded to the principal branch. The physical equation
    // is exp(F) = 1, so every 2 pi i branch is a solution; folding every
    // evaluation keeps |F| continuous when a root crosses a log cut.
    Eigen::VectorXcd value(const std::vector<cplx>& v) const {
        const int M = static_cast<int>(v.size());
        const double two_pi = 2.0 * 3.141592653589793;
        Eigen::VectorXcd f(M);
        for (int m = 0; m < M; ++m) {
            cplx acc = 2.0 * std::log(kappa);
            for (int i = 0; i < spec->L; ++i)
                acc += std::log(diff_theta(v, m, i, II * 0.5)) -
                       std::log(diff_theta(v, m, i, -II * 0.5));
            for (int n = 0; n < M; ++n)
                if (n != m)
                    acc -= std::log(diff_root(v, m, n, II)) - std::log(diff_root(v, m, n, -II));
            acc -= II * (two_pi * std::round(acc.imag() / two_pi));
            f(m) = acc;
        }
        return f;
    }

    Eigen::MatrixXcd jacobian(const std::vector<cplx>& v) const {
        const int M = static_cast<int>(v.size());
        Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(M, M);
        for (int m = 0; m < M; ++m) {
            cplx diag{0.0, 0.0};
            for (int i = 0; i < spec->L; ++i)
                diag += 1.0 / diff_theta(v, m, i, II * 0.5) - 1.0 / diff_theta(v, m, i, -II * 0.5);
            for (int n = 0; n < M; ++n) {
                if (n == m) continue;
                cplx dp = 1.0 / diff_root(v, m, n, II) - 1.0 / diff_root(v, m, n, -II);
                diag -= dp;
                j(m, n) = dp;
            }
            j(m, m) = diag;
        }
        return j;
    }
};

// Damped Newton; returns final residual norm (inf if diverged).
double newton_polish(LogBae& f, std::vector<cplx>& u, int max_iter, double tol) {
    const int M = static_cast<int>(u.size());
    Eigen::VectorXcd fv = f.value(u);
    double fn = fv.norm();
    for (int it = 0; it < max_iter && fn > tol; ++it) {
        Eigen::MatrixXcd j = f.jacobian(u);
        Eigen::VectorXcd step = j.colPivHouseholderQr().solve(fv);
        double lambda = 1.0;
        bool improved = false;
        for (int bt = 0; bt < 30; ++bt) {
            std::vector<cplx> trial = u;
            for (int m = 0; m < M; ++m) trial[m] -= lambda * step(m);
            Eigen::VectorXcd ft = f.value(trial);
            if (ft.norm() < fn) {
                u = trial;
                fv = ft;
                fn = ft.norm();
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
    }
    return fn;
}

std::vector<std::vector<int>> subsets_of_size(int L, int M) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(M);
    std::function<void(int, int)> rec = [&](int start, int k) {
        if (k == M) {
            out.push_back(idx);
            return;
        }
        for (int i = start; i <= L; ++i) {
            idx[k] = i;
            rec(i + 1, k + 1);
        }
    };
    rec(1, 0);
    return out;
}

}  // namespace

std::vector<BetheSolution> newton_solve(const ChainSpec& spec, int M, const NewtonOptions& opt) {
    spec.validate();
    cplx target = spec.kappa;
    double infinite_cut = opt.infinite_root;
    if (std::abs(target - 1.0) < 1e-12 || std::abs(target + 1.0) < 1e-12) {
        target *= (1.0 + 1e-6);  // epsilon-twist regularization at kappa = +-1
        // a descendant root sits at |u| ~ 1/epsilon; cut below that scale
        infinite_cut = std::min(infinite_cut, 1e5);
    }

    auto run_path = [&](const std::vector<int>& subset, double gamma) -> std::optional<BetheSolution> {
        std::vector<cplx> base;
        for (int i : subset) base.push_back(spec.theta[i - 1] - II * 0.5);
        // first-order twist correction: the exact GT point is a logarithmic
        // singularity of the equations, so start from the O(1/kappa^2) solution
        std::vector<cplx> v(M, cplx{});
        {
            cplx k0{opt.kappa_start, 0.0};
            for (int m = 0; m < M; ++m) {
                cplx num{1.0, 0.0}, den = k0 * k0;
                for (int i = 1; i <= spec.L; ++i) {
                    num *= base[m] - spec.theta[i - 1] - II * 0.5;
                    if (i != subset[m]) den *= base[m] - spec.theta[i - 1] + II * 0.5;
                }
                for (int n = 0; n < M; ++n) {
                    if (n == m) continue;
                    num *= base[m] - base[n] + II;
                    den *= base[m] - base[n] - II;
                }
                v[m] = num / den;
                // coincident inhomogeneities degenerate the correction; fall
                // back to small path-dependent offsets so distinct paths can
                // still reach distinct local solutions
                if (!std::isfinite(std::abs(v[m])) || std::abs(v[m]) > 0.1) {
                    double angle = 2.0 * 3.141592653589793 *
                                   (static_cast<double>(subset[m] - 1) / spec.L) +
                                   0.77 * m;
                    v[m] = 1e-4 * std::exp(II * angle);
                }
            }
        }
        LogBae f{&spec, cplx{opt.kappa_start, 0.0}, base};
        newton_polish(f, v, opt.max_newton, opt.target_tol);
        cplx log_start = std::log(cplx{opt.kappa_start, 0.0});
        cplx log_end = std::log(target);
        // adaptive continuation in log kappa: halve the step at tight corners,
        // regrow after successful steps. The imaginary detour gamma sin(pi s)
        // steers the path around branch points on the real-kappa axis.
        auto kappa_at = [&](double s) {
            return std::exp(log_start + (log_end - log_start) * s +
                            II * (gamma * std::sin(3.141592653589793 * s)));
        };
        const double ds0 = 1.0 / opt.steps;
        double s_cur = 0.0, ds = ds0;
        int fail_budget = 200;
        while (s_cur < 1.0 - 1e-12) {
            double s_next = std::min(1.0, s_cur + ds);
            std::vector<cplx> v_save = v;
            f.kappa = kappa_at(s_next);
            double res = newton_polish(f, v, opt.max_newton, opt.target_tol);
            if (res > 1e-6) {
                v = v_save;
                ds *= 0.5;
                if (--fail_budget <= 0 || ds < ds0 / 65536.0) return std::nullopt;
                continue;
            }
            s_cur = s_next;
            ds = std::min(ds0, ds * 2.0);
            for (int m = 0; m < M; ++m)
                if (std::abs(base[m] + v[m]) > infinite_cut) {
                    BetheSolution sol;
                    sol.M = M;
                    for (int n = 0; n < M; ++n) sol.roots.push_back(base[n] + v[n]);
                    sol.admissible = false;
                    sol.flag = "infinite root (sl2 descendant direction)";
                    return sol;
                }
            for (int a = 0; a < M; ++a)
                for (int b = a + 1; b < M; ++b)
                    if (std::abs(f.diff_root(v, a, b, cplx{})) < 1e-12) return std::nullopt;
        }
        BetheSolution sol;
        sol.M = M;
        for (int m = 0; m < M; ++m) sol.roots.push_back(base[m] + v[m]);
        auto res = bethe_residual({spec.L, spec.theta, target}, sol.roots);
        for (cplx r : res) sol.residual = std::max(sol.residual, std::abs(r));
        if (sol.residual > opt.accept_tol) {
            sol.admissible = false;
            sol.flag = "did not converge to acceptance tolerance";
        }
        sol.admissible = sol.admissible && !has_repeated_roots(sol.roots);
        if (has_singular_string(sol.roots)) sol.flag = "singular-string";
        double rem = 0.0;
        ChainSpec st = spec;
        st.kappa = target;
        sol.tau = tau_from_Q(st, QFunction::from_roots(sol.roots), &rem);
        return sol;
    };

    auto subsets = subsets_of_size(spec.L, M);
    const long expected = static_cast<long>(subsets.size());

    auto is_dup = [](const std::vector<BetheSolution>& pool, const BetheSolution& cand) {
        auto key = sorted_roots(cand.roots);
        for (const auto& prev : pool) {
            auto pk = sorted_roots(prev.roots);
            if (pk.size() != key.size()) continue;
            double d = 0.0;
            for (size_t k = 0; k < key.size(); ++k) d = std::max(d, std::abs(pk[k] - key[k]));
            if (d < 1e-7) return true;
        }
        return false;
    };

    // Whole sweeps with a shared detour amplitude; distinct finite solutions
    // are merged across sweeps (a path can land on an already-found branch
    // after squeezing past a fold, losing a sibling).
    std::vector<BetheSolution> finite;
    std::vector<BetheSolution> infinite;
    for (double gamma : {0.5, -0.8, 1.7, -2.6, 4.0, -5.5}) {
        std::vector<std::optional<BetheSolution>> results(subsets.size());
        if (opt.threads > 1) {
            std::vector<std::future<std::optional<BetheSolution>>> futs;
            for (const auto& sub : subsets)
                futs.push_back(std::async(std::launch::async, run_path, sub, gamma));
            for (size_t k = 0; k < futs.size(); ++k) results[k] = futs[k].get();
        } else {
            for (size_t k = 0; k < subsets.size(); ++k) results[k] = run_path(subsets[k], gamma);
        }
        std::vector<BetheSolution> sweep_infinite;
        for (auto& r : results) {
            if (!r) continue;
            if (r->flag.find("infinite") != std::string::npos) {
                sweep_infinite.push_back(std::move(*r));
                continue;
            }
            if (!is_dup(finite, *r)) finite.push_back(std::move(*r));
        }
        if (sweep_infinite.size() > infinite.size()) infinite = std::move(sweep_infinite);
        if (static_cast<long>(finite.size() + infinite.size()) >= expected) break;
    }
    for (auto& s : infinite) finite.push_back(std::move(s));
    return finite;
}

Vec aba_state(const Monodromy& m, const std::vector<cplx>& roots, const Vec& vacuum) {
    // the vacuum must be annihilated by C
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double bscale = std::max(1.0, m.B.eval(cplx{0.7, 0.2}).norm());
    for (int k = 0; k < 3; ++k) {
        cplx u{unif(rng), unif(rng)};
        if ((m.C.eval(u) * vacuum).norm() > 1e-8 * bscale * vacuum.norm())
            throw std::invalid_argument("vacuum is not annihilated by C(u)");
    }
    Vec state = vacuum;
    for (cplx u : roots) state = m.B.eval(u) * state;
    return state;
}

Vec aba_state(const ChainSpec& spec, const std::vector<cplx>& roots, const Vec& vacuum) {
    return aba_state(monodromy(spec), roots, vacuum);
}

ChargeEigenvalues charge_eigenvalues(const ChainSpec& spec, const BetheSolution& sol) {
    spec.validate();
    const double L = spec.L;
    const double M = sol.M;
    const cplx k = spec.kappa;
    cplx sum_theta{0.0, 0.0}, sum_theta2{0.0, 0.0};
    for (cplx t : spec.theta) {
        sum_theta += t;
        sum_theta2 += t * t;
    }
    cplx sum_u{0.0, 0.0};
    for (cplx r : sol.roots) sum_u += r;
    ChargeEigenvalues ev;
    ev.tau1 = (k + 1.0 / k) * L / 2.0 + (k - 1.0 / k) * (L / 2.0 - M);
    ev.tau2_periodic =
        -II * sum_theta + (L / 2.0 - M) * (L / 2.0 - M + 1.0) + L * (L - 4.0) / 4.0;
    ev.tau2 = (k + 1.0 / k) / 2.0 * ev.tau2_periodic +
              (k - 1.0 / k) / 2.0 *
                  (-II * sum_theta + 2.0 * II * sum_u + (L - 1.0) * (L / 2.0 - M));
    ev.tau3_periodic = -sum_theta2 - II * (L - M - 1.0) * sum_theta +
                       2.0 * II * (L / 2.0 - M + 1.0) * sum_u +
                       (L / 2.0 - M - 1.0) * (L * (L - M - 1.0) + M * (M - 1.0)) / 3.0;
    return ev;
}

Poly gt_alpha(const ChainSpec& spec, const std::vector<int>& subset) {
    // alpha_I(u) = prod_{i in I}(u - theta_i - i/2) prod_{j notin I}(u - theta_j + i/2)
    std::vector<cplx> roots;
    for (int i = 1; i <= spec.L; ++i) {
        bool in = std::find(subset.begin(), subset.end(), i) != subset.end();
        roots.push_back(spec.theta[i - 1] + (in ? II * 0.5 : -II * 0.5));
    }
    return Poly::from_roots(roots);
}

BetheSolution gt_solution(const ChainSpec& spec, const std::vector<int>& subset) {
    spec.validate();
    for (int i : subset)
        if (i < 1 || i > spec.L) throw std::invalid_argument("subset site out of range");
    BetheSolution sol;
    sol.M = static_cast<int>(subset.size());
    for (int i : subset) sol.roots.push_back(spec.theta[i - 1] - II * 0.5);
    auto res = bethe_residual(spec, sol.roots);
    for (cplx r : res) sol.residual = std::max(sol.residual, std::abs(r));
    sol.admissible = !has_repeated_roots(sol.roots);
    double rem = 0.0;
    sol.tau = tau_from_Q(spec, QFunction::from_roots(sol.roots), &rem);
    return sol;
}

std::vector<std::pair<QFunction, QFunction>> qq_solve(const ChainSpec& spec, int M,
                                                      const QQOptions& opt) {
    spec.validate();
    const int L = spec.L;
    const int degt = opt.periodic ? L - M + 1 : L - M;
    const bool gauge_fix = opt.periodic && 2 * M <= L;  // Qt defined modulo Q
    const cplx kap = spec.kappa;
    const Poly qth = q_theta(spec);

    // unknowns: q_0..q_{M-1}, qt_0..qt_{degt-1} (skipping qt_M under the gauge)
    std::vector<int> qt_idx;
    for (int k = 0; k < degt; ++k)
        if (!(gauge_fix && k == M)) qt_idx.push_back(k);
    const int nunk = M + static_cast<int>(qt_idx.size());

    auto build = [&](const Eigen::VectorXcd& y) {
        std::vector<cplx> qc(M + 1, cplx{}), qtc(degt + 1, cplx{});
        for (int k = 0; k < M; ++k) qc[k] = y(k);
        qc[M] = 1.0;
        for (size_t k = 0; k < qt_idx.size(); ++k) qtc[qt_idx[k]] = y(M + k);
        qtc[degt] = 1.0;
        return std::pair<Poly, Poly>{Poly(qc), Poly(qtc)};
    };
    auto wronskian = [&](const Poly& q, const Poly& qt) {
        if (opt.periodic)
            return q.shifted(-II * 0.5) * qt.shifted(II * 0.5) -
                   q.shifted(II * 0.5) * qt.shifted(-II * 0.5) -
                   qth * (II * static_cast<double>(L - 2 * M + 1));
        return q.shifted(-II * 0.5) * qt.shifted(II * 0.5) * kap -
               q.shifted(II * 0.5) * qt.shifted(-II * 0.5) * (1.0 / kap) -
               qth * (kap - 1.0 / kap);
    };
    auto residual_vec = [&](const Eigen::VectorXcd& y) {
        auto [q, qt] = build(y);
        Poly r = wronskian(q, qt);
        Eigen::VectorXcd v(L);
        for (int k = 0; k < L; ++k) v(k) = r.coeff(k);
        return v;
    };
    auto jacobian = [&](const Eigen::VectorXcd& y) {
        auto [q, qt] = build(y);
        Eigen::MatrixXcd jac(L, nunk);
        cplx ka = opt.periodic ? cplx{1.0, 0.0} : kap;
        cplx kb = opt.periodic ? cplx{1.0, 0.0} : cplx{1.0, 0.0} / kap;
        for (int k = 0; k < M; ++k) {
            Poly mono = Poly::monomial(k);
            Poly d = mono.shifted(-II * 0.5) * qt.shifted(II * 0.5) * ka -
                     mono.shifted(II * 0.5) * qt.shifted(-II * 0.5) * kb;
            for (int r = 0; r < L; ++r) jac(r, k) = d.coeff(r);
        }
        for (size_t k = 0; k < qt_idx.size(); ++k) {
            Poly mono = Poly::monomial(qt_idx[k]);
            Poly d = q.shifted(-II * 0.5) * mono.shifted(II * 0.5) * ka -
                     q.shifted(II * 0.5) * mono.shifted(-II * 0.5) * kb;
            for (int r = 0; r < L; ++r) jac(r, M + k) = d.coeff(r);
        }
        return jac;
    };

    double theta_scale = 1.0;
    for (cplx t : spec.theta) theta_scale = std::max(theta_scale, std::abs(t));
    std::mt19937 rng(opt.seed);
    std::normal_distribution<double> g;
    std::vector<std::pair<QFunction, QFunction>> found;
    double ref_scale = qth.max_abs_coeff();

    // Gelfand-Tsetlin-factorized guesses first (exact at extreme twist, decent
    // basins at moderate twist), then random root draws.
    std::vector<std::pair<std::vector<cplx>, std::vector<cplx>>> seeds;
    if (!opt.periodic) {
        for (const auto& sub : subsets_of_size(L, M)) {
            std::vector<cplx> qr, qtr;
            for (int i = 1; i <= L; ++i) {
                bool in = std::find(sub.begin(), sub.end(), i) != sub.end();
                if (in) qr.push_back(spec.theta[i - 1] - II * 0.5);
                else qtr.push_back(spec.theta[i - 1] + II * 0.5);
            }
            seeds.push_back({qr, qtr});
        }
    }
    const int total_trials = static_cast<int>(seeds.size()) + opt.starts;
    for (int trial = 0; trial < total_trials; ++trial) {
        std::vector<cplx> qr(M), qtr(degt);
        if (trial < static_cast<int>(seeds.size())) {
            qr = seeds[trial].first;
            qtr = seeds[trial].second;
        } else {
            // random root sets (better conditioned than random coefficients);
            // log-uniform radii cover solutions far from the inhomogeneities
            std::uniform_real_distribution<double> expo(-0.5, 1.0);
            for (auto& r : qr) {
                cplx dir{g(rng), g(rng)};
                r = theta_scale * std::pow(10.0, expo(rng)) * dir / std::max(1e-9, std::abs(dir));
            }
            for (auto& r : qtr) {
                cplx dir{g(rng), g(rng)};
                r = theta_scale * std::pow(10.0, expo(rng)) * dir / std::max(1e-9, std::abs(dir));
            }
        }
        Poly q0 = Poly::from_roots(qr), qt0 = Poly::from_roots(qtr);
        Eigen::VectorXcd y(nunk);
        for (int k = 0; k < M; ++k) y(k) = q0.coeff(k);
        for (size_t k = 0; k < qt_idx.size(); ++k) y(M + k) = qt0.coeff(qt_idx[k]);
        Eigen::VectorXcd f = residual_vec(y);
        double fn = f.norm();
        bool ok = false;
        for (int it = 0; it < opt.max_newton; ++it) {
            Eigen::MatrixXcd jac = jacobian(y);
            Eigen::VectorXcd step = jac.colPivHouseholderQr().solve(f);
            double lambda = 1.0;
            bool improved = false;
            for (int bt = 0; bt < 40; ++bt) {
                Eigen::VectorXcd trial_y = y - lambda * step;
                Eigen::VectorXcd ft = residual_vec(trial_y);
                if (ft.norm() < fn) {
                    y = trial_y;
                    f = ft;
                    fn = ft.norm();
                    improved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (fn < opt.tol * ref_scale) { ok = true; break; }
            if (!improved) break;
        }
        if (!ok) continue;
        auto [q, qt] = build(y);
        auto roots = sorted_roots(q.roots());
        bool dup = false;
        for (const auto& prev : found) {
            auto pr = sorted_roots(prev.first.roots);
            if (pr.size() != roots.size()) continue;
            double d = 0.0;
            for (size_t k = 0; k < roots.size(); ++k) d = std::max(d, std::abs(pr[k] - roots[k]));
            if (d < 1e-6) { dup = true; break; }
        }
        if (dup) continue;
        QFunction qf{q.roots()};
        QFunction qtf{qt.roots()};
        found.push_back({qf, qtf});
    }
    return found;
}

}  // namespace spincs
