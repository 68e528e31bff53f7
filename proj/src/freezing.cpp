#include "spincs/freezing.hpp"

#include <nlohmann/json.hpp>

#include "spincs/report.hpp"
#include "spincs/tensoralg.hpp"

namespace spincs {

namespace {
constexpr double PI = 3.14159265358979323846264338328;

std::vector<cplx> roots_of_unity(int N) {
    std::vector<cplx> z(N);
    for (int k = 0; k < N; ++k) z[k] = std::exp(II * (2.0 * PI * k / N));
    return z;
}
}  // namespace

Vec evaluate(const SpinPolyVector& v) {
    auto z = roots_of_unity(v.N);
    Vec out = Vec::Zero(space_dim(v.N));
    for (const auto& [code, f] : v.comps) out(code) = f.eval(z);
    return out;
}

Vec evaluate(const JackSpinVector& v, JackTable& table) {
    auto z = roots_of_unity(v.N);
    Vec out = Vec::Zero(space_dim(v.N));
    for (const auto& [mu, vec] : v.comps) out += table.E(mu).eval(z) * vec;
    return out;
}

Mat hs_hamiltonian(int N) {
    if (N < 2) throw std::invalid_argument("need N >= 2");
    Mat h = Mat::Zero(space_dim(N), space_dim(N));
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
            double s = std::sin(PI * (i - j) / N);
            h += (identity_op(N) + permutation_operator(i, j, N)) / (4.0 * s * s);
        }
    return h;
}

Mat hs_t2(int N, cplx kappa) {
    if (kappa == cplx{}) throw std::invalid_argument("twist must be nonzero");
    Mat out = Mat::Zero(space_dim(N), space_dim(N));
    cplx kp = (kappa + 1.0 / kappa) / 2.0;
    cplx km = (kappa - 1.0 / kappa) / (4.0 * II);
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
            Mat p = permutation_operator(i, j, N);
            out += kp * p;
            double s = std::sin(PI * (i - j) / N);
            Mat weighted = (std::exp(II * PI * static_cast<double>(i - j) / static_cast<double>(N)) * sigma_z(j, N) -
                            std::exp(II * PI * static_cast<double>(j - i) / static_cast<double>(N)) * sigma_z(i, N)) / s;
            out += km * weighted * p;
        }
    return out;
}

Mat hs_intro_twist(int N) {
    Mat out = Mat::Zero(space_dim(N), space_dim(N));
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
            double s = std::sin(PI * (i - j) / N);
            Mat weighted = (std::exp(II * PI * static_cast<double>(i - j) / static_cast<double>(N)) * sigma_z(j, N) -
                            std::exp(II * PI * static_cast<double>(j - i) / static_cast<double>(N)) * sigma_z(i, N)) / s;
            out += weighted * permutation_operator(i, j, N);
        }
    return out;
}

Mat hs_t3(int N) {
    if (N < 3) throw std::invalid_argument("need N >= 3");
    Mat out = Mat::Zero(space_dim(N), space_dim(N));
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) {
            if (j == i) continue;
            double cot = std::cos(PI * (i - j) / N) / std::sin(PI * (i - j) / N);
            cplx w = 1.0 / 3.0 + II * cot;
            Mat pij = permutation_operator(i, j, N);
            for (int k = 1; k <= N; ++k) {
                if (k == i || k == j) continue;
                out += 0.5 * w * pij * permutation_operator(j, k, N);
            }
        }
    return out;
}

LegacyCharges legacy_charges(int N) {
    if (N < 3) throw std::invalid_argument("need N >= 3");
    const int d = space_dim(N);
    LegacyCharges ch{Mat::Zero(d, d), Mat::Zero(d, d), Mat::Zero(d, d)};
    auto sin_n = [&](int a) { return std::sin(PI * a / N); };
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) {
            if (j == i) continue;
            Mat pij = permutation_operator(i, j, N);
            for (int k = 1; k <= N; ++k) {
                if (k == i || k == j) continue;
                Mat pp = pij * permutation_operator(j, k, N);
                ch.H3 += pp / (sin_n(i - j) * sin_n(j - k) * sin_n(k - i));
                ch.I3 += (std::cos(PI * (i - j) / N) / sin_n(i - j)) * pp;
            }
        }
    if (N >= 4) {
        for (int i = 1; i <= N; ++i)
            for (int j = 1; j <= N; ++j) {
                if (j == i) continue;
                for (int k = 1; k <= N; ++k) {
                    if (k == i || k == j) continue;
                    for (int l = 1; l <= N; ++l) {
                        if (l == i || l == j || l == k) continue;
                        Mat ppp = permutation_operator(i, j, N) * permutation_operator(j, k, N) *
                                  permutation_operator(k, l, N);
                        ch.H4 += ppp / (sin_n(i - j) * sin_n(j - k) * sin_n(k - l) * sin_n(l - i));
                    }
                }
            }
        for (int i = 1; i <= N; ++i)
            for (int j = 1; j <= N; ++j) {
                if (j == i) continue;
                double s = sin_n(i - j);
                ch.H4 -= 2.0 * permutation_operator(i, j, N) / (s * s * s * s);
            }
    }
    return ch;
}

Mat rapidity_dot_s(int N) {
    const int d = space_dim(N);
    Mat out = Mat::Zero(d, d);
    // -i S . Lambda with Lambda = sum_{i<j} cot[pi(i-j)/N] sigma_i x sigma_j
    std::vector<Mat> sx(N + 1), sy(N + 1), sz(N + 1);
    for (int i = 1; i <= N; ++i) {
        sx[i] = sigma_x(i, N);
        sy[i] = sigma_y(i, N);
        sz[i] = sigma_z(i, N);
    }
    Mat Sx = Mat::Zero(d, d), Sy = Mat::Zero(d, d), Sz = Mat::Zero(d, d);
    for (int i = 1; i <= N; ++i) {
        Sx += 0.5 * sx[i];
        Sy += 0.5 * sy[i];
        Sz += 0.5 * sz[i];
    }
    Mat Lx = Mat::Zero(d, d), Ly = Mat::Zero(d, d), Lz = Mat::Zero(d, d);
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
            double cot = std::cos(PI * (i - j) / N) / std::sin(PI * (i - j) / N);
            Lx += cot * (sy[i] * sz[j] - sz[i] * sy[j]);
            Ly += cot * (sz[i] * sx[j] - sx[i] * sz[j]);
            Lz += cot * (sx[i] * sy[j] - sy[i] * sx[j]);
        }
    out = -II * (Sx * Lx + Sy * Ly + Sz * Lz);
    return out;
}

std::string Motif::to_json() const {
    nlohmann::ordered_json j;
    j["N"] = N;
    j["J"] = J;
    j["content"] = content;
    j["dim"] = dim;
    j["valid"] = valid;
    return j.dump();
}

Motif motif_info(int N, std::vector<int> J) {
    Motif m;
    m.N = N;
    std::sort(J.begin(), J.end());
    m.J = J;
    m.valid = true;
    for (int j : J)
        if (j < 1 || j >= N) m.valid = false;
    for (size_t k = 0; k + 1 < J.size(); ++k)
        if (J[k + 1] - J[k] < 2) m.valid = false;  // no two consecutive
    if (!m.valid) return m;
    std::vector<bool> kept(N + 2, true);
    for (int j : J) {
        kept[j] = false;
        kept[j + 1] = false;
    }
    m.dim = 1;
    int run = 0;
    for (int i = 1; i <= N + 1; ++i) {
        if (i <= N && kept[i]) {
            ++run;
        } else if (run > 0) {
            m.content.push_back(run);
            m.dim *= run + 1;
            run = 0;
        }
    }
    return m;
}

std::vector<Motif> enumerate_motifs(int N) {
    std::vector<Motif> out;
    for (std::uint32_t mask = 0; mask < (1u << (N - 1)); ++mask) {
        if (mask & (mask << 1)) continue;  // consecutive elements
        std::vector<int> J;
        for (int j = 1; j < N; ++j)
            if (mask & (1u << (j - 1))) J.push_back(j);
        out.push_back(motif_info(N, J));
    }
    return out;
}

std::vector<BetheSolution> frozen_bethe(int N, const std::vector<int>& J, int M, cplx kappa,
                                        unsigned seed) {
    Motif motif = motif_info(N, J);
    if (!motif.valid) throw std::invalid_argument("invalid motif");
    std::vector<double> delta;
    {
        std::vector<bool> kept(N + 1, true);
        for (int j : motif.J) {
            kept[j] = false;
            kept[j + 1] = false;
        }
        for (int i = 1; i <= N; ++i)
            if (kept[i]) delta.push_back((N + 1 - 2.0 * i) / 2.0);
    }
    const int L = static_cast<int>(delta.size());
    if (M < 0 || M > L) throw std::invalid_argument("magnon number exceeds the frozen chain length");

    // The periodic point is handled by the untwisted Wronskian system solved
    // directly (an epsilon-twisted solve is ill-conditioned here: the dual
    // polynomial's monic-normalized coefficients blow up like 1/epsilon).
    const bool periodic = std::abs(kappa - 1.0) < 1e-9;
    ChainSpec spec;
    spec.L = L;
    spec.kappa = periodic ? cplx{1.0, 0.0} : kappa;
    for (double d : delta) spec.theta.push_back(cplx{0.0, -d});
    QQOptions opt;
    opt.seed = seed;
    opt.starts = 3000;
    opt.periodic = periodic;
    std::vector<BetheSolution> out;
    for (auto& [q, qt] : qq_solve(spec, M, opt)) {
        BetheSolution sol;
        sol.M = M;
        for (cplx r : q.roots) sol.roots.push_back(-II * r);
        for (cplx r : qt.roots) sol.dual_roots.push_back(-II * r);
        double common = 1e300;
        for (cplx a : q.roots)
            for (cplx b : qt.roots) common = std::min(common, std::abs(a - b));
        if (common < 1e-2) continue;  // does not survive freezing
        auto res = bethe_residual(spec, q.roots);
        for (cplx r : res) sol.residual = std::max(sol.residual, std::abs(r));
        sol.admissible = true;
        out.push_back(std::move(sol));
    }
    return out;
}

std::vector<cplx> frozen_charges(int N, const std::vector<int>& J,
                                 const std::vector<cplx>& roots_x, cplx kappa, int nmax) {
    Motif motif = motif_info(N, J);
    if (!motif.valid) throw std::invalid_argument("invalid motif");
    const int len = nmax + 1;
    // truncated large-x series with coefficients on x^{-n}
    auto mul = [len](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        std::vector<cplx> out(len, cplx{});
        for (int i = 0; i < len; ++i)
            for (int j = 0; i + j < len; ++j) out[i + j] += a[i] * b[j];
        return out;
    };
    auto ratio = [len](cplx a, cplx b) {
        // (x + a)/(x + b) = 1 + (a-b)/x - b(a-b)/x^2 + b^2 (a-b)/x^3 - ...
        std::vector<cplx> out(len, cplx{});
        out[0] = 1.0;
        cplx diff = a - b, bp{1.0, 0.0};
        for (int n = 1; n < len; ++n) {
            out[n] = diff * bp;
            bp *= -b;
        }
        return out;
    };
    std::vector<bool> kept(N + 1, true);
    for (int j : motif.J) {
        kept[j] = false;
        kept[j + 1] = false;
    }
    std::vector<cplx> pref(len, cplx{}), apart(len, cplx{}), dpart(len, cplx{});
    pref[0] = 1.0;
    apart[0] = kappa;
    dpart[0] = 1.0 / kappa;
    auto delta_of = [&](int i) { return (N + 1 - 2.0 * i) / 2.0; };
    for (int j : motif.J) pref = mul(pref, ratio(delta_of(j) + 1.0, delta_of(j)));
    for (int i = 1; i <= N; ++i)
        if (kept[i]) apart = mul(apart, ratio(delta_of(i) + 1.0, delta_of(i)));
    for (cplx r : roots_x) {
        apart = mul(apart, ratio(-0.5 - r, 0.5 - r));
        dpart = mul(dpart, ratio(1.5 - r, 0.5 - r));
    }
    std::vector<cplx> total = mul(pref, apart), dd = mul(pref, dpart);
    for (int k = 0; k < len; ++k) total[k] += dd[k];
    return total;
}

namespace {

// x_{1,+-} of the N=4 example at finite beta; beta -> infinity gives the
// frozen pair.
std::pair<cplx, cplx> n4_roots_closed_form(double beta, cplx kappa) {
    cplx k2 = kappa * kappa;
    cplx disc = (3 * beta + 2) * (3 * beta + 2) * k2 * k2 -
                2 * (7 * beta * beta + 12 * beta + 4) * k2 + (3 * beta + 2) * (3 * beta + 2);
    cplx root = std::sqrt(disc);
    cplx den = 2 * beta * (kappa - 1.0 / kappa);
    cplx xp = -((beta + 2) * kappa + (beta - 2) / kappa + root / kappa) / den;
    cplx xm = -((beta + 2) * kappa + (beta - 2) / kappa - root / kappa) / den;
    return {xp, xm};
}

std::pair<cplx, cplx> n4_frozen_roots(cplx kappa) {
    cplx k2 = kappa * kappa;
    cplx root = std::sqrt(9.0 * k2 * k2 - 14.0 * k2 + 9.0);
    cplx den = 2.0 * (kappa - 1.0 / kappa);
    return {-(kappa + 1.0 / kappa + root / kappa) / den,
            -(kappa + 1.0 / kappa - root / kappa) / den};
}

Vec n4_psi_reference(cplx x0) {
    // i(|uudd> - |uddu> - |duud> + |dduu>) - x0 (|dudu> - |udud>)
    Vec psi = Vec::Zero(16);
    psi(0b0011) = II;
    psi(0b0110) = -II;
    psi(0b1001) = -II;
    psi(0b1100) = II;
    psi(0b1010) = -x0;
    psi(0b0101) = x0;
    return psi;
}

}  // namespace

std::string N4Report::to_json() const {
    nlohmann::ordered_json j;
    j["kappa"] = json_complex(kappa);
    j["x_plus"] = json_complex(x_plus);
    j["x_minus"] = json_complex(x_minus);
    j["x0_plus"] = json_complex(x0_plus);
    j["x0_minus"] = json_complex(x0_minus);
    j["c_plus"] = json_complex(c_plus);
    j["c_minus"] = json_complex(c_minus);
    j["t2_eig_plus"] = json_complex(t2_eig_plus);
    j["t2_eig_minus"] = json_complex(t2_eig_minus);
    j["max_error"] = max_error;
    auto amps = [](const Vec& v) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (int k = 0; k < v.size(); ++k) a.push_back(json_complex(v(k)));
        return a;
    };
    j["hw_frozen"] = amps(hw_frozen);
    j["psi_plus"] = amps(psi_plus);
    j["psi_minus"] = amps(psi_minus);
    return j.dump();
}

N4Report n4_example(cplx kappa, const Rational& beta_freeze) {
    if (std::abs(kappa) < 1e-12 || std::abs(kappa - 1.0) < 1e-9 || std::abs(kappa + 1.0) < 1e-9)
        throw std::invalid_argument("the twisted branch needs kappa outside {0, +-1}");
    N4Report rep;
    rep.kappa = kappa;
    const Composition lambda{2, 1, 1, 0};
    const double b = beta_freeze.get_d();

    // pipeline roots at large beta and their frozen closed forms
    auto sols = cs_bethe_solutions(lambda, beta_freeze, kappa, 1);
    std::vector<cplx> solver_roots;
    for (const auto& s : sols)
        if (s.admissible) solver_roots.push_back(s.roots[0]);
    if (solver_roots.size() != 2) throw std::runtime_error("expected two one-magnon solutions");
    auto [x0p, x0m] = n4_frozen_roots(kappa);
    rep.x0_plus = x0p;
    rep.x0_minus = x0m;
    if (std::abs(solver_roots[0] - x0p) > std::abs(solver_roots[1] - x0p))
        std::swap(solver_roots[0], solver_roots[1]);
    rep.x_plus = solver_roots[0];
    rep.x_minus = solver_roots[1];
    auto [xbp, xbm] = n4_roots_closed_form(b, kappa);
    rep.max_error = std::max(std::abs(rep.x_plus - xbp), std::abs(rep.x_minus - xbm));

    // frozen highest-weight vector
    JackTable table(4, beta_freeze, false);
    SpinPolyVector hw = highest_weight_vector(lambda, beta_freeze);
    rep.hw_frozen = evaluate(hw);
    Vec hw_expected = Vec::Zero(16);
    hw_expected(0b1000) = -4.0 * II;
    hw_expected(0b0100) = 4.0 * II;
    hw_expected(0b0010) = -4.0 * II;
    hw_expected(0b0001) = 4.0 * II;
    rep.max_error = std::max(rep.max_error, (rep.hw_frozen - hw_expected).norm());

    // Bethe states from the B-operator on F_lambda
    JackSpinVector jv = to_jack_basis(hw, table);
    auto b_state = [&](cplx x) {
        return evaluate(cs_monodromy_apply(jv, MonodromyEntry::B, x, beta_freeze), table);
    };
    rep.psi_plus = b_state(rep.x_plus);
    rep.psi_minus = b_state(rep.x_minus);

    // reference: c_pm |Psi_pm> with the displayed scalars
    cplx ki = 1.0 / kappa;
    cplx fac = (1.0 - ki) * (x0m - 2.0) / (std::sqrt(2.0) * x0p);
    rep.c_plus = 2.0 * std::sqrt(2.0) * II * (1.0 + ki) * fac;
    rep.c_minus = -2.0 * std::sqrt(2.0) * II * (1.0 - ki) / fac;
    Vec ref_plus = rep.c_plus * n4_psi_reference(x0p);
    Vec ref_minus = rep.c_minus * n4_psi_reference(x0m);
    rep.max_error = std::max(rep.max_error, (rep.psi_plus - ref_plus).norm() / ref_plus.norm());
    rep.max_error = std::max(rep.max_error, (rep.psi_minus - ref_minus).norm() / ref_minus.norm());

    // t2^HS eigenvalues -(kappa - kappa^{-1}) x0_pm
    Mat t2 = hs_t2(4, kappa);
    auto eig_of = [&](const Vec& psi, cplx expected) {
        Vec img = t2 * psi;
        Eigen::Index idx = 0;
        psi.cwiseAbs().maxCoeff(&idx);
        cplx eig = img(idx) / psi(idx);
        rep.max_error = std::max(rep.max_error, (img - eig * psi).norm() / psi.norm());
        rep.max_error = std::max(rep.max_error, std::abs(eig - expected));
        return eig;
    };
    rep.t2_eig_plus = eig_of(rep.psi_plus, -(kappa - ki) * x0p);
    rep.t2_eig_minus = eig_of(rep.psi_minus, -(kappa - ki) * x0m);
    return rep;
}

N4PeriodicReport n4_periodic_limit(const Rational& beta_freeze) {
    N4PeriodicReport rep;
    const Composition lambda{2, 1, 1, 0};
    JackTable table(4, beta_freeze, false);
    SpinPolyVector hw = highest_weight_vector(lambda, beta_freeze);
    Vec hw_frozen = evaluate(hw);

    // descendant: -(i/8) S^- ev|0_lambda> = -(|dudu> - |udud>)
    GlobalSl2 g = global_sl2(4);
    rep.descendant = Vec((-II / 8.0) * (g.Sm * hw_frozen));
    Vec desc_expected = Vec::Zero(16);
    desc_expected(0b1010) = -1.0;
    desc_expected(0b0101) = 1.0;
    rep.max_error = (rep.descendant - desc_expected).norm();

    // highest-weight limit state: x -> 0 direction of ev[B(x)|0_lambda>]
    JackSpinVector jv = to_jack_basis(hw, table);
    Vec psi = evaluate(cs_monodromy_apply(jv, MonodromyEntry::B, cplx{0.0, 0.0}, beta_freeze), table);
    Vec ref = Vec::Zero(16);
    ref(0b0011) = II;
    ref(0b0110) = -II;
    ref(0b1001) = -II;
    ref(0b1100) = II;
    Eigen::Index idx = 0;
    ref.cwiseAbs().maxCoeff(&idx);
    cplx scale = psi(idx) / ref(idx);
    rep.highest_weight = Vec(psi / scale);
    rep.max_error = std::max(rep.max_error, (rep.highest_weight - ref).norm() / ref.norm());
    return rep;
}

}  // namespace spincs
