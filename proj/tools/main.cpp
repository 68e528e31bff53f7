#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "spincs/bethe.hpp"
#include "spincs/freezing.hpp"
#include "spincs/fusion.hpp"
#include "spincs/report.hpp"
#include "spincs/spin_cs.hpp"

using namespace spincs;
using nlohmann::ordered_json;

namespace {

int thread_count() {
    if (const char* env = std::getenv("SPINCS_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

std::vector<cplx> parse_complex_list(const std::string& csv) {
    std::vector<cplx> out;
    std::string token;
    std::istringstream ss(csv);
    while (std::getline(ss, token, ',')) out.push_back(parse_complex(token));
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::string token;
    std::istringstream ss(csv);
    while (std::getline(ss, token, ',')) out.push_back(std::stoi(token));
    return out;
}

ordered_json solution_json(const BetheSolution& s) {
    return ordered_json::parse(s.to_json());
}

// Reports are written in one shot so partial output never lands on disk.
void write_output(const ordered_json& report, const std::string& path) {
    std::string text = report.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file " + tmp);
        os << text;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move report into place at " + path);
}

void write_csv_roots(const std::vector<BetheSolution>& sols, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open csv file " + path);
    os << "solution,root,re,im\n";
    os.precision(17);
    for (size_t s = 0; s < sols.size(); ++s)
        for (size_t r = 0; r < sols[s].roots.size(); ++r)
            os << s << "," << r << "," << sols[s].roots[r].real() << ","
               << sols[s].roots[r].imag() << "\n";
}

ordered_json repro_n4() {
    auto rep = n4_example(cplx{1.5, 0.0});
    auto per = n4_periodic_limit();
    ordered_json j = ordered_json::parse(rep.to_json());
    j["periodic_limit_error"] = per.max_error;
    j["ok"] = rep.max_error < 1e-9 && per.max_error < 1e-9;
    return j;
}

ordered_json repro_frozen(int N, std::vector<int> J, int M, const std::vector<cplx>& expected) {
    auto sols = frozen_bethe(N, J, M, cplx{1.0, 0.0});
    ordered_json j;
    j["N"] = N;
    j["J"] = J;
    j["M"] = M;
    j["survivors"] = ordered_json::array();
    double err = 1e300;
    for (const auto& s : sols) {
        j["survivors"].push_back(solution_json(s));
        std::vector<cplx> pool = expected;
        double worst = 0.0;
        for (cplx r : s.roots) {
            double best = 1e300;
            size_t arg = 0;
            for (size_t k = 0; k < pool.size(); ++k)
                if (std::abs(pool[k] - r) < best) { best = std::abs(pool[k] - r); arg = k; }
            worst = std::max(worst, best);
            if (!pool.empty()) pool.erase(pool.begin() + static_cast<long>(arg));
        }
        err = std::min(err, worst);
    }
    j["max_root_error"] = err;
    j["ok"] = err < 1e-8;
    return j;
}

ordered_json repro_l4_fusion() {
    std::vector<cplx> theta{cplx{0.3, 0.0}, cplx{-0.4, 0.0}, cplx{-0.4, 1.0}, cplx{1.1, 0.0}};
    ChainSpec spec{4, theta, cplx{1.0, 0.0}};
    ordered_json j;
    j["theta"] = ordered_json::array();
    for (cplx t : theta) j["theta"].push_back(json_complex(t));
    double worst = 0.0;

    // B(u0)|0> matches the embedded singlet pattern
    Vec v = b_at_special_root(spec, 2);
    Vec pattern = Vec::Zero(16);
    pattern(0b0100) = 1.0;
    pattern(0b0010) = -1.0;
    cplx scale = v(0b0100);
    worst = std::max(worst, (v - scale * pattern).norm() / std::abs(scale));
    j["b_at_u0_error"] = (v - scale * pattern).norm() / std::abs(scale);

    // leakage of the invariant subspace
    auto sub = invariant_subspace(2, -1, 4);
    auto leak = invariance_check(spec, sub);
    j["leakage"] = leak.inside;
    j["complement_leakage"] = leak.complement;
    worst = std::max(worst, leak.inside);

    // reduced-chain root u' = (theta_1 + theta_4)/2
    auto red = reduced_chain(spec, detect_fusion(theta));
    auto sols = tq_extract(red.spec, 1);
    cplx uprime = 0.5 * (theta[0] + theta[3]);
    double root_err = 1e300;
    for (const auto& s : sols)
        if (s.admissible) root_err = std::min(root_err, std::abs(s.roots[0] - uprime));
    j["reduced_root_error"] = root_err;
    worst = std::max(worst, root_err);

    // eigenvalue multiplicity pattern {5,3,3,3,1,1} at kappa=1
    Mat t = transfer(spec).eval(cplx{0.377, 0.211});
    Eigen::ComplexEigenSolver<Mat> es(t, false);
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + 16);
    std::vector<int> mult;
    std::vector<bool> used(16, false);
    for (int a = 0; a < 16; ++a) {
        if (used[a]) continue;
        int count = 0;
        for (int b = 0; b < 16; ++b)
            if (!used[b] && std::abs(ev[b] - ev[a]) < 1e-7 * std::max(1.0, std::abs(ev[a]))) {
                used[b] = true;
                ++count;
            }
        mult.push_back(count);
    }
    std::sort(mult.rbegin(), mult.rend());
    j["multiplicities"] = mult;
    bool pattern_ok = mult == std::vector<int>{5, 3, 3, 3, 1, 1};
    j["ok"] = pattern_ok && worst < 1e-9;
    return j;
}

ordered_json repro_gt_limit() {
    std::vector<cplx> theta{cplx{0.31, 0.0}, cplx{-0.62, 0.21}, cplx{1.17, -0.4}, cplx{-1.45, 0.1}};
    ChainSpec spec{4, theta, cplx{1e6, 0.0}};
    ordered_json j;
    double worst_root = 0.0, worst_alpha = 0.0;
    NewtonOptions opt;
    opt.threads = thread_count();
    Monodromy m = monodromy(spec);
    Vec vac = Vec::Zero(16);
    vac(0) = 1.0;
    for (int M = 0; M <= 4; ++M) {
        auto sols = newton_solve(spec, M, opt);
        for (const auto& s : sols) {
            if (!s.admissible) continue;
            // match each root to the nearest theta_i - i/2
            std::vector<int> subset;
            for (cplx r : s.roots) {
                double best = 1e300;
                int arg = 0;
                for (int i = 0; i < 4; ++i)
                    if (std::abs(r - (theta[i] - II * 0.5)) < best) {
                        best = std::abs(r - (theta[i] - II * 0.5));
                        arg = i;
                    }
                worst_root = std::max(worst_root, best);
                subset.push_back(arg + 1);
            }
            // A-eigenvalue matches the factorized form
            Vec psi = aba_state(m, s.roots, vac);
            Poly alpha = gt_alpha(spec, subset);
            for (cplx u : {cplx{0.4, 0.3}, cplx{-1.2, 0.1}}) {
                cplx a = alpha.eval(u);
                worst_alpha = std::max(worst_alpha,
                                       ((m.A.eval(u) * psi) - a * psi).norm() /
                                           (psi.norm() * std::max(1.0, std::abs(a))));
            }
        }
    }
    j["max_root_deviation"] = worst_root;
    j["max_alpha_residual"] = worst_alpha;
    j["ok"] = worst_root < 1e-4 && worst_alpha < 1e-6;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spincs: inhomogeneous twisted XXX chains, spin-Calogero-Sutherland "
                 "charges, and Haldane-Shastry freezing"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_path, csv_path, config_path;
    app.add_option("--out", out_path, "write the JSON report to this file (default stdout)");
    app.add_option("--config", config_path, "JSON file with {\"args\": [...]} replacing the argv");

    // chain spectrum
    auto* chain = app.add_subcommand("chain", "transfer-matrix computations")->fallthrough();
    auto* spectrum = chain->add_subcommand("spectrum", "eigenvalues of t(u*; kappa)")->fallthrough();
    std::string theta_csv, kappa_str{"1"}, u_str{"0.4711+0.3181i"};
    int L = 0;
    spectrum->add_option("--L", L, "chain length")->required();
    spectrum->add_option("--theta", theta_csv, "comma-separated inhomogeneities")->required();
    spectrum->add_option("--kappa", kappa_str, "twist");
    spectrum->add_option("--u", u_str, "evaluation point");

    // bethe solve
    auto* bethe = app.add_subcommand("bethe", "Bethe-equation solvers")->fallthrough();
    auto* solve = bethe->add_subcommand("solve", "solve the Bethe equations in a magnon sector")->fallthrough();
    int M = 0;
    std::string mode{"newton"};
    solve->add_option("--L", L, "chain length")->required();
    solve->add_option("--theta", theta_csv, "comma-separated inhomogeneities")->required();
    solve->add_option("--kappa", kappa_str, "twist");
    solve->add_option("--M", M, "magnon number")->required();
    solve->add_option("--mode", mode, "newton | tq | qq")->check(CLI::IsMember({"newton", "tq", "qq"}));
    solve->add_option("--csv", csv_path, "also write the roots as CSV");

    // fusion analyze
    auto* fusion_cmd = app.add_subcommand("fusion", "fusion pattern analysis")->fallthrough();
    auto* analyze = fusion_cmd->add_subcommand("analyze", "detect and classify resonances")->fallthrough();
    analyze->add_option("--theta", theta_csv, "comma-separated inhomogeneities")->required();
    analyze->add_option("--kappa", kappa_str, "twist used for the leakage report");

    // jack eval
    auto* jack = app.add_subcommand("jack", "nonsymmetric Jack polynomials")->fallthrough();
    auto* jeval = jack->add_subcommand("eval", "compute E_mu exactly")->fallthrough();
    std::string mu_csv, beta_str{"1"};
    jeval->add_option("--mu", mu_csv, "composition, e.g. 1,0,1,2")->required();
    jeval->add_option("--beta", beta_str, "exact rational coupling, e.g. 2 or 3/2");

    // cs sector
    auto* cs = app.add_subcommand("cs", "spin-Calogero-Sutherland sectors")->fallthrough();
    auto* sector_cmd = cs->add_subcommand("sector", "effective-chain report for a partition")->fallthrough();
    std::string lambda_csv;
    int cs_M = -1;
    sector_cmd->add_option("--lambda", lambda_csv, "partition, e.g. 2,1,1,0")->required();
    sector_cmd->add_option("--beta", beta_str, "exact rational coupling");
    sector_cmd->add_option("--kappa", kappa_str, "twist");
    sector_cmd->add_option("--M", cs_M, "also solve this magnon sector");

    // freeze motif
    auto* freeze = app.add_subcommand("freeze", "Haldane-Shastry freezing")->fallthrough();
    auto* motif_cmd = freeze->add_subcommand("motif", "frozen chain and Bethe roots for a motif")->fallthrough();
    int N = 0;
    std::string j_csv;
    motif_cmd->add_option("--N", N, "number of sites")->required();
    motif_cmd->add_option("--J", j_csv, "motif, e.g. 4 or 2,5 (empty allowed)");
    motif_cmd->add_option("--M", M, "magnon number")->required();
    motif_cmd->add_option("--kappa", kappa_str, "twist");

    // repro
    auto* repro = app.add_subcommand("repro", "reproduction suite")->fallthrough();
    std::string which;
    repro->add_option("case", which, "n4 | n7 | n8 | L4-fusion | gt-limit")->required();

    // config-file indirection: replace argv before parsing
    std::vector<std::string> config_args;
    for (int k = 1; k < argc; ++k)
        if (std::string(argv[k]) == "--config" && k + 1 < argc) config_path = argv[k + 1];
    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) {
            std::cerr << "cannot read config file " << config_path << "\n";
            return 2;
        }
        nlohmann::json cfg;
        try {
            is >> cfg;
            if (!cfg.contains("args") || !cfg["args"].is_array())
                throw std::runtime_error("config must contain an \"args\" array");
            for (const auto& a : cfg["args"]) config_args.push_back(a.get<std::string>());
        } catch (const std::exception& e) {
            std::cerr << "invalid config: " << e.what() << "\n";
            return 2;
        }
        std::vector<char*> fake{argv[0]};
        for (auto& a : config_args) fake.push_back(a.data());
        argc = static_cast<int>(fake.size());
        static std::vector<char*> storage;
        storage = fake;
        argv = storage.data();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        ordered_json config, results;
        std::string command;
        if (*spectrum) {
            command = "chain spectrum";
            ChainSpec spec{L, parse_complex_list(theta_csv), parse_complex(kappa_str)};
            spec.validate();
            cplx u = parse_complex(u_str);
            config = ordered_json::parse(spec.to_json());
            config["u"] = json_complex(u);
            Mat t = transfer(spec).eval(u);
            Eigen::ComplexEigenSolver<Mat> es(t, false);
            results["eigenvalues"] = ordered_json::array();
            std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + t.rows());
            std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
                if (std::abs(a.real() - b.real()) > 1e-12) return a.real() < b.real();
                return a.imag() < b.imag();
            });
            for (cplx e : ev) results["eigenvalues"].push_back(json_complex(e));
        } else if (*solve) {
            command = "bethe solve";
            ChainSpec spec{L, parse_complex_list(theta_csv), parse_complex(kappa_str)};
            spec.validate();
            config = ordered_json::parse(spec.to_json());
            config["M"] = M;
            config["mode"] = mode;
            std::vector<BetheSolution> sols;
            if (mode == "newton") {
                NewtonOptions opt;
                opt.threads = thread_count();
                sols = newton_solve(spec, M, opt);
            } else if (mode == "tq") {
                sols = tq_extract(spec, M);
            } else {
                for (auto& [q, qt] : qq_solve(spec, M)) {
                    BetheSolution s;
                    s.M = M;
                    s.roots = q.roots;
                    s.dual_roots = qt.roots;
                    auto res = bethe_residual(spec, s.roots);
                    for (cplx r : res) s.residual = std::max(s.residual, std::abs(r));
                    s.admissible = true;
                    s.tau = tau_from_Q(spec, q, &s.residual);
                    sols.push_back(std::move(s));
                }
            }
            results["solutions"] = ordered_json::array();
            for (const auto& s : sols) results["solutions"].push_back(solution_json(s));
            if (!csv_path.empty()) write_csv_roots(sols, csv_path);
            bool converged = M == 0 || !sols.empty();
            if (!converged) {
                write_output(emit_report(command, config, results), out_path);
                return 3;
            }
        } else if (*analyze) {
            command = "fusion analyze";
            auto theta = parse_complex_list(theta_csv);
            config["theta"] = ordered_json::array();
            for (cplx t : theta) config["theta"].push_back(json_complex(t));
            auto pattern = detect_fusion(theta);
            results = ordered_json::parse(pattern.to_json());
            results["u0"] = ordered_json::array();
            for (auto [j, sign] : pattern.pairs)
                results["u0"].push_back(json_complex(special_root(theta, j)));
            if (!pattern.pairs.empty()) {
                ChainSpec spec{static_cast<int>(theta.size()), theta, parse_complex(kappa_str)};
                results["leakage"] = ordered_json::array();
                for (auto [j, sign] : pattern.pairs) {
                    auto sub = invariant_subspace(j, sign < 0 ? -1 : 1, spec.L);
                    auto leak = invariance_check(spec, sub);
                    results["leakage"].push_back(
                        {{"j", j}, {"inside", leak.inside}, {"complement", leak.complement}});
                }
            }
        } else if (*jeval) {
            command = "jack eval";
            auto mu = parse_int_list(mu_csv);
            Rational beta = parse_rational(beta_str);
            config["mu"] = mu;
            config["beta"] = rational_to_string(beta);
            LaurentPoly e = nonsym_jack(mu, beta);
            results["terms"] = ordered_json::array();
            for (const auto& [exp, coeff] : e.terms())
                results["terms"].push_back(
                    {{"exponents", exp}, {"coeff", rational_to_string(coeff)}});
            auto deltas = delta_eigenvalue(mu, beta);
            results["delta"] = ordered_json::array();
            for (const auto& d : deltas) results["delta"].push_back(rational_to_string(d));
        } else if (*sector_cmd) {
            command = "cs sector";
            auto lambda = parse_int_list(lambda_csv);
            Rational beta = parse_rational(beta_str);
            cplx kappa = parse_complex(kappa_str);
            config["lambda"] = lambda;
            config["beta"] = rational_to_string(beta);
            config["kappa"] = json_complex(kappa);
            results = ordered_json::parse(sector_report_json(lambda, beta, kappa));
            if (cs_M >= 0) {
                results["solutions"] = ordered_json::array();
                for (const auto& s : cs_bethe_solutions(lambda, beta, kappa, cs_M)) {
                    ordered_json sj = solution_json(s);
                    auto tau = cs_transfer_eigenvalue(lambda, beta, kappa, s);
                    sj["tau_series"] = ordered_json::array();
                    for (cplx c : tau.series) sj["tau_series"].push_back(json_complex(c));
                    results["solutions"].push_back(sj);
                }
            }
        } else if (*motif_cmd) {
            command = "freeze motif";
            std::vector<int> J = j_csv.empty() ? std::vector<int>{} : parse_int_list(j_csv);
            cplx kappa = parse_complex(kappa_str);
            config["N"] = N;
            config["J"] = J;
            config["M"] = M;
            config["kappa"] = json_complex(kappa);
            Motif motif = motif_info(N, J);
            if (!motif.valid) {
                std::cerr << "invalid motif\n";
                return 2;
            }
            results = ordered_json::parse(motif.to_json());
            results["solutions"] = ordered_json::array();
            for (const auto& s : frozen_bethe(N, J, M, kappa)) {
                ordered_json sj = solution_json(s);
                auto charges = frozen_charges(N, J, s.roots, kappa);
                sj["charges"] = {{"tau1", json_complex(charges[1])},
                                 {"tau2", json_complex(charges[2])},
                                 {"tau3", json_complex(charges[3])}};
                results["solutions"].push_back(sj);
            }
        } else if (*repro) {
            command = "repro " + which;
            config["case"] = which;
            if (which == "n4") {
                results = repro_n4();
            } else if (which == "n7") {
                results = repro_frozen(7, {4}, 2,
                                       {cplx{1.0, -std::sqrt(3.0) / 2}, cplx{1.0, std::sqrt(3.0) / 2}});
            } else if (which == "n8") {
                results = repro_frozen(8, {4}, 3,
                                       {cplx{0.0, -std::sqrt(5.0)}, cplx{}, cplx{0.0, std::sqrt(5.0)}});
            } else if (which == "L4-fusion") {
                results = repro_l4_fusion();
            } else if (which == "gt-limit") {
                results = repro_gt_limit();
            } else {
                std::cerr << "unknown repro case " << which << "\n";
                return 1;
            }
        }
        write_output(emit_report(command, config, results), out_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
