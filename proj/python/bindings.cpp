#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <Eigen/Eigenvalues>

#include "spincs/bethe.hpp"
#include "spincs/freezing.hpp"
#include "spincs/fusion.hpp"
#include "spincs/report.hpp"
#include "spincs/spin_cs.hpp"

namespace py = pybind11;
using namespace spincs;

namespace {

ChainSpec make_spec(int L, const std::vector<cplx>& theta, cplx kappa) {
    ChainSpec spec{L, theta, kappa};
    spec.validate();
    return spec;
}

py::dict solution_dict(const BetheSolution& s) {
    py::dict d;
    d["M"] = s.M;
    d["roots"] = s.roots;
    d["dual_roots"] = s.dual_roots;
    d["residual"] = s.residual;
    d["admissible"] = s.admissible;
    d["flag"] = s.flag;
    d["tau_coeffs"] = s.tau.coeffs();
    return d;
}

std::vector<cplx> sorted_eigs(const Mat& m) {
    Eigen::ComplexEigenSolver<Mat> es(m, false);
    std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        if (std::abs(a.real() - b.real()) > 1e-12) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

}  // namespace

PYBIND11_MODULE(_spincs, m) {
    m.doc() = "inhomogeneous twisted XXX chains, spin-Calogero-Sutherland charges, "
              "and Haldane-Shastry freezing";

    m.def("version", [] { return std::string("0.1.0"); });

    m.def(
        "chain_spectrum",
        [](int L, const std::vector<cplx>& theta, cplx kappa, cplx u) {
            return sorted_eigs(transfer(make_spec(L, theta, kappa)).eval(u));
        },
        py::arg("L"), py::arg("theta"), py::arg("kappa"), py::arg("u") = cplx{0.4711, 0.3181},
        "eigenvalues of the twisted transfer matrix at the evaluation point");

    m.def(
        "bethe_solve",
        [](int L, const std::vector<cplx>& theta, cplx kappa, int M, const std::string& mode,
           int threads) {
            auto spec = make_spec(L, theta, kappa);
            std::vector<BetheSolution> sols;
            if (mode == "newton") {
                NewtonOptions opt;
                opt.threads = threads;
                sols = newton_solve(spec, M, opt);
            } else if (mode == "tq") {
                sols = tq_extract(spec, M);
            } else {
                throw std::invalid_argument("mode must be newton or tq");
            }
            py::list out;
            for (const auto& s : sols) out.append(solution_dict(s));
            return out;
        },
        py::arg("L"), py::arg("theta"), py::arg("kappa"), py::arg("M"),
        py::arg("mode") = "newton", py::arg("threads") = 1);

    m.def(
        "fusion_analyze",
        [](const std::vector<cplx>& theta) {
            auto pattern = detect_fusion(theta);
            py::dict d;
            d["class"] = to_string(pattern.cls);
            py::list pairs;
            for (auto [j, sign] : pattern.pairs) {
                py::dict p;
                p["j"] = j;
                p["sign"] = sign;
                p["u0"] = special_root(theta, j);
                pairs.append(p);
            }
            d["pairs"] = pairs;
            d["resonances"] = pattern.resonances;
            return d;
        },
        py::arg("theta"));

    m.def(
        "jack_eval",
        [](const std::vector<int>& mu, const std::string& beta) {
            Rational b = parse_rational(beta);
            LaurentPoly e = nonsym_jack(mu, b);
            py::list terms;
            for (const auto& [exp, coeff] : e.terms()) {
                py::dict t;
                t["exponents"] = exp;
                t["coeff"] = rational_to_string(coeff);
                terms.append(t);
            }
            py::list deltas;
            for (const auto& d : delta_eigenvalue(mu, b)) deltas.append(rational_to_string(d));
            py::dict out;
            out["terms"] = terms;
            out["delta"] = deltas;
            return out;
        },
        py::arg("mu"), py::arg("beta") = "1");

    m.def(
        "cs_sector",
        [](const std::vector<int>& lambda, const std::string& beta, cplx kappa) {
            return sector_report_json(lambda, parse_rational(beta), kappa);
        },
        py::arg("lambda"), py::arg("beta") = "2", py::arg("kappa") = cplx{1.0, 0.0},
        "JSON report with I/J sets, effective length and Dunkl eigenvalues");

    m.def(
        "cs_bethe_roots",
        [](const std::vector<int>& lambda, const std::string& beta, cplx kappa, int M) {
            py::list out;
            for (const auto& s : cs_bethe_solutions(lambda, parse_rational(beta), kappa, M))
                if (s.admissible) out.append(s.roots);
            return out;
        },
        py::arg("lambda"), py::arg("beta"), py::arg("kappa"), py::arg("M"));

    m.def(
        "hs_spectrum",
        [](int N) {
            std::vector<double> out;
            for (cplx e : sorted_eigs(hs_hamiltonian(N))) out.push_back(e.real());
            return out;
        },
        py::arg("N"), "sorted Haldane-Shastry spectrum");

    m.def(
        "motifs",
        [](int N) {
            py::list out;
            for (const auto& motif : enumerate_motifs(N)) {
                py::dict d;
                d["J"] = motif.J;
                d["content"] = motif.content;
                d["dim"] = motif.dim;
                out.append(d);
            }
            return out;
        },
        py::arg("N"));

    m.def(
        "frozen_bethe_roots",
        [](int N, const std::vector<int>& J, int M, cplx kappa) {
            py::list out;
            for (const auto& s : frozen_bethe(N, J, M, kappa)) out.append(s.roots);
            return out;
        },
        py::arg("N"), py::arg("J"), py::arg("M"), py::arg("kappa") = cplx{1.0, 0.0});

    m.def(
        "n4_example",
        [](cplx kappa) { return n4_example(kappa).to_json(); },
        py::arg("kappa") = cplx{1.5, 0.0}, "JSON report of the N=4 worked example");
}
