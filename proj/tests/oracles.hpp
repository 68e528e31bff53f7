#pragma once

// Test-side oracles, independent of the library's computation paths:
// long-double contour extraction of large-u series coefficients, dense
// spectra, and small random draws with fixed seeds.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "spincs/tensoralg.hpp"

namespace oracles {

using spincs::cplx;
using spincs::Mat;
using spincs::Vec;
using cplxld = std::complex<long double>;
using Matld = Eigen::Matrix<cplxld, Eigen::Dynamic, Eigen::Dynamic>;

inline Matld to_long_double(const Mat& m) {
    Matld out(m.rows(), m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out(r, c) = cplxld{static_cast<long double>(m(r, c).real()),
                               static_cast<long double>(m(r, c).imag())};
    return out;
}

inline Mat to_double(const Matld& m) {
    Mat out(m.rows(), m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out(r, c) = cplx{static_cast<double>(m(r, c).real()),
                             static_cast<double>(m(r, c).imag())};
    return out;
}

// Coefficient of u^{-n} of a matrix-valued function analytic at infinity,
// averaged over m points on the circle |u| = radius, with a two-radius
// Richardson step to suppress the first aliased term.
inline Mat series_coefficient(const std::function<Matld(cplxld)>& f, int n, int rows, int cols,
                              long double radius = 1.0e3L, int m = 16) {
    auto contour = [&](long double R) {
        Matld acc = Matld::Zero(rows, cols);
        for (int j = 0; j < m; ++j) {
            long double phi = 2.0L * 3.14159265358979323846264338328L * j / m;
            cplxld u = R * cplxld{std::cos(phi), std::sin(phi)};
            cplxld w = std::pow(u, n);
            acc += f(u) * w;
        }
        return Matld(acc / static_cast<long double>(m));
    };
    Matld c1 = contour(radius);
    Matld c2 = contour(2.0L * radius);
    long double f2 = std::pow(2.0L, m);  // first alias sits m powers down
    Matld extrap = (f2 * c2 - c1) / (f2 - 1.0L);
    return to_double(extrap);
}

// Polynomial operator evaluated in long double for use as the f above.
inline std::function<Matld(cplxld)> op_poly_ld(const spincs::OpPoly& p) {
    std::vector<Matld> coeffs;
    for (const auto& c : p.coeffs()) coeffs.push_back(to_long_double(c));
    return [coeffs](cplxld u) {
        Matld out = coeffs.back();
        for (int k = static_cast<int>(coeffs.size()) - 2; k >= 0; --k) out = out * u + coeffs[k];
        return out;
    };
}

inline std::vector<cplx> sorted_eigenvalues(const Mat& m) {
    Eigen::ComplexEigenSolver<Mat> es(m, false);
    std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

// Greedy multiset match: max over elements of min distance to the other set.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return 1e300;
    double worst = 0.0;
    for (cplx x : a) {
        double best = 1e300;
        size_t arg = 0;
        for (size_t k = 0; k < b.size(); ++k)
            if (std::abs(b[k] - x) < best) { best = std::abs(b[k] - x); arg = k; }
        worst = std::max(worst, best);
        b.erase(b.begin() + static_cast<long>(arg));
    }
    return worst;
}

inline std::vector<cplx> random_complex(int n, unsigned seed, double scale = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<cplx> out(n);
    for (auto& z : out) z = scale * cplx{unif(rng), unif(rng)};
    return out;
}

inline Vec random_state(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    Vec v(dim);
    for (int k = 0; k < dim; ++k) v(k) = cplx{g(rng), g(rng)};
    return v / v.norm();
}

}  // namespace oracles
