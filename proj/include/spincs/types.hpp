#pragma once

#include <complex>
#include <Eigen/Dense>

namespace spincs {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr cplx II{0.0, 1.0};

inline double rel_err(cplx a, cplx b) {
    double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) / scale;
}

}  // namespace spincs
