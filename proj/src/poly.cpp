#include "spincs/poly.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace spincs {

Poly Poly::monomial(int k, cplx a) {
    std::vector<cplx> c(k + 1, cplx{});
    c[k] = a;
    return Poly(std::move(c));
}

Poly Poly::from_roots(const std::vector<cplx>& roots) {
    Poly p = Poly::one();
    for (cplx r : roots) p = p * Poly({-r, cplx{1.0, 0.0}});
    return p;
}

int Poly::degree() const {
    for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k)
        if (c_[k] != cplx{}) return k;
    return -1;
}

cplx Poly::leading() const {
    int d = degree();
    return d < 0 ? cplx{} : c_[d];
}

cplx Poly::eval(cplx u) const {
    cplx out = c_.back();
    for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k) out = out * u + c_[k];
    return out;
}

Poly Poly::shifted(cplx a) const {
    const int n = static_cast<int>(c_.size());
    std::vector<cplx> out(n, cplx{});
    std::vector<std::vector<double>> binom(n, std::vector<double>(n, 0.0));
    for (int k = 0; k < n; ++k) {
        binom[k][0] = 1.0;
        for (int j = 1; j <= k; ++j) binom[k][j] = binom[k - 1][j - 1] + (j <= k - 1 ? binom[k - 1][j] : 0.0);
    }
    for (int k = 0; k < n; ++k) {
        cplx ap = 1.0;
        for (int j = k; j >= 0; --j) {
            out[j] += c_[k] * binom[k][j] * ap;
            ap *= a;
        }
    }
    return Poly(std::move(out));
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<cplx> out(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) out[k - 1] = c_[k] * static_cast<double>(k);
    return Poly(std::move(out));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<cplx> out(std::max(c_.size(), o.c_.size()), cplx{});
    for (size_t k = 0; k < c_.size(); ++k) out[k] += c_[k];
    for (size_t k = 0; k < o.c_.size(); ++k) out[k] += o.c_[k];
    return Poly(std::move(out));
}

Poly Poly::operator-(const Poly& o) const { return *this + o * cplx{-1.0, 0.0}; }

Poly Poly::operator*(const Poly& o) const {
    std::vector<cplx> out(c_.size() + o.c_.size() - 1, cplx{});
    for (size_t a = 0; a < c_.size(); ++a)
        for (size_t b = 0; b < o.c_.size(); ++b) out[a + b] += c_[a] * o.c_[b];
    return Poly(std::move(out));
}

Poly Poly::operator*(cplx s) const {
    std::vector<cplx> out = c_;
    for (auto& x : out) x *= s;
    return Poly(std::move(out));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
    int dd = d.degree();
    if (dd < 0) throw std::invalid_argument("division by zero polynomial");
    std::vector<cplx> rem = c_;
    rem.resize(std::max<size_t>(rem.size(), dd + 1), cplx{});
    int dn = degree();
    if (dn < dd) return {Poly(), *this};
    std::vector<cplx> quot(dn - dd + 1, cplx{});
    for (int k = dn; k >= dd; --k) {
        cplx f = rem[k] / d.coeff(dd);
        quot[k - dd] = f;
        for (int j = 0; j <= dd; ++j) rem[k - dd + j] -= f * d.coeff(j);
    }
    rem.resize(dd > 0 ? dd : 1);
    return {Poly(std::move(quot)), Poly(std::move(rem))};
}

std::vector<cplx> Poly::roots() const {
    int d = degree();
    if (d <= 0) return {};
    Mat comp = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k) comp(k, d - 1) = -c_[k] / c_[d];
    for (int k = 1; k < d; ++k) comp(k, k - 1) = 1.0;
    Eigen::ComplexEigenSolver<Mat> es(comp, false);
    std::vector<cplx> out(d);
    for (int k = 0; k < d; ++k) out[k] = es.eigenvalues()(k);
    return out;
}

double Poly::max_abs_coeff() const {
    double m = 0.0;
    for (cplx x : c_) m = std::max(m, std::abs(x));
    return m;
}

Poly Poly::trimmed(double tol) const {
    std::vector<cplx> out = c_;
    while (out.size() > 1 && std::abs(out.back()) <= tol) out.pop_back();
    return Poly(std::move(out));
}

}  // namespace spincs
