#include "spincs/tensoralg.hpp"

namespace spincs {

std::vector<std::uint32_t> sector_codes(int L, int M) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 0; c < (1u << L); ++c)
        if (magnon_count(c) == M) out.push_back(c);
    return out;
}

Mat restrict_to_codes(const Mat& op, const std::vector<std::uint32_t>& codes) {
    const int n = static_cast<int>(codes.size());
    Mat out(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out(a, b) = op(codes[a], codes[b]);
    return out;
}

Mat identity_op(int L) { return Mat::Identity(space_dim(L), space_dim(L)); }

static void check_site(int i, int L) {
    if (i < 1 || i > L) throw std::invalid_argument("site index out of range");
}

Mat permutation_operator(int i, int j, int L) {
    check_site(i, L);
    check_site(j, L);
    if (i == j) throw std::invalid_argument("permutation_operator needs i != j");
    const int d = space_dim(L);
    Mat p = Mat::Zero(d, d);
    for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(d); ++c) {
        std::uint32_t t = c;
        if (site_bit(c, i, L) != site_bit(c, j, L)) t = flip_site(flip_site(c, i, L), j, L);
        p(t, c) = 1.0;
    }
    return p;
}

Mat site_permutation_operator(const std::vector<int>& perm, int L) {
    const int d = space_dim(L);
    Mat p = Mat::Zero(d, d);
    for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(d); ++c) {
        std::uint32_t t = 0;
        for (int i = 1; i <= L; ++i)
            if (site_bit(c, i, L)) t |= 1u << (L - perm[i]);
        p(t, c) = 1.0;
    }
    return p;
}

static Mat one_site(int i, int L, const Eigen::Matrix2cd& m) {
    const int d = space_dim(L);
    Mat out = Mat::Zero(d, d);
    for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(d); ++c) {
        int b = site_bit(c, i, L);
        for (int bp = 0; bp < 2; ++bp) {
            cplx v = m(bp, b);
            if (v == cplx{0.0, 0.0}) continue;
            std::uint32_t t = (bp == b) ? c : flip_site(c, i, L);
            out(t, c) += v;
        }
    }
    return out;
}

Mat sigma_x(int i, int L) {
    check_site(i, L);
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return one_site(i, L, m);
}

Mat sigma_y(int i, int L) {
    check_site(i, L);
    Eigen::Matrix2cd m;
    m << 0, -II, II, 0;
    return one_site(i, L, m);
}

Mat sigma_z(int i, int L) {
    check_site(i, L);
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return one_site(i, L, m);
}

Mat sigma_plus(int i, int L) {
    check_site(i, L);
    Eigen::Matrix2cd m;  // |up><down|, up = index 0
    m << 0, 1, 0, 0;
    return one_site(i, L, m);
}

Mat sigma_minus(int i, int L) {
    check_site(i, L);
    Eigen::Matrix2cd m;
    m << 0, 0, 1, 0;
    return one_site(i, L, m);
}

Mat kappa_sigma_z(int i, int L, cplx kappa) {
    check_site(i, L);
    Eigen::Matrix2cd m;
    m << kappa, 0, 0, 1.0 / kappa;
    return one_site(i, L, m);
}

GlobalSl2 global_sl2(int L) {
    const int d = space_dim(L);
    GlobalSl2 g{Mat::Zero(d, d), Mat::Zero(d, d), Mat::Zero(d, d)};
    for (int i = 1; i <= L; ++i) {
        g.Sp += sigma_plus(i, L);
        g.Sm += sigma_minus(i, L);
        g.Sz += 0.5 * sigma_z(i, L);
    }
    return g;
}

Mat casimir_operator(int L) {
    GlobalSl2 g = global_sl2(L);
    return 0.5 * (g.Sp * g.Sm + g.Sm * g.Sp) + g.Sz * g.Sz;
}

Mat pair_projector(int i, int j, int L, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    return 0.5 * (identity_op(L) + static_cast<double>(sign) * permutation_operator(i, j, L));
}

Mat OpPoly::eval(cplx u) const {
    if (c_.empty()) throw std::invalid_argument("empty operator polynomial");
    Mat out = c_.back();
    for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k) out = out * u + c_[k];
    return out;
}

OpPoly OpPoly::shifted(cplx a) const {
    // p(u+a) via binomial expansion of each power.
    if (c_.empty()) return {};
    const int n = static_cast<int>(c_.size());
    const int d = dim();
    std::vector<Mat> out(n, Mat::Zero(d, d));
    std::vector<std::vector<double>> binom(n, std::vector<double>(n, 0.0));
    for (int k = 0; k < n; ++k) {
        binom[k][0] = 1.0;
        for (int j = 1; j <= k; ++j) binom[k][j] = binom[k - 1][j - 1] + (j <= k - 1 ? binom[k - 1][j] : 0.0);
    }
    for (int k = 0; k < n; ++k) {
        cplx ap = 1.0;
        for (int j = k; j >= 0; --j) {  // coefficient of u^j from c_[k] (u+a)^k
            out[j] += c_[k] * (binom[k][j] * ap);
            ap *= a;
        }
    }
    return OpPoly(std::move(out));
}

OpPoly OpPoly::operator+(const OpPoly& o) const {
    const int n = std::max(c_.size(), o.c_.size());
    const int d = std::max(dim(), o.dim());
    std::vector<Mat> out(n, Mat::Zero(d, d));
    for (size_t k = 0; k < c_.size(); ++k) out[k] += c_[k];
    for (size_t k = 0; k < o.c_.size(); ++k) out[k] += o.c_[k];
    return OpPoly(std::move(out));
}

OpPoly OpPoly::operator-(const OpPoly& o) const { return *this + o * cplx{-1.0, 0.0}; }

OpPoly OpPoly::operator*(const OpPoly& o) const {
    if (c_.empty() || o.c_.empty()) return {};
    const int d = dim();
    std::vector<Mat> out(c_.size() + o.c_.size() - 1, Mat::Zero(d, d));
    for (size_t a = 0; a < c_.size(); ++a)
        for (size_t b = 0; b < o.c_.size(); ++b) out[a + b] += c_[a] * o.c_[b];
    return OpPoly(std::move(out));
}

OpPoly OpPoly::operator*(cplx s) const {
    std::vector<Mat> out = c_;
    for (auto& m : out) m *= s;
    return OpPoly(std::move(out));
}

std::vector<Vec> OpPoly::apply(const Vec& v) const {
    std::vector<Vec> out;
    out.reserve(c_.size());
    for (const auto& m : c_) out.push_back(m * v);
    return out;
}

void OpPoly::trim(double tol) {
    while (c_.size() > 1 && c_.back().cwiseAbs().maxCoeff() <= tol) c_.pop_back();
}

Mat op_poly_eval(const OpPoly& p, cplx u) { return p.eval(u); }

}  // namespace spincs
