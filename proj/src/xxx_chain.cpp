#include "spincs/xxx_chain.hpp"

#include <nlohmann/json.hpp>

#include "spincs/report.hpp"

namespace spincs {

void ChainSpec::validate() const {
    if (L < 1) throw std::invalid_argument("chain length must be >= 1");
    if (static_cast<int>(theta.size()) != L) throw std::invalid_argument("need L inhomogeneities");
    if (kappa == cplx{}) throw std::invalid_argument("twist kappa must be nonzero");
}

std::string ChainSpec::to_json() const {
    nlohmann::ordered_json j;
    j["L"] = L;
    j["theta"] = nlohmann::ordered_json::array();
    for (cplx t : theta) j["theta"].push_back(json_complex(t));
    j["kappa"] = json_complex(kappa);
    return j.dump();
}

ChainSpec ChainSpec::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    ChainSpec s;
    s.L = j.at("L").get<int>();
    for (const auto& t : j.at("theta")) s.theta.push_back(complex_from_json(t));
    s.kappa = complex_from_json(j.at("kappa"));
    s.validate();
    return s;
}

Mat r_matrix(cplx u) {
    Mat p = permutation_operator(1, 2, 2);
    return u * Mat::Identity(4, 4) + II * p;
}

Mat r_check(cplx u) {
    Mat p = permutation_operator(1, 2, 2);
    return II * Mat::Identity(4, 4) + u * p;
}

const OpPoly& Monodromy::entry(char name) const {
    switch (name) {
        case 'A': return A;
        case 'B': return B;
        case 'C': return C;
        case 'D': return D;
    }
    throw std::invalid_argument("monodromy entry must be A, B, C or D");
}

Monodromy monodromy(const ChainSpec& spec) {
    spec.validate();
    const int L = spec.L;
    const Mat id = identity_op(L);
    // 2x2 auxiliary-space matrix of operator polynomials, multiplied site by site.
    OpPoly T[2][2] = {{OpPoly::constant(id), OpPoly::constant(Mat::Zero(id.rows(), id.cols()))},
                      {OpPoly::constant(Mat::Zero(id.rows(), id.cols())), OpPoly::constant(id)}};
    for (int i = 1; i <= L; ++i) {
        const Mat sz = sigma_z(i, L);
        const Mat nup = 0.5 * (id + sz);
        const Mat ndn = 0.5 * (id - sz);
        const cplx shift = -spec.theta[i - 1] - II * 0.5;
        OpPoly F[2][2] = {
            {OpPoly({shift * id + II * nup, id}), OpPoly::constant(II * sigma_minus(i, L))},
            {OpPoly::constant(II * sigma_plus(i, L)), OpPoly({shift * id + II * ndn, id})}};
        OpPoly R[2][2];
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) R[a][b] = T[a][0] * F[0][b] + T[a][1] * F[1][b];
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) T[a][b] = std::move(R[a][b]);
    }
    Monodromy m;
    m.L = L;
    m.A = std::move(T[0][0]);
    m.B = std::move(T[0][1]);
    m.C = std::move(T[1][0]);
    m.D = std::move(T[1][1]);
    m.B.trim(0.0);
    m.C.trim(0.0);
    return m;
}

OpPoly transfer(const Monodromy& m, cplx kappa) { return m.A * kappa + m.D * (1.0 / kappa); }

OpPoly transfer(const ChainSpec& spec) { return transfer(monodromy(spec), spec.kappa); }

Poly q_theta(const ChainSpec& spec) { return Poly::from_roots(spec.theta); }

std::vector<Mat> scattering_operators(const ChainSpec& spec, bool* coincident_warning) {
    spec.validate();
    if (coincident_warning) {
        *coincident_warning = false;
        for (int i = 0; i < spec.L; ++i)
            for (int j = i + 1; j < spec.L; ++j)
                if (std::abs(spec.theta[i] - spec.theta[j]) < 1e-8) *coincident_warning = true;
    }
    OpPoly t = transfer(spec);
    std::vector<Mat> out;
    out.reserve(spec.L);
    for (int j = 0; j < spec.L; ++j) {
        // Unitarity normalization: each non-j R-factor R(theta_j - theta_i)
        // contributes (theta_j - theta_i + i); dividing it out makes the
        // product identity prod_j G_j = kappa^{2 S^z} hold exactly.
        cplx norm{1.0, 0.0};
        for (int i = 0; i < spec.L; ++i)
            if (i != j) norm *= spec.theta[j] - spec.theta[i] + II;
        out.push_back((-II / norm) * t.eval(spec.theta[j] + II * 0.5));
    }
    return out;
}

Mat charge_coefficients(const ChainSpec& spec, int n) {
    spec.validate();
    const int L = spec.L;
    const cplx k = spec.kappa;
    auto kz = [&](int i) { return kappa_sigma_z(i, L, k); };
    if (n == 1) {
        Mat out = Mat::Zero(space_dim(L), space_dim(L));
        for (int i = 1; i <= L; ++i) out += kz(i);
        return out;
    }
    if (n == 2) {
        Mat out = Mat::Zero(space_dim(L), space_dim(L));
        for (int i = 1; i <= L; ++i)
            for (int j = i + 1; j <= L; ++j) out += kz(j) * permutation_operator(i, j, L);
        for (int i = 1; i <= L; ++i) out -= II * spec.theta[i - 1] * kz(i);
        return out;
    }
    if (n == 3) {
        Mat out = Mat::Zero(space_dim(L), space_dim(L));
        for (int i = 1; i <= L; ++i)
            for (int j = i + 1; j <= L; ++j)
                for (int kk = j + 1; kk <= L; ++kk)
                    out += kz(kk) * permutation_operator(j, kk, L) * permutation_operator(i, j, L);
        for (int i = 1; i <= L; ++i)
            for (int j = i + 1; j <= L; ++j)
                out -= II * (spec.theta[i - 1] + spec.theta[j - 1]) * kz(j) * permutation_operator(i, j, L);
        for (int i = 1; i <= L; ++i) out -= spec.theta[i - 1] * spec.theta[i - 1] * kz(i);
        return out;
    }
    throw std::invalid_argument("charge index must be 1, 2 or 3");
}

std::pair<Monodromy, Mat> exchange_conjugation(const ChainSpec& spec, int j) {
    spec.validate();
    if (j < 1 || j >= spec.L) throw std::invalid_argument("pair index out of range");
    const cplx diff = spec.theta[j] - spec.theta[j - 1];  // theta_{j+1} - theta_j
    if (std::abs(diff - II) < 1e-12 || std::abs(diff + II) < 1e-12)
        throw std::domain_error(
            "theta_{j+1} - theta_j = +-i: Rcheck is singular, no similarity transform; "
            "this pair fuses (see the fusion module)");
    ChainSpec swapped = spec;
    std::swap(swapped.theta[j - 1], swapped.theta[j]);
    Mat conj = II * identity_op(spec.L) + diff * permutation_operator(j, j + 1, spec.L);
    return {monodromy(swapped), conj};
}

OpPoly quantum_determinant(const Monodromy& m) {
    return m.A.shifted(II) * m.D - m.B.shifted(II) * m.C;
}

std::vector<Mat> transfer_series(const ChainSpec& spec, int nmax) {
    spec.validate();
    const OpPoly t = transfer(spec).shifted(II * 0.5);  // t(u + i/2; kappa)
    const Poly q = q_theta(spec);
    const int L = spec.L;
    const int d = space_dim(L);
    auto tc = [&](int kk) -> Mat {
        if (kk < 0 || kk > t.degree()) return Mat::Zero(d, d);
        return t.coeff(kk);
    };
    // t(u+i/2) / Q_theta(u) = sum_n C_n u^{-n}; charges are i^n C_n.
    std::vector<Mat> C(nmax + 1, Mat::Zero(d, d));
    for (int k = 0; k <= nmax; ++k) {
        Mat acc = tc(L - k);
        for (int jj = std::max(0, L - k); jj < L; ++jj) acc -= q.coeff(jj) * C[jj - L + k];
        C[k] = acc;
    }
    std::vector<Mat> out(nmax + 1);
    cplx ipow = 1.0;
    for (int n = 0; n <= nmax; ++n) {
        out[n] = ipow * C[n];
        ipow *= -II;
    }
    return out;
}

}  // namespace spincs
