#include "spincs/laurent.hpp"

#include <sstream>
#include <stdexcept>

namespace spincs {

LaurentPoly LaurentPoly::constant(int nvars, const Rational& c) {
    LaurentPoly p(nvars);
    if (c != 0) p.terms_[ExpVec(nvars, 0)] = c;
    return p;
}

LaurentPoly LaurentPoly::monomial(int nvars, const ExpVec& e, const Rational& c) {
    if (static_cast<int>(e.size()) != nvars) throw std::invalid_argument("exponent size mismatch");
    LaurentPoly p(nvars);
    if (c != 0) p.terms_[e] = c;
    return p;
}

LaurentPoly LaurentPoly::variable(int nvars, int i) {
    ExpVec e(nvars, 0);
    e.at(i - 1) = 1;
    return monomial(nvars, e);
}

Rational LaurentPoly::coeff(const ExpVec& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

void LaurentPoly::set_coeff(const ExpVec& e, const Rational& c) {
    if (c == 0) terms_.erase(e);
    else terms_[e] = c;
}

void LaurentPoly::add_term(const ExpVec& e, const Rational& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        if (c != 0) terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    LaurentPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
    LaurentPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, -c);
    return out;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    LaurentPoly out(n_);
    ExpVec e(n_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            for (int k = 0; k < n_; ++k) e[k] = ea[k] + eb[k];
            out.add_term(e, ca * cb);
        }
    return out;
}

LaurentPoly LaurentPoly::operator*(const Rational& s) const {
    if (s == 0) return LaurentPoly(n_);
    LaurentPoly out = *this;
    for (auto& [e, c] : out.terms_) c *= s;
    return out;
}

LaurentPoly LaurentPoly::operator-() const { return *this * Rational(-1); }

LaurentPoly LaurentPoly::mul_monomial(const ExpVec& e, const Rational& c) const {
    LaurentPoly out(n_);
    if (c == 0) return out;
    ExpVec f(n_);
    for (const auto& [ea, ca] : terms_) {
        for (int k = 0; k < n_; ++k) f[k] = ea[k] + e[k];
        out.terms_[f] = ca * c;
    }
    return out;
}

LaurentPoly LaurentPoly::euler_derivative(int i) const {
    LaurentPoly out(n_);
    for (const auto& [e, c] : terms_)
        if (e[i - 1] != 0) out.terms_[e] = c * e[i - 1];
    return out;
}

LaurentPoly LaurentPoly::swapped(int i, int j) const {
    LaurentPoly out(n_);
    ExpVec f;
    for (const auto& [e, c] : terms_) {
        f = e;
        std::swap(f[i - 1], f[j - 1]);
        out.terms_[f] = c;
    }
    return out;
}

LaurentPoly LaurentPoly::permuted(const std::vector<int>& perm) const {
    LaurentPoly out(n_);
    ExpVec f(n_);
    for (const auto& [e, c] : terms_) {
        for (int k = 1; k <= n_; ++k) f[perm[k] - 1] = e[k - 1];
        out.terms_[f] = c;
    }
    return out;
}

LaurentPoly LaurentPoly::div_zij(int i, int j) const {
    // Divide by (z_i - z_j) treating the polynomial as univariate in z_i with
    // Laurent coefficients in the remaining variables. Negative powers of z_i
    // are first lifted by a monomial shift.
    if (is_zero()) return LaurentPoly(n_);
    auto [lo, hi] = degree_range(i);
    int shift = lo < 0 ? -lo : 0;
    // group by z_i power
    std::map<int, std::map<ExpVec, Rational>> layers;  // power -> terms without z_i
    for (const auto& [e, c] : terms_) {
        ExpVec rest = e;
        int p = rest[i - 1] + shift;
        rest[i - 1] = 0;
        layers[p][rest] = c;
    }
    int dmax = hi + shift;
    // synthetic division: b_{k-1} = a_k + z_j b_k, remainder a_0 + z_j b_0
    std::map<int, std::map<ExpVec, Rational>> quot;
    std::map<ExpVec, Rational> carry;  // b_k as we walk down
    auto add_to = [](std::map<ExpVec, Rational>& dst, const ExpVec& e, const Rational& c) {
        auto it = dst.find(e);
        if (it == dst.end()) {
            if (c != 0) dst.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) dst.erase(it);
        }
    };
    for (int k = dmax; k >= 1; --k) {
        std::map<ExpVec, Rational> bk;
        if (auto it = layers.find(k); it != layers.end()) bk = it->second;
        // add z_j * carry
        for (const auto& [e, c] : carry) {
            ExpVec f = e;
            f[j - 1] += 1;
            add_to(bk, f, c);
        }
        quot[k - 1] = bk;
        carry = std::move(bk);
    }
    // remainder
    std::map<ExpVec, Rational> rem;
    if (auto it = layers.find(0); it != layers.end()) rem = it->second;
    for (const auto& [e, c] : carry) {
        ExpVec f = e;
        f[j - 1] += 1;
        add_to(rem, f, c);
    }
    if (!rem.empty()) throw std::domain_error("not divisible by z_i - z_j");
    LaurentPoly out(n_);
    for (const auto& [p, layer] : quot)
        for (const auto& [e, c] : layer) {
            ExpVec f = e;
            f[i - 1] = p - shift;
            out.add_term(f, c);
        }
    return out;
}

std::pair<int, int> LaurentPoly::degree_range(int i) const {
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        int p = e[i - 1];
        if (first) {
            lo = hi = p;
            first = false;
        } else {
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
    }
    return {lo, hi};
}

cplx LaurentPoly::eval(const std::vector<cplx>& z) const {
    if (static_cast<int>(z.size()) != n_) throw std::invalid_argument("evaluation point size");
    cplx out{0.0, 0.0};
    for (const auto& [e, c] : terms_) {
        cplx term{c.get_d(), 0.0};
        for (int k = 0; k < n_; ++k) {
            int p = e[k];
            cplx base = z[k];
            if (p < 0) {
                base = 1.0 / base;
                p = -p;
            }
            for (int q = 0; q < p; ++q) term *= base;
        }
        out += term;
    }
    return out;
}

std::string LaurentPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c;
        for (int k = 0; k < n_; ++k)
            if (e[k] != 0) os << "*z" << (k + 1) << "^" << e[k];
    }
    return os.str();
}

}  // namespace spincs
