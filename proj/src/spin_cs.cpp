#include "spincs/spin_cs.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>

#include "spincs/report.hpp"
#include "spincs/tensoralg.hpp"

namespace spincs {

namespace {

Rational half_integer(int twice) {
    Rational r(twice, 2);
    r.canonicalize();
    return r;
}

void for_each_signed_permutation(int n, const std::function<void(const std::vector<int>&, int)>& fn) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    do {
        int inv = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (p[a] > p[b]) ++inv;
        std::vector<int> full(n + 1);
        for (int k = 1; k <= n; ++k) full[k] = p[k - 1];
        fn(full, inv % 2 == 0 ? 1 : -1);
    } while (std::next_permutation(p.begin(), p.end()));
}

}  // namespace

bool SpinPolyVector::is_zero() const {
    for (const auto& [c, f] : comps)
        if (!f.is_zero()) return false;
    return true;
}

void SpinPolyVector::add_component(std::uint32_t code, const LaurentPoly& f) {
    if (f.is_zero()) return;
    auto it = comps.find(code);
    if (it == comps.end()) {
        comps.emplace(code, f);
        return;
    }
    it->second = it->second + f;
    if (it->second.is_zero()) comps.erase(it);
}

SpinPolyVector SpinPolyVector::operator+(const SpinPolyVector& o) const {
    SpinPolyVector out = *this;
    for (const auto& [c, f] : o.comps) out.add_component(c, f);
    return out;
}

SpinPolyVector SpinPolyVector::operator-(const SpinPolyVector& o) const {
    SpinPolyVector out = *this;
    for (const auto& [c, f] : o.comps) out.add_component(c, -f);
    return out;
}

SpinPolyVector SpinPolyVector::operator*(const Rational& s) const {
    SpinPolyVector out(N);
    if (s == 0) return out;
    for (const auto& [c, f] : comps) out.comps.emplace(c, f * s);
    return out;
}

bool SpinPolyVector::operator==(const SpinPolyVector& o) const {
    return N == o.N && comps == o.comps;
}

SpinPolyVector SpinPolyVector::swap_spins(int i, int j) const {
    SpinPolyVector out(N);
    for (const auto& [c, f] : comps) {
        std::uint32_t t = c;
        if (site_bit(c, i, N) != site_bit(c, j, N)) t = flip_site(flip_site(c, i, N), j, N);
        out.add_component(t, f);
    }
    return out;
}

SpinPolyVector SpinPolyVector::swap_coords(int i, int j) const {
    SpinPolyVector out(N);
    for (const auto& [c, f] : comps) out.comps.emplace(c, f.swapped(i, j));
    return out;
}

SpinPolyVector SpinPolyVector::sigma_z(int i) const {
    SpinPolyVector out(N);
    for (const auto& [c, f] : comps)
        out.comps.emplace(c, site_bit(c, i, N) ? -f : f);
    return out;
}

SpinPolyVector SpinPolyVector::euler(int i) const {
    SpinPolyVector out(N);
    for (const auto& [c, f] : comps) out.add_component(c, f.euler_derivative(i));
    return out;
}

SpinPolyVector SpinPolyVector::mul_poly(const LaurentPoly& p) const {
    SpinPolyVector out(N);
    for (const auto& [c, f] : comps) out.add_component(c, f * p);
    return out;
}

SpinPolyVector SpinPolyVector::permute_both(const std::vector<int>& perm) const {
    SpinPolyVector out(N);
    for (const auto& [c, f] : comps) {
        std::uint32_t t = 0;
        for (int i = 1; i <= N; ++i)
            if (site_bit(c, i, N)) t |= 1u << (N - perm[i]);
        out.add_component(t, f.permuted(perm));
    }
    return out;
}

SpinPolyVector SpinPolyVector::div_zij(int i, int j) const {
    SpinPolyVector out(N);
    for (const auto& [c, f] : comps) out.comps.emplace(c, f.div_zij(i, j));
    return out;
}

SpinPolyVector total_antisymmetrize(const SpinPolyVector& v) {
    SpinPolyVector out(v.N);
    long fact = 1;
    for (int k = 2; k <= v.N; ++k) fact *= k;
    Rational w(1, fact);
    w.canonicalize();
    for_each_signed_permutation(v.N, [&](const std::vector<int>& perm, int sign) {
        out = out + v.permute_both(perm) * (w * sign);
    });
    return out;
}

bool is_fermionic(const SpinPolyVector& v) {
    for (int i = 1; i <= v.N; ++i)
        for (int j = i + 1; j <= v.N; ++j) {
            SpinPolyVector lhs = v.swap_coords(i, j).swap_spins(i, j);
            if (!((lhs + v).is_zero())) return false;
        }
    return true;
}

bool allowed_partition(const Composition& lambda) {
    const int n = static_cast<int>(lambda.size());
    for (int i = 0; i + 1 < n; ++i)
        if (lambda[i] < lambda[i + 1]) return false;
    for (int i = 0; i + 2 < n; ++i)
        if (lambda[i] <= lambda[i + 2]) return false;
    return true;
}

// ---- exact linear algebra over the (spin code, exponent) coordinates ----

namespace {

using Key = std::pair<std::uint32_t, ExpVec>;
using SparseRow = std::map<Key, Rational>;

SparseRow to_row(const SpinPolyVector& v) {
    SparseRow row;
    for (const auto& [c, f] : v.comps)
        for (const auto& [e, coef] : f.terms()) row[{c, e}] = coef;
    return row;
}

struct ExactLin {
    struct Pivot {
        Key key;
        SparseRow row;                  // normalized: row[key] = 1
        std::vector<Rational> combo;    // expression over inserted vectors
    };
    std::vector<Pivot> pivots;
    int inserted = 0;

    void reduce(SparseRow& v, std::vector<Rational>& combo) const {
        for (const auto& p : pivots) {
            auto it = v.find(p.key);
            if (it == v.end()) continue;
            Rational c = it->second;
            for (const auto& [k, val] : p.row) {
                auto vit = v.find(k);
                if (vit == v.end()) {
                    v.emplace(k, -c * val);
                } else {
                    vit->second -= c * val;
                    if (vit->second == 0) v.erase(vit);
                }
            }
            for (size_t k = 0; k < p.combo.size(); ++k) combo[k] -= c * p.combo[k];
        }
    }

    bool insert(const SpinPolyVector& v) {
        SparseRow row = to_row(v);
        std::vector<Rational> combo(inserted + 1, Rational(0));
        combo[inserted] = 1;
        for (auto& p : pivots) p.combo.resize(inserted + 1, Rational(0));
        reduce(row, combo);
        ++inserted;
        if (row.empty()) return false;
        Rational lead = row.begin()->second;
        for (auto& [k, c] : row) c /= lead;
        for (auto& c : combo) c /= lead;
        pivots.push_back({row.begin()->first, std::move(row), std::move(combo)});
        return true;
    }
};

// Coordinates of w in the span of basis (which must be independent).
std::vector<Rational> coordinates_in_basis(const std::vector<SpinPolyVector>& basis,
                                           const SpinPolyVector& w) {
    // reduced rows r_p = sum_k combo_p[k] b_k; express w = sum c_p r_p
    ExactLin lin;
    for (const auto& b : basis)
        if (!lin.insert(b)) throw std::logic_error("basis is not independent");
    SparseRow row = to_row(w);
    std::vector<Rational> acc(basis.size(), Rational(0));
    for (const auto& p : lin.pivots) {
        auto it = row.find(p.key);
        if (it == row.end()) continue;
        Rational c = it->second;
        for (const auto& [k, val] : p.row) {
            auto vit = row.find(k);
            if (vit == row.end()) {
                row.emplace(k, -c * val);
            } else {
                vit->second -= c * val;
                if (vit->second == 0) row.erase(vit);
            }
        }
        for (size_t k = 0; k < basis.size(); ++k) acc[k] += c * p.combo[k];
    }
    if (!row.empty()) throw std::domain_error("vector is not in the sector span");
    return acc;
}

}  // namespace

FermionicSector sector_basis(const Composition& lambda, const Rational& beta) {
    const int n = static_cast<int>(lambda.size());
    if (!allowed_partition(lambda))
        throw std::invalid_argument("lambda must be weakly decreasing with multiplicities <= 2");
    JackTable table(n, beta);
    FermionicSector sector;
    sector.lambda = lambda;
    sector.beta = beta;

    int m_lam = 0;
    for (int i = 0; i + 1 < n; ++i)
        if (lambda[i] == lambda[i + 1]) ++m_lam;
    const int expected = 1 << (n - 2 * m_lam);

    Composition mu = lambda;
    std::sort(mu.begin(), mu.end());
    ExactLin lin;
    do {
        const LaurentPoly& e = table.E(mu);
        for (std::uint32_t code = 0; code < (1u << n); ++code) {
            SpinPolyVector raw(n);
            raw.add_component(code, e);
            SpinPolyVector w = total_antisymmetrize(raw);
            if (w.is_zero()) continue;
            if (lin.insert(w)) sector.basis.push_back(std::move(w));
            if (static_cast<int>(sector.basis.size()) == expected) break;
        }
        if (static_cast<int>(sector.basis.size()) == expected) break;
    } while (std::next_permutation(mu.begin(), mu.end()));
    sector.dimension = static_cast<int>(sector.basis.size());
    if (sector.dimension != expected)
        throw std::logic_error("sector dimension differs from 2^(N - 2 M_lambda)");
    return sector;
}

SpinPolyVector apply_momentum(const SpinPolyVector& v) {
    SpinPolyVector out(v.N);
    for (int i = 1; i <= v.N; ++i) out = out + v.euler(i);
    return out;
}

SpinPolyVector apply_hamiltonian(const SpinPolyVector& v, const Rational& beta) {
    const int n = v.N;
    SpinPolyVector out(n);
    for (int i = 1; i <= n; ++i) out = out + v.euler(i).euler(i) * Rational(1, 2);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            LaurentPoly zi = LaurentPoly::variable(n, i), zj = LaurentPoly::variable(n, j);
            SpinPolyVector grad = v.euler(i) - v.euler(j);
            SpinPolyVector num = grad.mul_poly((zi + zj) * (zi - zj)) * (beta / 2);
            SpinPolyVector sym = v + v.swap_spins(i, j);
            num = num - sym.mul_poly(zi * zj) * beta;
            // exact divisibility by (z_i - z_j)^2 is the fermionic firewall
            out = out + num.div_zij(i, j).div_zij(i, j);
        }
    return out;
}

SpinPolyVector apply_t2(const SpinPolyVector& v, const Rational& beta, const Rational& kappa) {
    if (kappa == 0) throw std::invalid_argument("twist must be nonzero");
    const int n = v.N;
    const Rational kplus = (kappa + 1 / kappa) / 2;
    const Rational kminus = (kappa - 1 / kappa) / 2;

    SpinPolyVector casimir_part(n);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) casimir_part = casimir_part + v.swap_spins(i, j);
    casimir_part = casimir_part - apply_momentum(v) * (1 / beta);

    SpinPolyVector twist_part(n);
    for (int i = 1; i <= n; ++i) twist_part = twist_part - v.euler(i).sigma_z(i) * (1 / beta);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            LaurentPoly zi = LaurentPoly::variable(n, i), zj = LaurentPoly::variable(n, j);
            SpinPolyVector pij = v.swap_spins(i, j);
            SpinPolyVector num = pij.sigma_z(j).mul_poly(zi) - pij.sigma_z(i).mul_poly(zj);
            num = num + (v.sigma_z(j) - v.sigma_z(i)).mul_poly(zi + zj) * Rational(1, 2);
            twist_part = twist_part + num.div_zij(i, j);
        }
    return casimir_part * kplus + twist_part * kminus;
}

SpinPolyVector apply_t3(const SpinPolyVector& v, const Rational& beta) {
    const int n = v.N;
    SpinPolyVector out(n);
    // -(1/beta) sum_{i<j} P_ij (z_i d_i + z_j d_j)
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            out = out - (v.euler(i) + v.euler(j)).swap_spins(i, j) * (1 / beta);
    // (1/6) sum over distinct triples of P_ij P_jk
    Rational sixth(1, 6);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (j == i) continue;
            for (int k = 1; k <= n; ++k) {
                if (k == i || k == j) continue;
                out = out + v.swap_spins(j, k).swap_spins(i, j) * sixth;
            }
        }
    // divided-difference part, grouped over a common pair denominator
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b) {
            SpinPolyVector s1(n), s2(n);
            for (int j = 1; j <= n; ++j) {
                if (j == a || j == b) continue;
                s1 = s1 + v.swap_spins(a, j) - v.swap_spins(b, j);
                s2 = s2 + v.swap_spins(b, j) - v.swap_spins(a, j);
            }
            SpinPolyVector num = s1 + s2.swap_spins(a, b);
            LaurentPoly za = LaurentPoly::variable(n, a), zb = LaurentPoly::variable(n, b);
            num = num.mul_poly(za + zb) * Rational(-1, 2);
            out = out + num.div_zij(a, b);
        }
    return out;
}

Rational momentum_eigenvalue(const Composition& lambda) {
    Rational p(0);
    for (int l : lambda) p += l;
    return p;
}

Rational energy_eigenvalue(const Composition& lambda, const Rational& beta) {
    const int n = static_cast<int>(lambda.size());
    Rational e(0);
    for (int i = 1; i <= n; ++i) {
        e += Rational(lambda[i - 1]) * lambda[i - 1] / 2;
        e += beta * half_integer(n - 2 * i + 1) * lambda[i - 1];
    }
    return e;
}

Rational e0_constant(int N) {
    Rational e(static_cast<long>(N) * (static_cast<long>(N) * N - 1), 12);
    e.canonicalize();
    return e;
}

SpinPolyVector highest_weight_vector(const Composition& lambda, const Rational& beta,
                                     Rational* removed_scalar) {
    const int n = static_cast<int>(lambda.size());
    if (!allowed_partition(lambda)) throw std::invalid_argument("lambda is not an allowed partition");
    // repeated values, increasing, then the remaining parts, increasing
    std::vector<int> repeated, remaining = lambda;
    for (int i = 0; i + 1 < n; ++i)
        if (lambda[i] == lambda[i + 1]) repeated.push_back(lambda[i]);
    std::sort(repeated.begin(), repeated.end());
    for (int r : repeated)
        remaining.erase(std::find(remaining.begin(), remaining.end(), r));
    std::sort(remaining.begin(), remaining.end());
    Composition bar = repeated;
    bar.insert(bar.end(), remaining.begin(), remaining.end());
    const int m_lam = static_cast<int>(repeated.size());

    JackTable table(n, beta);
    std::uint32_t code = 0;
    for (int i = 1; i <= m_lam; ++i) code |= 1u << (n - i);
    SpinPolyVector raw(n);
    raw.add_component(code, table.E(bar));
    SpinPolyVector v = total_antisymmetrize(raw);
    if (v.is_zero()) throw std::logic_error("antisymmetrization of the highest-weight seed vanished");

    auto it = v.comps.find(code);
    if (it == v.comps.end()) throw std::logic_error("highest-weight component missing");
    // normalize the lexicographically leading monomial of f_lambda to one
    const auto& terms = it->second.terms();
    Rational lead = terms.rbegin()->second;
    if (removed_scalar) *removed_scalar = lead;
    return v * (1 / lead);
}

ChainSpec EffectiveChain::chain() const {
    ChainSpec spec;
    spec.L = L_eff;
    spec.kappa = kappa;
    for (int i : I) spec.theta.push_back(cplx{0.0, -delta[i - 1].get_d()});
    return spec;
}

cplx EffectiveChain::prefactor(cplx x) const {
    cplx out{1.0, 0.0};
    for (int j : J) {
        double d = delta[j - 1].get_d();
        out *= (x + d + 0.5) / (x + d - 0.5);
    }
    return out;
}

std::string EffectiveChain::to_json() const {
    nlohmann::ordered_json j;
    j["lambda"] = lambda;
    j["I"] = I;
    j["J"] = J;
    j["L_eff"] = L_eff;
    j["delta"] = nlohmann::ordered_json::array();
    for (const auto& d : delta) j["delta"].push_back(rational_to_string(d));
    j["dim"] = 1 << L_eff;
    return j.dump();
}

EffectiveChain effective_chain(const Composition& lambda, const Rational& beta, cplx kappa) {
    const int n = static_cast<int>(lambda.size());
    if (!allowed_partition(lambda)) throw std::invalid_argument("lambda is not an allowed partition");
    EffectiveChain ec;
    ec.lambda = lambda;
    ec.beta = beta;
    ec.kappa = kappa;
    auto part = [&](int i) -> long {  // 1-based with sentinels
        if (i < 1) return std::numeric_limits<long>::max();
        if (i > n) return std::numeric_limits<long>::min();
        return lambda[i - 1];
    };
    for (int i = 1; i <= n; ++i)
        if (part(i - 1) > part(i) && part(i) > part(i + 1)) ec.I.push_back(i);
    for (int j = 1; j < n; ++j)
        if (lambda[j - 1] == lambda[j]) ec.J.push_back(j);
    ec.M_lam = static_cast<int>(ec.J.size());
    ec.L_eff = n - 2 * ec.M_lam;
    if (static_cast<int>(ec.I.size()) != ec.L_eff)
        throw std::logic_error("I/J bookkeeping mismatch");
    for (int i = 1; i <= n; ++i) {
        Rational d = Rational(lambda[i - 1]) / beta + half_integer(n + 1 - 2 * i);
        ec.delta.push_back(d);
    }
    return ec;
}

std::vector<BetheSolution> cs_bethe_solutions(const Composition& lambda, const Rational& beta,
                                              cplx kappa, int M) {
    EffectiveChain ec = effective_chain(lambda, beta, kappa);
    if (M < 0 || M > ec.L_eff) throw std::invalid_argument("magnon number exceeds L_eff");
    if (M == 0) {
        BetheSolution vac;
        vac.M = 0;
        if (ec.L_eff == 0)
            vac.tau = Poly({kappa + 1.0 / kappa});
        else
            vac.tau = tau_from_Q(ec.chain(), QFunction{{}});
        return {vac};
    }
    auto sols = newton_solve(ec.chain(), M);
    const bool realness = beta > 0 && std::abs(kappa.imag()) < 1e-14;
    for (auto& s : sols) {
        for (cplx& r : s.roots) r = -II * r;  // u = i x
        if (realness && s.admissible) {
            // Q real: the x-root multiset must be closed under conjugation
            std::vector<cplx> conj;
            for (cplx r : s.roots) conj.push_back(std::conj(r));
            for (cplx r : s.roots) {
                double best = 1e300;
                for (cplx c : conj) best = std::min(best, std::abs(c - r));
                if (best > 1e-6)
                    throw std::logic_error("Q polynomial is not real for real beta and twist");
            }
        }
        std::sort(s.roots.begin(), s.roots.end(), [](cplx a, cplx b) {
            if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
            return a.imag() < b.imag();
        });
    }
    return sols;
}

// ---- truncated large-x series helpers ----

namespace {

struct TruncSeries {
    std::vector<cplx> c;  // coefficients of x^{-n}
    explicit TruncSeries(int len) : c(len, cplx{}) {}
    static TruncSeries one(int len) {
        TruncSeries s(len);
        s.c[0] = 1.0;
        return s;
    }
    TruncSeries mul(const TruncSeries& o) const {
        TruncSeries out(static_cast<int>(c.size()));
        for (size_t a = 0; a < c.size(); ++a)
            for (size_t b = 0; a + b < c.size(); ++b) out.c[a + b] += c[a] * o.c[b];
        return out;
    }
    TruncSeries div(const TruncSeries& o) const {
        TruncSeries out(static_cast<int>(c.size()));
        for (size_t n = 0; n < c.size(); ++n) {
            cplx acc = c[n];
            for (size_t k = 0; k < n; ++k) acc -= out.c[k] * o.c[n - k];
            out.c[n] = acc / o.c[0];
        }
        return out;
    }
};

// (x + a)/(x + b) as a series in 1/x
TruncSeries linear_ratio(cplx a, cplx b, int len) {
    TruncSeries num(len), den(len);
    num.c[0] = 1.0;
    if (len > 1) num.c[1] = a;
    den.c[0] = 1.0;
    if (len > 1) den.c[1] = b;
    return num.div(den);
}

}  // namespace

CsTransferEigenvalue cs_transfer_eigenvalue(const Composition& lambda, const Rational& beta,
                                            cplx kappa, const BetheSolution& sol_x) {
    EffectiveChain ec = effective_chain(lambda, beta, kappa);
    std::vector<double> delta(ec.delta.size());
    for (size_t k = 0; k < delta.size(); ++k) delta[k] = ec.delta[k].get_d();
    std::vector<cplx> roots = sol_x.roots;

    auto tau = [=](cplx x) {
        cplx pref{1.0, 0.0};
        for (int j : ec.J) pref *= (x + delta[j - 1] + 0.5) / (x + delta[j - 1] - 0.5);
        cplx apart = kappa, dpart = 1.0 / kappa;
        for (int i : ec.I) apart *= (x + delta[i - 1] + 0.5) / (x + delta[i - 1] - 0.5);
        for (cplx r : roots) {
            apart *= (x - 1.0 - r) / (x - r);
            dpart *= (x + 1.0 - r) / (x - r);
        }
        return pref * (apart + dpart);
    };

    const int len = 4;
    // tau(x + 1/2; kappa): every linear factor shifts by 1/2
    TruncSeries apart(len), dpart(len), pref = TruncSeries::one(len);
    apart.c[0] = kappa;
    dpart.c[0] = 1.0 / kappa;
    for (int j : ec.J) pref = pref.mul(linear_ratio(delta[j - 1] + 1.0, delta[j - 1], len));
    for (int i : ec.I) apart = apart.mul(linear_ratio(delta[i - 1] + 1.0, delta[i - 1], len));
    for (cplx r : roots) {
        apart = apart.mul(linear_ratio(-0.5 - r, 0.5 - r, len));
        dpart = dpart.mul(linear_ratio(1.5 - r, 0.5 - r, len));
    }
    TruncSeries total = pref.mul(apart);
    TruncSeries dd = pref.mul(dpart);
    for (int k = 0; k < len; ++k) total.c[k] += dd.c[k];

    CsTransferEigenvalue out;
    out.series = total.c;
    out.eval = tau;
    const double N = static_cast<double>(lambda.size());
    const double L = ec.L_eff, M = static_cast<double>(sol_x.M);
    out.tau2_periodic = (L / 2 - M) * (L / 2 - M + 1) + N * (N - 4) / 4;
    cplx sum_x{};
    for (cplx r : roots) sum_x += r;
    cplx sum_delta_I{}, sum_delta{};
    for (int i : ec.I) sum_delta_I += delta[i - 1];
    for (double d : delta) sum_delta += d;
    out.tau3_periodic = -(L / 2 - M + 1) * (2.0 * sum_x + sum_delta_I) +
                        (2.0 - N / 2) * sum_delta +
                        (N - 2) / 2 * (out.tau2_periodic - N * (N - 1) / 6.0);
    return out;
}

std::vector<cplx> qdet_series(const Composition& lambda, const Rational& beta, int nmax) {
    EffectiveChain ec = effective_chain(lambda, beta, cplx{1.0, 0.0});
    TruncSeries s = TruncSeries::one(nmax + 1);
    for (const auto& d : ec.delta)
        s = s.mul(linear_ratio(d.get_d() + 0.5, d.get_d() - 0.5, nmax + 1));
    return s.c;
}

FreeFermionReport free_fermion_report(const Composition& lambda, const std::vector<int>& I,
                                      cplx kappa, const Rational& beta) {
    EffectiveChain ec = effective_chain(lambda, beta, kappa);
    for (int i : I)
        if (std::find(ec.I.begin(), ec.I.end(), i) == ec.I.end())
            throw std::invalid_argument("I must be a subset of I_lambda");
    for (size_t a = 0; a < ec.I.size(); ++a)
        for (size_t b = a + 1; b < ec.I.size(); ++b)
            if (lambda[ec.I[a] - 1] == lambda[ec.I[b] - 1])
                throw std::invalid_argument("degenerate lambda spacings: the expansion denominators vanish");

    const int n = static_cast<int>(lambda.size());
    const double b = beta.get_d();
    const cplx ratio = (kappa + 1.0 / kappa) / (kappa - 1.0 / kappa);
    FreeFermionReport rep;
    for (int im : I) {
        double lam = lambda[im - 1];
        cplx x = -lam - (b / 2) * (static_cast<double>(n + 1 - 2 * im) + ratio);
        cplx corr{};
        for (int j : ec.I) {
            if (j == im) continue;
            bool in_I = std::find(I.begin(), I.end(), j) != I.end();
            double gap = static_cast<double>(lambda[j - 1]) - lam;
            corr += (in_I ? -1.0 : 1.0) / gap;
        }
        x += b * b / ((kappa - 1.0 / kappa) * (kappa - 1.0 / kappa)) * corr;
        rep.series_roots.push_back(x / b);  // beta x_m expansion, so x_m itself
    }

    auto deltas = ec.delta;
    auto alpha = [deltas, ec](std::vector<int> keep) {
        return [deltas, ec, keep](cplx x) {
            cplx out{1.0, 0.0};
            for (int i : keep) out *= (x + deltas[i - 1].get_d() + 0.5) / (x + deltas[i - 1].get_d() - 0.5);
            for (int j : ec.J) out *= (x + deltas[j - 1].get_d() + 0.5) / (x + deltas[j - 1].get_d() - 0.5);
            return out;
        };
    };
    std::vector<int> complement;
    for (int i : ec.I)
        if (std::find(I.begin(), I.end(), i) == I.end()) complement.push_back(i);
    rep.alpha_I = alpha(complement);  // alpha_{lambda,I} keeps (I_lambda \ I) u J
    rep.alpha_Ic = alpha(std::vector<int>(I));

    // match the solver's roots
    auto sols = cs_bethe_solutions(lambda, beta, kappa, static_cast<int>(I.size()));
    double best_total = 1e300;
    const BetheSolution* best = nullptr;
    for (const auto& s : sols) {
        if (s.roots.size() != rep.series_roots.size()) continue;
        double total = 0.0;
        std::vector<cplx> pool = s.roots;
        for (cplx r : rep.series_roots) {
            double d = 1e300;
            size_t arg = 0;
            for (size_t k = 0; k < pool.size(); ++k)
                if (std::abs(pool[k] - r) < d) { d = std::abs(pool[k] - r); arg = k; }
            total += d;
            pool.erase(pool.begin() + static_cast<long>(arg));
        }
        if (total < best_total) {
            best_total = total;
            best = &s;
        }
    }
    if (!best) throw std::runtime_error("no solver solution to compare against");
    rep.solver_roots = best->roots;
    for (cplx r : rep.series_roots) {
        double d = 1e300;
        for (cplx sr : rep.solver_roots) d = std::min(d, std::abs(sr - r));
        rep.max_root_deviation = std::max(rep.max_root_deviation, d * b);  // beta x units
    }
    auto tau = cs_transfer_eigenvalue(lambda, beta, kappa, *best);
    for (double xt : {0.31, 1.7, -0.83}) {
        cplx x = xt / b;
        cplx expect = kappa * rep.alpha_I(x) + (1.0 / kappa) * rep.alpha_Ic(x);
        rep.max_tau_deviation = std::max(rep.max_tau_deviation, std::abs(tau.eval(x) - expect));
    }
    return rep;
}

// ---- Jack-basis representation and monodromy action ----

bool JackSpinVector::is_zero(double tol) const {
    for (const auto& [mu, vec] : comps)
        if (vec.norm() > tol) return false;
    return true;
}

double JackSpinVector::norm() const {
    double out = 0.0;
    for (const auto& [mu, vec] : comps) out += vec.squaredNorm();
    return std::sqrt(out);
}

JackSpinVector to_jack_basis(const SpinPolyVector& v, JackTable& table) {
    const int n = v.N;
    JackSpinVector out;
    out.N = n;
    const int dim = 1 << n;
    for (const auto& [code, f0] : v.comps) {
        LaurentPoly f = f0;
        int guard = 0;
        while (!f.is_zero()) {
            if (++guard > 100000) throw std::logic_error("jack-basis extraction did not terminate");
            // a dominance-maximal exponent must be the leading term of some E_mu
            const ExpVec* best = nullptr;
            for (const auto& [e, c] : f.terms()) {
                bool dominated = false;
                for (const auto& [e2, c2] : f.terms()) {
                    if (&e2 == &e) continue;
                    if (dominance_lower(Composition(e.begin(), e.end()),
                                        Composition(e2.begin(), e2.end()))) {
                        dominated = true;
                        break;
                    }
                }
                if (!dominated) {
                    best = &e;
                    break;
                }
            }
            Composition mu(best->begin(), best->end());
            Rational c = f.coeff(*best);
            f = f - table.E(mu) * c;
            auto it = out.comps.find(mu);
            if (it == out.comps.end()) it = out.comps.emplace(mu, Vec::Zero(dim)).first;
            it->second(code) += c.get_d();
        }
    }
    return out;
}

JackSpinVector cs_monodromy_apply(const JackSpinVector& v, MonodromyEntry entry, cplx x,
                                  const Rational& beta) {
    JackSpinVector out;
    out.N = v.N;
    const int n = v.N;
    const int dim = 1 << n;
    for (const auto& [mu, vec] : v.comps) {
        auto deltas = delta_eigenvalue(mu, beta);
        // w[a][b] accumulates (M_k ... M_N)_{ab} applied to vec, k = N..1
        Vec w[2][2] = {{vec, Vec::Zero(dim)}, {Vec::Zero(dim), vec}};
        for (int i = n; i >= 1; --i) {
            cplx a = 1.0 / (x + deltas[i - 1].get_d() - 0.5);
            Vec nw[2][2];
            auto nup = [&](const Vec& y) {
                Vec r = Vec::Zero(dim);
                for (int c = 0; c < dim; ++c)
                    if (!site_bit(c, i, n)) r(c) = y(c);
                return r;
            };
            auto ndn = [&](const Vec& y) {
                Vec r = Vec::Zero(dim);
                for (int c = 0; c < dim; ++c)
                    if (site_bit(c, i, n)) r(c) = y(c);
                return r;
            };
            auto sminus = [&](const Vec& y) {  // |down><up| at site i
                Vec r = Vec::Zero(dim);
                for (int c = 0; c < dim; ++c)
                    if (!site_bit(c, i, n)) r(flip_site(c, i, n)) = y(c);
                return r;
            };
            auto splus = [&](const Vec& y) {
                Vec r = Vec::Zero(dim);
                for (int c = 0; c < dim; ++c)
                    if (site_bit(c, i, n)) r(flip_site(c, i, n)) = y(c);
                return r;
            };
            for (int bcol = 0; bcol < 2; ++bcol) {
                // M_i = [[1 + a nup, a s-], [a s+, 1 + a ndn]]
                nw[0][bcol] = w[0][bcol] + a * nup(w[0][bcol]) + a * sminus(w[1][bcol]);
                nw[1][bcol] = a * splus(w[0][bcol]) + w[1][bcol] + a * ndn(w[1][bcol]);
            }
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) w[r][c] = std::move(nw[r][c]);
        }
        Vec res;
        switch (entry) {
            case MonodromyEntry::A: res = w[0][0]; break;
            case MonodromyEntry::B: res = w[0][1]; break;
            case MonodromyEntry::C: res = w[1][0]; break;
            case MonodromyEntry::D: res = w[1][1]; break;
        }
        auto it = out.comps.find(mu);
        if (it == out.comps.end()) it = out.comps.emplace(mu, Vec::Zero(dim)).first;
        it->second += res;
    }
    return out;
}

std::vector<std::vector<Rational>> operator_matrix_exact(
    const FermionicSector& sector,
    const std::function<SpinPolyVector(const SpinPolyVector&)>& op) {
    const int d = sector.dimension;
    std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d, Rational(0)));
    for (int k = 0; k < d; ++k) {
        SpinPolyVector img = op(sector.basis[k]);
        auto coords = coordinates_in_basis(sector.basis, img);
        for (int r = 0; r < d; ++r) m[r][k] = coords[r];
    }
    return m;
}

Mat to_complex_matrix(const std::vector<std::vector<Rational>>& m) {
    const int d = static_cast<int>(m.size());
    Mat out(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) out(r, c) = cplx{m[r][c].get_d(), 0.0};
    return out;
}

std::string sector_report_json(const Composition& lambda, const Rational& beta, cplx kappa) {
    EffectiveChain ec = effective_chain(lambda, beta, kappa);
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(ec.to_json());
    j["P"] = rational_to_string(momentum_eigenvalue(lambda));
    j["E"] = rational_to_string(energy_eigenvalue(lambda, beta));
    return j.dump();
}

}  // namespace spincs
