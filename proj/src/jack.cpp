#include "spincs/jack.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace spincs {

int sigma_mu(const Composition& mu, int i) {
    const int n = static_cast<int>(mu.size());
    int s = 0;
    for (int j = 1; j <= n; ++j)
        if (mu[j - 1] > mu[i - 1]) ++s;
    for (int j = 1; j <= i; ++j)
        if (mu[j - 1] == mu[i - 1]) ++s;
    return s;
}

std::vector<Rational> delta_eigenvalue(const Composition& mu, const Rational& beta) {
    const int n = static_cast<int>(mu.size());
    std::vector<Rational> out(n);
    for (int i = 1; i <= n; ++i) {
        Rational d = Rational(mu[i - 1]) / beta;
        Rational half(n + 1 - 2 * sigma_mu(mu, i), 2);
        half.canonicalize();
        out[i - 1] = d + half;
    }
    return out;
}

bool dominance_lower(const Composition& nu, const Composition& mu) {
    if (nu.size() != mu.size() || nu == mu) return false;
    long wn = std::accumulate(nu.begin(), nu.end(), 0L);
    long wm = std::accumulate(mu.begin(), mu.end(), 0L);
    if (wn != wm) return false;
    Composition sn = nu, sm = mu;
    std::sort(sn.rbegin(), sn.rend());
    std::sort(sm.rbegin(), sm.rend());
    if (sn != sm) {
        // sorted dominance: all partial sums of sn <= those of sm
        long pn = 0, pm = 0;
        for (size_t k = 0; k < sn.size(); ++k) {
            pn += sn[k];
            pm += sm[k];
            if (pn > pm) return false;
        }
        return true;
    }
    // same orbit: compare composition partial sums
    long pn = 0, pm = 0;
    for (size_t k = 0; k < nu.size(); ++k) {
        pn += nu[k];
        pm += mu[k];
        if (pn > pm) return false;
    }
    return true;
}

LaurentPoly dunkl_apply(int i, const LaurentPoly& f, const Rational& beta) {
    const int n = f.nvars();
    if (i < 1 || i > n) throw std::invalid_argument("dunkl index out of range");
    LaurentPoly out = f.euler_derivative(i) * (Rational(1) / beta);
    Rational half(n + 1 - 2 * i, 2);
    half.canonicalize();
    out = out + f * half;
    for (int j = 1; j <= n; ++j) {
        if (j == i) continue;
        LaurentPoly g = f - f.swapped(i, j);  // divisible by z_i - z_j
        LaurentPoly q = g.div_zij(i, j);
        ExpVec e(n, 0);
        e[(j < i ? i : j) - 1] = 1;
        out = out + q.mul_monomial(e);
    }
    return out;
}

DahaReport daha_check(int N, int degree_bound, const Rational& beta) {
    DahaReport rep;
    const int d = degree_bound;
    std::vector<ExpVec> monos;
    ExpVec cur(N, -d);
    while (true) {
        monos.push_back(cur);
        int k = 0;
        while (k < N && cur[k] == d) cur[k++] = -d;
        if (k == N) break;
        ++cur[k];
    }
    auto complain = [&](const std::string& what, const ExpVec& e) {
        std::ostringstream os;
        os << what << " violated on monomial [";
        for (int k = 0; k < N; ++k) os << e[k] << (k + 1 < N ? "," : "]");
        rep.violations.push_back(os.str());
        rep.ok = false;
    };
    for (const auto& e : monos) {
        LaurentPoly f = LaurentPoly::monomial(N, e);
        // commutativity d_i d_j = d_j d_i
        for (int i = 1; i <= N; ++i)
            for (int j = i + 1; j <= N; ++j) {
                LaurentPoly a = dunkl_apply(i, dunkl_apply(j, f, beta), beta);
                LaurentPoly b = dunkl_apply(j, dunkl_apply(i, f, beta), beta);
                if (!(a == b)) complain("[d_i, d_j] = 0", e);
            }
        // d_i s_{i,i+1} = s_{i,i+1} d_{i+1} + 1
        for (int i = 1; i < N; ++i) {
            LaurentPoly lhs = dunkl_apply(i, f.swapped(i, i + 1), beta);
            LaurentPoly rhs = dunkl_apply(i + 1, f, beta).swapped(i, i + 1) + f;
            if (!(lhs == rhs)) complain("d_i s_i = s_i d_{i+1} + 1", e);
        }
        // d_i s_{jk} = s_{jk} d_i whenever i lies outside [j, k]. (For i strictly
        // between a non-adjacent pair the naive commutation fails, e.g.
        // d_2 s_13 - s_13 d_2 = s_12 - s_23; the algebra relation proper is the
        // one for the adjacent generators s_{j,j+1}.)
        for (int i = 1; i <= N; ++i)
            for (int j = 1; j <= N; ++j)
                for (int k = j + 1; k <= N; ++k) {
                    if (i >= j && i <= k) continue;
                    LaurentPoly lhs = dunkl_apply(i, f.swapped(j, k), beta);
                    LaurentPoly rhs = dunkl_apply(i, f, beta).swapped(j, k);
                    if (!(lhs == rhs)) complain("d_i s_jk = s_jk d_i", e);
                }
    }
    return rep;
}

const LaurentPoly& JackTable::E(const Composition& mu) {
    if (static_cast<int>(mu.size()) != n_) throw std::invalid_argument("composition size");
    auto it = cache_.find(mu);
    if (it != cache_.end()) return it->second;
    LaurentPoly built = build(mu);
    if (verify_) {
        auto deltas = delta_eigenvalue(mu, beta_);
        for (int i = 1; i <= n_; ++i) {
            if (!(dunkl_apply(i, built, beta_) == built * deltas[i - 1]))
                throw std::logic_error("nonsymmetric Jack eigenvalue postcondition failed");
        }
        // monic with dominance-triangular support
        ExpVec lead(mu.begin(), mu.end());
        if (built.coeff(lead) != 1)
            throw std::logic_error("nonsymmetric Jack is not monic");
        for (const auto& [e, c] : built.terms()) {
            Composition nu(e.begin(), e.end());
            if (nu != mu && !dominance_lower(nu, mu))
                throw std::logic_error("nonsymmetric Jack support is not triangular");
        }
    }
    return cache_.emplace(mu, std::move(built)).first->second;
}

LaurentPoly JackTable::build(const Composition& mu) {
    // base case
    if (std::all_of(mu.begin(), mu.end(), [](int p) { return p == 0; }))
        return LaurentPoly::constant(n_, 1);
    // global shift for negative parts (and to keep the recursion on min = 0)
    int m = *std::min_element(mu.begin(), mu.end());
    if (m != 0) {
        Composition nu = mu;
        for (int& p : nu) p -= m;
        ExpVec shift(n_, m);
        return E(nu).mul_monomial(shift);
    }
    // reduce inversions: mu = s_i nu with nu_i < nu_{i+1}
    for (int i = 1; i < n_; ++i) {
        if (mu[i - 1] > mu[i]) {
            Composition nu = mu;
            std::swap(nu[i - 1], nu[i]);
            auto deltas = delta_eigenvalue(nu, beta_);
            Rational gap = deltas[i - 1] - deltas[i];
            if (gap == 0) {
                std::ostringstream os;
                os << "degenerate Dunkl spectrum: delta_" << i << " = delta_" << (i + 1)
                   << " at the intertwiner step for the composition [";
                for (int k = 0; k < n_; ++k) os << nu[k] << (k + 1 < n_ ? "," : "]");
                throw std::domain_error(os.str());
            }
            const LaurentPoly& base = E(nu);
            return base.swapped(i, i + 1) + base * (Rational(-1) / gap);
        }
    }
    // mu weakly increasing with min 0 and some positive part: cyclic raising
    Composition nu(n_);
    nu[0] = mu[n_ - 1] - 1;
    for (int k = 1; k < n_; ++k) nu[k] = mu[k - 1];
    LaurentPoly e = E(nu);
    for (int i = 1; i < n_; ++i) e = e.swapped(i, i + 1);
    ExpVec zn(n_, 0);
    zn[n_ - 1] = 1;
    return e.mul_monomial(zn);
}

LaurentPoly nonsym_jack(const Composition& mu, const Rational& beta) {
    JackTable table(static_cast<int>(mu.size()), beta);
    return table.E(mu);
}

LaurentPoly vandermonde(int N) {
    LaurentPoly v = LaurentPoly::constant(N, 1);
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j)
            v = v * (LaurentPoly::variable(N, i) - LaurentPoly::variable(N, j));
    return v;
}

namespace {

void for_each_permutation(int n, const std::function<void(const std::vector<int>&, int)>& fn) {
    std::vector<int> perm(n + 1);
    std::iota(perm.begin(), perm.end(), 0);  // perm[i] = i, 1-based usage
    // iterate permutations of perm[1..n], tracking parity
    std::vector<int> p(perm.begin() + 1, perm.end());
    std::sort(p.begin(), p.end());
    do {
        // parity by counting inversions
        int inv = 0;
        for (size_t a = 0; a < p.size(); ++a)
            for (size_t b = a + 1; b < p.size(); ++b)
                if (p[a] > p[b]) ++inv;
        std::vector<int> full(n + 1);
        for (int k = 1; k <= n; ++k) full[k] = p[k - 1];
        fn(full, inv % 2 == 0 ? 1 : -1);
    } while (std::next_permutation(p.begin(), p.end()));
}

}  // namespace

LaurentPoly antisym_reduce(const Composition& lambda, const Rational& beta) {
    const int n = static_cast<int>(lambda.size());
    LaurentPoly e = nonsym_jack(lambda, beta);
    LaurentPoly out(n);
    for_each_permutation(n, [&](const std::vector<int>& perm, int sign) {
        out = out + e.permuted(perm) * Rational(sign);
    });
    return out;
}

}  // namespace spincs
