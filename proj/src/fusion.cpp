#include "spincs/fusion.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>

#include "spincs/report.hpp"

namespace spincs {

std::string to_string(FusionClass c) {
    switch (c) {
        case FusionClass::generic: return "generic";
        case FusionClass::independent: return "independent";
        case FusionClass::three_site_antisymmetric: return "three-site antisymmetric";
        case FusionClass::three_site_symmetric: return "three-site symmetric";
        case FusionClass::three_site_mixed: return "three-site mixed";
        case FusionClass::unclassified: return "unclassified";
    }
    return "unclassified";
}

std::string FusionPattern::to_json() const {
    nlohmann::ordered_json j;
    j["class"] = to_string(cls);
    j["pairs"] = nlohmann::ordered_json::array();
    for (auto [site, sign] : pairs)
        j["pairs"].push_back({{"j", site}, {"sign", sign}, {"kind", sign < 0 ? "singlet" : "triplet"}});
    j["resonances"] = nlohmann::ordered_json::array();
    for (auto [a, b] : resonances) j["resonances"].push_back({a, b});
    return j.dump();
}

FusionPattern detect_fusion(const std::vector<cplx>& theta, double tol) {
    FusionPattern out;
    const int L = static_cast<int>(theta.size());
    // collect all resonances theta_b - theta_a = +-i, a < b
    std::vector<std::pair<int, int>> edges;  // 1-based (a, b)
    for (int a = 1; a <= L; ++a)
        for (int b = a + 1; b <= L; ++b) {
            cplx d = theta[b - 1] - theta[a - 1];
            if (std::abs(d - II) < tol || std::abs(d + II) < tol) edges.push_back({a, b});
        }
    out.resonances = edges;
    for (int j = 1; j < L; ++j) {
        cplx d = theta[j] - theta[j - 1];
        if (std::abs(d - II) < tol) out.pairs.push_back({j, -1});  // singlet
        else if (std::abs(d + II) < tol) out.pairs.push_back({j, +1});  // triplet
    }
    if (edges.empty()) {
        out.cls = FusionClass::generic;
        return out;
    }
    // connected components of the resonance graph
    std::map<int, int> comp;
    for (auto [a, b] : edges) {
        comp.emplace(a, a);
        comp.emplace(b, b);
    }
    std::function<int(int)> find = [&](int x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    for (auto [a, b] : edges) comp[find(a)] = find(b);
    std::map<int, std::vector<int>> groups;
    for (auto& [site, _] : comp) groups[find(site)].push_back(site);
    size_t max_size = 0;
    int n_three = 0;
    for (auto& [root, members] : groups) {
        max_size = std::max(max_size, members.size());
        if (members.size() == 3) ++n_three;
    }
    if (max_size == 2) {
        out.cls = FusionClass::independent;
    } else if (max_size == 3 && n_three == 1 && groups.size() == 1 && edges.size() == 2) {
        // two resonance edges sharing a center vertex: the steps from the ends
        // through the center determine the type
        auto members = groups.begin()->second;
        auto [e1a, e1b] = edges[0];
        auto [e2a, e2b] = edges[1];
        int center = (e1a == e2a || e1a == e2b) ? e1a : e1b;
        std::vector<int> ends;
        for (int m : members)
            if (m != center) ends.push_back(m);
        std::sort(ends.begin(), ends.end());
        cplx step1 = theta[center - 1] - theta[ends[0] - 1];
        cplx step2 = theta[ends[1] - 1] - theta[center - 1];
        bool up1 = std::abs(step1 - II) < tol, up2 = std::abs(step2 - II) < tol;
        bool dn1 = std::abs(step1 + II) < tol, dn2 = std::abs(step2 + II) < tol;
        if (up1 && up2) out.cls = FusionClass::three_site_antisymmetric;
        else if (dn1 && dn2) out.cls = FusionClass::three_site_symmetric;
        else out.cls = FusionClass::three_site_mixed;
    } else {
        out.cls = FusionClass::unclassified;
    }
    return out;
}

InvariantSubspace invariant_subspace(int j, int sign, int L) {
    if (j < 1 || j >= L) throw std::invalid_argument("pair index out of range");
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    InvariantSubspace sub;
    sub.site = j;
    sub.sign = sign;
    sub.projector = pair_projector(j, j + 1, L, sign);
    const int d = space_dim(L);
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<Vec> cols;
    for (std::uint32_t rest = 0; rest < (1u << (L - 2)); ++rest) {
        // rebuild a full code with given bits at sites j, j+1
        auto with_pair = [&](int bj, int bj1) {
            std::uint32_t code = 0;
            int src = L - 3;  // bit position in "rest" (site order preserved)
            for (int site = 1; site <= L; ++site) {
                int bit;
                if (site == j) bit = bj;
                else if (site == j + 1) bit = bj1;
                else bit = (rest >> src--) & 1u;
                code = (code << 1) | static_cast<std::uint32_t>(bit);
            }
            return code;
        };
        if (sign < 0) {
            Vec v = Vec::Zero(d);
            v(with_pair(0, 1)) = s;
            v(with_pair(1, 0)) = -s;
            cols.push_back(v);
        } else {
            Vec v = Vec::Zero(d);
            v(with_pair(0, 0)) = 1.0;
            cols.push_back(v);
            v = Vec::Zero(d);
            v(with_pair(0, 1)) = s;
            v(with_pair(1, 0)) = s;
            cols.push_back(v);
            v = Vec::Zero(d);
            v(with_pair(1, 1)) = 1.0;
            cols.push_back(v);
        }
    }
    sub.dimension = static_cast<int>(cols.size());
    sub.basis = Mat(d, sub.dimension);
    for (int k = 0; k < sub.dimension; ++k) sub.basis.col(k) = cols[k];
    return sub;
}

LeakageReport invariance_check(const ChainSpec& spec, const InvariantSubspace& sub) {
    spec.validate();
    Monodromy m = monodromy(spec);
    const Mat& p = sub.projector;
    Mat pc = identity_op(spec.L) - p;
    const cplx points[3] = {{0.437, 0.211}, {-1.13, 0.53}, {2.07, -0.35}};
    LeakageReport rep;
    for (char e : {'A', 'B', 'C', 'D'}) {
        for (cplx u : points) {
            Mat x = m.entry(e).eval(u);
            double scale = std::max(1.0, x.norm());
            rep.inside = std::max(rep.inside, (pc * x * p).norm() / scale);
            rep.complement = std::max(rep.complement, (p * x * pc).norm() / scale);
        }
    }
    return rep;
}

FusedR fused_r_matrices(cplx u) {
    if (std::abs(u + II * 1.5) < 1e-12)
        throw std::domain_error("spin-1 R-matrix has a pole at u = -3i/2");
    if (std::abs(u + II * 0.5) < 1e-12)
        throw std::domain_error("qdet has a pole at u = -i/2");
    FusedR out;
    out.spin1 = Mat::Zero(6, 6);
    const cplx d = u + II * 1.5;
    const cplx off = std::sqrt(2.0) * II / d;
    out.spin1(0, 0) = 1.0;
    out.spin1(5, 5) = 1.0;
    out.spin1(1, 1) = (u + II * 0.5) / d;
    out.spin1(2, 2) = (u - II * 0.5) / d;
    out.spin1(3, 3) = (u - II * 0.5) / d;
    out.spin1(4, 4) = (u + II * 0.5) / d;
    out.spin1(1, 3) = off;
    out.spin1(2, 4) = off;
    out.spin1(3, 1) = off;
    out.spin1(4, 2) = off;
    out.spin0 = (u - II * 0.5) / (u + II * 0.5);
    return out;
}

cplx special_root(const std::vector<cplx>& theta, int j, double tol) {
    const int L = static_cast<int>(theta.size());
    if (j < 1 || j >= L) throw std::invalid_argument("pair index out of range");
    cplx d = theta[j] - theta[j - 1];
    if (std::abs(d - II) > tol && std::abs(d + II) > tol)
        throw std::invalid_argument("pair (j, j+1) is not fused");
    return 0.5 * (theta[j - 1] + theta[j]);
}

Vec b_at_special_root(const ChainSpec& spec, int j) {
    spec.validate();
    cplx u0 = special_root(spec.theta, j);
    Monodromy m = monodromy(spec);
    Vec vac = Vec::Zero(space_dim(spec.L));
    vac(0) = 1.0;
    return m.B.eval(u0) * vac;
}

AdjacentizedChain make_adjacent(const ChainSpec& spec, double tol) {
    spec.validate();
    AdjacentizedChain out;
    out.spec = spec;
    out.transport = identity_op(spec.L);
    out.site_map.resize(spec.L + 1);
    for (int i = 1; i <= spec.L; ++i) out.site_map[i] = i;

    auto resonant = [&](cplx a, cplx b) {
        cplx d = b - a;
        return std::abs(d - II) < tol || std::abs(d + II) < tol;
    };
    // bring each leftmost unpaired resonance together by moving the partner
    for (int a = 1; a < out.spec.L; ++a) {
        if (resonant(out.spec.theta[a - 1], out.spec.theta[a])) {
            ++a;  // already adjacent; skip the partner
            continue;
        }
        int partner = 0;
        for (int b = a + 2; b <= out.spec.L; ++b)
            if (resonant(out.spec.theta[a - 1], out.spec.theta[b - 1])) {
                partner = b;
                break;
            }
        if (partner == 0) continue;
        for (int j = partner - 1; j > a; --j) {
            auto [swapped, conj] = exchange_conjugation(out.spec, j);
            std::swap(out.spec.theta[j - 1], out.spec.theta[j]);
            out.transport = conj * out.transport;
            for (int i = 1; i <= spec.L; ++i) {
                if (out.site_map[i] == j) out.site_map[i] = j + 1;
                else if (out.site_map[i] == j + 1) out.site_map[i] = j;
            }
        }
        ++a;
    }
    return out;
}

ReducedChain reduced_chain(const ChainSpec& spec, const FusionPattern& pattern) {
    spec.validate();
    for (auto [j, sign] : pattern.pairs)
        if (sign > 0)
            throw std::invalid_argument(
                "triplet pairs cannot be reduced away (quotient construction is out of scope)");
    // pairs must be disjoint
    std::vector<int> dropped;
    for (auto [j, sign] : pattern.pairs) {
        dropped.push_back(j);
        dropped.push_back(j + 1);
    }
    std::sort(dropped.begin(), dropped.end());
    if (std::adjacent_find(dropped.begin(), dropped.end()) != dropped.end())
        throw std::invalid_argument("overlapping fused pairs cannot be reduced");
    ReducedChain out;
    out.dropped = dropped;
    out.prefactor = Poly::one();
    for (auto [j, sign] : pattern.pairs) {
        cplx u0 = special_root(spec.theta, j);
        out.u0.push_back(u0);
        // singlet pair contributes (u - u0 + i)(u - u0 - i) to every eigenvalue
        out.prefactor = out.prefactor * Poly({-u0 + II, cplx{1.0, 0.0}}) *
                        Poly({-u0 - II, cplx{1.0, 0.0}});
    }
    out.spec.kappa = spec.kappa;
    for (int i = 1; i <= spec.L; ++i)
        if (!std::binary_search(dropped.begin(), dropped.end(), i))
            out.spec.theta.push_back(spec.theta[i - 1]);
    out.spec.L = static_cast<int>(out.spec.theta.size());
    return out;
}

}  // namespace spincs
