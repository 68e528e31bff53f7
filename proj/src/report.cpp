#include "spincs/report.hpp"

#include <sstream>
#include <stdexcept>

namespace spincs {

nlohmann::ordered_json json_complex(cplx z) {
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

cplx complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return cplx{j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return cplx{j[0].get<double>(), j[1].get<double>()};
    throw std::invalid_argument("complex value must be a number or [re, im]");
}

std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << r.get_num();
    if (r.get_den() != 1) os << "/" << r.get_den();
    return os.str();
}

Rational rational_from_string(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

Rational parse_rational(const std::string& token) { return rational_from_string(token); }

cplx parse_complex(const std::string& token) {
    std::string s = token;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty()) throw std::invalid_argument("empty number");
    // Split into real and imaginary pieces at a +/- that is not an exponent sign.
    auto parse_real = [](const std::string& t) -> double {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        if (t.find('/') != std::string::npos) {
            Rational r = rational_from_string(t);
            return r.get_d();
        }
        return std::stod(t);
    };
    size_t split = std::string::npos;
    for (size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    bool has_i = s.back() == 'i' || s.back() == 'j';
    if (!has_i) return cplx{parse_real(s), 0.0};
    if (split == std::string::npos || split == 0)
        return cplx{0.0, parse_real(s.substr(0, s.size() - 1))};
    return cplx{parse_real(s.substr(0, split)), parse_real(s.substr(split, s.size() - split - 1))};
}

std::uint64_t fnv1a_hash(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

nlohmann::ordered_json emit_report(const std::string& command, const nlohmann::ordered_json& config,
                                   const nlohmann::ordered_json& results) {
    nlohmann::ordered_json out;
    out["tool"] = "spincs";
    out["version"] = "0.1.0";
    out["command"] = command;
    std::ostringstream hash;
    hash << std::hex << fnv1a_hash(config.dump());
    out["config_hash"] = hash.str();
    out["config"] = config;
    out["results"] = results;
    return out;
}

}  // namespace spincs
