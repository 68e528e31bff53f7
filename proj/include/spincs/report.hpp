#pragma once

#include <gmpxx.h>

#include <nlohmann/json.hpp>
#include <string>

#include "spincs/types.hpp"

// Report conventions: complex numbers serialize as [re, im] pairs of decimal
// doubles, exact rationals as "p/q" strings; field order is fixed by using
// ordered_json throughout.

namespace spincs {

using Rational = mpq_class;

nlohmann::ordered_json json_complex(cplx z);
cplx complex_from_json(const nlohmann::json& j);
std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

// Parse "3/2", "1.5", "2", "0.3+0.1i", "-i", ... into a complex double.
cplx parse_complex(const std::string& token);
// Parse "3/2" or "2" into an exact rational (no decimals).
Rational parse_rational(const std::string& token);

// Wrap results with a version tag and a hash of the generating config.
nlohmann::ordered_json emit_report(const std::string& command, const nlohmann::ordered_json& config,
                                   const nlohmann::ordered_json& results);

std::uint64_t fnv1a_hash(const std::string& data);

}  // namespace spincs
