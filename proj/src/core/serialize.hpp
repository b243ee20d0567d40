#pragma once

// JSON and CSV forms of the library's results. Exact values are always
// written as strings in the exact_arith text forms.

#include <optional>
#include <string>

#include <json.hpp>

#include "genseq.hpp"
#include "semigroup_lab.hpp"

namespace semival {

using json = nlohmann::ordered_json;

// {"form", "sigma", "tau"}; weights as JSON integers when they fit, strings otherwise.
json valuation_to_json(const ValuationDef& v);

// Accepts the same shape, plus "choose_sigma": {"f", "i_max"} and
// "choose_tau": {"g", "i_max"} in place of explicit weight arrays.
ValuationDef valuation_from_json(const json& j);

json expansion_to_json(const ValuationDef& v, const Expansion& e);
json valuation_result_to_json(const ValuationDef& v, const MPoly& f, const Valuation& val);
json key_identity_to_json(const KeyIdentity& k);

json generators_to_json(const GenSemigroup& g);
json tilde_to_json(const GenSemigroup& g, const QuadReal& lambda, const std::optional<TildeEntry>& t);

json contradiction_to_json(const ContradictionTable& t);
std::string contradiction_to_csv(const ContradictionTable& t);

json box_report_to_json(const BoxBoundReport& r);

json certificate_to_json(const WildCertificate& c, const ValuationDef& v,
                         const std::optional<IntFunction>& f, const std::optional<IntFunction>& g);
std::string certificate_to_csv(const WildCertificate& c);

// Decimal rendering, for display only.
std::string approx(const QuadReal& q, int digits = 12);
std::string approx(const LexVec& v, int digits = 12);

Int json_int(const json& j, const char* what);

}  // namespace semival
