#pragma once

#include <string>

#include <json.hpp>

#include "markov/combs.hpp"
#include "markov/interp.hpp"
#include "markov/stoch.hpp"

namespace markov {

// Kernel JSON: {"dom": [{"name":..,"card":..},..], "cod": [..], "rows": [[..],..]}
// with one row per dom index in the documented lexicographic order. Entries
// may be JSON numbers or exact decimal strings.
nlohmann::json kernel_to_json(const Kernel& k);
Kernel kernel_from_json(const nlohmann::json& j, const Tolerances& tol = {});

nlohmann::json factors_to_json(const Factors& fs);
Factors factors_from_json(const nlohmann::json& j);

// Model JSON: {"types": {"X": 2, ...}, "boxes": {"f": {"rows": [[..],..]}, ...}}.
// Box kernel shapes are implied by the signature and the type cardinalities.
Model model_from_json(const nlohmann::json& j, SignaturePtr sig, const Tolerances& tol = {});
nlohmann::json model_to_json(const Model& m);

// Comb JSON: the two teeth plus environment and boundary declarations.
nlohmann::json comb_to_json(const Comb& c);
Comb comb_from_json(const nlohmann::json& j, const Tolerances& tol = {});

}  // namespace markov
