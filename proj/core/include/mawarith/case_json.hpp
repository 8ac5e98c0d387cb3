#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "mawarith/case.hpp"

namespace mawarith {

using ordered_json = nlohmann::ordered_json;

/// Canonical record of a solved case.
///
/// Top-level keys, in order: input, heirs, blocked, shares, awl_or_radd,
/// tasil_stage, adjusted_shares, post_tasil, trace. Fractions are "num/den"
/// strings. The stage keys (heirs .. post_tasil) are exactly what a model is
/// asked to produce, so the same object doubles as a gold prediction.
ordered_json to_json(const SolvedCase& solved);
SolvedCase solved_case_from_json(const ordered_json& j);

ordered_json to_json(const CaseInput& input);
CaseInput case_input_from_json(const ordered_json& j);

/// Compact single-line dump of to_json(solved).
std::string to_canonical_string(const SolvedCase& solved);

}  // namespace mawarith
