#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mawarith/frac.hpp"
#include "mawarith/prediction.hpp"

namespace mawarith {

/// Structured answer recovery. Routes run in a fixed order and the first that
/// yields at least one stage field wins:
///   direct         the whole text is a JSON object
///   fenced-block   a ``` fenced block holds one
///   balanced-scan  the first brace-balanced object that parses
///   field-harvest  "key: value" fragments in prose
/// Before parsing, common artifacts are cleaned: typographic quotes, trailing
/// commas, comments, a byte-order mark. A one-key wrapper object such as
/// {"answer": {...}} is unwrapped. Returns nullopt when every route fails.
std::optional<Prediction> extract_structured(std::string_view answer_text,
                                             const LabelAliases& aliases = LabelAliases::standard());

/// Empty prediction marked as default-filled, for answers nothing could be read from.
Prediction default_fill();

struct CheckResult {
    bool pass = true;
    std::vector<std::string> diagnostics;
};

struct ValidationReport {
    CheckResult c_keys;
    CheckResult c_types;
    CheckResult c_labels;
    CheckResult c_mass;
    bool overall = false;
    Frac mass_sum;          // sum of per-head percent times count, when exact
    double mass_value = 0;  // the same sum as a double
};

struct ValidatorConfig {
    Frac epsilon{5};  // tolerance on the mass sum, percentage points, inclusive
};

/// c_keys: heirs, shares and awl_or_radd present.
/// c_types: every present field decoded without a type issue.
/// c_labels: the adjustment label resolved and every heir name is on the roster.
/// c_mass: |sum(per_head_percent * count) - 100| <= epsilon over post_tasil.
/// Never throws.
ValidationReport validate(const Prediction& pred, const ValidatorConfig& config = {});

/// Fills non-critical fields: blocked becomes empty and tasil_stage is
/// derived from the shares and the label. Filled fields are listed in
/// `defaulted`. Idempotent. Throws InputError when a critical key is missing.
Prediction apply_defaults(Prediction pred);

/// Default tasil_stage: asl is the lcm of the exact share denominators; for
/// awl the adjusted base is the inflated share sum over that asl; for radd it
/// is the sum over the non-spouse shares; otherwise it equals asl.
TasilStage default_tasil(const Prediction& pred);

}  // namespace mawarith
