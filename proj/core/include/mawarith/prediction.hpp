#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mawarith/case.hpp"
#include "mawarith/case_json.hpp"
#include "mawarith/frac.hpp"

namespace mawarith {

/// A numeric field from model output. Exact when it parsed as a fraction or a
/// finite decimal, otherwise only the double is meaningful.
struct Number {
    std::optional<Frac> exact;
    double value = 0.0;

    static Number of(const Frac& f) { return {f, f.to_double()}; }
    friend bool operator==(const Number&, const Number&) = default;
};

/// Accepts "3/7", "0.5", "1e-3", "50%" and Arabic-Indic digits. With
/// `percent_to_unit` a trailing percent sign divides by 100.
std::optional<Number> parse_number(std::string_view text, bool percent_to_unit = false);

/// Maps the surface forms of the adjustment label onto the three canonical kinds.
class LabelAliases {
public:
    /// English and Arabic spellings of none / awl / radd.
    static const LabelAliases& standard();

    void add(std::string_view surface, AdjustmentKind kind);
    std::optional<AdjustmentKind> resolve(std::string_view surface) const;

private:
    static std::string key(std::string_view surface);
    std::map<std::string, AdjustmentKind> table_;
};

enum class Route : std::uint8_t { direct, fenced_block, balanced_scan, field_harvest, default_fill };
std::string_view to_string(Route r) noexcept;
std::optional<Route> route_from_string(std::string_view s) noexcept;

struct TasilStage {
    std::optional<Number> asl;
    std::optional<Number> adjusted;
    std::optional<Number> final_base;
    friend bool operator==(const TasilStage&, const TasilStage&) = default;
};

struct PostEntry {
    Number percent;  // per head, percentage points
    std::optional<int> count;
    std::optional<Number> siham;
    friend bool operator==(const PostEntry&, const PostEntry&) = default;
};

/// Stage fields as a model reported them. Absent fields stay nullopt.
struct Prediction {
    std::string id;
    std::optional<std::map<HeirKind, int>> heirs;
    std::optional<std::vector<HeirKind>> blocked;  // sorted, unique
    std::optional<std::map<HeirKind, Number>> shares;
    std::optional<std::string> awl_or_radd;        // surface form as written
    std::optional<AdjustmentKind> adjustment;      // resolved label, when the alias table knows it
    std::optional<TasilStage> tasil_stage;
    std::optional<std::map<HeirKind, PostEntry>> post_tasil;

    Route route = Route::direct;
    std::vector<std::string> defaulted;     // fields filled by apply_defaults
    std::vector<std::string> type_issues;   // values that did not match their field's kind
    std::vector<std::string> label_issues;  // unknown heir names or adjustment labels

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Field names recognised at the top level of a structured answer, with
/// common variants (e.g. awl_stage, distribution). Returns the canonical
/// field or nullopt.
std::optional<std::string_view> canonical_field(std::string_view key);

/// Decodes a structured answer object. Never throws on bad values: they are
/// recorded as type or label issues and the field is kept with what parsed.
Prediction prediction_from_json(const ordered_json& object, const LabelAliases& aliases = LabelAliases::standard());

/// The gold record viewed as a prediction.
Prediction prediction_from_solved(const SolvedCase& solved);

/// Normalized stage object: heirs, blocked, shares, awl_or_radd, tasil_stage,
/// post_tasil, in the canonical record's shapes. Absent fields are omitted.
ordered_json to_json(const Prediction& p);

/// to_json plus id, route, defaulted flags and issues, for prediction files.
ordered_json prediction_record(const Prediction& p);
Prediction prediction_from_record(const ordered_json& record);

}  // namespace mawarith
