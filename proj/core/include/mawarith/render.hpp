#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "mawarith/document.hpp"

namespace mawarith {

/// Surface templates for the text views. Slots are written {name}.
///
/// problem / query slots: {died} {left} {heirs} {estate}
/// qa slots: {problem} {answer}
/// trace_line slots: {n} {stage} {note}
struct TemplateBank {
    std::map<HeirKind, std::pair<std::string, std::string>> names;  // singular, plural
    std::vector<std::string> problem;
    std::vector<std::string> query;  // paraphrases kept apart from `problem` for held-out questions
    std::vector<std::string> qa;
    std::vector<std::string> trace_line;
};

const TemplateBank& default_templates();

/// "{name}" for one head, "{n} {plural}" otherwise. Throws ConfigError when
/// the bank has no name for the kind.
std::string render_heir(HeirKind kind, int count, const TemplateBank& bank = default_templates());

/// Heirs of a case input in canonical order, joined with the Arabic "and".
std::string render_heir_list(const CaseInput& input, const TemplateBank& bank = default_templates());

/// Exact percentage rounded half-up to two decimals, trailing zeros dropped ("42.86", "100").
std::string format_percent(const Frac& percent);

/// Renders the four views. The id is left empty for the caller to assign.
Document render_views(const SolvedCase& solved, std::mt19937_64& rng, const TemplateBank& bank = default_templates());

/// A question about the case phrased with the `query` templates only.
std::string render_query(const CaseInput& input, std::mt19937_64& rng, const TemplateBank& bank = default_templates());

}  // namespace mawarith
