#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mawarith/case.hpp"
#include "mawarith/case_json.hpp"

namespace mawarith {

/// Adjustment class of a case, as used for corpus balancing and reporting.
enum class Category : std::uint8_t { simple, awl, radd };
enum class SourceTag : std::uint8_t { synthetic, pdf, web };

std::string_view to_string(Category c) noexcept;
std::string_view to_string(SourceTag t) noexcept;
std::optional<Category> category_from_string(std::string_view s) noexcept;
std::optional<SourceTag> source_tag_from_string(std::string_view s) noexcept;

Category category_of(AdjustmentKind kind) noexcept;

/// A solved case in its four views. qa_text is the view that gets indexed.
struct Document {
    std::string id;
    std::string problem_text_ar;
    std::string qa_text;
    std::string reasoning_trace;
    SolvedCase structured_output;
    Category category = Category::simple;
    SourceTag source_tag = SourceTag::synthetic;
    double difficulty = 0.0;  // 0..10

    friend bool operator==(const Document&, const Document&) = default;
};

/// Record layout: id, category, source_tag, difficulty, problem_text_ar,
/// qa_text, reasoning_trace, structured_output.
ordered_json to_json(const Document& doc);
Document document_from_json(const ordered_json& j);

}  // namespace mawarith
