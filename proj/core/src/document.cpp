#include "mawarith/document.hpp"

#include "mawarith/error.hpp"

namespace mawarith {

std::string_view to_string(Category c) noexcept {
    switch (c) {
        case Category::simple: return "simple";
        case Category::awl: return "awl";
        case Category::radd: return "radd";
    }
    return "simple";
}

std::string_view to_string(SourceTag t) noexcept {
    switch (t) {
        case SourceTag::synthetic: return "synthetic";
        case SourceTag::pdf: return "pdf";
        case SourceTag::web: return "web";
    }
    return "synthetic";
}

std::optional<Category> category_from_string(std::string_view s) noexcept {
    if (s == "simple") return Category::simple;
    if (s == "awl") return Category::awl;
    if (s == "radd") return Category::radd;
    return std::nullopt;
}

std::optional<SourceTag> source_tag_from_string(std::string_view s) noexcept {
    if (s == "synthetic") return SourceTag::synthetic;
    if (s == "pdf") return SourceTag::pdf;
    if (s == "web") return SourceTag::web;
    return std::nullopt;
}

Category category_of(AdjustmentKind kind) noexcept {
    switch (kind) {
        case AdjustmentKind::awl: return Category::awl;
        case AdjustmentKind::radd: return Category::radd;
        case AdjustmentKind::none: break;
    }
    return Category::simple;
}

ordered_json to_json(const Document& doc) {
    return ordered_json{
        {"id", doc.id},
        {"category", to_string(doc.category)},
        {"source_tag", to_string(doc.source_tag)},
        {"difficulty", doc.difficulty},
        {"problem_text_ar", doc.problem_text_ar},
        {"qa_text", doc.qa_text},
        {"reasoning_trace", doc.reasoning_trace},
        {"structured_output", to_json(doc.structured_output)},
    };
}

Document document_from_json(const ordered_json& j) {
    try {
        Document doc;
        doc.id = j.at("id").get<std::string>();
        const auto cat = category_from_string(j.at("category").get<std::string>());
        if (!cat) throw FormatError("unknown category in document " + doc.id);
        doc.category = *cat;
        const auto tag = source_tag_from_string(j.at("source_tag").get<std::string>());
        if (!tag) throw FormatError("unknown source_tag in document " + doc.id);
        doc.source_tag = *tag;
        doc.difficulty = j.value("difficulty", 0.0);
        doc.problem_text_ar = j.value("problem_text_ar", std::string());
        doc.qa_text = j.at("qa_text").get<std::string>();
        doc.reasoning_trace = j.value("reasoning_trace", std::string());
        doc.structured_output = solved_case_from_json(j.at("structured_output"));
        if (doc.qa_text.empty()) throw FormatError("document " + doc.id + " has an empty qa_text");
        return doc;
    } catch (const ordered_json::exception& e) {
        throw FormatError(std::string("malformed document record: ") + e.what());
    }
}

}  // namespace mawarith
