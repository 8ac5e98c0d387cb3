#include "mawarith/render.hpp"

#include <sstream>

#include "mawarith/error.hpp"

namespace mawarith {

namespace {

using enum HeirKind;

std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& slots) {
    std::string out;
    out.reserve(tmpl.size() + 64);
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] == '{') {
            const std::size_t close = tmpl.find('}', i);
            if (close != std::string_view::npos) {
                auto it = slots.find(std::string(tmpl.substr(i + 1, close - i - 1)));
                if (it != slots.end()) {
                    out += it->second;
                    i = close;
                    continue;
                }
            }
        }
        out.push_back(tmpl[i]);
    }
    return out;
}

const std::string& pick(const std::vector<std::string>& options, std::mt19937_64& rng, const char* what) {
    if (options.empty()) throw ConfigError(std::string("template bank has no ") + what + " templates");
    std::uniform_int_distribution<std::size_t> d(0, options.size() - 1);
    return options[d(rng)];
}

// Deceased phrasing agrees with the surviving spouse when there is one.
std::pair<std::string, std::string> deceased(const CaseInput& input, std::mt19937_64& rng) {
    if (input.count(husband) > 0) return {"توفيت امرأة", "وتركت"};
    if (input.count(wife) > 0) return {"توفي رجل", "وترك"};
    return std::bernoulli_distribution(0.5)(rng) ? std::pair<std::string, std::string>{"توفي رجل", "وترك"}
                                                  : std::pair<std::string, std::string>{"توفيت امرأة", "وتركت"};
}

std::map<std::string, std::string> problem_slots(const CaseInput& input, std::mt19937_64& rng,
                                                 const TemplateBank& bank) {
    auto [died, left] = deceased(input, rng);
    std::string estate;
    if (input.estate) estate = "، والتركة " + std::to_string(*input.estate) + " ريال";
    return {{"died", died}, {"left", left}, {"heirs", render_heir_list(input, bank)}, {"estate", estate}};
}

std::string_view stage_ar(Stage s) {
    switch (s) {
        case Stage::eligibility: return "الحجب";
        case Stage::shares: return "الفروض والتعصيب";
        case Stage::adjustment: return "العول والرد";
        case Stage::tasil: return "التأصيل والتصحيح";
    }
    return "";
}

std::string_view adjustment_ar(AdjustmentKind k) {
    switch (k) {
        case AdjustmentKind::none: return "عادلة";
        case AdjustmentKind::awl: return "عول";
        case AdjustmentKind::radd: return "رد";
    }
    return "";
}

std::string answer_text(const SolvedCase& s, const TemplateBank& bank) {
    std::ostringstream out;
    out << "الورثة: ";
    for (std::size_t i = 0; i < s.eligible.size(); ++i) {
        out << (i ? "، " : "") << render_heir(s.eligible[i].kind, s.eligible[i].count, bank);
    }
    out << ". المحجوبون: ";
    if (s.blocked.empty()) out << "لا أحد";
    for (std::size_t i = 0; i < s.blocked.size(); ++i) {
        const BlockedHeir& b = s.blocked[i];
        out << (i ? "، " : "") << render_heir(b.kind, b.count, bank) << " بسبب " << render_heir(b.blocker, 1, bank);
    }
    out << ". الفروض: ";
    bool first = true;
    for (const auto& [kind, share] : s.shares) {
        out << (first ? "" : "، ") << render_heir(kind, s.input.count(kind), bank) << " " << share.str();
        first = false;
    }
    out << ". نوع المسألة: " << adjustment_ar(s.adjustment.kind) << ". أصل المسألة " << s.adjustment.original_base;
    if (s.adjustment.kind == AdjustmentKind::awl) out << " وتعول إلى " << s.adjustment.adjusted_base;
    if (s.adjustment.kind == AdjustmentKind::radd) out << " وترد إلى " << s.adjustment.adjusted_base;
    out << " وتصح من " << s.final_base << ". التوزيع: ";
    first = true;
    for (const auto& [kind, a] : s.post_tasil) {
        out << (first ? "" : "، ") << render_heir(kind, s.input.count(kind), bank) << " " << a.siham << " سهم، لكل واحد "
            << format_percent(a.per_head_percent) << "%";
        first = false;
    }
    out << ".";
    return out.str();
}

}  // namespace

const TemplateBank& default_templates() {
    static const TemplateBank bank = [] {
        TemplateBank b;
        for (HeirKind k : all_heir_kinds()) {
            const HeirInfo& info = heir_info(k);
            b.names[k] = {std::string(info.arabic), std::string(info.arabic_plural)};
        }
        b.problem = {
            "{died} {left} {heirs}{estate}. كيف تقسم التركة؟",
            "هلك هالك عن {heirs}{estate}، فما نصيب كل وارث؟",
            "مسألة ميراث: الورثة هم {heirs}{estate}. بين الحجب والفروض والتوزيع.",
        };
        b.query = {
            "سؤال عن الميراث: {died} وخلف من الورثة {heirs}{estate}. وزع التركة.",
            "كيف توزع تركة من مات {left} {heirs}{estate}؟",
            "ورثة الميت: {heirs}{estate}. احسب نصيب كل واحد منهم.",
        };
        b.qa = {
            "س: {problem}\nج: {answer}",
            "السؤال: {problem}\nالجواب: {answer}",
            "{problem}\nالحل: {answer}",
        };
        b.trace_line = {
            "{n}. {stage}: {note}",
            "- {stage}: {note}",
            "[{stage}] {note}",
        };
        return b;
    }();
    return bank;
}

std::string render_heir(HeirKind kind, int count, const TemplateBank& bank) {
    auto it = bank.names.find(kind);
    if (it == bank.names.end()) {
        throw ConfigError("template bank has no name for heir '" + std::string(heir_id(kind)) + "'");
    }
    if (count == 1) return it->second.first;
    return std::to_string(count) + " " + it->second.second;
}

std::string render_heir_list(const CaseInput& input, const TemplateBank& bank) {
    std::string out;
    for (const auto& [kind, count] : input.heirs) {
        if (!out.empty()) out += " و";
        out += render_heir(kind, count, bank);
    }
    return out;
}

std::string format_percent(const Frac& percent) {
    const __int128 n = percent.num();
    const __int128 d = percent.den();
    const bool neg = n < 0;
    const __int128 mag = neg ? -n : n;
    const __int128 hundredths = (mag * 100 * 2 + d) / (2 * d);
    std::string out = std::to_string(static_cast<long long>(hundredths / 100));
    const int frac = static_cast<int>(hundredths % 100);
    if (frac != 0) {
        out += '.';
        out += static_cast<char>('0' + frac / 10);
        if (frac % 10 != 0) out += static_cast<char>('0' + frac % 10);
    }
    if (neg && hundredths != 0) out.insert(0, "-");
    return out;
}

Document render_views(const SolvedCase& solved, std::mt19937_64& rng, const TemplateBank& bank) {
    Document doc;
    doc.structured_output = solved;
    doc.category = category_of(solved.adjustment.kind);
    // Draws happen in a fixed order so a given rng state always yields the same document.
    const std::string& problem = pick(bank.problem, rng, "problem");
    doc.problem_text_ar = fill(problem, problem_slots(solved.input, rng, bank));
    const std::string& qa = pick(bank.qa, rng, "qa");
    doc.qa_text = fill(qa, {{"problem", doc.problem_text_ar}, {"answer", answer_text(solved, bank)}});

    const std::string& line = pick(bank.trace_line, rng, "trace_line");
    int n = 0;
    for (const TraceRecord& r : solved.trace) {
        if (!doc.reasoning_trace.empty()) doc.reasoning_trace += '\n';
        doc.reasoning_trace +=
            fill(line, {{"n", std::to_string(++n)}, {"stage", std::string(stage_ar(r.stage))}, {"note", r.note}});
    }
    return doc;
}

std::string render_query(const CaseInput& input, std::mt19937_64& rng, const TemplateBank& bank) {
    const std::string& query = pick(bank.query, rng, "query");
    return fill(query, problem_slots(input, rng, bank));
}

}  // namespace mawarith
