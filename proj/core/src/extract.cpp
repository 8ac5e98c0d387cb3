#include "mawarith/extract.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "mawarith/error.hpp"
#include "mawarith/text.hpp"

namespace mawarith {

namespace {

constexpr std::size_t kMaxScanCandidates = 256;

void replace_all(std::string& s, std::string_view from, std::string_view to) {
    for (auto p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) s.replace(p, from.size(), to);
}

// Typographic quotes, a BOM, and trailing commas before a closing bracket.
std::string clean_artifacts(std::string_view text) {
    std::string s(text);
    if (s.rfind("\xEF\xBB\xBF", 0) == 0) s.erase(0, 3);
    for (std::string_view q : {"“", "”", "„", "″", "«", "»"}) replace_all(s, q, "\"");
    for (std::string_view q : {"‘", "’"}) replace_all(s, q, "'");

    std::string out;
    out.reserve(s.size());
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (in_string) {
            out.push_back(c);
            if (c == '\\' && i + 1 < s.size()) {
                out.push_back(s[++i]);
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') in_string = true;
        if (c == ',') {
            auto j = s.find_first_not_of(" \t\r\n", i + 1);
            if (j != std::string::npos && (s[j] == '}' || s[j] == ']')) continue;
        }
        out.push_back(c);
    }
    return out;
}

bool has_stage_field(const ordered_json& j) {
    if (!j.is_object()) return false;
    for (const auto& [k, v] : j.items()) {
        if (canonical_field(k)) return true;
    }
    return false;
}

// Unwraps {"answer": {...}}-style envelopes, two levels at most.
const ordered_json* stage_object(const ordered_json& j) {
    const ordered_json* cur = &j;
    for (int depth = 0; depth < 3; ++depth) {
        if (!cur->is_object()) return nullptr;
        if (has_stage_field(*cur)) return cur;
        const ordered_json* only = nullptr;
        for (const auto& [k, v] : cur->items()) {
            if (!v.is_object()) continue;
            if (only) return nullptr;
            only = &v;
        }
        if (!only) return nullptr;
        cur = only;
    }
    return nullptr;
}

std::optional<Prediction> try_parse(std::string_view text, Route route, const LabelAliases& aliases) {
    std::string cleaned = clean_artifacts(text);
    ordered_json j = ordered_json::parse(cleaned, nullptr, false, true);
    if (j.is_discarded() && cleaned.find('"') == std::string::npos && cleaned.find('\'') != std::string::npos) {
        replace_all(cleaned, "'", "\"");
        j = ordered_json::parse(cleaned, nullptr, false, true);
    }
    if (j.is_discarded()) return std::nullopt;
    const ordered_json* obj = stage_object(j);
    if (!obj) return std::nullopt;
    Prediction p = prediction_from_json(*obj, aliases);
    p.route = route;
    return p;
}

std::optional<Prediction> fenced(std::string_view text, const LabelAliases& aliases) {
    std::size_t pos = 0;
    while (true) {
        const auto open = text.find("```", pos);
        if (open == std::string_view::npos) return std::nullopt;
        const auto line_end = text.find('\n', open);
        if (line_end == std::string_view::npos) return std::nullopt;
        const auto close = text.find("```", line_end);
        if (close == std::string_view::npos) return std::nullopt;
        if (auto p = try_parse(text.substr(line_end + 1, close - line_end - 1), Route::fenced_block, aliases)) return p;
        pos = close + 3;
    }
}

// Index one past the brace matching text[start], or npos.
std::size_t match_brace(std::string_view text, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return i + 1;
        }
    }
    return std::string_view::npos;
}

std::optional<Prediction> balanced(std::string_view text, const LabelAliases& aliases) {
    std::size_t tried = 0;
    for (auto open = text.find('{'); open != std::string_view::npos && tried < kMaxScanCandidates;
         open = text.find('{', open + 1)) {
        const auto end = match_brace(text, open);
        if (end == std::string_view::npos) continue;
        ++tried;
        if (auto p = try_parse(text.substr(open, end - open), Route::balanced_scan, aliases)) return p;
    }
    return std::nullopt;
}

struct KeyHit {
    std::size_t pos;
    std::size_t value_start;
    std::string_view field;
};

bool word_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || u >= 0x80;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Surface spellings searched for in prose, including spaced variants.
const std::vector<std::pair<std::string, std::string_view>>& harvest_keys() {
    static const std::vector<std::pair<std::string, std::string_view>> keys = [] {
        std::vector<std::pair<std::string, std::string_view>> k;
        const std::pair<const char*, std::string_view> base[] = {
            {"heirs", "heirs"},
            {"eligible heirs", "heirs"},
            {"الورثة", "heirs"},
            {"blocked", "blocked"},
            {"excluded", "blocked"},
            {"المحجوبون", "blocked"},
            {"المحجوبين", "blocked"},
            {"shares", "shares"},
            {"الفروض", "shares"},
            {"awl_or_radd", "awl_or_radd"},
            {"awl or radd", "awl_or_radd"},
            {"awl/radd", "awl_or_radd"},
            {"نوع المسألة", "awl_or_radd"},
            {"tasil_stage", "tasil_stage"},
            {"tasil stage", "tasil_stage"},
            {"awl_stage", "tasil_stage"},
            {"أصل المسألة", "tasil_stage"},
            {"post_tasil", "post_tasil"},
            {"post tasil", "post_tasil"},
            {"distribution", "post_tasil"},
            {"التوزيع", "post_tasil"},
        };
        for (const auto& [s, f] : base) k.emplace_back(s, f);
        // Longer spellings first so "eligible heirs" wins over "heirs".
        std::stable_sort(k.begin(), k.end(), [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
        return k;
    }();
    return keys;
}

std::vector<KeyHit> find_keys(std::string_view text) {
    const std::string lower = ascii_lower(text);
    std::vector<KeyHit> hits;
    std::vector<bool> taken(text.size(), false);
    for (const auto& [surface, field] : harvest_keys()) {
        for (auto p = lower.find(surface); p != std::string::npos; p = lower.find(surface, p + 1)) {
            const auto end = p + surface.size();
            if (taken[p]) continue;
            if (p > 0 && word_char(lower[p - 1]) && static_cast<unsigned char>(lower[p - 1]) < 0x80) continue;
            if (end < lower.size() && word_char(lower[end]) && static_cast<unsigned char>(lower[end]) < 0x80) continue;
            auto q = end;
            while (q < lower.size() && (lower[q] == ' ' || lower[q] == '"' || lower[q] == '\'' || lower[q] == '*')) ++q;
            if (q >= lower.size() || (lower[q] != ':' && lower[q] != '=')) continue;
            hits.push_back({p, q + 1, field});
            std::fill(taken.begin() + static_cast<std::ptrdiff_t>(p), taken.begin() + static_cast<std::ptrdiff_t>(end), true);
        }
    }
    std::sort(hits.begin(), hits.end(), [](const KeyHit& a, const KeyHit& b) { return a.pos < b.pos; });
    return hits;
}

bool bullet_line(std::string_view line) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) return false;
    const char c = line[first];
    return c == '-' || c == '*' || line.substr(first).rfind("•", 0) == 0 || std::isdigit(static_cast<unsigned char>(c));
}

// Value text for a key: the rest of its line, or a bullet list under it.
std::string value_text(std::string_view text, std::size_t start, std::size_t limit) {
    const auto eol = std::min(text.find('\n', start), limit);
    std::string v(text.substr(start, eol - start));
    if (v.find_first_not_of(" \t\r") != std::string::npos || eol >= limit) return v;
    std::size_t pos = eol + 1;
    std::string list;
    while (pos < limit) {
        const auto next = std::min(text.find('\n', pos), limit);
        std::string_view line = text.substr(pos, next - pos);
        if (!bullet_line(line)) break;
        auto first = line.find_first_not_of(" \t-*•");
        if (first == std::string_view::npos) first = line.size();
        std::string_view item = line.substr(first);
        // Numbered bullets: drop "1." or "1)".
        if (!item.empty() && std::isdigit(static_cast<unsigned char>(item[0]))) {
            const auto dot = item.find_first_of(".)");
            if (dot != std::string_view::npos && dot < 3) item = item.substr(dot + 1);
        }
        if (!list.empty()) list += ", ";
        list += item;
        pos = next + 1;
    }
    return list;
}

std::string strip_decorations(std::string v) {
    for (std::string_view d : {"**", "`", "[", "]", "{", "}"}) replace_all(v, d, "");
    const auto first = v.find_first_not_of(" \t\r\"'");
    if (first == std::string::npos) return {};
    const auto last = v.find_last_not_of(" \t\r\"'.");
    return v.substr(first, last - first + 1);
}

std::string label_surface(const std::string& v, const LabelAliases& aliases) {
    if (aliases.resolve(v)) return v;
    std::vector<std::string> words;
    std::string cur;
    for (char c : v) {
        if (c == ' ' || c == '(' || c == ',' || c == ';' || c == '.' || c == '-') {
            if (!cur.empty()) words.push_back(cur);
            cur.clear();
            if (c != ' ') break;
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) words.push_back(cur);
    std::string prefix;
    std::string best = v;
    for (std::size_t i = 0; i < words.size() && i < 3; ++i) {
        prefix += (i ? " " : "") + words[i];
        if (aliases.resolve(prefix)) best = prefix;
    }
    return best;
}

// Last number-looking run in the value, e.g. "6 -> 7" gives "7".
std::string last_number(const std::string& v) {
    std::string best, cur;
    for (char c : v) {
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '/' && !cur.empty()) || (c == '.' && !cur.empty())) {
            cur.push_back(c);
        } else {
            if (!cur.empty()) best = cur;
            cur.clear();
        }
    }
    if (!cur.empty()) best = cur;
    while (!best.empty() && (best.back() == '.' || best.back() == '/')) best.pop_back();
    return best;
}

std::optional<Prediction> harvest(std::string_view text, const LabelAliases& aliases) {
    const auto hits = find_keys(text);
    if (hits.empty()) return std::nullopt;
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < hits.size(); ++i) {
        const std::size_t limit = i + 1 < hits.size() ? hits[i + 1].pos : text.size();
        std::string v = value_text(text, hits[i].value_start, limit);
        // Inline prose: a sentence break ends the value.
        if (auto stop = v.find(". "); stop != std::string::npos) v.erase(stop);
        v = strip_decorations(v);
        while (!v.empty() && (v.back() == ',' || v.back() == ';')) v.pop_back();
        const std::string field(hits[i].field);
        if (obj.contains(field)) continue;
        if (field == "awl_or_radd") {
            obj[field] = label_surface(v, aliases);
        } else if (field == "tasil_stage") {
            const std::string n = last_number(normalize_ar(v));
            if (n.empty()) {
                obj[field] = v;
            } else {
                obj[field] = n;
            }
        } else {
            obj[field] = v;
        }
    }
    Prediction p = prediction_from_json(obj, aliases);
    p.route = Route::field_harvest;
    return p;
}

}  // namespace

std::optional<Prediction> extract_structured(std::string_view answer_text, const LabelAliases& aliases) {
    const std::string cleaned = clean_artifacts(answer_text);
    const auto first = cleaned.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return std::nullopt;
    if (cleaned[first] == '{') {
        if (auto p = try_parse(cleaned, Route::direct, aliases)) return p;
    }
    if (auto p = fenced(cleaned, aliases)) return p;
    if (auto p = balanced(cleaned, aliases)) return p;
    return harvest(cleaned, aliases);
}

Prediction default_fill() {
    Prediction p;
    p.route = Route::default_fill;
    return p;
}

ValidationReport validate(const Prediction& pred, const ValidatorConfig& config) {
    ValidationReport r;
    if (!pred.heirs) r.c_keys.diagnostics.emplace_back("missing heirs");
    if (!pred.shares) r.c_keys.diagnostics.emplace_back("missing shares");
    if (!pred.awl_or_radd) r.c_keys.diagnostics.emplace_back("missing awl_or_radd");
    r.c_keys.pass = r.c_keys.diagnostics.empty();

    r.c_types.diagnostics = pred.type_issues;
    r.c_types.pass = r.c_types.diagnostics.empty();

    r.c_labels.diagnostics = pred.label_issues;
    if (pred.awl_or_radd && !pred.adjustment &&
        std::none_of(pred.label_issues.begin(), pred.label_issues.end(),
                     [](const std::string& s) { return s.rfind("awl_or_radd", 0) == 0; })) {
        r.c_labels.diagnostics.push_back("awl_or_radd: unknown label '" + *pred.awl_or_radd + "'");
    }
    r.c_labels.pass = r.c_labels.diagnostics.empty();

    if (!pred.post_tasil || pred.post_tasil->empty()) {
        r.c_mass.pass = false;
        r.c_mass.diagnostics.emplace_back("no post_tasil distribution to check");
    } else {
        bool exact = true;
        Frac sum(0);
        long double approx = 0;
        for (const auto& [kind, e] : *pred.post_tasil) {
            int count = 1;
            if (e.count) {
                count = *e.count;
            } else if (pred.heirs && pred.heirs->contains(kind)) {
                count = pred.heirs->at(kind);
            }
            approx += static_cast<long double>(e.percent.value) * count;
            if (exact && e.percent.exact) {
                try {
                    sum += *e.percent.exact * Frac(count);
                } catch (const ArithmeticError&) {
                    exact = false;
                }
            } else {
                exact = false;
            }
        }
        r.mass_value = static_cast<double>(approx);
        bool ok = false;
        if (exact) {
            r.mass_sum = sum;
            const Frac dev = sum - Frac(100);
            ok = (dev < Frac(0) ? -dev : dev) <= config.epsilon;
        } else {
            ok = std::fabs(approx - 100.0L) <= static_cast<long double>(config.epsilon.to_double()) + 1e-9L;
        }
        r.c_mass.pass = ok;
        if (!ok) {
            r.c_mass.diagnostics.push_back("percent mass " + (exact ? sum.str() : std::to_string(r.mass_value)) +
                                           " is more than " + config.epsilon.str() + " away from 100");
        }
    }
    r.overall = r.c_keys.pass && r.c_types.pass && r.c_labels.pass && r.c_mass.pass;
    return r;
}

TasilStage default_tasil(const Prediction& pred) {
    std::vector<Frac> all, kept;
    if (pred.shares) {
        for (const auto& [kind, n] : *pred.shares) {
            if (!n.exact || *n.exact <= Frac(0)) continue;
            all.push_back(*n.exact);
            if (kind != HeirKind::husband && kind != HeirKind::wife) kept.push_back(*n.exact);
        }
    }
    TasilStage t;
    std::int64_t asl = 1;
    try {
        if (!all.empty()) asl = lcm_of_dens(all);
    } catch (const ArithmeticError&) {
    }
    t.asl = Number::of(Frac(asl));
    t.adjusted = t.asl;
    const AdjustmentKind kind = pred.adjustment.value_or(AdjustmentKind::none);
    try {
        if (kind == AdjustmentKind::awl && !all.empty()) {
            Frac total(0);
            for (const Frac& f : all) total += f;
            const Frac raised = total * Frac(asl);
            if (raised.is_integer()) t.adjusted = Number::of(raised);
        } else if (kind == AdjustmentKind::radd && !all.empty()) {
            const auto& parts = kept.empty() ? all : kept;
            Frac total(0);
            for (const Frac& f : parts) total += f;
            const Frac base = total * Frac(lcm_of_dens(parts));
            if (base.is_integer()) t.adjusted = Number::of(base);
        }
    } catch (const ArithmeticError&) {
    }
    return t;
}

Prediction apply_defaults(Prediction pred) {
    std::string missing;
    if (!pred.heirs) missing += " heirs";
    if (!pred.shares) missing += " shares";
    if (!pred.awl_or_radd) missing += " awl_or_radd";
    if (!missing.empty()) throw InputError("cannot default critical keys:" + missing);

    auto flag = [&](const char* field) {
        if (std::find(pred.defaulted.begin(), pred.defaulted.end(), field) == pred.defaulted.end()) {
            pred.defaulted.emplace_back(field);
        }
    };
    if (!pred.blocked) {
        pred.blocked.emplace();
        flag("blocked");
    }
    if (!pred.tasil_stage || !pred.tasil_stage->adjusted) {
        const TasilStage d = default_tasil(pred);
        TasilStage& t = pred.tasil_stage ? *pred.tasil_stage : pred.tasil_stage.emplace();
        if (!t.asl) t.asl = d.asl;
        t.adjusted = d.adjusted;
        flag("tasil_stage");
    }
    return pred;
}

}  // namespace mawarith
