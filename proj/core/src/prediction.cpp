#include "mawarith/prediction.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "mawarith/error.hpp"
#include "mawarith/text.hpp"

namespace mawarith {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n\"'`*-");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n\"'`*.");
    return std::string(s.substr(first, last - first + 1));
}

// ASCII digits and separators for the Arabic-script variants.
std::string fold_digits(std::string_view text) {
    std::string out;
    for (char32_t c : utf8_decode(text)) {
        if (c >= 0x0660 && c <= 0x0669) {
            out.push_back(static_cast<char>('0' + (c - 0x0660)));
        } else if (c >= 0x06F0 && c <= 0x06F9) {
            out.push_back(static_cast<char>('0' + (c - 0x06F0)));
        } else if (c == 0x066B) {
            out.push_back('.');
        } else if (c == 0x066A) {
            out.push_back('%');
        } else if (c == 0x2044) {
            out.push_back('/');
        } else {
            out += utf8_encode(std::u32string_view(&c, 1));
        }
    }
    return out;
}

std::optional<Number> json_number(const ordered_json& v, bool percent_to_unit) {
    if (v.is_number_integer()) return Number::of(Frac(v.get<std::int64_t>()));
    if (v.is_number_unsigned()) {
        const auto u = v.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(INT64_MAX)) return Number{std::nullopt, static_cast<double>(u)};
        return Number::of(Frac(static_cast<std::int64_t>(u)));
    }
    if (v.is_number_float()) return parse_number(v.dump(), false);
    if (v.is_string()) return parse_number(v.get<std::string>(), percent_to_unit);
    return std::nullopt;
}

std::optional<int> json_count(const ordered_json& v) {
    const auto n = json_number(v, false);
    if (!n || !n->exact || !n->exact->is_integer() || n->exact->num() <= 0 || n->exact->num() > 1000) {
        return std::nullopt;
    }
    return static_cast<int>(n->exact->num());
}

const ordered_json* member(const ordered_json& obj, std::initializer_list<const char*> names) {
    for (const char* n : names) {
        if (auto it = obj.find(n); it != obj.end()) return &*it;
    }
    return nullptr;
}

struct HeirItem {
    HeirKind kind;
    std::optional<int> count;
};

// "2 daughters", "daughter x2", "daughters (2)", "بنات ٣" or a bare name.
std::optional<HeirItem> parse_heir_item(std::string_view raw) {
    std::string text = trim(raw);
    if (text.empty()) return std::nullopt;
    if (auto k = heir_from_alias(text)) return HeirItem{*k, std::nullopt};

    std::string folded = fold_digits(raw);
    for (char& c : folded) {
        if (c == '(' || c == ')' || c == '[' || c == ']' || c == ':' || c == '=') c = ' ';
    }
    std::vector<std::string> words;
    std::size_t pos = 0;
    while (pos < folded.size()) {
        const auto end = folded.find(' ', pos);
        std::string w = folded.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        if (!w.empty()) words.push_back(std::move(w));
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    auto as_count = [](std::string w) -> std::optional<int> {
        if (!w.empty() && (w[0] == 'x' || w[0] == 'X')) w.erase(0, 1);
        if (w.rfind("×", 0) == 0) w.erase(0, std::string_view("×").size());
        int n = 0;
        auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), n);
        if (ec != std::errc() || p != w.data() + w.size() || n <= 0) return std::nullopt;
        return n;
    };
    std::optional<int> count;
    if (words.size() >= 2) {
        if (auto n = as_count(words.front())) {
            count = n;
            words.erase(words.begin());
        } else if (auto m = as_count(words.back())) {
            count = m;
            words.pop_back();
        }
    }
    std::string name;
    for (const auto& w : words) {
        if (!name.empty()) name.push_back(' ');
        name += w;
    }
    if (auto k = heir_from_alias(name)) return HeirItem{*k, count};
    return std::nullopt;
}

// Splits a prose list on commas, semicolons, newlines, " and " and the Arabic conjunction.
std::vector<std::string> split_list(std::string_view text) {
    std::string s(text);
    for (const std::string_view sep : {"،", "؛", " and ", " & "}) {
        for (auto p = s.find(sep); p != std::string::npos; p = s.find(sep, p + 1)) s.replace(p, sep.size(), ",");
    }
    // " و" directly followed by a word starts a new item.
    for (auto p = s.find(" و"); p != std::string::npos; p = s.find(" و", p + 1)) {
        const auto after = p + std::string_view(" و").size();
        if (after < s.size() && s[after] != ' ') s.replace(p, std::string_view(" و").size(), ",");
    }
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ';' || c == '\n' || c == '|') {
            if (auto t = trim(cur); !t.empty()) out.push_back(t);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (auto t = trim(cur); !t.empty()) out.push_back(t);
    return out;
}

bool says_none(std::string_view text) {
    const std::string t = trim(text);
    static const std::set<std::string> words{"", "none", "nobody", "no one", "-", "[]", "null", "n/a",
                                             "لا يوجد", "لا أحد", "لا احد", "لا"};
    std::string lower;
    for (char c : t) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return words.contains(lower);
}

class Decoder {
public:
    Decoder(Prediction& p, const LabelAliases& aliases) : p_(p), aliases_(aliases) {}

    void heirs(const ordered_json& v) {
        auto& out = p_.heirs.emplace();
        auto add = [&](HeirKind k, std::optional<int> n) { out[k] += n.value_or(1); };
        if (v.is_string()) {
            for (const auto& item : split_list(v.get<std::string>())) {
                if (auto h = resolve_item(item, "heirs")) add(h->kind, h->count);
            }
        } else if (v.is_array()) {
            for (const auto& e : v) {
                if (e.is_string()) {
                    if (auto h = resolve_item(e.get<std::string>(), "heirs")) add(h->kind, h->count);
                } else if (e.is_object()) {
                    const ordered_json* name = member(e, {"heir", "name", "kind", "type", "relation"});
                    if (!name || !name->is_string()) {
                        type("heirs", "entry without an heir name");
                        continue;
                    }
                    auto h = resolve_item(name->get<std::string>(), "heirs");
                    if (!h) continue;
                    std::optional<int> n = h->count;
                    if (const ordered_json* c = member(e, {"count", "n", "number", "qty"})) {
                        n = json_count(*c);
                        if (!n) type("heirs." + std::string(heir_id(h->kind)), "count is not a positive integer");
                    }
                    add(h->kind, n);
                } else {
                    type("heirs", "entry is neither a name nor an object");
                }
            }
        } else if (v.is_object()) {
            for (const auto& [name, c] : v.items()) {
                auto h = resolve_item(name, "heirs");
                if (!h) continue;
                auto n = json_count(c);
                if (!n) type("heirs." + std::string(heir_id(h->kind)), "count is not a positive integer");
                add(h->kind, n);
            }
        } else {
            type("heirs", "expected a list");
        }
    }

    void blocked(const ordered_json& v) {
        std::set<HeirKind> out;
        auto take = [&](std::string_view name) {
            if (auto h = resolve_item(name, "blocked")) out.insert(h->kind);
        };
        if (v.is_null()) {
        } else if (v.is_string()) {
            if (!says_none(v.get<std::string>())) {
                for (const auto& item : split_list(v.get<std::string>())) take(item);
            }
        } else if (v.is_array()) {
            for (const auto& e : v) {
                if (e.is_string()) {
                    take(e.get<std::string>());
                } else if (e.is_object()) {
                    const ordered_json* name = member(e, {"heir", "name", "kind", "type", "relation"});
                    if (name && name->is_string()) {
                        take(name->get<std::string>());
                    } else {
                        type("blocked", "entry without an heir name");
                    }
                } else {
                    type("blocked", "entry is neither a name nor an object");
                }
            }
        } else if (v.is_object()) {
            for (const auto& [name, by] : v.items()) take(name);
        } else {
            type("blocked", "expected a list");
        }
        p_.blocked.emplace(out.begin(), out.end());
    }

    void shares(const ordered_json& v) {
        auto& out = p_.shares.emplace();
        auto put = [&](std::string_view name, const ordered_json& value) {
            auto h = resolve_item(name, "shares");
            if (!h) return;
            auto n = json_number(value, true);
            if (!n) {
                type("shares." + std::string(heir_id(h->kind)), "not a number");
                return;
            }
            out[h->kind] = *n;
        };
        if (v.is_array()) {
            for (const auto& e : v) {
                const ordered_json* name = e.is_object() ? member(e, {"heir", "name", "kind", "type"}) : nullptr;
                const ordered_json* value =
                    e.is_object() ? member(e, {"fraction", "share", "value", "fard", "portion"}) : nullptr;
                if (!name || !name->is_string() || !value) {
                    type("shares", "entry needs an heir and a fraction");
                    continue;
                }
                put(name->get<std::string>(), *value);
            }
        } else if (v.is_object()) {
            for (const auto& [name, value] : v.items()) put(name, value);
        } else if (v.is_string()) {
            for (const auto& item : split_list(v.get<std::string>())) harvest_pair(item, "shares", [&](HeirKind k, Number n) {
                out[k] = n;
            });
        } else {
            type("shares", "expected a list of heir fractions");
        }
    }

    void label(const ordered_json& v) {
        const ordered_json* s = &v;
        if (v.is_object()) s = member(v, {"type", "kind", "label", "value"});
        if (!s || !s->is_string()) {
            type("awl_or_radd", "expected a label string");
            return;
        }
        p_.awl_or_radd = trim(s->get<std::string>());
        p_.adjustment = aliases_.resolve(*p_.awl_or_radd);
        if (!p_.adjustment) p_.label_issues.push_back("awl_or_radd: unknown label '" + *p_.awl_or_radd + "'");
    }

    void tasil(const ordered_json& v) {
        TasilStage& t = p_.tasil_stage.emplace();
        if (v.is_object()) {
            auto read = [&](std::optional<Number>& slot, std::initializer_list<const char*> names, const char* what) {
                const ordered_json* f = member(v, names);
                if (!f || f->is_null()) return;
                slot = json_number(*f, false);
                if (!slot) type(std::string("tasil_stage.") + what, "not a number");
            };
            read(t.asl, {"asl", "base", "original", "original_base"}, "asl");
            read(t.adjusted, {"adjusted", "adjusted_base", "awl", "radd", "after"}, "adjusted");
            read(t.final_base, {"final", "final_base", "tashih", "corrected"}, "final");
        } else {
            t.adjusted = json_number(v, false);
            if (!t.adjusted) type("tasil_stage", "expected a number or a stage object");
        }
    }

    void post(const ordered_json& v) {
        auto& out = p_.post_tasil.emplace();
        const ordered_json* list = &v;
        if (v.is_object()) {
            if (const ordered_json* d = member(v, {"distribution", "heirs", "entries"})) list = d;
        }
        auto entry = [&](std::string_view name, const ordered_json& e) {
            auto h = resolve_item(name, "post_tasil");
            if (!h) return;
            const std::string field = "post_tasil." + std::string(heir_id(h->kind));
            PostEntry pe;
            const ordered_json* pct = e.is_object()
                                          ? member(e, {"per_head_percent", "percent", "percentage", "share_percent", "pct"})
                                          : &e;
            auto n = pct ? json_number(*pct, false) : std::nullopt;
            if (!n) {
                type(field, "percent is not a number");
                return;
            }
            pe.percent = *n;
            pe.count = h->count;
            if (e.is_object()) {
                if (const ordered_json* c = member(e, {"count", "n", "number"})) {
                    pe.count = json_count(*c);
                    if (!pe.count) type(field, "count is not a positive integer");
                }
                if (const ordered_json* s = member(e, {"siham", "shares", "units"})) {
                    pe.siham = json_number(*s, false);
                    if (!pe.siham) type(field, "siham is not a number");
                }
            }
            out[h->kind] = pe;
        };
        if (list->is_array()) {
            for (const auto& e : *list) {
                const ordered_json* name = e.is_object() ? member(e, {"heir", "name", "kind", "type"}) : nullptr;
                if (!name || !name->is_string()) {
                    type("post_tasil", "entry without an heir name");
                    continue;
                }
                entry(name->get<std::string>(), e);
            }
        } else if (list->is_object()) {
            for (const auto& [name, e] : list->items()) {
                if (name == "base") continue;
                entry(name, e);
            }
        } else if (list->is_string()) {
            for (const auto& item : split_list(list->get<std::string>())) {
                harvest_pair(item, "post_tasil", [&](HeirKind k, Number n) { out[k] = PostEntry{n, std::nullopt, std::nullopt}; });
            }
        } else {
            type("post_tasil", "expected a distribution list");
        }
    }

    // "husband 1/4", "husband: 25%", "الزوج = 1/4"
    template <typename F>
    void harvest_pair(const std::string& item, const std::string& field, F&& sink) {
        const auto cut = item.find_last_of(" :=\t");
        if (cut == std::string::npos) {
            type(field, "entry '" + item + "' has no value");
            return;
        }
        auto h = resolve_item(item.substr(0, cut), field);
        if (!h) return;
        auto n = parse_number(item.substr(cut + 1), field == "shares");
        if (!n) {
            type(field + "." + std::string(heir_id(h->kind)), "not a number");
            return;
        }
        sink(h->kind, *n);
    }

private:
    std::optional<HeirItem> resolve_item(std::string_view name, std::string_view field) {
        std::string s = trim(name);
        while (!s.empty() && (s.back() == ':' || s.back() == '=')) s.pop_back();
        auto h = parse_heir_item(s);
        if (!h) p_.label_issues.push_back(std::string(field) + ": unknown heir '" + trim(s) + "'");
        return h;
    }

    void type(const std::string& field, const std::string& what) { p_.type_issues.push_back(field + ": " + what); }

    Prediction& p_;
    const LabelAliases& aliases_;
};

ordered_json number_json(const Number& n) {
    if (n.exact) {
        if (n.exact->is_integer()) return n.exact->num();
        return n.exact->str();
    }
    return n.value;
}

}  // namespace

std::optional<Number> parse_number(std::string_view text, bool percent_to_unit) {
    std::string s = fold_digits(text);
    std::erase_if(s, [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
    while (!s.empty() && (s.back() == '.' || s.back() == ',')) s.pop_back();
    bool percent = false;
    if (!s.empty() && s.back() == '%') {
        percent = true;
        s.pop_back();
    }
    if (s.empty()) return std::nullopt;
    Number n;
    try {
        const Frac f = Frac::parse(s);
        n = Number::of(percent && percent_to_unit ? f / Frac(100) : f);
        return n;
    } catch (const Error&) {
    }
    double d = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(d)) return std::nullopt;
    n.value = percent && percent_to_unit ? d / 100.0 : d;
    return n;
}

std::string LabelAliases::key(std::string_view surface) {
    std::string out;
    for (const std::string& tok : analyze_ar(surface)) {
        std::string t = tok;
        if (t.size() > 4 && t.compare(0, 4, "ال") == 0) t.erase(0, 4);
        if (t == "al" || t == "the") continue;
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

void LabelAliases::add(std::string_view surface, AdjustmentKind kind) { table_[key(surface)] = kind; }

std::optional<AdjustmentKind> LabelAliases::resolve(std::string_view surface) const {
    auto it = table_.find(key(surface));
    if (it == table_.end()) return std::nullopt;
    return it->second;
}

const LabelAliases& LabelAliases::standard() {
    static const LabelAliases table = [] {
        LabelAliases t;
        using enum AdjustmentKind;
        for (const char* s : {"none", "simple", "normal", "regular", "no adjustment", "neither", "adila", "'adila",
                              "عادلة", "مسألة عادلة", "لا عول ولا رد", "بدون عول أو رد", "لا يوجد"}) {
            t.add(s, none);
        }
        for (const char* s : {"awl", "'awl", "aul", "awl case", "عول", "العول", "عائلة", "مسألة عائلة", "فيها عول"}) {
            t.add(s, awl);
        }
        for (const char* s : {"radd", "rad", "return", "radd case", "رد", "الرد", "فيها رد", "مسألة رد"}) t.add(s, radd);
        return t;
    }();
    return table;
}

std::string_view to_string(Route r) noexcept {
    switch (r) {
        case Route::direct: return "direct";
        case Route::fenced_block: return "fenced-block";
        case Route::balanced_scan: return "balanced-scan";
        case Route::field_harvest: return "field-harvest";
        case Route::default_fill: return "default-fill";
    }
    return "direct";
}

std::optional<Route> route_from_string(std::string_view s) noexcept {
    for (Route r : {Route::direct, Route::fenced_block, Route::balanced_scan, Route::field_harvest, Route::default_fill}) {
        if (to_string(r) == s) return r;
    }
    return std::nullopt;
}

std::optional<std::string_view> canonical_field(std::string_view raw) {
    std::string key;
    for (char c : trim(raw)) {
        const auto u = static_cast<unsigned char>(c);
        if (c == ' ' || c == '-') {
            key.push_back('_');
        } else {
            key.push_back(u < 0x80 ? static_cast<char>(std::tolower(u)) : c);
        }
    }
    static const std::vector<std::pair<std::string, std::string_view>> table = [] {
        std::vector<std::pair<std::string, std::string_view>> t;
        auto add = [&](std::string_view canonical, std::initializer_list<const char*> names) {
            for (const char* n : names) t.emplace_back(n, canonical);
        };
        add("heirs", {"heirs", "eligible", "eligible_heirs", "inheritors", "الورثة", "الورثه", "الوارثون"});
        add("blocked", {"blocked", "blocked_heirs", "excluded", "mahjub", "hajb", "المحجوبون", "المحجوبين", "الحجب"});
        add("shares", {"shares", "fixed_shares", "furud", "fractions", "الفروض", "الأنصبة", "الانصبة"});
        add("awl_or_radd", {"awl_or_radd", "awl/radd", "awl_radd", "adjustment", "case_type", "نوع_المسألة", "العول_والرد",
                            "العول_أو_الرد"});
        add("tasil_stage", {"tasil_stage", "awl_stage", "tasil", "base", "أصل_المسألة", "التأصيل"});
        add("post_tasil", {"post_tasil", "distribution", "final_distribution", "التوزيع", "التصحيح"});
        return t;
    }();
    for (const auto& [name, canonical] : table) {
        if (name == key) return canonical;
    }
    return std::nullopt;
}

Prediction prediction_from_json(const ordered_json& object, const LabelAliases& aliases) {
    Prediction p;
    if (!object.is_object()) {
        p.type_issues.push_back("answer: expected an object");
        return p;
    }
    // Canonical names take priority over variants that map to the same field.
    std::map<std::string_view, const ordered_json*> fields;
    for (const auto& [key, value] : object.items()) {
        auto field = canonical_field(key);
        if (!field) continue;
        if (key == *field || !fields.contains(*field)) fields[*field] = &value;
    }
    Decoder d(p, aliases);
    if (auto it = fields.find("heirs"); it != fields.end()) d.heirs(*it->second);
    if (auto it = fields.find("blocked"); it != fields.end()) d.blocked(*it->second);
    if (auto it = fields.find("shares"); it != fields.end()) d.shares(*it->second);
    if (auto it = fields.find("awl_or_radd"); it != fields.end()) d.label(*it->second);
    if (auto it = fields.find("tasil_stage"); it != fields.end()) d.tasil(*it->second);
    if (auto it = fields.find("post_tasil"); it != fields.end()) d.post(*it->second);
    return p;
}

Prediction prediction_from_solved(const SolvedCase& s) {
    Prediction p;
    auto& heirs = p.heirs.emplace();
    for (const EligibleHeir& e : s.eligible) heirs[e.kind] = e.count;
    auto& blocked = p.blocked.emplace();
    for (const BlockedHeir& b : s.blocked) blocked.push_back(b.kind);
    std::sort(blocked.begin(), blocked.end());
    auto& shares = p.shares.emplace();
    for (const auto& [k, f] : s.shares) shares[k] = Number::of(f);
    p.awl_or_radd = std::string(to_string(s.adjustment.kind));
    p.adjustment = s.adjustment.kind;
    p.tasil_stage = TasilStage{Number::of(Frac(s.adjustment.original_base)), Number::of(Frac(s.adjustment.adjusted_base)),
                               Number::of(Frac(s.final_base))};
    auto& post = p.post_tasil.emplace();
    for (const auto& [k, a] : s.post_tasil) {
        post[k] = PostEntry{Number::of(a.per_head_percent), s.input.count(k), Number::of(Frac(a.siham))};
    }
    return p;
}

ordered_json to_json(const Prediction& p) {
    ordered_json j = ordered_json::object();
    if (p.heirs) {
        ordered_json a = ordered_json::array();
        for (const auto& [k, n] : *p.heirs) a.push_back({{"heir", heir_id(k)}, {"count", n}});
        j["heirs"] = std::move(a);
    }
    if (p.blocked) {
        ordered_json a = ordered_json::array();
        for (HeirKind k : *p.blocked) a.push_back(heir_id(k));
        j["blocked"] = std::move(a);
    }
    if (p.shares) {
        ordered_json a = ordered_json::array();
        for (const auto& [k, n] : *p.shares) {
            ordered_json f = number_json(n);
            if (f.is_number_integer()) f = Frac(f.get<std::int64_t>()).str();
            a.push_back({{"heir", heir_id(k)}, {"fraction", std::move(f)}});
        }
        j["shares"] = std::move(a);
    }
    if (p.awl_or_radd) j["awl_or_radd"] = p.adjustment ? std::string(to_string(*p.adjustment)) : *p.awl_or_radd;
    if (p.tasil_stage) {
        ordered_json t = ordered_json::object();
        if (p.tasil_stage->asl) t["asl"] = number_json(*p.tasil_stage->asl);
        if (p.tasil_stage->adjusted) t["adjusted"] = number_json(*p.tasil_stage->adjusted);
        if (p.tasil_stage->final_base) t["final"] = number_json(*p.tasil_stage->final_base);
        j["tasil_stage"] = std::move(t);
    }
    if (p.post_tasil) {
        ordered_json a = ordered_json::array();
        for (const auto& [k, e] : *p.post_tasil) {
            ordered_json row{{"heir", heir_id(k)}};
            if (e.count) row["count"] = *e.count;
            if (e.siham) row["siham"] = number_json(*e.siham);
            ordered_json pct = number_json(e.percent);
            if (pct.is_number_integer()) pct = Frac(pct.get<std::int64_t>()).str();
            row["per_head_percent"] = std::move(pct);
            a.push_back(std::move(row));
        }
        ordered_json post = ordered_json::object();
        if (p.tasil_stage && p.tasil_stage->final_base) post["base"] = number_json(*p.tasil_stage->final_base);
        post["distribution"] = std::move(a);
        j["post_tasil"] = std::move(post);
    }
    return j;
}

ordered_json prediction_record(const Prediction& p) {
    return ordered_json{
        {"id", p.id},
        {"route", to_string(p.route)},
        {"defaulted", p.defaulted},
        {"type_issues", p.type_issues},
        {"label_issues", p.label_issues},
        {"prediction", to_json(p)},
    };
}

Prediction prediction_from_record(const ordered_json& r) {
    try {
        Prediction p = prediction_from_json(r.at("prediction"));
        p.id = r.at("id").get<std::string>();
        auto route = route_from_string(r.at("route").get<std::string>());
        if (!route) throw FormatError("unknown extraction route");
        p.route = *route;
        p.defaulted = r.at("defaulted").get<std::vector<std::string>>();
        p.type_issues = r.at("type_issues").get<std::vector<std::string>>();
        p.label_issues = r.at("label_issues").get<std::vector<std::string>>();
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed prediction record: ") + e.what());
    }
}

}  // namespace mawarith
