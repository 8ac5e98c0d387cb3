#include "mawarith/heir.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "mawarith/text.hpp"

namespace mawarith {

namespace {

using enum HeirKind;

constexpr std::array<HeirInfo, kHeirKindCount> kInfo{{
    {husband, "husband", "زوج", "أزواج", Gender::male, Lineage::spouse, true},
    {wife, "wife", "زوجة", "زوجات", Gender::female, Lineage::spouse, false},
    {son, "son", "ابن", "أبناء", Gender::male, Lineage::descendant, false},
    {daughter, "daughter", "بنت", "بنات", Gender::female, Lineage::descendant, false},
    {sons_son, "sons_son", "ابن ابن", "أبناء ابن", Gender::male, Lineage::descendant, false},
    {sons_daughter, "sons_daughter", "بنت ابن", "بنات ابن", Gender::female, Lineage::descendant, false},
    {father, "father", "أب", "آباء", Gender::male, Lineage::ascendant, true},
    {mother, "mother", "أم", "أمهات", Gender::female, Lineage::ascendant, true},
    {paternal_grandfather, "paternal_grandfather", "جد لأب", "أجداد لأب", Gender::male, Lineage::ascendant, true},
    {paternal_grandmother, "paternal_grandmother", "جدة لأب", "جدات لأب", Gender::female, Lineage::ascendant, true},
    {maternal_grandmother, "maternal_grandmother", "جدة لأم", "جدات لأم", Gender::female, Lineage::ascendant, true},
    {full_brother, "full_brother", "أخ شقيق", "إخوة أشقاء", Gender::male, Lineage::sibling, false},
    {full_sister, "full_sister", "أخت شقيقة", "أخوات شقيقات", Gender::female, Lineage::sibling, false},
    {paternal_brother, "paternal_brother", "أخ لأب", "إخوة لأب", Gender::male, Lineage::sibling, false},
    {paternal_sister, "paternal_sister", "أخت لأب", "أخوات لأب", Gender::female, Lineage::sibling, false},
    {maternal_brother, "maternal_brother", "أخ لأم", "إخوة لأم", Gender::male, Lineage::sibling, false},
    {maternal_sister, "maternal_sister", "أخت لأم", "أخوات لأم", Gender::female, Lineage::sibling, false},
}};

constexpr std::array<HeirKind, kHeirKindCount> kAll{
    husband, wife, son, daughter, sons_son, sons_daughter, father, mother, paternal_grandfather,
    paternal_grandmother, maternal_grandmother, full_brother, full_sister, paternal_brother, paternal_sister,
    maternal_brother, maternal_sister,
};

// Normalized Arabic form with the definite article stripped from every word.
std::string arabic_key(std::string_view text) {
    std::string out;
    for (std::string& tok : analyze_ar(text)) {
        if (tok.size() > 4 && tok.compare(0, 4, "ال") == 0) tok.erase(0, 4);
        if (!out.empty()) out.push_back(' ');
        out += tok;
    }
    return out;
}

// Lowercased English form: apostrophes dropped, separators collapsed to '_'.
std::string english_key(std::string_view text) {
    std::string out;
    bool pending_sep = false;
    for (char c : text) {
        const auto u = static_cast<unsigned char>(c);
        if (u >= 0x80) return {};
        if (c == '\'') continue;
        if (std::isalnum(u)) {
            if (pending_sep && !out.empty()) out.push_back('_');
            pending_sep = false;
            out.push_back(static_cast<char>(std::tolower(u)));
        } else {
            pending_sep = true;
        }
    }
    return out;
}

const std::vector<std::pair<std::string, HeirKind>>& alias_table() {
    static const std::vector<std::pair<std::string, HeirKind>> table = [] {
        std::vector<std::pair<std::string, HeirKind>> t;
        for (const HeirInfo& info : kInfo) {
            t.emplace_back(std::string(info.id), info.kind);
            t.emplace_back(arabic_key(info.arabic), info.kind);
            t.emplace_back(arabic_key(info.arabic_plural), info.kind);
        }
        const std::pair<const char*, HeirKind> english[] = {
            {"wives", wife},
            {"sons", son},
            {"daughters", daughter},
            {"sons_sons", sons_son},
            {"grandson", sons_son},
            {"sons_daughters", sons_daughter},
            {"granddaughter", sons_daughter},
            {"grandfather", paternal_grandfather},
            {"paternal_grandmother", paternal_grandmother},
            {"fathers_mother", paternal_grandmother},
            {"mothers_mother", maternal_grandmother},
            {"full_brothers", full_brother},
            {"full_sisters", full_sister},
            {"paternal_half_brother", paternal_brother},
            {"paternal_half_sister", paternal_sister},
            {"maternal_half_brother", maternal_brother},
            {"maternal_half_sister", maternal_sister},
            {"consanguine_brother", paternal_brother},
            {"consanguine_sister", paternal_sister},
            {"uterine_brother", maternal_brother},
            {"uterine_sister", maternal_sister},
        };
        for (const auto& [k, v] : english) t.emplace_back(k, v);
        const std::pair<const char*, HeirKind> arabic[] = {
            {"ابنة", daughter},
            {"بنتان", daughter},
            {"ابنان", son},
            {"جد", paternal_grandfather},
            {"جد صحيح", paternal_grandfather},
            {"ابو اب", paternal_grandfather},
            {"ام اب", paternal_grandmother},
            {"ام ام", maternal_grandmother},
            {"اخ", full_brother},
            {"اخت", full_sister},
            {"اخت شقيق", full_sister},
            {"اخوه شقيق", full_brother},
            {"ابن ابن", sons_son},
            {"بنت ابن", sons_daughter},
            {"ابنه ابن", sons_daughter},
            {"زوجات", wife},
        };
        for (const auto& [k, v] : arabic) t.emplace_back(arabic_key(k), v);
        return t;
    }();
    return table;
}

}  // namespace

const HeirInfo& heir_info(HeirKind kind) noexcept {
    return kInfo[heir_index(kind)];
}

const std::array<HeirKind, kHeirKindCount>& all_heir_kinds() noexcept {
    return kAll;
}

std::optional<HeirKind> heir_from_id(std::string_view id) noexcept {
    for (const HeirInfo& info : kInfo) {
        if (info.id == id) return info.kind;
    }
    return std::nullopt;
}

std::optional<HeirKind> heir_from_alias(std::string_view text) {
    if (auto exact = heir_from_id(text)) return exact;
    const std::string en = english_key(text);
    const std::string ar = en.empty() ? arabic_key(text) : std::string{};
    const std::string& key = en.empty() ? ar : en;
    if (key.empty()) return std::nullopt;
    const auto& table = alias_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
    if (it == table.end()) return std::nullopt;
    return it->second;
}

}  // namespace mawarith
