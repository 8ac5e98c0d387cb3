#include <algorithm>
#include <string>

#include "doctest.h"
#include "mawarith/case.hpp"
#include "mawarith/error.hpp"
#include "mawarith/case_json.hpp"
#include "mawarith/heir.hpp"
#include "mawarith/solver.hpp"

using namespace mawarith;
using enum HeirKind;

namespace {

CaseInput make(std::initializer_list<std::pair<const HeirKind, int>> heirs) {
    return CaseInput{std::map<HeirKind, int>(heirs), std::nullopt};
}

bool has_violation(const std::vector<std::string>& v, const std::string& text) {
    return std::find(v.begin(), v.end(), text) != v.end();
}

}  // namespace

TEST_CASE("case_fingerprint is order-invariant and count-sensitive") {
    CHECK(case_fingerprint(make({{son, 1}})) == case_fingerprint(make({{son, 1}})));
    CaseInput a;
    a.heirs.emplace(son, 1);
    a.heirs.emplace(daughter, 2);
    CaseInput b;
    b.heirs.emplace(daughter, 2);
    b.heirs.emplace(son, 1);
    CHECK(case_fingerprint(a) == case_fingerprint(b));
    CHECK(case_fingerprint(make({{son, 1}})) != case_fingerprint(make({{son, 2}})));
    CaseInput with_estate = make({{son, 1}});
    with_estate.estate = 1200;
    CHECK(case_fingerprint(with_estate) == case_fingerprint(make({{son, 1}})));
}

TEST_CASE("validate_case_input reports structural violations") {
    CHECK(has_violation(validate_case_input(make({{husband, 1}, {wife, 1}})), "spouse conflict"));
    CHECK(has_violation(validate_case_input(make({{wife, 5}})), "wife count > 4"));
    CHECK(validate_case_input(make({{father, 1}, {mother, 1}, {daughter, 1}})).empty());
    CHECK(has_violation(validate_case_input(make({{husband, 2}})), "husband count > 1"));
    CHECK(has_violation(validate_case_input(make({{mother, 2}})), "mother count > 1"));
    CHECK(has_violation(validate_case_input(CaseInput{}), "no heirs"));
    CHECK(has_violation(validate_case_input(make({{son, 0}})), "non-positive count for son"));
    CHECK(validate_case_input(make({{wife, 4}, {son, 12}})).empty());
}

TEST_CASE("canonical heir ordering is spouses, descendants, ascendants, siblings") {
    const auto& all = all_heir_kinds();
    REQUIRE(all.size() == kHeirKindCount);
    for (std::size_t i = 1; i < all.size(); ++i) {
        CHECK(heir_index(all[i - 1]) < heir_index(all[i]));
        CHECK(static_cast<int>(heir_info(all[i - 1]).lineage) <= static_cast<int>(heir_info(all[i]).lineage));
    }
}

TEST_CASE("heir aliases resolve ids, English phrases and Arabic names") {
    CHECK(heir_from_alias("sons_daughter") == sons_daughter);
    CHECK(heir_from_alias("Son's Son") == sons_son);
    CHECK(heir_from_alias("full-sister") == full_sister);
    CHECK(heir_from_alias("paternal half-brother") == paternal_brother);
    CHECK(heir_from_alias("الزوج") == husband);
    CHECK(heir_from_alias("الأُمّ") == mother);
    CHECK(heir_from_alias("بنت الابن") == sons_daughter);
    CHECK(heir_from_alias("الأخت الشقيقة") == full_sister);
    CHECK(heir_from_alias("أخ لأم") == maternal_brother);
    CHECK(heir_from_alias("الجد") == paternal_grandfather);
    CHECK(heir_from_alias("بنات") == daughter);
    CHECK_FALSE(heir_from_alias("cousin").has_value());
    CHECK_FALSE(heir_from_alias("").has_value());
}

TEST_CASE("solved case round-trips through its canonical record") {
    for (const CaseInput& input : {make({{husband, 1}, {full_sister, 2}}), make({{wife, 2}, {daughter, 1}, {mother, 1}}),
                                   make({{son, 2}, {daughter, 3}, {father, 1}, {full_brother, 1}})}) {
        SolvedCase solved = solve_case(input);
        const std::string text = to_canonical_string(solved);
        const SolvedCase back = solved_case_from_json(ordered_json::parse(text));
        CHECK(back == solved);
        CHECK(to_canonical_string(back) == text);
    }
    CaseInput with_estate = make({{son, 1}});
    with_estate.estate = 90000;
    const SolvedCase s = solve_case(with_estate);
    CHECK(solved_case_from_json(to_json(s)) == s);
}

TEST_CASE("canonical record carries the stage keys in order") {
    const auto j = to_json(solve_case(make({{husband, 1}, {son, 1}})));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    const std::vector<std::string> expected{"input",       "heirs",           "blocked",    "shares", "awl_or_radd",
                                            "tasil_stage", "adjusted_shares", "post_tasil", "trace"};
    CHECK(keys == expected);
    CHECK(j["shares"][0]["fraction"] == "1/4");
}

TEST_CASE("malformed canonical records raise FormatError") {
    CHECK_THROWS_AS(solved_case_from_json(ordered_json::parse(R"({"input":{}})")), FormatError);
    auto j = to_json(solve_case(make({{son, 1}})));
    j["shares"][0]["heir"] = "cousin";
    CHECK_THROWS_AS(solved_case_from_json(j), FormatError);
    j = to_json(solve_case(make({{son, 1}})));
    j["shares"][0]["fraction"] = "1/0";
    CHECK_THROWS_AS(solved_case_from_json(j), FormatError);
}
