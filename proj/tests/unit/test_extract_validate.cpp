#include <fstream>
#include <random>

#include "doctest.h"
#include "mawarith/error.hpp"
#include "mawarith/extract.hpp"
#include "mawarith/generator.hpp"
#include "mawarith/solver.hpp"

using namespace mawarith;

namespace {

Prediction with_mass(std::initializer_list<std::pair<const char*, int>> percents_and_counts) {
    Prediction p;
    p.heirs.emplace();
    p.shares.emplace();
    p.awl_or_radd = "none";
    p.adjustment = AdjustmentKind::none;
    auto& post = p.post_tasil.emplace();
    int i = 0;
    for (const auto& [pct, count] : percents_and_counts) {
        const HeirKind k = all_heir_kinds()[static_cast<std::size_t>(2 + i++)];
        (*p.heirs)[k] = count;
        post[k] = PostEntry{*parse_number(pct), count, std::nullopt};
    }
    return p;
}

std::vector<ordered_json> load_fixture() {
    std::ifstream in(std::string(MAWARITH_FIXTURE_DIR) + "/malformed_outputs.jsonl");
    REQUIRE(in.good());
    std::vector<ordered_json> out;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) out.push_back(ordered_json::parse(line));
    }
    return out;
}

std::string frac_text(const Number& n) { return n.exact ? (n.exact->is_integer() ? std::to_string(n.exact->num()) : n.exact->str()) : "~"; }

}  // namespace

TEST_CASE("parse_number forms") {
    CHECK(parse_number("3/7")->exact == Frac(3, 7));
    CHECK(parse_number("0.5")->exact == Frac(1, 2));
    CHECK(parse_number("50%")->exact == Frac(50));
    CHECK(parse_number("50%", true)->exact == Frac(1, 2));
    CHECK(parse_number("٣/٤")->exact == Frac(3, 4));
    CHECK(parse_number("12٫5")->exact == Frac(25, 2));
    CHECK(parse_number(" 1 / 6 ")->exact == Frac(1, 6));
    const auto sci = parse_number("1e-3");
    REQUIRE(sci.has_value());
    CHECK_FALSE(sci->exact.has_value());
    CHECK(sci->value == doctest::Approx(0.001));
    CHECK_FALSE(parse_number("residue").has_value());
    CHECK_FALSE(parse_number("").has_value());
    CHECK_FALSE(parse_number("nan").has_value());
}

TEST_CASE("label alias table") {
    const auto& a = LabelAliases::standard();
    CHECK(a.resolve("none") == AdjustmentKind::none);
    CHECK(a.resolve("Simple") == AdjustmentKind::none);
    CHECK(a.resolve("عادلة") == AdjustmentKind::none);
    CHECK(a.resolve("'awl") == AdjustmentKind::awl);
    CHECK(a.resolve("العول") == AdjustmentKind::awl);
    CHECK(a.resolve("Radd") == AdjustmentKind::radd);
    CHECK(a.resolve("الرَّد") == AdjustmentKind::radd);
    CHECK_FALSE(a.resolve("maybe").has_value());
    LabelAliases custom;
    custom.add("inflation", AdjustmentKind::awl);
    CHECK(custom.resolve("Inflation") == AdjustmentKind::awl);
    CHECK_FALSE(custom.resolve("awl").has_value());
}

TEST_CASE("fixture of malformed outputs") {
    const auto fixture = load_fixture();
    REQUIRE(fixture.size() == 50);
    std::map<std::string, int> routes;
    for (const auto& c : fixture) {
        const std::string name = c["name"];
        const std::string text = c["text"];
        INFO(name);
        const auto p = extract_structured(text);
        if (c["route"].is_null()) {
            CHECK_FALSE(p.has_value());
            ++routes["none"];
            continue;
        }
        REQUIRE(p.has_value());
        CHECK(to_string(p->route) == c["route"].get<std::string>());
        ++routes[c["route"].get<std::string>()];
        const auto& e = c["expect"];
        if (e.contains("heirs")) {
            REQUIRE(p->heirs.has_value());
            std::map<std::string, int> got;
            for (const auto& [k, n] : *p->heirs) got[std::string(heir_id(k))] = n;
            CHECK(got == e["heirs"].get<std::map<std::string, int>>());
        }
        if (e.contains("blocked")) {
            REQUIRE(p->blocked.has_value());
            std::vector<std::string> got;
            for (HeirKind k : *p->blocked) got.emplace_back(heir_id(k));
            CHECK(got == e["blocked"].get<std::vector<std::string>>());
        }
        if (e.contains("awl_or_radd")) {
            REQUIRE(p->adjustment.has_value());
            CHECK(to_string(*p->adjustment) == e["awl_or_radd"].get<std::string>());
        }
        if (e.contains("tasil_adjusted")) {
            REQUIRE(p->tasil_stage.has_value());
            REQUIRE(p->tasil_stage->adjusted.has_value());
            CHECK(frac_text(*p->tasil_stage->adjusted) == e["tasil_adjusted"].get<std::string>());
        }
        if (e.contains("shares")) {
            REQUIRE(p->shares.has_value());
            std::map<std::string, std::string> got;
            for (const auto& [k, n] : *p->shares) got[std::string(heir_id(k))] = frac_text(n);
            CHECK(got == e["shares"].get<std::map<std::string, std::string>>());
        }
        if (e.contains("post")) {
            REQUIRE(p->post_tasil.has_value());
            std::map<std::string, std::string> got;
            for (const auto& [k, entry] : *p->post_tasil) got[std::string(heir_id(k))] = frac_text(entry.percent);
            CHECK(got == e["post"].get<std::map<std::string, std::string>>());
        }
        if (e.contains("valid")) CHECK(validate(*p).overall == e["valid"].get<bool>());
        if (e.contains("mass")) CHECK(validate(*p).c_mass.pass == e["mass"].get<bool>());
        if (e.contains("label_issue")) {
            CHECK_FALSE(validate(*p).c_labels.pass);
        } else {
            CHECK(p->label_issues.empty());
        }
    }
    // Every route is exercised by the fixture.
    CHECK(routes["direct"] >= 5);
    CHECK(routes["fenced-block"] >= 5);
    CHECK(routes["balanced-scan"] >= 5);
    CHECK(routes["field-harvest"] >= 10);
    CHECK(routes["none"] >= 5);
}

TEST_CASE("an earlier route wins when several would succeed") {
    const std::string obj = R"({"heirs": ["husband", "son"], "awl_or_radd": "none"})";
    CHECK(extract_structured(obj)->route == Route::direct);
    const std::string fenced = "heirs: wife\n```json\n" + obj + "\n```\n" + R"({"heirs": ["mother"]})";
    const auto p = extract_structured(fenced);
    CHECK(p->route == Route::fenced_block);
    CHECK(p->heirs->contains(HeirKind::husband));
    const auto q = extract_structured("heirs: wife\n" + obj);
    CHECK(q->route == Route::balanced_scan);
    CHECK(q->heirs->contains(HeirKind::son));
}

TEST_CASE("mass check boundary is inclusive at five points") {
    CHECK(validate(with_mass({{"50", 1}, {"50", 1}})).c_mass.pass);
    CHECK(validate(with_mass({{"100", 1}})).c_mass.pass);
    CHECK(validate(with_mass({{"105.0", 1}})).c_mass.pass);
    CHECK(validate(with_mass({{"95.0", 1}})).c_mass.pass);
    CHECK(validate(with_mass({{"52.5", 2}})).c_mass.pass);
    CHECK_FALSE(validate(with_mass({{"105.01", 1}})).c_mass.pass);
    CHECK_FALSE(validate(with_mass({{"94.99", 1}})).c_mass.pass);
    CHECK_FALSE(validate(with_mass({{"94.9", 1}})).c_mass.pass);
    CHECK(validate(with_mass({{"105.0", 1}})).mass_sum == Frac(105));
    CHECK(validate(with_mass({{"1e2", 1}})).c_mass.pass);
    CHECK_FALSE(validate(with_mass({{"1.0501e2", 1}})).c_mass.pass);
    Prediction none = with_mass({});
    none.post_tasil.reset();
    CHECK_FALSE(validate(none).c_mass.pass);
    CHECK(validate(with_mass({{"50", 1}, {"50", 1}})).overall);
}

TEST_CASE("critical keys and report conjunction") {
    Prediction p = with_mass({{"100", 1}});
    CHECK(validate(p).overall);
    Prediction no_shares = p;
    no_shares.shares.reset();
    const auto r = validate(no_shares);
    CHECK_FALSE(r.c_keys.pass);
    CHECK_FALSE(r.overall);
    CHECK(r.c_keys.diagnostics == std::vector<std::string>{"missing shares"});

    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        Prediction q = p;
        const int mask = std::uniform_int_distribution<int>(0, 7)(rng);
        if (mask & 1) q.heirs.reset();
        if (mask & 2) q.shares.reset();
        if (mask & 4) q.awl_or_radd.reset();
        if (mask & 4) q.adjustment.reset();
        const auto rep = validate(q);
        CHECK(rep.c_keys.pass == (mask == 0));
        CHECK(rep.overall == (rep.c_keys.pass && rep.c_types.pass && rep.c_labels.pass && rep.c_mass.pass));
    }

    Prediction bad_type = p;
    bad_type.type_issues.push_back("shares.son: not a number");
    CHECK_FALSE(validate(bad_type).c_types.pass);
    Prediction bad_label = p;
    bad_label.adjustment.reset();
    bad_label.awl_or_radd = "maybe";
    CHECK_FALSE(validate(bad_label).c_labels.pass);
}

TEST_CASE("type issues are detected during decoding") {
    const auto p = extract_structured(
        R"({"heirs": [{"heir": "son", "count": -1}], "shares": {"son": "residue"}, "awl_or_radd": "none", "tasil_stage": "many"})");
    REQUIRE(p.has_value());
    const auto r = validate(*p);
    CHECK_FALSE(r.c_types.pass);
    CHECK(r.c_types.diagnostics.size() == 3);
    const auto q = extract_structured(R"({"heirs": 5, "awl_or_radd": 7})");
    CHECK_FALSE(validate(*q).c_types.pass);
}

TEST_CASE("apply_defaults") {
    Prediction p;
    p.heirs = std::map<HeirKind, int>{{HeirKind::husband, 1}, {HeirKind::son, 1}};
    p.shares = std::map<HeirKind, Number>{{HeirKind::husband, Number::of(Frac(1, 4))}, {HeirKind::son, Number::of(Frac(3, 4))}};
    p.awl_or_radd = "simple";
    p.adjustment = AdjustmentKind::none;
    const Prediction d = apply_defaults(p);
    REQUIRE(d.blocked.has_value());
    CHECK(d.blocked->empty());
    REQUIRE(d.tasil_stage.has_value());
    CHECK(d.tasil_stage->asl->exact == Frac(4));
    CHECK(d.tasil_stage->adjusted->exact == Frac(4));
    CHECK(d.defaulted == std::vector<std::string>{"blocked", "tasil_stage"});
    CHECK(apply_defaults(d) == d);
    CHECK(d.heirs == p.heirs);
    CHECK(d.shares == p.shares);

    Prediction missing = p;
    missing.heirs.reset();
    CHECK_THROWS_AS(apply_defaults(missing), InputError);
    missing = p;
    missing.awl_or_radd.reset();
    CHECK_THROWS_AS(apply_defaults(missing), InputError);

    Prediction keep = p;
    keep.blocked = std::vector<HeirKind>{HeirKind::full_brother};
    keep.tasil_stage = TasilStage{std::nullopt, Number::of(Frac(8)), std::nullopt};
    CHECK(apply_defaults(keep).blocked == keep.blocked);
    CHECK(apply_defaults(keep).tasil_stage == keep.tasil_stage);
    CHECK(apply_defaults(keep).defaulted.empty());
}

TEST_CASE("default tasil derivation table") {
    using enum HeirKind;
    auto derive = [](std::initializer_list<std::pair<const HeirKind, Frac>> shares, AdjustmentKind kind) {
        Prediction p;
        auto& s = p.shares.emplace();
        for (const auto& [k, f] : shares) s[k] = Number::of(f);
        p.adjustment = kind;
        const TasilStage t = default_tasil(p);
        return std::pair{t.asl->exact->num(), t.adjusted->exact->num()};
    };
    CHECK(derive({{husband, Frac(1, 4)}, {son, Frac(3, 4)}}, AdjustmentKind::none) == std::pair<std::int64_t, std::int64_t>{4, 4});
    CHECK(derive({{husband, Frac(1, 2)}, {full_sister, Frac(2, 3)}}, AdjustmentKind::awl) ==
          std::pair<std::int64_t, std::int64_t>{6, 7});
    CHECK(derive({{wife, Frac(1, 8)}, {daughter, Frac(1, 2)}, {mother, Frac(1, 6)}}, AdjustmentKind::radd) ==
          std::pair<std::int64_t, std::int64_t>{24, 4});
    CHECK(derive({{wife, Frac(1, 4)}}, AdjustmentKind::radd) == std::pair<std::int64_t, std::int64_t>{4, 1});
    CHECK(derive({}, AdjustmentKind::none) == std::pair<std::int64_t, std::int64_t>{1, 1});
}

TEST_CASE("property: gold records decode, validate and survive defaults unchanged") {
    GenSpec spec = default_gen_spec();
    spec.target_count = 300;
    spec.category_targets = {{Category::simple, 0.5}, {Category::awl, 0.25}, {Category::radd, 0.25}};
    spec.seed = 41;
    for (const Document& doc : generate_corpus(spec)) {
        const Prediction gold = prediction_from_solved(doc.structured_output);
        const auto r = validate(gold);
        REQUIRE(r.overall);
        CHECK(r.mass_sum == Frac(100));
        CHECK(apply_defaults(gold) == gold);

        const auto via_text = extract_structured(to_canonical_string(doc.structured_output));
        REQUIRE(via_text.has_value());
        CHECK(via_text->route == Route::direct);
        CHECK(*via_text == gold);
        CHECK(prediction_from_json(to_json(gold)) == gold);
        Prediction rec = gold;
        rec.id = doc.id;
        CHECK(prediction_from_record(prediction_record(rec)) == rec);
    }
}

TEST_CASE("property: extraction and validation are total") {
    const std::vector<std::string> pieces{"{", "}", "[", "]", "\"", ":", ",", "heirs", "shares", "awl_or_radd", " ",
                                          "\n", "```", "husband", "1/0", "99999999999999999999", "%", "و", "null", "-"};
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1), len(0, 30);
    for (int i = 0; i < 20000; ++i) {
        std::string s;
        for (std::size_t n = len(rng); n > 0; --n) s += pieces[pick(rng)];
        std::optional<Prediction> p;
        REQUIRE_NOTHROW(p = extract_structured(s));
        if (p) {
            ValidationReport r;
            REQUIRE_NOTHROW(r = validate(*p));
            if (r.c_keys.pass) {
                const Prediction once = apply_defaults(*p);
                REQUIRE(apply_defaults(once) == once);
            } else {
                REQUIRE_THROWS_AS(apply_defaults(*p), InputError);
            }
        }
    }
    CHECK(validate(default_fill()).overall == false);
    CHECK(default_fill().route == Route::default_fill);
}
