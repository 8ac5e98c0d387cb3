#include <set>

#include "doctest.h"
#include "mawarith/error.hpp"
#include "mawarith/generator.hpp"
#include "mawarith/solver.hpp"

using namespace mawarith;
using enum HeirKind;

namespace {

CaseInput make(std::initializer_list<std::pair<const HeirKind, int>> heirs) {
    return CaseInput{std::map<HeirKind, int>(heirs), std::nullopt};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("apportion uses largest remainders") {
    const auto q = apportion(default_gen_spec().category_targets, 100000);
    CHECK(q.at(Category::simple) == 93746);
    CHECK(q.at(Category::awl) == 4881);
    CHECK(q.at(Category::radd) == 1373);
    const auto dev = apportion(dev_category_mix(), 200);
    CHECK(dev.at(Category::simple) == 125);
    CHECK(dev.at(Category::awl) == 4);
    CHECK(dev.at(Category::radd) == 71);
    const auto thirds = apportion(std::map<int, double>{{0, 1.0 / 3}, {1, 1.0 / 3}, {2, 1.0 / 3}}, 10);
    CHECK(thirds.at(0) + thirds.at(1) + thirds.at(2) == 10);
}

TEST_CASE("GenSpec validation") {
    GenSpec spec = default_gen_spec();
    CHECK_NOTHROW(spec.validate());
    spec.category_targets[Category::awl] += 0.01;
    CHECK_THROWS_AS(spec.validate(), InputError);
    spec = default_gen_spec();
    spec.target_count = 0;
    CHECK_THROWS_AS(spec.validate(), InputError);
    spec = default_gen_spec();
    spec.profile_id = "unknown";
    CHECK_THROWS_AS(generate_corpus(spec), ConfigError);
}

TEST_CASE("category steering lands on the requested adjustment without rejection") {
    const GenSpec spec = default_gen_spec();
    for (Category target : {Category::simple, Category::awl, Category::radd}) {
        CAPTURE(to_string(target));
        GenSpec one = spec;
        one.category_targets = {{target, 1.0}};
        std::mt19937_64 rng(99);
        int hits = 0;
        for (int i = 0; i < 1000; ++i) {
            const CaseInput in = sample_config(one, rng);
            REQUIRE(validate_case_input(in).empty());
            if (category_of(solve_case(in).adjustment.kind) == target) ++hits;
        }
        CHECK(hits >= 900);
    }
}

TEST_CASE("sampling is seeded") {
    const GenSpec spec = default_gen_spec();
    std::mt19937_64 a(5), b(5);
    for (int i = 0; i < 200; ++i) REQUIRE(sample_config(spec, a) == sample_config(spec, b));
}

TEST_CASE("difficulty regimes raise the number of heir kinds") {
    const GenSpec spec = default_gen_spec();
    std::mt19937_64 rng(11);
    double low = 0, high = 0;
    for (int i = 0; i < 300; ++i) {
        low += static_cast<double>(sample_config(spec, Category::simple, Difficulty::simple, rng).heirs.size());
        high += static_cast<double>(sample_config(spec, Category::simple, Difficulty::very_complex, rng).heirs.size());
    }
    CHECK(low / 300 <= 2.0);
    CHECK(high / 300 >= 6.0);
}

TEST_CASE("heir rendering separates counts") {
    CHECK(render_heir(son, 1) == "ابن");
    CHECK(render_heir(daughter, 3) == "3 بنات");
    CHECK(render_heir_list(make({{husband, 1}, {full_sister, 2}})) == "زوج و2 أخوات شقيقات");
    TemplateBank bank = default_templates();
    bank.names.erase(mother);
    CHECK_THROWS_AS(render_heir(mother, 1, bank), ConfigError);
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(render_views(solve_case(make({{mother, 1}, {son, 1}})), rng, bank), ConfigError);
}

TEST_CASE("format_percent") {
    CHECK(format_percent(Frac(100)) == "100");
    CHECK(format_percent(Frac(300, 7)) == "42.86");
    CHECK(format_percent(Frac(100, 3)) == "33.33");
    CHECK(format_percent(Frac(25, 2)) == "12.5");
    CHECK(format_percent(Frac(175, 8)) == "21.88");
}

TEST_CASE("render_views fills every view") {
    std::mt19937_64 rng(3);
    const Document sole = render_views(solve_case(make({{son, 1}})), rng);
    CHECK(contains(sole.qa_text, "ابن"));
    CHECK(contains(sole.qa_text, "100%"));
    CHECK(contains(sole.qa_text, sole.problem_text_ar));
    CHECK(sole.category == Category::simple);

    const Document awl = render_views(solve_case(make({{husband, 1}, {full_sister, 2}})), rng);
    CHECK(awl.category == Category::awl);
    const auto shares = awl.reasoning_trace.find("الفروض");
    const auto adjust = awl.reasoning_trace.find("'awl");
    const auto tasil = awl.reasoning_trace.find("التأصيل");
    REQUIRE(shares != std::string::npos);
    REQUIRE(adjust != std::string::npos);
    REQUIRE(tasil != std::string::npos);
    CHECK(shares < adjust);
    CHECK(adjust < tasil);

    const SolvedCase radd = solve_case(make({{wife, 1}, {daughter, 1}, {mother, 1}}));
    std::mt19937_64 r1(42), r2(42);
    CHECK(render_views(radd, r1) == render_views(radd, r2));
}

TEST_CASE("generate_corpus: exact count, unique fingerprints, consistent labels") {
    GenSpec spec = default_gen_spec();
    spec.target_count = 1000;
    spec.seed = 2026;
    const auto docs = generate_corpus(spec);
    REQUIRE(docs.size() == 1000);
    std::set<std::string> keys, ids;
    std::map<Category, int> mix;
    for (const Document& d : docs) {
        keys.insert(case_fingerprint(d.structured_output.input));
        ids.insert(d.id);
        ++mix[d.category];
        REQUIRE(d.category == category_of(d.structured_output.adjustment.kind));
        REQUIRE(solve_case(d.structured_output.input) == d.structured_output);
        REQUIRE_FALSE(d.qa_text.empty());
        REQUIRE(d.difficulty >= 0.0);
        REQUIRE(d.difficulty <= 10.0);
    }
    CHECK(keys.size() == 1000);
    CHECK(ids.size() == 1000);
    const auto quotas = apportion(spec.category_targets, 1000);
    for (const auto& [c, n] : quotas) CHECK(mix[c] == static_cast<int>(n));

    CHECK(generate_corpus(spec) == docs);
}

TEST_CASE("generate_corpus reports exhaustion by category") {
    GenSpec spec = default_gen_spec();
    spec.target_count = 3000;
    spec.category_targets = {{Category::radd, 1.0}};
    spec.max_heads = 2;
    spec.max_attempts = 200;
    try {
        generate_corpus(spec);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(contains(e.what(), "radd"));
        CHECK(contains(e.what(), "of 3000"));
    }
}

TEST_CASE("query split follows the dev mix and rephrases the question") {
    GenSpec spec = default_gen_spec();
    spec.target_count = 2000;
    spec.category_targets = {{Category::simple, 0.6}, {Category::awl, 0.1}, {Category::radd, 0.3}};
    const auto docs = generate_corpus(spec);
    const auto split = make_query_split(docs, 200, dev_category_mix(), 8);
    REQUIRE(split.size() == 200);
    std::map<Category, int> mix;
    std::map<std::string, const Document*> by_id;
    for (const Document& d : docs) by_id[d.id] = &d;
    std::set<std::string> targets;
    for (const QueryItem& q : split) {
        ++mix[q.category];
        const Document& d = *by_id.at(q.doc_id);
        CHECK(contains(q.question, render_heir_list(d.structured_output.input)));
        CHECK(q.question != d.problem_text_ar);
        targets.insert(q.doc_id);
    }
    CHECK(targets.size() == 200);
    CHECK(mix[Category::simple] == 125);
    CHECK(mix[Category::awl] == 4);
    CHECK(mix[Category::radd] == 71);
    CHECK_THROWS_AS(make_query_split(docs, 5000, dev_category_mix(), 8), CapacityError);
}
