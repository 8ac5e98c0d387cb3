#include <random>
#include <set>

#include "../golden_cases.hpp"
#include "doctest.h"
#include "mawarith/case_json.hpp"
#include "mawarith/error.hpp"
#include "mawarith/solver.hpp"

using namespace mawarith;
using enum HeirKind;

namespace {

CaseInput make(std::initializer_list<std::pair<const HeirKind, int>> heirs) {
    return CaseInput{std::map<HeirKind, int>(heirs), std::nullopt};
}

CaseInput random_input(std::mt19937_64& rng) {
    std::bernoulli_distribution pick(0.3);
    std::uniform_int_distribution<int> many(1, 5);
    CaseInput in;
    for (HeirKind k : all_heir_kinds()) {
        if (!pick(rng)) continue;
        if (k == husband && in.count(wife) > 0) continue;
        if (k == wife && in.count(husband) > 0) continue;
        int n = heir_info(k).unique ? 1 : many(rng);
        if (k == wife) n = std::min(n, 4);
        in.heirs[k] = n;
    }
    if (in.heirs.empty()) in.heirs[son] = 1;
    return in;
}

}  // namespace

TEST_CASE("default profile tables are well formed") {
    CHECK(default_profile().check().empty());
}

TEST_CASE("golden cases match hand derivations exactly") {
    for (const golden::Expected& g : golden::cases()) {
        CAPTURE(g.name);
        const SolvedCase s = solve_case(CaseInput{g.heirs, std::nullopt});
        std::map<HeirKind, HeirKind> blocked;
        for (const BlockedHeir& b : s.blocked) blocked[b.kind] = b.blocker;
        CHECK(blocked == g.blocked);
        CHECK(s.shares == g.shares);
        CHECK(s.adjustment.kind == g.adjustment);
        CHECK(s.adjustment.original_base == g.asl);
        CHECK(s.adjustment.adjusted_base == g.adjusted_base);
        CHECK(s.adjusted_shares == g.adjusted);
        CHECK(s.final_base == g.final_base);
        std::map<HeirKind, std::int64_t> siham;
        std::map<HeirKind, Frac> percent;
        for (const auto& [k, a] : s.post_tasil) {
            siham[k] = a.siham;
            percent[k] = a.per_head_percent;
        }
        CHECK(siham == g.siham);
        CHECK(percent == g.per_head_percent);
    }
}

TEST_CASE("determine_blocking examples") {
    auto blocked_of = [](const CaseInput& in) {
        std::map<HeirKind, HeirKind> out;
        for (const BlockedHeir& b : determine_blocking(in, default_profile()).blocked) out[b.kind] = b.blocker;
        return out;
    };
    CHECK(blocked_of(make({{father, 1}, {paternal_grandfather, 1}, {son, 1}})) ==
          std::map<HeirKind, HeirKind>{{paternal_grandfather, father}});
    CHECK(blocked_of(make({{son, 1}, {full_brother, 1}})) == std::map<HeirKind, HeirKind>{{full_brother, son}});
    CHECK(blocked_of(make({{daughter, 1}, {mother, 1}})).empty());
    // Two daughters exclude the son's daughter unless a son's son makes her residuary.
    CHECK(blocked_of(make({{daughter, 2}, {sons_daughter, 1}})) == std::map<HeirKind, HeirKind>{{sons_daughter, daughter}});
    CHECK(blocked_of(make({{daughter, 2}, {sons_daughter, 1}, {sons_son, 1}})).empty());
    // Paternal half-sister: excluded by two full sisters, saved by her brother.
    CHECK(blocked_of(make({{full_sister, 2}, {paternal_sister, 1}})) ==
          std::map<HeirKind, HeirKind>{{paternal_sister, full_sister}});
    CHECK(blocked_of(make({{full_sister, 2}, {paternal_sister, 1}, {paternal_brother, 1}})).empty());
}

TEST_CASE("blocking fixpoint resolves chains") {
    // father -> grandfather -> siblings; father also removes the paternal grandmother.
    const auto r = determine_blocking(
        make({{father, 1}, {paternal_grandfather, 1}, {paternal_grandmother, 1}, {full_brother, 2}}), default_profile());
    REQUIRE(r.eligible.size() == 1);
    CHECK(r.eligible[0].first == father);
    CHECK(r.blocked.size() == 3);
}

TEST_CASE("assign_shares examples") {
    auto shares_of = [](const CaseInput& in) {
        return assign_shares(determine_blocking(in, default_profile()), default_profile());
    };
    const auto sole = shares_of(make({{son, 1}}));
    CHECK(sole.shares.at(son) == Frac(1));
    CHECK(sole.basis.at(son) == ShareBasis::residuary);

    const auto hs = shares_of(make({{husband, 1}, {son, 1}}));
    CHECK(hs.shares.at(husband) == Frac(1, 4));
    CHECK(hs.shares.at(son) == Frac(3, 4));

    const auto mixed = shares_of(make({{daughter, 2}, {son, 1}}));
    CHECK(mixed.shares.at(son) == Frac(1, 2));
    CHECK(mixed.shares.at(daughter) / Frac(2) == Frac(1, 4));

    const auto father_fd = shares_of(make({{daughter, 1}, {father, 1}}));
    CHECK(father_fd.basis.at(father) == ShareBasis::fixed_and_residuary);
    CHECK(father_fd.shares.at(father) == Frac(1, 2));
}

TEST_CASE("compute_adjustment examples") {
    auto adjust = [](const CaseInput& in) {
        const auto& p = default_profile();
        return compute_adjustment(assign_shares(determine_blocking(in, p), p), p);
    };
    const auto awl = adjust(make({{husband, 1}, {full_sister, 2}}));
    CHECK(awl.adjustment == Adjustment{AdjustmentKind::awl, 6, 7});
    CHECK(awl.adjusted_shares.at(husband) == Frac(3, 7));
    CHECK(awl.adjusted_shares.at(full_sister) == Frac(4, 7));

    const auto radd = adjust(make({{daughter, 1}, {mother, 1}}));
    CHECK(radd.adjustment.kind == AdjustmentKind::radd);
    CHECK(radd.adjusted_shares.at(daughter) == Frac(3, 4));
    CHECK(radd.adjusted_shares.at(mother) == Frac(1, 4));

    const auto spouse = adjust(make({{wife, 1}, {daughter, 1}, {mother, 1}}));
    CHECK(spouse.adjusted_shares.at(wife) == Frac(1, 8));
    CHECK(spouse.adjusted_shares.at(daughter) == Frac(21, 32));
    CHECK(spouse.adjusted_shares.at(mother) == Frac(7, 32));
}

TEST_CASE("tasil examples") {
    const auto sole = tasil({{son, Frac(1)}}, {{son, 1}});
    CHECK(sole.final_base == 1);
    CHECK(sole.post_tasil.at(son) == Allotment{1, Frac(100)});

    // Four siham over two sisters divide evenly, so base 7 needs no tashih.
    const auto awl = tasil({{husband, Frac(3, 7)}, {full_sister, Frac(4, 7)}}, {{husband, 1}, {full_sister, 2}});
    CHECK(awl.final_base == 7);
    CHECK(awl.post_tasil.at(husband) == Allotment{3, Frac(300, 7)});
    CHECK(awl.post_tasil.at(full_sister) == Allotment{4, Frac(200, 7)});

    const auto heads = tasil({{daughter, Frac(1)}}, {{daughter, 3}});
    CHECK(heads.final_base == 3);
    CHECK(heads.post_tasil.at(daughter).per_head_percent == Frac(100, 3));

    // One share of three over two heads forces the base to double.
    const auto doubled = tasil({{mother, Frac(1, 3)}, {paternal_brother, Frac(2, 3)}}, {{mother, 1}, {paternal_brother, 4}});
    CHECK(doubled.final_base == 6);
    CHECK(doubled.post_tasil.at(paternal_brother).siham == 4);
}

TEST_CASE("solve_case composes stages and records a trace") {
    const SolvedCase awl = solve_case(make({{husband, 1}, {full_sister, 2}}));
    REQUIRE(awl.trace.size() == 4);
    CHECK(awl.trace[0].stage == Stage::eligibility);
    CHECK(awl.trace[1].stage == Stage::shares);
    CHECK(awl.trace[2].stage == Stage::adjustment);
    CHECK(awl.trace[3].stage == Stage::tasil);
    CHECK(awl.trace[2].note.find("'awl") != std::string::npos);

    const SolvedCase simple = solve_case(make({{son, 1}}));
    CHECK(simple.adjustment.kind == AdjustmentKind::none);
    CHECK(solve_case(make({{wife, 1}, {daughter, 1}, {mother, 1}})).adjustment.kind == AdjustmentKind::radd);

    CHECK_THROWS_AS(solve_case(make({{husband, 1}, {wife, 1}})), InputError);
}

TEST_CASE("a lone spouse takes the whole estate by return") {
    const SolvedCase s = solve_case(make({{wife, 3}}));
    CHECK(s.adjustment.kind == AdjustmentKind::radd);
    CHECK(s.adjusted_shares.at(wife) == Frac(1));
    CHECK(s.final_base == 3);
}

TEST_CASE("profiles without a heir kind raise ConfigError") {
    RuleProfile narrow = default_profile();
    narrow.id = "no-grandmothers";
    std::erase(narrow.roster, maternal_grandmother);
    CHECK_THROWS_AS(solve_case(make({{maternal_grandmother, 1}, {son, 1}}), narrow), ConfigError);
    CHECK_NOTHROW(solve_case(make({{son, 1}}), narrow));
}

TEST_CASE("property: conservation, blocking soundness, determinism, radd exclusion") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10000; ++i) {
        const CaseInput in = random_input(rng);
        CAPTURE(case_fingerprint(in));
        const SolvedCase s = solve_case(in);

        Frac total(0);
        for (const auto& [k, share] : s.adjusted_shares) total += share;
        REQUIRE(total == Frac(1));

        std::int64_t siham = 0;
        Frac percent(0);
        for (const auto& [k, a] : s.post_tasil) {
            siham += a.siham;
            percent += a.per_head_percent * Frac(in.count(k));
        }
        REQUIRE(siham == s.final_base);
        REQUIRE(percent == Frac(100));

        std::set<HeirKind> seen;
        for (const EligibleHeir& e : s.eligible) seen.insert(e.kind);
        for (const BlockedHeir& b : s.blocked) {
            REQUIRE_FALSE(seen.contains(b.kind));
            REQUIRE_FALSE(s.shares.contains(b.kind));
            REQUIRE_FALSE(s.post_tasil.contains(b.kind));
            seen.insert(b.kind);
        }
        REQUIRE(seen.size() == in.heirs.size());

        REQUIRE(to_canonical_string(solve_case(in)) == to_canonical_string(s));

        if (s.adjustment.kind == AdjustmentKind::radd && s.eligible.size() > 1) {
            for (HeirKind spouse : {husband, wife}) {
                if (s.shares.contains(spouse)) REQUIRE(s.adjusted_shares.at(spouse) == s.shares.at(spouse));
            }
        }
        if (s.adjustment.kind == AdjustmentKind::none) REQUIRE(s.adjustment.adjusted_base == s.adjustment.original_base);
        if (s.adjustment.kind == AdjustmentKind::awl) REQUIRE(s.adjustment.adjusted_base > s.adjustment.original_base);
    }
}

TEST_CASE("property: 'awl only reaches the classical inflated bases") {
    // Every subset of the roster, once with single heads and once with two heads for each multi-head kind.
    const std::map<std::int64_t, std::set<std::int64_t>> allowed{{6, {7, 8, 9, 10}}, {12, {13, 15, 17}}, {24, {27}}};
    const auto& kinds = all_heir_kinds();
    const auto& profile = default_profile();
    std::map<std::int64_t, std::set<std::int64_t>> reached;
    for (int heads : {1, 2}) {
        for (std::uint32_t mask = 1; mask < (1u << kinds.size()); ++mask) {
            CaseInput in;
            for (std::size_t i = 0; i < kinds.size(); ++i) {
                if (mask & (1u << i)) in.heirs[kinds[i]] = heir_info(kinds[i]).unique ? 1 : heads;
            }
            if (in.count(husband) > 0 && in.count(wife) > 0) continue;
            const auto adj = compute_adjustment(assign_shares(determine_blocking(in, profile), profile), profile);
            if (adj.adjustment.kind != AdjustmentKind::awl) continue;
            CAPTURE(case_fingerprint(in));
            const auto it = allowed.find(adj.adjustment.original_base);
            REQUIRE(it != allowed.end());
            REQUIRE(it->second.contains(adj.adjustment.adjusted_base));
            reached[adj.adjustment.original_base].insert(adj.adjustment.adjusted_base);
        }
    }
    CHECK(reached == allowed);
}
