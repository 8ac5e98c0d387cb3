#include "mawarith/rule_profile.hpp"

#include <algorithm>
#include <set>

#include "mawarith/error.hpp"

namespace mawarith {

using enum HeirKind;

bool ShareContext::has_descendant() const {
    return has(son) || has(daughter) || has(sons_son) || has(sons_daughter);
}

bool ShareContext::has_male_descendant() const {
    return has(son) || has(sons_son);
}

bool ShareContext::has_female_descendant() const {
    return has(daughter) || has(sons_daughter);
}

int ShareContext::sibling_count() const {
    return present_count(full_brother) + present_count(full_sister) + present_count(paternal_brother) +
           present_count(paternal_sister) + present_count(maternal_brother) + present_count(maternal_sister);
}

bool ShareContext::eligible_kinds_are(std::initializer_list<HeirKind> kinds) const {
    for (HeirKind k : all_heir_kinds()) {
        const bool wanted = std::find(kinds.begin(), kinds.end(), k) != kinds.end();
        if (wanted != has(k)) return false;
    }
    return true;
}

bool RuleProfile::supports(HeirKind k) const {
    return std::find(roster.begin(), roster.end(), k) != roster.end();
}

std::vector<std::string> RuleProfile::check() const {
    static const std::set<Frac> kQuranic{Frac(1, 2), Frac(1, 4), Frac(1, 8), Frac(2, 3), Frac(1, 3), Frac(1, 6)};
    std::vector<std::string> problems;
    for (const BlockingRule& r : blocking) {
        if (r.target == r.blocker) problems.push_back(std::string(heir_id(r.target)) + " blocks itself");
        if (!supports(r.target) || !supports(r.blocker)) problems.push_back("blocking rule outside roster");
    }
    for (const FixedShareRule& r : fixed) {
        if (r.special) {
            if (r.special_name.empty()) problems.push_back("unnamed special rule for " + std::string(heir_id(r.kind)));
        } else if (!kQuranic.contains(r.share)) {
            problems.push_back("non-standard fixed share " + r.share.str() + " for " + std::string(heir_id(r.kind)));
        }
        if (r.group.empty()) problems.push_back("fixed rule without group for " + std::string(heir_id(r.kind)));
    }
    for (const ResiduaryRule& r : residuary) {
        if (r.weight <= 0) problems.push_back("non-positive residuary weight for " + std::string(heir_id(r.kind)));
    }
    return problems;
}

namespace {

BlockingRule block(HeirKind target, HeirKind blocker, std::string reason, Condition when = {}) {
    return {target, blocker, std::move(when), std::move(reason)};
}

FixedShareRule fard(HeirKind kind, Frac share, std::string label, Condition when = {}, std::string group = {}) {
    if (group.empty()) group = std::string(heir_id(kind));
    return {kind, std::move(group), std::move(when), share, std::move(label), {}, {}};
}

RuleProfile make_default_profile() {
    RuleProfile p;
    p.id = "majority-sunni";
    p.roster.assign(all_heir_kinds().begin(), all_heir_kinds().end());

    auto no_fd_brother = [](HeirKind brother) {
        return [brother](const ShareContext& c) { return c.has_female_descendant() && !c.has(brother); };
    };

    // Blocking (hajb hirman).
    p.blocking = {
        block(sons_son, son, "nearer male descendant"),
        block(sons_daughter, son, "nearer male descendant"),
        block(sons_daughter, daughter, "daughters completed two-thirds",
              [](const ShareContext& c) { return c.count(daughter) >= 2 && !c.has(sons_son); }),
        block(paternal_grandfather, father, "nearer male ascendant"),
        block(paternal_grandmother, mother, "mother excludes grandmothers"),
        block(paternal_grandmother, father, "father excludes his mother"),
        block(maternal_grandmother, mother, "mother excludes grandmothers"),
    };
    for (HeirKind sib : {full_brother, full_sister, paternal_brother, paternal_sister}) {
        p.blocking.push_back(block(sib, son, "male descendant"));
        p.blocking.push_back(block(sib, sons_son, "male descendant"));
        p.blocking.push_back(block(sib, father, "father"));
        p.blocking.push_back(block(sib, paternal_grandfather, "grandfather in place of father"));
    }
    for (HeirKind sib : {paternal_brother, paternal_sister}) {
        p.blocking.push_back(block(sib, full_brother, "full brother"));
        p.blocking.push_back(
            block(sib, full_sister, "full sister residuary with female descendants", no_fd_brother(full_brother)));
    }
    p.blocking.push_back(block(paternal_sister, full_sister, "full sisters completed two-thirds",
                               [](const ShareContext& c) {
                                   return c.count(full_sister) >= 2 && !c.has(paternal_brother);
                               }));
    for (HeirKind sib : {maternal_brother, maternal_sister}) {
        for (HeirKind b : {son, daughter, sons_son, sons_daughter}) p.blocking.push_back(block(sib, b, "descendant"));
        p.blocking.push_back(block(sib, father, "male ascendant"));
        p.blocking.push_back(block(sib, paternal_grandfather, "male ascendant"));
    }

    // Fixed shares (furud).
    auto desc = [](const ShareContext& c) { return c.has_descendant(); };
    auto umariyya = [](const ShareContext& c) {
        if (c.sibling_count() >= 2) return false;
        return c.eligible_kinds_are({husband, father, mother}) || c.eligible_kinds_are({wife, father, mother});
    };
    auto alone_female = [](HeirKind female, HeirKind male, int n) {
        // n = 1: a single female, n = 2: two or more; no male counterpart, no female descendant
        return [=](const ShareContext& c) {
            if (c.has(male)) return false;
            if (female != daughter && female != sons_daughter && c.has_female_descendant()) return false;
            return n == 1 ? c.count(female) == 1 : c.count(female) >= 2;
        };
    };

    p.fixed.push_back(fard(husband, Frac(1, 4), "descendant present", desc));
    p.fixed.push_back(fard(husband, Frac(1, 2), "no descendant"));
    p.fixed.push_back(fard(wife, Frac(1, 8), "descendant present", desc));
    p.fixed.push_back(fard(wife, Frac(1, 4), "no descendant"));
    p.fixed.push_back(fard(father, Frac(1, 6), "descendant present", desc));
    p.fixed.push_back(fard(paternal_grandfather, Frac(1, 6), "descendant present", desc));

    FixedShareRule umar{mother, "mother", umariyya, Frac(0), "one third of the remainder after the spouse",
                        "umariyyatan", [](const ShareContext& c) {
                            const Frac spouse = c.has(husband) ? Frac(1, 2) : Frac(1, 4);
                            return (Frac(1) - spouse) / Frac(3);
                        }};
    p.fixed.push_back(std::move(umar));
    p.fixed.push_back(fard(mother, Frac(1, 6), "descendant or two siblings present",
                           [](const ShareContext& c) { return c.has_descendant() || c.sibling_count() >= 2; }));
    p.fixed.push_back(fard(mother, Frac(1, 3), "no descendant, fewer than two siblings"));
    p.fixed.push_back(fard(paternal_grandmother, Frac(1, 6), "grandmothers share one sixth", {}, "grandmothers"));
    p.fixed.push_back(fard(maternal_grandmother, Frac(1, 6), "grandmothers share one sixth", {}, "grandmothers"));

    p.fixed.push_back(fard(daughter, Frac(1, 2), "single daughter", alone_female(daughter, son, 1)));
    p.fixed.push_back(fard(daughter, Frac(2, 3), "two or more daughters", alone_female(daughter, son, 2)));

    // n: 1 = exactly one, 2 = two or more, 0 = any number
    auto heads = [](int have, int n) { return n == 0 ? have >= 1 : (n == 1 ? have == 1 : have >= 2); };
    auto sd_without = [=](int daughters, int n) {
        return [=](const ShareContext& c) {
            if (c.has(sons_son) || c.count(daughter) != daughters) return false;
            return heads(c.count(sons_daughter), n);
        };
    };
    p.fixed.push_back(fard(sons_daughter, Frac(1, 2), "single son's daughter", sd_without(0, 1)));
    p.fixed.push_back(fard(sons_daughter, Frac(2, 3), "two or more son's daughters", sd_without(0, 2)));
    p.fixed.push_back(fard(sons_daughter, Frac(1, 6), "completion of two-thirds beside one daughter", sd_without(1, 0)));

    p.fixed.push_back(fard(full_sister, Frac(1, 2), "single full sister", alone_female(full_sister, full_brother, 1)));
    p.fixed.push_back(fard(full_sister, Frac(2, 3), "two or more full sisters", alone_female(full_sister, full_brother, 2)));

    auto ps_with = [=](int full_sisters, int n) {
        return [=](const ShareContext& c) {
            if (c.has(paternal_brother) || c.has_female_descendant() || c.count(full_sister) != full_sisters) return false;
            return heads(c.count(paternal_sister), n);
        };
    };
    p.fixed.push_back(fard(paternal_sister, Frac(1, 2), "single paternal sister", ps_with(0, 1)));
    p.fixed.push_back(fard(paternal_sister, Frac(2, 3), "two or more paternal sisters", ps_with(0, 2)));
    p.fixed.push_back(fard(paternal_sister, Frac(1, 6), "completion of two-thirds beside one full sister", ps_with(1, 0)));

    auto maternal_total = [](const ShareContext& c) { return c.count(maternal_brother) + c.count(maternal_sister); };
    for (HeirKind k : {maternal_brother, maternal_sister}) {
        p.fixed.push_back(fard(k, Frac(1, 6), "single maternal sibling",
                               [=](const ShareContext& c) { return maternal_total(c) == 1; }, "maternal_siblings"));
        p.fixed.push_back(fard(k, Frac(1, 3), "maternal siblings share one third equally", {}, "maternal_siblings"));
    }

    // Residuaries ('asaba), by agnatic priority.
    auto with = [](HeirKind k) { return [k](const ShareContext& c) { return c.has(k); }; };
    auto no_male_desc = [](const ShareContext& c) { return !c.has_male_descendant(); };
    p.residuary = {
        {son, 1, 2, {}, "residuary by himself"},
        {daughter, 1, 1, with(son), "residuary with the son"},
        {sons_son, 2, 2, {}, "residuary by himself"},
        {sons_daughter, 2, 1, with(sons_son), "residuary with the son's son"},
        {father, 3, 1, no_male_desc, "residuary by himself"},
        {paternal_grandfather, 4, 1, no_male_desc, "residuary by himself"},
        {full_brother, 5, 2, {}, "residuary by himself"},
        {full_sister, 5, 1, with(full_brother), "residuary with the full brother"},
        {full_sister, 6, 1, no_fd_brother(full_brother), "residuary with female descendants"},
        {paternal_brother, 7, 2, {}, "residuary by himself"},
        {paternal_sister, 7, 1, with(paternal_brother), "residuary with the paternal brother"},
        {paternal_sister, 8, 1, no_fd_brother(paternal_brother), "residuary with female descendants"},
    };

    p.radd.excluded = {husband, wife};
    p.radd.return_to_excluded_when_alone = true;
    return p;
}

}  // namespace

const RuleProfile& default_profile() {
    static const RuleProfile profile = make_default_profile();
    return profile;
}

const RuleProfile& profile_by_id(std::string_view id) {
    if (id == default_profile().id) return default_profile();
    throw ConfigError("unknown rule profile '" + std::string(id) + "'");
}

}  // namespace mawarith
