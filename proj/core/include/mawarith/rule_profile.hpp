#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "mawarith/frac.hpp"
#include "mawarith/heir.hpp"

namespace mawarith {

/// Heir counts visible to rule predicates.
///
/// `eligible` holds the counts of heirs not (yet) blocked; `present` holds
/// the raw input counts. A few rules (the mother's reduction by siblings)
/// look at present heirs even when they are themselves blocked.
struct ShareContext {
    std::array<int, kHeirKindCount> eligible{};
    std::array<int, kHeirKindCount> present{};

    int count(HeirKind k) const { return eligible[heir_index(k)]; }
    bool has(HeirKind k) const { return count(k) > 0; }
    int present_count(HeirKind k) const { return present[heir_index(k)]; }

    bool has_descendant() const;
    bool has_male_descendant() const;
    bool has_female_descendant() const;
    /// All six sibling kinds, counted from the input regardless of blocking.
    int sibling_count() const;
    /// True when the eligible kinds are exactly `kinds`.
    bool eligible_kinds_are(std::initializer_list<HeirKind> kinds) const;
};

using Condition = std::function<bool(const ShareContext&)>;

struct BlockingRule {
    HeirKind target;
    HeirKind blocker;
    Condition when;  // empty = unconditional
    std::string reason;
};

struct FixedShareRule {
    HeirKind kind;
    std::string group;  // kinds sharing one fard (grandmothers, maternal siblings)
    Condition when;     // empty = always
    Frac share;
    std::string label;
    // Named special rules compute their share from the context instead of `share`.
    std::string special_name;
    std::function<Frac(const ShareContext&)> special;
};

struct ResiduaryRule {
    HeirKind kind;
    int rank;    // lower = higher agnatic priority; one class takes the residue
    int weight;  // per-head weight inside the class (2 for males beside females)
    Condition when;
    std::string label;
};

struct RaddPolicy {
    std::vector<HeirKind> excluded;  // never receive a returned surplus
    // With no other sharer at all, the surplus reverts to the excluded heirs.
    bool return_to_excluded_when_alone = true;
};

struct RuleProfile {
    std::string id;
    std::vector<HeirKind> roster;
    std::vector<BlockingRule> blocking;
    std::vector<FixedShareRule> fixed;  // first matching rule per kind wins
    std::vector<ResiduaryRule> residuary;
    RaddPolicy radd;

    bool supports(HeirKind k) const;
    /// Structural problems with the tables; empty when the profile is usable.
    std::vector<std::string> check() const;
};

/// Majority-Sunni profile with the grandfather excluding all siblings.
const RuleProfile& default_profile();

/// Registered profiles by id. Throws ConfigError for an unknown id.
const RuleProfile& profile_by_id(std::string_view id);

}  // namespace mawarith
