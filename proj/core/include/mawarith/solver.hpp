#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mawarith/case.hpp"
#include "mawarith/rule_profile.hpp"

namespace mawarith {

/// Stage 1: partition of the input into eligible and blocked heirs.
struct BlockingResult {
    CaseInput input;
    std::vector<std::pair<HeirKind, int>> eligible;  // canonical order
    std::vector<BlockedHeir> blocked;                 // canonical order
    ShareContext context;                             // eligibility after the fixpoint
};

/// One fard shared by one or more heir kinds (e.g. both grandmothers).
struct ShareGroup {
    std::string name;
    Frac share;
    std::vector<HeirKind> members;
    std::string label;
};

/// The residuary class that takes whatever the fixed shares leave.
struct ResidueClass {
    int rank = 0;
    Frac amount;  // zero when the fixed shares exhaust the estate
    std::vector<std::pair<HeirKind, int>> members;  // kind, per-head weight
};

/// Stage 2: fixed and residuary assignment, before any 'awl or radd.
struct ShareAssignment {
    std::map<HeirKind, int> counts;        // eligible heads
    std::map<HeirKind, Frac> shares;       // group share per kind
    std::map<HeirKind, ShareBasis> basis;
    std::map<HeirKind, std::string> labels;
    std::vector<ShareGroup> fixed_groups;
    std::optional<ResidueClass> residue;
    Frac fixed_total;
    std::int64_t asl = 1;
};

struct AdjustmentResult {
    Adjustment adjustment;
    std::map<HeirKind, Frac> adjusted_shares;
    std::string note;
};

struct TasilResult {
    std::int64_t final_base = 1;
    std::map<HeirKind, Allotment> post_tasil;
};

/// Throws ConfigError for heir kinds the profile does not know.
BlockingResult determine_blocking(const CaseInput& input, const RuleProfile& profile);

ShareAssignment assign_shares(const BlockingResult& blocking, const RuleProfile& profile);

/// 'awl when the fixed shares oversubscribe, radd when they undersubscribe
/// and no residuary exists, otherwise none. Adjusted shares sum to one.
AdjustmentResult compute_adjustment(const ShareAssignment& assignment, const RuleProfile& profile);

/// Smallest base at which every group's siham is a whole number divisible by
/// its head count.
TasilResult tasil(const std::map<HeirKind, Frac>& adjusted_shares, const std::map<HeirKind, int>& counts);

/// All four stages plus the trace. Throws InputError for structurally invalid
/// input and ConfigError when the profile cannot resolve the case.
SolvedCase solve_case(const CaseInput& input, const RuleProfile& profile = default_profile());

}  // namespace mawarith
