#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mawarith/frac.hpp"
#include "mawarith/heir.hpp"

namespace mawarith {

/// One heir configuration. Keys iterate in canonical heir order.
struct CaseInput {
    std::map<HeirKind, int> heirs;
    std::optional<std::int64_t> estate;  // monetary units; rendering only

    int count(HeirKind kind) const {
        auto it = heirs.find(kind);
        return it == heirs.end() ? 0 : it->second;
    }

    friend bool operator==(const CaseInput&, const CaseInput&) = default;
};

/// Deterministic key over the (kind, count) multiset; estate is ignored.
std::string case_fingerprint(const CaseInput& input);

/// Every violated structural invariant, as human-readable messages. Empty means valid.
std::vector<std::string> validate_case_input(const CaseInput& input);

enum class ShareBasis : std::uint8_t { fixed, residuary, fixed_and_residuary };
enum class AdjustmentKind : std::uint8_t { none, awl, radd };

std::string_view to_string(ShareBasis basis) noexcept;
std::string_view to_string(AdjustmentKind kind) noexcept;
std::optional<ShareBasis> share_basis_from_string(std::string_view s) noexcept;
std::optional<AdjustmentKind> adjustment_kind_from_string(std::string_view s) noexcept;

struct EligibleHeir {
    HeirKind kind;
    int count;
    ShareBasis basis;
    friend bool operator==(const EligibleHeir&, const EligibleHeir&) = default;
};

struct BlockedHeir {
    HeirKind kind;
    int count;
    HeirKind blocker;
    std::string reason;
    friend bool operator==(const BlockedHeir&, const BlockedHeir&) = default;
};

struct Adjustment {
    AdjustmentKind kind = AdjustmentKind::none;
    std::int64_t original_base = 1;  // asl al-mas'ala
    std::int64_t adjusted_base = 1;  // inflated base for 'awl, participant base for radd
    friend bool operator==(const Adjustment&, const Adjustment&) = default;
};

/// Final distribution for one heir group.
struct Allotment {
    std::int64_t siham = 0;  // integer units out of the final base, whole group
    Frac per_head_percent;   // exact percentage of the estate per individual
    friend bool operator==(const Allotment&, const Allotment&) = default;
};

enum class Stage : std::uint8_t { eligibility, shares, adjustment, tasil };
std::string_view to_string(Stage stage) noexcept;
std::optional<Stage> stage_from_string(std::string_view s) noexcept;

struct TraceRecord {
    Stage stage;
    std::string note;
    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// A fully resolved case. Maps are keyed by heir kind, so iteration is canonical.
struct SolvedCase {
    CaseInput input;
    std::vector<EligibleHeir> eligible;
    std::vector<BlockedHeir> blocked;
    std::map<HeirKind, Frac> shares;           // group share before adjustment
    Adjustment adjustment;
    std::map<HeirKind, Frac> adjusted_shares;  // group share after 'awl / radd
    std::int64_t final_base = 1;               // base after tashih
    std::map<HeirKind, Allotment> post_tasil;
    std::vector<TraceRecord> trace;

    friend bool operator==(const SolvedCase&, const SolvedCase&) = default;
};

}  // namespace mawarith
