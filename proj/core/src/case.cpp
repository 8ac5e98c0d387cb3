#include "mawarith/case.hpp"

#include <array>
#include <string_view>

namespace mawarith {

std::string case_fingerprint(const CaseInput& input) {
    // std::map iterates in canonical heir order, so the key is order-invariant.
    std::string key;
    for (const auto& [kind, count] : input.heirs) {
        if (count <= 0) continue;
        if (!key.empty()) key.push_back('|');
        key += heir_id(kind);
        key.push_back(':');
        key += std::to_string(count);
    }
    return key;
}

std::vector<std::string> validate_case_input(const CaseInput& input) {
    std::vector<std::string> violations;
    long total = 0;
    for (const auto& [kind, count] : input.heirs) {
        if (count <= 0) {
            violations.push_back("non-positive count for " + std::string(heir_id(kind)));
            continue;
        }
        total += count;
        if (kind == HeirKind::wife) {
            if (count > 4) violations.push_back("wife count > 4");
        } else if (heir_info(kind).unique && count > 1) {
            violations.push_back(std::string(heir_id(kind)) + " count > 1");
        }
    }
    if (input.count(HeirKind::husband) > 0 && input.count(HeirKind::wife) > 0) {
        violations.push_back("spouse conflict");
    }
    if (total < 1) {
        violations.push_back("no heirs");
    }
    if (input.estate && *input.estate <= 0) {
        violations.push_back("estate must be positive");
    }
    return violations;
}

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == s) return static_cast<E>(i);
    }
    return std::nullopt;
}

constexpr std::array<std::string_view, 3> kBasisNames{"fixed", "residuary", "fixed+residuary"};
constexpr std::array<std::string_view, 3> kAdjustmentNames{"none", "awl", "radd"};
constexpr std::array<std::string_view, 4> kStageNames{"eligibility", "shares", "adjustment", "tasil"};

}  // namespace

std::string_view to_string(ShareBasis basis) noexcept {
    return kBasisNames[static_cast<std::size_t>(basis)];
}

std::string_view to_string(AdjustmentKind kind) noexcept {
    return kAdjustmentNames[static_cast<std::size_t>(kind)];
}

std::string_view to_string(Stage stage) noexcept {
    return kStageNames[static_cast<std::size_t>(stage)];
}

std::optional<ShareBasis> share_basis_from_string(std::string_view s) noexcept {
    return lookup<ShareBasis>(kBasisNames, s);
}

std::optional<AdjustmentKind> adjustment_kind_from_string(std::string_view s) noexcept {
    return lookup<AdjustmentKind>(kAdjustmentNames, s);
}

std::optional<Stage> stage_from_string(std::string_view s) noexcept {
    return lookup<Stage>(kStageNames, s);
}

}  // namespace mawarith
