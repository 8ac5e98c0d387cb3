#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace mawarith {

/// Heir roster. Enumerator order is the canonical serialization order:
/// spouses, descendants, ascendants, siblings.
enum class HeirKind : std::uint8_t {
    husband,
    wife,
    son,
    daughter,
    sons_son,
    sons_daughter,
    father,
    mother,
    paternal_grandfather,
    paternal_grandmother,
    maternal_grandmother,
    full_brother,
    full_sister,
    paternal_brother,
    paternal_sister,
    maternal_brother,
    maternal_sister,
};

inline constexpr std::size_t kHeirKindCount = 17;

enum class Gender : std::uint8_t { male, female };
enum class Lineage : std::uint8_t { spouse, descendant, ascendant, sibling };

struct HeirInfo {
    HeirKind kind;
    std::string_view id;          // stable machine identifier, e.g. "sons_daughter"
    std::string_view arabic;      // singular surface form
    std::string_view arabic_plural;
    Gender gender;
    Lineage lineage;
    bool unique;                  // at most one of this kind can exist
};

const HeirInfo& heir_info(HeirKind kind) noexcept;
const std::array<HeirKind, kHeirKindCount>& all_heir_kinds() noexcept;

inline std::string_view heir_id(HeirKind kind) noexcept { return heir_info(kind).id; }
inline std::size_t heir_index(HeirKind kind) noexcept { return static_cast<std::size_t>(kind); }

/// Exact machine id lookup ("full_sister").
std::optional<HeirKind> heir_from_id(std::string_view id) noexcept;

/// Lenient lookup for model output: ids, English phrases ("son's son",
/// "full-sister"), and Arabic names with or without the definite article.
std::optional<HeirKind> heir_from_alias(std::string_view text);

}  // namespace mawarith
