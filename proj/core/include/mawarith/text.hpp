#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mawarith {

/// Decodes UTF-8 into code points. Invalid sequences become U+FFFD.
std::u32string utf8_decode(std::string_view text);
std::string utf8_encode(std::u32string_view text);

/// Orthographic normalization for Arabic retrieval:
///  - harakat, shadda, sukun, superscript alef and tatweel removed
///  - hamza-bearing alef forms and alef wasla folded to bare alef
///  - ta marbuta folded to ha, alef maqsura folded to ya
///  - Arabic-Indic digits mapped to ASCII, ASCII letters lowercased
/// Punctuation and spacing are left in place.
std::string normalize_ar(std::string_view text);

/// normalize_ar followed by splitting on anything that is not a letter or digit.
/// A leading conjunction waw is dropped from tokens of three or more letters.
std::vector<std::string> analyze_ar(std::string_view text);

}  // namespace mawarith
