#include "mawarith/text.hpp"

namespace mawarith {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool is_diacritic(char32_t c) {
    return (c >= 0x064B && c <= 0x065F) || c == 0x0670 || c == 0x0640 || (c >= 0x06D6 && c <= 0x06ED);
}

char32_t fold(char32_t c) {
    switch (c) {
        case 0x0622:  // alef with madda
        case 0x0623:  // alef with hamza above
        case 0x0625:  // alef with hamza below
        case 0x0671:  // alef wasla
            return 0x0627;
        case 0x0629: return 0x0647;  // ta marbuta -> ha
        case 0x0649: return 0x064A;  // alef maqsura -> ya
        default: break;
    }
    if (c >= 0x0660 && c <= 0x0669) return U'0' + (c - 0x0660);
    if (c >= 0x06F0 && c <= 0x06F9) return U'0' + (c - 0x06F0);
    if (c >= U'A' && c <= U'Z') return c + (U'a' - U'A');
    return c;
}

bool is_word_char(char32_t c) {
    if ((c >= U'a' && c <= U'z') || (c >= U'0' && c <= U'9')) return true;
    if (c >= 0x0621 && c <= 0x063A) return true;
    if (c >= 0x0641 && c <= 0x064A) return true;
    if (c >= 0x0671 && c <= 0x06D3) return true;
    // Latin-1 supplement through Hebrew, minus the multiplication and division signs.
    if (c >= 0x00C0 && c < 0x0600 && c != 0x00D7 && c != 0x00F7) return true;
    return false;
}

}  // namespace

std::u32string utf8_decode(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    const auto* p = reinterpret_cast<const unsigned char*>(text.data());
    const auto* end = p + text.size();
    while (p < end) {
        const unsigned char b = *p;
        int extra = 0;
        char32_t cp = 0;
        if (b < 0x80) {
            cp = b;
        } else if ((b & 0xE0) == 0xC0) {
            cp = b & 0x1F;
            extra = 1;
        } else if ((b & 0xF0) == 0xE0) {
            cp = b & 0x0F;
            extra = 2;
        } else if ((b & 0xF8) == 0xF0) {
            cp = b & 0x07;
            extra = 3;
        } else {
            out.push_back(kReplacement);
            ++p;
            continue;
        }
        ++p;
        bool ok = true;
        for (int i = 0; i < extra; ++i) {
            if (p >= end || (*p & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (*p & 0x3F);
            ++p;
        }
        out.push_back(ok ? cp : kReplacement);
    }
    return out;
}

std::string utf8_encode(std::u32string_view text) {
    std::string out;
    out.reserve(text.size() * 2);
    for (char32_t c : text) {
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else if (c < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (c >> 6)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        } else if (c < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (c >> 12)));
            out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (c >> 18)));
            out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

std::string normalize_ar(std::string_view text) {
    std::u32string cps = utf8_decode(text);
    std::u32string out;
    out.reserve(cps.size());
    for (char32_t c : cps) {
        if (is_diacritic(c)) continue;
        out.push_back(fold(c));
    }
    return utf8_encode(out);
}

std::vector<std::string> analyze_ar(std::string_view text) {
    std::vector<std::string> tokens;
    std::u32string current;
    auto flush = [&] {
        if (current.empty()) return;
        // Attached conjunction: "وأم" and "أم" index alike.
        if (current.size() >= 3 && current.front() == U'\u0648') current.erase(0, 1);
        tokens.push_back(utf8_encode(current));
        current.clear();
    };
    for (char32_t c : utf8_decode(text)) {
        if (is_diacritic(c)) continue;
        c = fold(c);
        if (is_word_char(c)) {
            current.push_back(c);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

}  // namespace mawarith
