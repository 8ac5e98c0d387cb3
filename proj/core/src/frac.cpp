#include "mawarith/frac.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <ostream>

#include "mawarith/error.hpp"

namespace mawarith {

namespace {

std::int64_t checked_neg(std::int64_t a) {
    if (a == std::numeric_limits<std::int64_t>::min()) {
        throw ArithmeticError("integer overflow in negation");
    }
    return -a;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc::result_out_of_range) {
        throw ArithmeticError("integer overflow parsing '" + std::string(whole) + "'");
    }
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw InputError("not a rational number: '" + std::string(whole) + "'");
    }
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) {
        throw ArithmeticError("integer overflow in addition");
    }
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw ArithmeticError("integer overflow in multiplication");
    }
    return r;
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    const std::int64_t g = std::gcd(a, b);
    return checked_mul(a / g, b < 0 ? checked_neg(b) : b);
}

Frac::Frac(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw InputError("fraction with zero denominator");
    }
    if (num == 0) {
        num_ = 0;
        den_ = 1;
        return;
    }
    if (den < 0) {
        num = checked_neg(num);
        den = checked_neg(den);
    }
    // std::gcd on int64 min is UB; the negations above already reject it for den.
    if (num == std::numeric_limits<std::int64_t>::min()) {
        throw ArithmeticError("integer overflow in fraction numerator");
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Frac& Frac::operator+=(const Frac& rhs) {
    // a/b + c/d with g = gcd(b, d): (a*(d/g) + c*(b/g)) / (b/g*d)
    const std::int64_t g = std::gcd(den_, rhs.den_);
    const std::int64_t n = checked_add(checked_mul(num_, rhs.den_ / g), checked_mul(rhs.num_, den_ / g));
    const std::int64_t d = checked_mul(den_ / g, rhs.den_);
    *this = Frac(n, d);
    return *this;
}

Frac& Frac::operator-=(const Frac& rhs) {
    return *this += -rhs;
}

Frac& Frac::operator*=(const Frac& rhs) {
    // Cross-reduce first so intermediate products stay small.
    const std::int64_t g1 = std::gcd(num_, rhs.den_);
    const std::int64_t g2 = std::gcd(rhs.num_, den_);
    const std::int64_t n = checked_mul(num_ / g1, rhs.num_ / g2);
    const std::int64_t d = checked_mul(den_ / g2, rhs.den_ / g1);
    *this = Frac(n, d);
    return *this;
}

Frac& Frac::operator/=(const Frac& rhs) {
    if (rhs.num_ == 0) {
        throw ArithmeticError("division by zero");
    }
    Frac inv;
    inv.num_ = rhs.den_;
    inv.den_ = rhs.num_;
    if (inv.den_ < 0) {
        inv.num_ = checked_neg(inv.num_);
        inv.den_ = checked_neg(inv.den_);
    }
    return *this *= inv;
}

Frac Frac::operator-() const {
    Frac r;
    r.num_ = checked_neg(num_);
    r.den_ = den_;
    return r;
}

std::strong_ordering operator<=>(const Frac& a, const Frac& b) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
}

std::string Frac::str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Frac Frac::parse(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) {
        throw InputError("empty rational number");
    }
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        return Frac(parse_int(trim(s.substr(0, slash)), text), parse_int(trim(s.substr(slash + 1)), text));
    }
    const auto dot = s.find('.');
    if (dot == std::string_view::npos) {
        return Frac(parse_int(s, text));
    }
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
        negative = int_part.front() == '-';
        int_part.remove_prefix(1);
    }
    if ((int_part.empty() && frac_part.empty()) || frac_part.find_first_not_of("0123456789") != std::string_view::npos) {
        throw InputError("not a rational number: '" + std::string(text) + "'");
    }
    while (!frac_part.empty() && frac_part.back() == '0') frac_part.remove_suffix(1);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale = checked_mul(scale, 10);
    const std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    if (whole < 0) {
        throw InputError("not a rational number: '" + std::string(text) + "'");
    }
    const std::int64_t fraction = frac_part.empty() ? 0 : parse_int(frac_part, text);
    std::int64_t num = checked_add(checked_mul(whole, scale), fraction);
    return Frac(negative ? checked_neg(num) : num, scale);
}

Frac frac_make(std::int64_t num, std::int64_t den) {
    return Frac(num, den);
}

Frac frac_arith(const Frac& a, const Frac& b, ArithKind kind) {
    switch (kind) {
        case ArithKind::add: return a + b;
        case ArithKind::sub: return a - b;
        case ArithKind::mul: return a * b;
        case ArithKind::div: return a / b;
    }
    throw InputError("unknown arithmetic kind");
}

std::int64_t lcm_of_dens(std::span<const Frac> fracs) {
    if (fracs.empty()) {
        throw InputError("lcm_of_dens of an empty list");
    }
    std::int64_t l = 1;
    for (const Frac& f : fracs) l = checked_lcm(l, f.den());
    return l;
}

std::ostream& operator<<(std::ostream& os, const Frac& f) {
    return os << f.str();
}

}  // namespace mawarith
