#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace mawarith {

/// Exact rational number over 64-bit integers.
///
/// Always stored reduced with a positive denominator; zero is 0/1. Every
/// operation checks for overflow and throws ArithmeticError instead of
/// wrapping, so a legal result is either exact or absent.
class Frac {
public:
    constexpr Frac() noexcept = default;
    /* implicit */ constexpr Frac(std::int64_t whole) noexcept : num_(whole), den_(1) {}

    /// Throws InputError when den == 0.
    Frac(std::int64_t num, std::int64_t den);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }
    bool is_integer() const noexcept { return den_ == 1; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// "num/den", always with the slash (e.g. "1/1", "0/1").
    std::string str() const;

    /// Accepts "n/d", "n", and finite decimals such as "-12.375".
    static Frac parse(std::string_view text);

    Frac& operator+=(const Frac& rhs);
    Frac& operator-=(const Frac& rhs);
    Frac& operator*=(const Frac& rhs);
    Frac& operator/=(const Frac& rhs);

    friend Frac operator+(Frac a, const Frac& b) { return a += b; }
    friend Frac operator-(Frac a, const Frac& b) { return a -= b; }
    friend Frac operator*(Frac a, const Frac& b) { return a *= b; }
    friend Frac operator/(Frac a, const Frac& b) { return a /= b; }
    Frac operator-() const;

    friend bool operator==(const Frac&, const Frac&) = default;
    friend std::strong_ordering operator<=>(const Frac& a, const Frac& b);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

enum class ArithKind { add, sub, mul, div };

Frac frac_make(std::int64_t num, std::int64_t den);
Frac frac_arith(const Frac& a, const Frac& b, ArithKind kind);

/// Least common multiple of all denominators. Throws InputError on an empty list.
std::int64_t lcm_of_dens(std::span<const Frac> fracs);

/// Overflow-checked integer helpers shared by the solver.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_lcm(std::int64_t a, std::int64_t b);

std::ostream& operator<<(std::ostream& os, const Frac& f);

}  // namespace mawarith
