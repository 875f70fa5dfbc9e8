#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mf {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "k", "-k", "p/q" as an exact rational. Rejects anything not in
/// lowest terms ("2/4", "0/3", "3/1" is accepted only as "3" or "3/1").
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form; den is always printed, so 1 is "1/1".
std::string format_rational(const Rational& q);

/*
 * Nonnegative extended rational: a value in [0, inf].
 *
 * Finite values are kept in lowest terms by GMP; equality is structural.
 * Arithmetic follows the measure-theoretic conventions:
 *
 *     inf + x = inf
 *     0 * inf = inf * 0 = 0
 *     inf * x = inf       for x > 0
 */
class ExtReal {
public:
    ExtReal() = default;
    ExtReal(long n);
    ExtReal(long num, long den);
    explicit ExtReal(Rational q);

    static ExtReal infinity() noexcept;
    static ExtReal zero() { return ExtReal{}; }

    [[nodiscard]] bool is_infinite() const noexcept { return inf_; }
    [[nodiscard]] bool is_finite() const noexcept { return !inf_; }
    [[nodiscard]] bool is_zero() const noexcept { return !inf_ && sgn(value_) == 0; }
    [[nodiscard]] bool is_positive() const noexcept { return inf_ || sgn(value_) > 0; }

    /// Finite value; throws std::logic_error on infinity.
    [[nodiscard]] const Rational& value() const;

    friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
    friend ExtReal operator*(const ExtReal& a, const ExtReal& b);
    ExtReal& operator+=(const ExtReal& other);

    /// a - b for b <= a and b finite; throws std::domain_error otherwise.
    friend ExtReal monus(const ExtReal& a, const ExtReal& b);
    /// Exact a / b for finite a and finite positive b.
    friend ExtReal divide(const ExtReal& a, const ExtReal& b);

    friend bool operator==(const ExtReal& a, const ExtReal& b) noexcept;
    friend std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) noexcept;

    /// "num/den" or "inf".
    [[nodiscard]] std::string str() const;
    /// Accepts the forms produced by str() plus integer shorthand "k".
    static ExtReal parse(std::string_view text);

private:
    bool inf_ = false;
    Rational value_ = 0;
};

enum class Order { LT, EQ, GT };

ExtReal add(const ExtReal& a, const ExtReal& b);
ExtReal mul(const ExtReal& a, const ExtReal& b);
Order cmp(const ExtReal& a, const ExtReal& b) noexcept;

ExtReal min(const ExtReal& a, const ExtReal& b);
ExtReal max(const ExtReal& a, const ExtReal& b);

/// 2^-k as an exact value.
ExtReal pow2_neg(unsigned k);

std::ostream& operator<<(std::ostream& os, const ExtReal& x);

}  // namespace mf
