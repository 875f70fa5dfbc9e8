#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mf/ext_real.hpp"

namespace mf {

/// Largest finite universe representable by FiniteSet.
inline constexpr std::size_t kMaxFinitePoints = 64;

/// Subset of a finite labeled universe {0, ..., n-1}, n <= 64, as a bitmask.
class FiniteSet {
public:
    constexpr FiniteSet() = default;
    constexpr explicit FiniteSet(std::uint64_t bits) : bits_(bits) {}
    FiniteSet(std::initializer_list<std::size_t> points);
    static FiniteSet from_points(std::span<const std::size_t> points);
    /// {0, ..., n-1}.
    static FiniteSet full(std::size_t n);

    [[nodiscard]] constexpr std::uint64_t bits() const noexcept { return bits_; }
    [[nodiscard]] constexpr bool empty() const noexcept { return bits_ == 0; }
    [[nodiscard]] constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
    [[nodiscard]] constexpr bool contains(std::size_t p) const noexcept { return p < 64 && ((bits_ >> p) & 1u); }
    [[nodiscard]] constexpr bool subset_of(FiniteSet o) const noexcept { return (bits_ & ~o.bits_) == 0; }
    /// Sorted member list.
    [[nodiscard]] std::vector<std::size_t> members() const;
    /// One past the largest member (0 for the empty set).
    [[nodiscard]] std::size_t extent() const noexcept { return bits_ ? 64 - static_cast<std::size_t>(std::countl_zero(bits_)) : 0; }
    [[nodiscard]] std::size_t lowest() const noexcept { return static_cast<std::size_t>(std::countr_zero(bits_)); }

    friend constexpr FiniteSet operator&(FiniteSet a, FiniteSet b) noexcept { return FiniteSet(a.bits_ & b.bits_); }
    friend constexpr FiniteSet operator|(FiniteSet a, FiniteSet b) noexcept { return FiniteSet(a.bits_ | b.bits_); }
    friend constexpr FiniteSet operator-(FiniteSet a, FiniteSet b) noexcept { return FiniteSet(a.bits_ & ~b.bits_); }
    friend constexpr bool operator==(FiniteSet, FiniteSet) = default;
    friend constexpr auto operator<=>(FiniteSet a, FiniteSet b) noexcept { return a.bits_ <=> b.bits_; }

private:
    std::uint64_t bits_ = 0;
};

/// Half-open rational interval [lo, hi).
struct Interval {
    Rational lo;
    Rational hi;

    [[nodiscard]] bool empty() const { return !(lo < hi); }
    [[nodiscard]] Rational length() const { return empty() ? Rational(0) : Rational(hi - lo); }
    [[nodiscard]] bool contains(const Rational& x) const { return lo <= x && x < hi; }
    friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

/// Finite union of half-open intervals in canonical form: nonempty pieces,
/// sorted, pairwise disjoint and non-adjacent.
class IntervalUnion {
public:
    IntervalUnion() = default;
    /// Canonicalizes an arbitrary list; degenerate [a, a) pieces vanish.
    explicit IntervalUnion(std::vector<Interval> pieces);
    IntervalUnion(Rational lo, Rational hi);

    [[nodiscard]] const std::vector<Interval>& pieces() const noexcept { return pieces_; }
    [[nodiscard]] bool empty() const noexcept { return pieces_.empty(); }
    [[nodiscard]] bool is_interval() const noexcept { return pieces_.size() <= 1; }
    [[nodiscard]] bool contains(const Rational& x) const;
    [[nodiscard]] Rational length() const;

    friend IntervalUnion operator&(const IntervalUnion& a, const IntervalUnion& b);
    friend IntervalUnion operator|(const IntervalUnion& a, const IntervalUnion& b);
    friend IntervalUnion operator-(const IntervalUnion& a, const IntervalUnion& b);
    friend bool operator==(const IntervalUnion& a, const IntervalUnion& b) { return a.pieces_ == b.pieces_; }

private:
    std::vector<Interval> pieces_;
};

/// A point of either universe.
using Point = std::variant<std::size_t, Rational>;

std::string point_str(const Point& p);

/// A set in one of the supported universes.
class SetExpr {
public:
    SetExpr() = default;
    SetExpr(FiniteSet s) : v_(s) {}
    SetExpr(IntervalUnion u) : v_(std::move(u)) {}

    static SetExpr interval(Rational lo, Rational hi) { return SetExpr(IntervalUnion(std::move(lo), std::move(hi))); }

    [[nodiscard]] bool is_finite() const noexcept { return std::holds_alternative<FiniteSet>(v_); }
    [[nodiscard]] bool is_interval_union() const noexcept { return std::holds_alternative<IntervalUnion>(v_); }
    /// Throws UniverseMismatch when the set is of the other kind.
    [[nodiscard]] FiniteSet finite() const;
    [[nodiscard]] const IntervalUnion& intervals() const;

    [[nodiscard]] bool empty() const;
    [[nodiscard]] bool contains(const Point& p) const;
    [[nodiscard]] bool subset_of(const SetExpr& other) const;

    friend bool operator==(const SetExpr& a, const SetExpr& b);

private:
    std::variant<FiniteSet, IntervalUnion> v_;
};

SetExpr set_intersect(const SetExpr& a, const SetExpr& b);
SetExpr set_union(const SetExpr& a, const SetExpr& b);
SetExpr set_minus(const SetExpr& a, const SetExpr& b);

/// Ground set X.
class Universe {
public:
    static Universe finite(std::size_t size);
    static Universe interval() { return Universe(0, false); }

    [[nodiscard]] bool is_finite() const noexcept { return finite_; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    /// All of X; finite universes only.
    [[nodiscard]] FiniteSet full() const;
    /// True when every member of `s` lives in this universe.
    [[nodiscard]] bool admits(const SetExpr& s) const;
    [[nodiscard]] bool admits(const Point& p) const;

    friend bool operator==(const Universe&, const Universe&) = default;

private:
    Universe(std::size_t size, bool finite) : size_(size), finite_(finite) {}
    std::size_t size_ = 0;
    bool finite_ = false;
};

}  // namespace mf
