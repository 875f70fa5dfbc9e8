#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mf/outer.hpp"
#include "mf/spaces.hpp"

namespace mf {

/// base x side as a subset of X x Y.
struct Rect {
    SetExpr base;
    SetExpr side;

    [[nodiscard]] bool empty() const { return base.empty() || side.empty(); }
    friend bool operator==(const Rect&, const Rect&) = default;
};

bool rects_disjoint(const Rect& a, const Rect& b);
Rect rect_intersect(const Rect& a, const Rect& b);

/*
 * Countable staircase appended after the explicit rectangles of a family.
 *
 * Piece n (n = 0, 1, ...) splits [lo, hi) on one interval axis:
 *
 *     I_n = [hi - w 2^-n, hi - w 2^-(n+1)),   w = hi - lo
 *
 * and is crossed with the fixed set on the other axis. The pieces are
 * pairwise disjoint with union fixed x [lo, hi) (or [lo, hi) x fixed).
 */
struct DyadicTail {
    enum class Axis { Base, Side };
    Axis axis = Axis::Base;
    SetExpr fixed;
    Rational lo;
    Rational hi;

    [[nodiscard]] Interval piece_interval(std::size_t n) const;
    [[nodiscard]] Rect piece(std::size_t n) const;
    /// The union of every piece as one rectangle.
    [[nodiscard]] Rect hull() const;
    /// sum_{n <= depth} mu(piece n), using the closed form
    /// mu(fixed) * w * (1 - 2^-(depth+1)).
    [[nodiscard]] ExtReal partial_measure(const MeasureDesc& mx, const MeasureDesc& my, std::size_t depth) const;
    [[nodiscard]] ExtReal total_measure(const MeasureDesc& mx, const MeasureDesc& my) const;
};

/// Indexed rectangles B_n x C_n, optionally continued by a dyadic tail whose
/// piece k has index rects().size() + k.
class RectFamily {
public:
    RectFamily() = default;
    explicit RectFamily(std::vector<Rect> rects, std::optional<DyadicTail> tail = std::nullopt);

    [[nodiscard]] const std::vector<Rect>& rects() const noexcept { return rects_; }
    [[nodiscard]] const std::optional<DyadicTail>& tail() const noexcept { return tail_; }
    [[nodiscard]] bool is_finite() const noexcept { return !tail_.has_value(); }
    [[nodiscard]] std::size_t explicit_size() const noexcept { return rects_.size(); }

    [[nodiscard]] Rect at(std::size_t index) const;
    /// The explicit rectangles followed by tail pieces 0..tail_depth.
    [[nodiscard]] std::vector<Rect> truncate(std::size_t tail_depth) const;
    /// Explicit rectangles plus the tail hull: same union as the whole family.
    [[nodiscard]] std::vector<Rect> hull_blocks() const;

private:
    std::vector<Rect> rects_;
    std::optional<DyadicTail> tail_;
};

/// First pair of indices whose rectangles meet; the tail is reported as index
/// explicit_size(). Tail pieces are disjoint among themselves by construction.
std::optional<std::pair<std::size_t, std::size_t>> first_overlap(const RectFamily& family);

/// D as a finite union of blocks over X x Y. Blocks need not be semiring members.
class ProductSet {
public:
    ProductSet(Universe x, Universe y, std::vector<Rect> blocks = {});
    /// Singleton blocks {x} x {y}; finite universes only.
    static ProductSet from_points(Universe x, Universe y, const std::vector<std::pair<std::size_t, std::size_t>>& points);

    [[nodiscard]] const Universe& x_universe() const noexcept { return x_; }
    [[nodiscard]] const Universe& y_universe() const noexcept { return y_; }
    [[nodiscard]] const std::vector<Rect>& blocks() const noexcept { return blocks_; }
    [[nodiscard]] bool contains(const Point& x, const Point& y) const;

private:
    Universe x_;
    Universe y_;
    std::vector<Rect> blocks_;
};

/// Atoms of one axis relative to a finite list of sets: single points on a
/// finite universe, or the intervals between consecutive endpoints on the
/// rational line. Membership in every listed set is constant on each cell.
struct Cell {
    SetExpr set;
    Point rep;
};

std::vector<Cell> axis_cells(const Universe& u, const std::vector<SetExpr>& sets);

/// Exact containment / equality of finite unions of rectangles, decided on
/// the product of axis cells.
bool blocks_subset(const Universe& x, const Universe& y, const std::vector<Rect>& a, const std::vector<Rect>& b);
bool blocks_equal(const Universe& x, const Universe& y, const std::vector<Rect>& a, const std::vector<Rect>& b);

/// mu_X(base) * mu_Y(side), with 0 * inf = 0.
ExtReal product_measure(const MeasureDesc& mx, const MeasureDesc& my, const Rect& r);

/// Pairwise-disjoint family with the same union, built by iterated
/// subtraction (A1 x B1) \ (A2 x B2) = (A1 \ A2) x B1 u (A1 n A2) x (B1 \ B2).
RectFamily rect_disjointify(const std::vector<Rect>& family, const SemiringDesc& sx, const SemiringDesc& sy);

/// D^x = { y : (x, y) in D }.
SetExpr section(const ProductSet& d, const Point& x);

/// D^{>r} = { x : mu*_Y(D^x) > r } for finite positive r.
SetExpr superlevel(const ProductSet& d, const MeasureSpace& space_y, const ExtReal& r, const OuterConfig& config = {});

/// X x Y with the product semiring and product measure. For two finite
/// spaces the product is materialized as a finite space over the points
/// (x, y) -> x |Y| + y with every nonempty A x B as a family member, so the
/// generated outer measure comes from the generic machinery.
class ProductSpace {
public:
    ProductSpace(MeasureSpace x, MeasureSpace y);

    [[nodiscard]] const MeasureSpace& x() const noexcept { return x_; }
    [[nodiscard]] const MeasureSpace& y() const noexcept { return y_; }
    [[nodiscard]] bool is_finite() const noexcept { return joint_.has_value(); }
    /// Throws Unsupported unless both factors are finite.
    [[nodiscard]] const MeasureSpace& joint() const;

    [[nodiscard]] FiniteSet encode(const ProductSet& d) const;
    [[nodiscard]] ProductSet decode(FiniteSet s) const;
    [[nodiscard]] ProductSet full() const;
    [[nodiscard]] ProductSet complement(const ProductSet& d) const;

    /// (mu_X x mu_Y)*(D): via the joint space when finite, or the area of
    /// the union for Length x Length.
    [[nodiscard]] ExtReal outer(const ProductSet& d, const OuterConfig& config = {}) const;

private:
    MeasureSpace x_;
    MeasureSpace y_;
    std::optional<MeasureSpace> joint_;
};

/// Throws NotInDomain when a rectangle of the family is not in Sigma_X x Sigma_Y.
void require_members(const RectFamily& family, const SemiringDesc& sx, const SemiringDesc& sy);

}  // namespace mf
