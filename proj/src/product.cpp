#include "mf/product.hpp"

#include <algorithm>

#include "mf/error.hpp"

namespace mf {

namespace {

SetExpr empty_like(const Universe& u) { return u.is_finite() ? SetExpr(FiniteSet{}) : SetExpr(IntervalUnion{}); }

constexpr std::size_t kMaxJointFamily = std::size_t{1} << 14;

}  // namespace

bool rects_disjoint(const Rect& a, const Rect& b) {
    return set_intersect(a.base, b.base).empty() || set_intersect(a.side, b.side).empty();
}

Rect rect_intersect(const Rect& a, const Rect& b) {
    return {set_intersect(a.base, b.base), set_intersect(a.side, b.side)};
}

// ---------------------------------------------------------------------------
// DyadicTail / RectFamily

Interval DyadicTail::piece_interval(std::size_t n) const {
    Rational w = hi - lo;
    Integer two_n = 1;
    two_n <<= static_cast<mp_bitcnt_t>(n);
    Rational left = hi - w / Rational(two_n);
    Rational right = hi - w / Rational(Integer(two_n * 2));
    return {left, right};
}

Rect DyadicTail::piece(std::size_t n) const {
    Interval iv = piece_interval(n);
    SetExpr s = SetExpr::interval(iv.lo, iv.hi);
    return axis == Axis::Base ? Rect{s, fixed} : Rect{fixed, s};
}

Rect DyadicTail::hull() const {
    SetExpr s = SetExpr::interval(lo, hi);
    return axis == Axis::Base ? Rect{s, fixed} : Rect{fixed, s};
}

ExtReal DyadicTail::partial_measure(const MeasureDesc& mx, const MeasureDesc& my, std::size_t depth) const {
    const MeasureDesc& fixed_measure = axis == Axis::Base ? my : mx;
    ExtReal scale = ExtReal(Rational(hi - lo)) * measure_eval(fixed_measure, fixed);
    return scale * monus(ExtReal(1), pow2_neg(static_cast<unsigned>(depth + 1)));
}

ExtReal DyadicTail::total_measure(const MeasureDesc& mx, const MeasureDesc& my) const {
    const MeasureDesc& fixed_measure = axis == Axis::Base ? my : mx;
    return ExtReal(Rational(hi - lo)) * measure_eval(fixed_measure, fixed);
}

RectFamily::RectFamily(std::vector<Rect> rects, std::optional<DyadicTail> tail)
    : rects_(std::move(rects)), tail_(std::move(tail)) {
    if (tail_) {
        if (!(tail_->lo < tail_->hi)) throw Error(ErrorKind::PreconditionFailed, "dyadic tail needs lo < hi");
        if (tail_->fixed.empty()) throw Error(ErrorKind::PreconditionFailed, "dyadic tail needs a nonempty fixed set");
    }
}

Rect RectFamily::at(std::size_t index) const {
    if (index < rects_.size()) return rects_[index];
    if (!tail_) throw Error(ErrorKind::NotInDomain, "rectangle index " + std::to_string(index) + " out of range");
    return tail_->piece(index - rects_.size());
}

std::vector<Rect> RectFamily::truncate(std::size_t tail_depth) const {
    std::vector<Rect> out = rects_;
    if (tail_)
        for (std::size_t n = 0; n <= tail_depth; ++n) out.push_back(tail_->piece(n));
    return out;
}

std::vector<Rect> RectFamily::hull_blocks() const {
    std::vector<Rect> out = rects_;
    if (tail_) out.push_back(tail_->hull());
    return out;
}

std::optional<std::pair<std::size_t, std::size_t>> first_overlap(const RectFamily& family) {
    auto blocks = family.hull_blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (std::size_t j = i + 1; j < blocks.size(); ++j)
            if (!rects_disjoint(blocks[i], blocks[j])) return std::pair{i, j};
    return std::nullopt;
}

void require_members(const RectFamily& family, const SemiringDesc& sx, const SemiringDesc& sy) {
    for (std::size_t i = 0; i < family.rects().size(); ++i) {
        const auto& r = family.rects()[i];
        if (!sx.contains(r.base) || !sy.contains(r.side))
            throw Error(ErrorKind::NotInDomain, "rectangle " + std::to_string(i) + " is not in the product semiring");
    }
    if (const auto& tail = family.tail()) {
        const SemiringDesc& axis_sr = tail->axis == DyadicTail::Axis::Base ? sx : sy;
        const SemiringDesc& fixed_sr = tail->axis == DyadicTail::Axis::Base ? sy : sx;
        if (axis_sr.kind() != SemiringKind::Interval)
            throw Error(ErrorKind::NotInDomain, "dyadic tail axis must carry the interval semiring");
        if (!fixed_sr.contains(tail->fixed)) throw Error(ErrorKind::NotInDomain, "dyadic tail fixed set is not a semiring member");
    }
}

// ---------------------------------------------------------------------------
// ProductSet

ProductSet::ProductSet(Universe x, Universe y, std::vector<Rect> blocks) : x_(x), y_(y), blocks_(std::move(blocks)) {
    for (const auto& b : blocks_)
        if (!x_.admits(b.base) || !y_.admits(b.side))
            throw Error(ErrorKind::UniverseMismatch, "product block leaves X x Y");
}

ProductSet ProductSet::from_points(Universe x, Universe y, const std::vector<std::pair<std::size_t, std::size_t>>& points) {
    std::vector<Rect> blocks;
    for (auto [px, py] : points) blocks.push_back({FiniteSet{px}, FiniteSet{py}});
    return ProductSet(x, y, std::move(blocks));
}

bool ProductSet::contains(const Point& x, const Point& y) const {
    return std::any_of(blocks_.begin(), blocks_.end(), [&](const Rect& r) { return r.base.contains(x) && r.side.contains(y); });
}

// ---------------------------------------------------------------------------
// Cells and block comparisons

std::vector<Cell> axis_cells(const Universe& u, const std::vector<SetExpr>& sets) {
    std::vector<Cell> cells;
    if (u.is_finite()) {
        for (std::size_t p = 0; p < u.size(); ++p) cells.push_back({FiniteSet{p}, Point{p}});
        return cells;
    }
    std::vector<Rational> cuts;
    for (const auto& s : sets)
        for (const auto& iv : s.intervals().pieces()) {
            cuts.push_back(iv.lo);
            cuts.push_back(iv.hi);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        cells.push_back({SetExpr::interval(cuts[i], cuts[i + 1]), Point{cuts[i]}});
    return cells;
}

namespace {

// Visits every (x-cell, y-cell) pair together with the blocks of each list
// containing it; stops when `visit` returns false.
template <class Visit>
bool for_each_grid_cell(const Universe& x, const Universe& y, const std::vector<Rect>& a, const std::vector<Rect>& b,
                        Visit visit) {
    std::vector<SetExpr> bases, sides;
    for (const auto* list : {&a, &b})
        for (const auto& r : *list) {
            bases.push_back(r.base);
            sides.push_back(r.side);
        }
    auto xcells = axis_cells(x, bases);
    auto ycells = axis_cells(y, sides);
    for (const auto& cx : xcells) {
        std::vector<const Rect*> live_a, live_b;
        for (const auto& r : a)
            if (r.base.contains(cx.rep)) live_a.push_back(&r);
        for (const auto& r : b)
            if (r.base.contains(cx.rep)) live_b.push_back(&r);
        if (live_a.empty() && live_b.empty()) continue;
        for (const auto& cy : ycells) {
            bool in_a = std::any_of(live_a.begin(), live_a.end(), [&](const Rect* r) { return r->side.contains(cy.rep); });
            bool in_b = std::any_of(live_b.begin(), live_b.end(), [&](const Rect* r) { return r->side.contains(cy.rep); });
            if (!visit(cx, cy, in_a, in_b)) return false;
        }
    }
    return true;
}

}  // namespace

bool blocks_subset(const Universe& x, const Universe& y, const std::vector<Rect>& a, const std::vector<Rect>& b) {
    return for_each_grid_cell(x, y, a, b, [](const Cell&, const Cell&, bool in_a, bool in_b) { return !in_a || in_b; });
}

bool blocks_equal(const Universe& x, const Universe& y, const std::vector<Rect>& a, const std::vector<Rect>& b) {
    return for_each_grid_cell(x, y, a, b, [](const Cell&, const Cell&, bool in_a, bool in_b) { return in_a == in_b; });
}

// ---------------------------------------------------------------------------
// Product measure and families

ExtReal product_measure(const MeasureDesc& mx, const MeasureDesc& my, const Rect& r) {
    return mul(measure_eval(mx, r.base), measure_eval(my, r.side));
}

RectFamily rect_disjointify(const std::vector<Rect>& family, const SemiringDesc& sx, const SemiringDesc& sy) {
    std::vector<Rect> out;
    for (const auto& input : family) {
        if (input.empty()) continue;
        std::vector<Rect> pieces{input};
        for (const auto& taken : out) {
            std::vector<Rect> next;
            for (const auto& p : pieces) {
                if (rects_disjoint(p, taken)) {
                    next.push_back(p);
                    continue;
                }
                for (auto& c : semiring_difference(p.base, taken.base, sx)) next.push_back({std::move(c), p.side});
                SetExpr meet = set_intersect(p.base, taken.base);
                for (auto& c : semiring_difference(p.side, taken.side, sy)) next.push_back({meet, std::move(c)});
            }
            pieces = std::move(next);
            if (pieces.empty()) break;
        }
        out.insert(out.end(), pieces.begin(), pieces.end());
    }
    return RectFamily(std::move(out));
}

SetExpr section(const ProductSet& d, const Point& x) {
    if (!d.x_universe().admits(x)) throw Error(ErrorKind::UniverseMismatch, "section point is not in X");
    SetExpr out = empty_like(d.y_universe());
    for (const auto& b : d.blocks())
        if (b.base.contains(x)) out = set_union(out, b.side);
    return out;
}

SetExpr superlevel(const ProductSet& d, const MeasureSpace& space_y, const ExtReal& r, const OuterConfig& config) {
    if (!r.is_finite() || !r.is_positive()) throw Error(ErrorKind::PreconditionFailed, "superlevel threshold must be finite and positive");
    if (!(space_y.universe() == d.y_universe())) throw Error(ErrorKind::UniverseMismatch, "D is not over the given Y");
    const Universe& ux = d.x_universe();
    SetExpr out = empty_like(ux);
    if (ux.is_finite()) {
        FiniteSet hits;
        for (std::size_t x = 0; x < ux.size(); ++x)
            if (outer_value(space_y, section(d, Point{x}), config) > r) hits = hits | FiniteSet{x};
        return hits;
    }
    std::vector<SetExpr> bases;
    for (const auto& b : d.blocks()) bases.push_back(b.base);
    for (const auto& cell : axis_cells(ux, bases))
        if (outer_value(space_y, section(d, cell.rep), config) > r) out = set_union(out, cell.set);
    return out;
}

// ---------------------------------------------------------------------------
// ProductSpace

ProductSpace::ProductSpace(MeasureSpace x, MeasureSpace y) : x_(std::move(x)), y_(std::move(y)) {
    const auto& ux = x_.universe();
    const auto& uy = y_.universe();
    if (!ux.is_finite() || !uy.is_finite() || ux.size() * uy.size() > kMaxFinitePoints) return;
    const std::size_t ny = uy.size();
    std::vector<FiniteSet> fx, fy;
    try {
        fx = x_.semiring().enumerate();
        fy = y_.semiring().enumerate();
    } catch (const Error&) {
        return;
    }
    if (fx.size() * fy.size() > kMaxJointFamily) return;

    std::vector<FiniteSet> family{FiniteSet{}};
    std::vector<std::pair<FiniteSet, ExtReal>> values{{FiniteSet{}, ExtReal{}}};
    for (FiniteSet a : fx) {
        if (a.empty()) continue;
        ExtReal ma = measure_eval(x_.measure(), a);
        for (FiniteSet b : fy) {
            if (b.empty()) continue;
            std::uint64_t bits = 0;
            for (std::size_t px : a.members()) bits |= b.bits() << (px * ny);
            family.emplace_back(bits);
            values.emplace_back(FiniteSet(bits), ma * measure_eval(y_.measure(), b));
        }
    }
    const std::size_t n = ux.size() * ny;
    joint_.emplace(Universe::finite(n), SemiringDesc::explicit_family(n, std::move(family)),
                   MeasureDesc::tabulated(std::move(values)));
}

const MeasureSpace& ProductSpace::joint() const {
    if (!joint_) throw Error(ErrorKind::Unsupported, "product space is only materialized for small finite factors");
    return *joint_;
}

FiniteSet ProductSpace::encode(const ProductSet& d) const {
    const std::size_t ny = joint().universe().size() / x_.universe().size();
    std::uint64_t bits = 0;
    for (const auto& b : d.blocks()) {
        FiniteSet side = b.side.finite();
        for (std::size_t px : b.base.finite().members()) bits |= side.bits() << (px * ny);
    }
    return FiniteSet(bits);
}

ProductSet ProductSpace::decode(FiniteSet s) const {
    const std::size_t ny = y_.universe().size();
    std::vector<std::pair<std::size_t, std::size_t>> points;
    for (std::size_t p : s.members()) points.emplace_back(p / ny, p % ny);
    return ProductSet::from_points(x_.universe(), y_.universe(), points);
}

ProductSet ProductSpace::full() const {
    if (!x_.universe().is_finite() || !y_.universe().is_finite())
        throw Error(ErrorKind::Unsupported, "X x Y is not a finite union of bounded rectangles");
    return ProductSet(x_.universe(), y_.universe(), {Rect{x_.universe().full(), y_.universe().full()}});
}

ProductSet ProductSpace::complement(const ProductSet& d) const {
    return decode(joint().universe().full() - encode(d));
}

ExtReal ProductSpace::outer(const ProductSet& d, const OuterConfig& config) const {
    if (joint_) return outer_value(*joint_, encode(d), config);
    if (x_.measure().kind() == MeasureKind::Length && y_.measure().kind() == MeasureKind::Length) {
        // A finite union of rectangles: its outer measure is its area.
        std::vector<SetExpr> bases, sides;
        for (const auto& b : d.blocks()) {
            bases.push_back(b.base);
            sides.push_back(b.side);
        }
        auto xcells = axis_cells(x_.universe(), bases);
        auto ycells = axis_cells(y_.universe(), sides);
        Rational area = 0;
        for (const auto& cx : xcells)
            for (const auto& cy : ycells)
                if (d.contains(cx.rep, cy.rep)) area += cx.set.intervals().length() * cy.set.intervals().length();
        return ExtReal(area);
    }
    throw Error(ErrorKind::Unsupported, "product outer measure is supported for finite x finite or length x length");
}

}  // namespace mf
