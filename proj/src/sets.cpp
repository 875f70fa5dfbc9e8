#include "mf/sets.hpp"

#include <algorithm>

#include "mf/error.hpp"

namespace mf {

FiniteSet::FiniteSet(std::initializer_list<std::size_t> points)
    : FiniteSet(from_points(std::span<const std::size_t>(points.begin(), points.size()))) {}

FiniteSet FiniteSet::from_points(std::span<const std::size_t> points) {
    std::uint64_t bits = 0;
    for (std::size_t p : points) {
        if (p >= kMaxFinitePoints) throw Error(ErrorKind::UniverseMismatch, "point id " + std::to_string(p) + " exceeds the 64-point limit");
        bits |= std::uint64_t{1} << p;
    }
    return FiniteSet(bits);
}

FiniteSet FiniteSet::full(std::size_t n) {
    if (n > kMaxFinitePoints) throw Error(ErrorKind::UniverseMismatch, "finite universe larger than 64 points");
    return FiniteSet(n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
}

std::vector<std::size_t> FiniteSet::members() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    return out;
}

IntervalUnion::IntervalUnion(std::vector<Interval> pieces) {
    std::erase_if(pieces, [](const Interval& iv) { return iv.empty(); });
    std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    for (auto& iv : pieces) {
        // Merge overlapping and adjacent pieces.
        if (!pieces_.empty() && iv.lo <= pieces_.back().hi) {
            if (pieces_.back().hi < iv.hi) pieces_.back().hi = iv.hi;
        } else {
            pieces_.push_back(std::move(iv));
        }
    }
}

IntervalUnion::IntervalUnion(Rational lo, Rational hi) {
    if (lo < hi) pieces_.push_back(Interval{std::move(lo), std::move(hi)});
}

bool IntervalUnion::contains(const Rational& x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](const Rational& v, const Interval& iv) { return v < iv.lo; });
    return it != pieces_.begin() && std::prev(it)->contains(x);
}

Rational IntervalUnion::length() const {
    Rational total = 0;
    for (const auto& iv : pieces_) total += iv.hi - iv.lo;
    return total;
}

IntervalUnion operator&(const IntervalUnion& a, const IntervalUnion& b) {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < a.pieces_.size() && j < b.pieces_.size()) {
        const auto& x = a.pieces_[i];
        const auto& y = b.pieces_[j];
        const Rational& lo = x.lo < y.lo ? y.lo : x.lo;
        const Rational& hi = x.hi < y.hi ? x.hi : y.hi;
        if (lo < hi) out.push_back(Interval{lo, hi});
        if (x.hi < y.hi) ++i;
        else ++j;
    }
    return IntervalUnion(std::move(out));
}

IntervalUnion operator|(const IntervalUnion& a, const IntervalUnion& b) {
    std::vector<Interval> all = a.pieces_;
    all.insert(all.end(), b.pieces_.begin(), b.pieces_.end());
    return IntervalUnion(std::move(all));
}

IntervalUnion operator-(const IntervalUnion& a, const IntervalUnion& b) {
    std::vector<Interval> out;
    std::size_t j = 0;
    for (const auto& x : a.pieces_) {
        Rational cur = x.lo;
        while (j < b.pieces_.size() && b.pieces_[j].hi <= cur) ++j;
        for (std::size_t k = j; k < b.pieces_.size() && b.pieces_[k].lo < x.hi; ++k) {
            const auto& y = b.pieces_[k];
            if (cur < y.lo) out.push_back(Interval{cur, y.lo});
            if (cur < y.hi) cur = y.hi;
        }
        if (cur < x.hi) out.push_back(Interval{cur, x.hi});
    }
    return IntervalUnion(std::move(out));
}

std::string point_str(const Point& p) {
    if (const auto* i = std::get_if<std::size_t>(&p)) return std::to_string(*i);
    return format_rational(std::get<Rational>(p));
}

FiniteSet SetExpr::finite() const {
    if (const auto* f = std::get_if<FiniteSet>(&v_)) return *f;
    throw Error(ErrorKind::UniverseMismatch, "expected a finite set, got an interval union");
}

const IntervalUnion& SetExpr::intervals() const {
    if (const auto* u = std::get_if<IntervalUnion>(&v_)) return *u;
    throw Error(ErrorKind::UniverseMismatch, "expected an interval union, got a finite set");
}

bool SetExpr::empty() const {
    return std::visit([](const auto& s) { return s.empty(); }, v_);
}

bool SetExpr::contains(const Point& p) const {
    if (const auto* f = std::get_if<FiniteSet>(&v_)) {
        const auto* i = std::get_if<std::size_t>(&p);
        if (!i) throw Error(ErrorKind::UniverseMismatch, "rational point tested against a finite set");
        return f->contains(*i);
    }
    const auto* q = std::get_if<Rational>(&p);
    if (!q) throw Error(ErrorKind::UniverseMismatch, "finite point tested against an interval union");
    return std::get<IntervalUnion>(v_).contains(*q);
}

bool SetExpr::subset_of(const SetExpr& other) const { return set_minus(*this, other).empty(); }

bool operator==(const SetExpr& a, const SetExpr& b) { return a.v_ == b.v_; }

namespace {

void require_same_kind(const SetExpr& a, const SetExpr& b) {
    if (a.is_finite() != b.is_finite()) throw Error(ErrorKind::UniverseMismatch, "operands live in different universes");
}

}  // namespace

SetExpr set_intersect(const SetExpr& a, const SetExpr& b) {
    require_same_kind(a, b);
    if (a.is_finite()) return a.finite() & b.finite();
    return a.intervals() & b.intervals();
}

SetExpr set_union(const SetExpr& a, const SetExpr& b) {
    require_same_kind(a, b);
    if (a.is_finite()) return a.finite() | b.finite();
    return a.intervals() | b.intervals();
}

SetExpr set_minus(const SetExpr& a, const SetExpr& b) {
    require_same_kind(a, b);
    if (a.is_finite()) return a.finite() - b.finite();
    return a.intervals() - b.intervals();
}

Universe Universe::finite(std::size_t size) {
    if (size == 0 || size > kMaxFinitePoints)
        throw Error(ErrorKind::UniverseMismatch, "finite universe size must be in 1..64");
    return Universe(size, true);
}

FiniteSet Universe::full() const {
    if (!finite_) throw Error(ErrorKind::UniverseMismatch, "full() on the rational line");
    return FiniteSet::full(size_);
}

bool Universe::admits(const SetExpr& s) const {
    if (finite_) return s.is_finite() && s.finite().extent() <= size_;
    return s.is_interval_union();
}

bool Universe::admits(const Point& p) const {
    if (finite_) {
        const auto* i = std::get_if<std::size_t>(&p);
        return i && *i < size_;
    }
    return std::holds_alternative<Rational>(p);
}

}  // namespace mf
