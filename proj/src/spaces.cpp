#include "mf/spaces.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "mf/detail/outer_cache.hpp"
#include "mf/error.hpp"

namespace mf {

namespace {

constexpr std::size_t kMaxEnumerablePowerSet = 20;

std::string describe(FiniteSet s) {
    std::string out = "{";
    bool first = true;
    for (auto p : s.members()) {
        if (!first) out += ",";
        out += std::to_string(p);
        first = false;
    }
    return out + "}";
}

}  // namespace

// ---------------------------------------------------------------------------
// SemiringDesc

SemiringDesc SemiringDesc::explicit_family(std::size_t universe_size, std::vector<FiniteSet> family) {
    if (universe_size == 0 || universe_size > kMaxFinitePoints)
        throw Error(ErrorKind::UniverseMismatch, "finite universe size must be in 1..64");
    SemiringDesc sr;
    sr.kind_ = SemiringKind::Explicit;
    sr.n_ = universe_size;
    bool has_empty = false;
    for (std::size_t i = 0; i < family.size(); ++i) {
        FiniteSet s = family[i];
        if (s.extent() > universe_size)
            throw Error(ErrorKind::UniverseMismatch, "family member " + describe(s) + " leaves the universe");
        if (!sr.index_.emplace(s.bits(), i).second)
            throw Error(ErrorKind::Parse, "duplicate family member " + describe(s));
        has_empty = has_empty || s.empty();
    }
    if (!has_empty) throw Error(ErrorKind::Parse, "semiring family must contain the empty set");
    sr.family_ = std::move(family);

    const FiniteSet full = FiniteSet::full(universe_size);
    sr.algebra_ = std::all_of(sr.family_.begin(), sr.family_.end(), [&](FiniteSet a) {
        if (!sr.index_.contains((full - a).bits())) return false;
        return std::all_of(sr.family_.begin(), sr.family_.end(),
                           [&](FiniteSet b) { return sr.index_.contains((a & b).bits()); });
    });
    return sr;
}

SemiringDesc SemiringDesc::power_set(std::size_t universe_size) {
    if (universe_size == 0 || universe_size > kMaxFinitePoints)
        throw Error(ErrorKind::UniverseMismatch, "finite universe size must be in 1..64");
    SemiringDesc sr;
    sr.kind_ = SemiringKind::PowerSet;
    sr.n_ = universe_size;
    sr.algebra_ = true;
    return sr;
}

SemiringDesc SemiringDesc::intervals() { return SemiringDesc{}; }

const std::vector<FiniteSet>& SemiringDesc::family() const {
    if (kind_ != SemiringKind::Explicit) throw Error(ErrorKind::Unsupported, "family() on a symbolic semiring");
    return family_;
}

std::vector<FiniteSet> SemiringDesc::enumerate() const {
    switch (kind_) {
        case SemiringKind::Explicit: return family_;
        case SemiringKind::PowerSet: {
            if (n_ > kMaxEnumerablePowerSet)
                throw Error(ErrorKind::BudgetExceeded, "power set of " + std::to_string(n_) + " points is too large to enumerate");
            std::vector<FiniteSet> out;
            out.reserve(std::size_t{1} << n_);
            for (std::uint64_t b = 0; b < (std::uint64_t{1} << n_); ++b) out.emplace_back(b);
            return out;
        }
        case SemiringKind::Interval: break;
    }
    throw Error(ErrorKind::Unsupported, "the interval semiring is not enumerable");
}

bool SemiringDesc::contains(const SetExpr& s) const {
    switch (kind_) {
        case SemiringKind::Explicit: return s.is_finite() && index_.contains(s.finite().bits());
        case SemiringKind::PowerSet: return s.is_finite() && s.finite().extent() <= n_;
        case SemiringKind::Interval: return s.is_interval_union() && s.intervals().is_interval();
    }
    return false;
}

std::optional<std::size_t> SemiringDesc::index_of(FiniteSet s) const {
    if (kind_ == SemiringKind::PowerSet) {
        if (s.extent() > n_) return std::nullopt;
        return static_cast<std::size_t>(s.bits());
    }
    auto it = index_.find(s.bits());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// MeasureDesc

MeasureDesc MeasureDesc::tabulated(std::vector<std::pair<FiniteSet, ExtReal>> assignments) {
    MeasureDesc m;
    m.kind_ = MeasureKind::Tabulated;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const auto& [s, v] = assignments[i];
        if (!m.index_.emplace(s.bits(), i).second)
            throw Error(ErrorKind::Parse, "set " + describe(s) + " assigned twice");
        if (s.empty() && !v.is_zero()) throw Error(ErrorKind::PreconditionFailed, "a measure must vanish on the empty set");
    }
    m.table_ = std::move(assignments);
    return m;
}

MeasureDesc MeasureDesc::point_mass(std::vector<ExtReal> weights) {
    MeasureDesc m;
    m.kind_ = MeasureKind::PointMass;
    m.weights_ = std::move(weights);
    return m;
}

MeasureDesc MeasureDesc::length() { return MeasureDesc{}; }

std::optional<ExtReal> MeasureDesc::lookup(FiniteSet s) const {
    auto it = index_.find(s.bits());
    if (it == index_.end()) return std::nullopt;
    return table_[it->second].second;
}

MeasureDesc MeasureDesc::with_value(FiniteSet s, ExtReal v) const {
    if (kind_ != MeasureKind::Tabulated) throw Error(ErrorKind::Unsupported, "with_value needs a tabulated measure");
    auto table = table_;
    auto it = index_.find(s.bits());
    if (it == index_.end()) throw Error(ErrorKind::NotInDomain, "set " + describe(s) + " is not tabulated");
    table[it->second].second = std::move(v);
    return tabulated(std::move(table));
}

ExtReal measure_eval(const MeasureDesc& m, const SetExpr& a) {
    switch (m.kind()) {
        case MeasureKind::Tabulated: {
            auto v = m.lookup(a.finite());
            if (!v) throw Error(ErrorKind::NotInDomain, "set " + describe(a.finite()) + " is not in the measure's domain");
            return *v;
        }
        case MeasureKind::PointMass: {
            FiniteSet s = a.finite();
            if (s.extent() > m.weights().size())
                throw Error(ErrorKind::NotInDomain, "set " + describe(s) + " leaves the weighted universe");
            ExtReal total;
            for (auto p : s.members()) total += m.weights()[p];
            return total;
        }
        case MeasureKind::Length: return ExtReal(a.intervals().length());
    }
    return {};
}

// ---------------------------------------------------------------------------
// MeasureSpace

MeasureSpace::MeasureSpace(Universe universe, SemiringDesc semiring, MeasureDesc measure,
                           std::optional<std::vector<SetExpr>> sigma_finite_witness)
    : universe_(universe),
      semiring_(std::move(semiring)),
      measure_(std::move(measure)),
      witness_(std::move(sigma_finite_witness)),
      cache_(std::make_shared<detail::OuterCache>()) {
    if (universe_.is_finite() != semiring_.is_finite())
        throw Error(ErrorKind::UniverseMismatch, "semiring and universe disagree on finiteness");
    if (universe_.is_finite() && semiring_.universe_size() != universe_.size())
        throw Error(ErrorKind::UniverseMismatch, "semiring is over a universe of a different size");

    switch (measure_.kind()) {
        case MeasureKind::Length:
            if (semiring_.kind() != SemiringKind::Interval)
                throw Error(ErrorKind::UniverseMismatch, "length measure requires the interval semiring");
            break;
        case MeasureKind::PointMass:
            if (!universe_.is_finite() || measure_.weights().size() != universe_.size())
                throw Error(ErrorKind::UniverseMismatch, "point masses need one weight per point of a finite universe");
            break;
        case MeasureKind::Tabulated: {
            if (semiring_.kind() != SemiringKind::Explicit)
                throw Error(ErrorKind::UniverseMismatch, "tabulated measures require an explicit semiring");
            for (const auto& [s, v] : measure_.assignments())
                if (!semiring_.index_of(s))
                    throw Error(ErrorKind::NotInDomain, "tabulated set " + describe(s) + " is not a family member");
            for (FiniteSet s : semiring_.family())
                if (!measure_.lookup(s))
                    throw Error(ErrorKind::NotInDomain, "family member " + describe(s) + " has no tabulated value");
            break;
        }
    }

    if (witness_) {
        if (!universe_.is_finite())
            throw Error(ErrorKind::Unsupported, "sigma-finiteness witnesses are only representable on finite universes");
        FiniteSet covered;
        for (const auto& piece : *witness_) {
            if (!universe_.admits(piece))
                throw Error(ErrorKind::UniverseMismatch, "sigma-finite piece leaves the universe");
            if (measure_eval(measure_, piece).is_infinite())
                throw Error(ErrorKind::PreconditionFailed, "sigma-finite piece " + describe(piece.finite()) + " has infinite measure");
            covered = covered | piece.finite();
        }
        if (covered != universe_.full())
            throw Error(ErrorKind::PreconditionFailed, "sigma-finite pieces do not cover the universe");
    }
}

std::optional<std::vector<SetExpr>> MeasureSpace::find_sigma_finite_witness() const {
    if (witness_) return witness_;
    if (!universe_.is_finite()) return std::nullopt;
    std::vector<SetExpr> pieces;
    FiniteSet covered;
    const FiniteSet full = universe_.full();
    if (semiring_.kind() == SemiringKind::PowerSet) {
        for (std::size_t p = 0; p < universe_.size(); ++p) {
            if (measure_.weights()[p].is_infinite()) return std::nullopt;
            pieces.emplace_back(FiniteSet{p});
        }
        return pieces;
    }
    for (FiniteSet s : semiring_.family()) {
        if (s.empty() || s.subset_of(covered)) continue;
        if (measure_eval(measure_, s).is_infinite()) continue;
        pieces.emplace_back(s);
        covered = covered | s;
        if (covered == full) return pieces;
    }
    return std::nullopt;
}

bool MeasureSpace::is_sigma_finite() const {
    if (!universe_.is_finite()) return true;
    return find_sigma_finite_witness().has_value();
}

MeasureSpace MeasureSpace::with_measure(MeasureDesc m) const {
    return MeasureSpace(universe_, semiring_, std::move(m), witness_);
}

detail::OuterCache& MeasureSpace::outer_cache() const { return *cache_; }

// ---------------------------------------------------------------------------
// Semiring operations

namespace {

// Disjoint family members covering `target` exactly, found by depth-first
// search: branch on the lowest uncovered point, try members in family order.
std::optional<std::vector<FiniteSet>> exact_decomposition(FiniteSet target, const std::vector<FiniteSet>& family) {
    std::vector<FiniteSet> candidates;
    for (FiniteSet s : family)
        if (!s.empty() && s.subset_of(target)) candidates.push_back(s);

    std::vector<FiniteSet> chosen;
    std::unordered_set<std::uint64_t> dead;
    std::function<bool(FiniteSet)> search = [&](FiniteSet remaining) {
        if (remaining.empty()) return true;
        if (dead.contains(remaining.bits())) return false;
        const std::size_t p = remaining.lowest();
        for (FiniteSet c : candidates) {
            if (!c.contains(p) || !c.subset_of(remaining)) continue;
            chosen.push_back(c);
            if (search(remaining - c)) return true;
            chosen.pop_back();
        }
        dead.insert(remaining.bits());
        return false;
    };
    if (!search(target)) return std::nullopt;
    return chosen;
}

}  // namespace

std::vector<SetExpr> semiring_difference(const SetExpr& a, const SetExpr& b, const SemiringDesc& sr) {
    if (!sr.contains(a) || !sr.contains(b))
        throw Error(ErrorKind::NotInDomain, "semiring_difference operands must be semiring members");
    std::vector<SetExpr> out;
    switch (sr.kind()) {
        case SemiringKind::Interval: {
            const IntervalUnion rest = a.intervals() - b.intervals();
            for (const auto& iv : rest.pieces())
                out.push_back(SetExpr::interval(iv.lo, iv.hi));
            return out;
        }
        case SemiringKind::PowerSet: {
            FiniteSet d = a.finite() - b.finite();
            if (!d.empty()) out.emplace_back(d);
            return out;
        }
        case SemiringKind::Explicit: {
            FiniteSet target = a.finite() - b.finite();
            auto pieces = exact_decomposition(target, sr.family());
            if (!pieces)
                throw Error(ErrorKind::NoDecomposition,
                            describe(a.finite()) + " \\ " + describe(b.finite()) + " = " + describe(target) +
                                " is not a disjoint union of family members");
            for (FiniteSet s : *pieces) out.emplace_back(s);
            return out;
        }
    }
    return out;
}

ValidationReport validate_semiring(const SemiringDesc& sr) {
    ValidationReport report;
    report.is_algebra = sr.is_algebra();
    report.is_sigma_algebra = sr.is_sigma_algebra();
    if (sr.kind() != SemiringKind::Explicit) return report;

    const auto& family = sr.family();
    if (!sr.index_of(FiniteSet{})) {
        report.valid = false;
        report.violations.push_back({"empty_set", {}, "the empty set is not a member"});
    }
    for (FiniteSet a : family) {
        for (FiniteSet b : family) {
            ++report.pairs_checked;
            FiniteSet meet = a & b;
            if (!sr.index_of(meet)) {
                report.valid = false;
                report.violations.push_back({"intersection", {a, b}, "intersection " + describe(meet) + " is not a member"});
            }
            if (!exact_decomposition(a - b, family)) {
                report.valid = false;
                report.violations.push_back(
                    {"difference", {a, b}, "difference " + describe(a - b) + " is not a disjoint union of members"});
            }
        }
    }
    return report;
}

CheckReport check_finite_additivity(const MeasureDesc& m, const SetExpr& whole, const std::vector<SetExpr>& parts) {
    SetExpr covered = whole.is_finite() ? SetExpr(FiniteSet{}) : SetExpr(IntervalUnion{});
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (!set_intersect(covered, parts[i]).empty())
            throw Error(ErrorKind::PreconditionFailed, "part " + std::to_string(i) + " overlaps an earlier part");
        covered = set_union(covered, parts[i]);
    }
    if (!(covered == whole)) throw Error(ErrorKind::PreconditionFailed, "parts do not union to the whole");

    CheckReport report;
    ExtReal lhs = measure_eval(m, whole);
    ExtReal rhs;
    for (const auto& part : parts) rhs += measure_eval(m, part);
    report.checked = 1;
    report.values["lhs"] = lhs;
    report.values["rhs"] = rhs;
    if (lhs != rhs) report.fail({"finite_additivity", {whole}, "mu(whole) = " + lhs.str() + " but the parts sum to " + rhs.str()});
    return report;
}

}  // namespace mf
