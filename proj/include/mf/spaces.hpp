#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mf/ext_real.hpp"
#include "mf/sets.hpp"

namespace mf {

/// A violated clause with the sets that witness it.
struct Violation {
    std::string clause;
    std::vector<SetExpr> sets;
    std::string detail;
};

/// Outcome of a property check. Violations are report content, not errors.
struct CheckReport {
    bool pass = true;
    std::size_t checked = 0;
    std::vector<Violation> violations;
    /// Exact quantities the verdict rests on, keyed by role ("lhs", "rhs", ...).
    std::map<std::string, ExtReal> values;

    void fail(Violation v) {
        pass = false;
        violations.push_back(std::move(v));
    }
};

struct ValidationReport {
    bool valid = true;
    bool is_algebra = false;
    bool is_sigma_algebra = false;
    std::size_t pairs_checked = 0;
    std::vector<Violation> violations;
};

enum class SemiringKind { Explicit, PowerSet, Interval };

/*
 * Family Sigma of subsets of X.
 *
 *   Explicit  finite list over a finite universe; contains the empty set and no duplicates
 *   PowerSet  every subset of a finite universe
 *   Interval  all [a, b) over the rational line
 */
class SemiringDesc {
public:
    static SemiringDesc explicit_family(std::size_t universe_size, std::vector<FiniteSet> family);
    static SemiringDesc power_set(std::size_t universe_size);
    static SemiringDesc intervals();

    [[nodiscard]] SemiringKind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_finite() const noexcept { return kind_ != SemiringKind::Interval; }
    [[nodiscard]] std::size_t universe_size() const noexcept { return n_; }
    [[nodiscard]] const std::vector<FiniteSet>& family() const;
    /// Family members in canonical order: the explicit list, or all subsets
    /// by increasing bitmask for a power set (universe <= 20 points).
    [[nodiscard]] std::vector<FiniteSet> enumerate() const;

    [[nodiscard]] bool contains(const SetExpr& s) const;
    [[nodiscard]] std::optional<std::size_t> index_of(FiniteSet s) const;

    /// Closed under complement X \ A and finite intersection.
    [[nodiscard]] bool is_algebra() const noexcept { return algebra_; }
    /// On finite universes countable unions reduce to finite ones, so this equals is_algebra().
    [[nodiscard]] bool is_sigma_algebra() const noexcept { return algebra_; }

private:
    SemiringKind kind_ = SemiringKind::Interval;
    std::size_t n_ = 0;
    std::vector<FiniteSet> family_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    bool algebra_ = false;
};

enum class MeasureKind { Tabulated, PointMass, Length };

/// Set function mu on a semiring. Tabulated values are raw and may violate
/// additivity; PointMass sums point weights; Length is b - a on intervals.
class MeasureDesc {
public:
    static MeasureDesc tabulated(std::vector<std::pair<FiniteSet, ExtReal>> assignments);
    static MeasureDesc point_mass(std::vector<ExtReal> weights);
    static MeasureDesc length();

    [[nodiscard]] MeasureKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::vector<ExtReal>& weights() const noexcept { return weights_; }
    [[nodiscard]] const std::vector<std::pair<FiniteSet, ExtReal>>& assignments() const noexcept { return table_; }
    [[nodiscard]] std::optional<ExtReal> lookup(FiniteSet s) const;

    /// Same measure with one tabulated value replaced.
    [[nodiscard]] MeasureDesc with_value(FiniteSet s, ExtReal v) const;

private:
    MeasureKind kind_ = MeasureKind::Length;
    std::vector<ExtReal> weights_;
    std::vector<std::pair<FiniteSet, ExtReal>> table_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

namespace detail {
struct OuterCache;
}

/// (X, Sigma, mu) with an optional sigma-finiteness decomposition of X.
class MeasureSpace {
public:
    MeasureSpace(Universe universe, SemiringDesc semiring, MeasureDesc measure,
                 std::optional<std::vector<SetExpr>> sigma_finite_witness = std::nullopt);

    [[nodiscard]] const Universe& universe() const noexcept { return universe_; }
    [[nodiscard]] const SemiringDesc& semiring() const noexcept { return semiring_; }
    [[nodiscard]] const MeasureDesc& measure() const noexcept { return measure_; }
    [[nodiscard]] const std::optional<std::vector<SetExpr>>& sigma_finite_witness() const noexcept { return witness_; }

    /// Stored witness, or one derived by picking for every point the first
    /// finite-measure family member containing it. nullopt when none exists
    /// (or on the rational line, where Length is sigma-finite via [n, n+1)).
    [[nodiscard]] std::optional<std::vector<SetExpr>> find_sigma_finite_witness() const;
    [[nodiscard]] bool is_sigma_finite() const;

    /// Same space with a different measure; the witness is re-checked.
    [[nodiscard]] MeasureSpace with_measure(MeasureDesc m) const;

    /// Memo table owned jointly by copies of this space.
    [[nodiscard]] detail::OuterCache& outer_cache() const;

private:
    Universe universe_;
    SemiringDesc semiring_;
    MeasureDesc measure_;
    std::optional<std::vector<SetExpr>> witness_;
    std::shared_ptr<detail::OuterCache> cache_;
};

/// Disjoint semiring members C_1..C_n with union a \ b.
std::vector<SetExpr> semiring_difference(const SetExpr& a, const SetExpr& b, const SemiringDesc& sr);

ValidationReport validate_semiring(const SemiringDesc& sr);

ExtReal measure_eval(const MeasureDesc& m, const SetExpr& a);

/// Throws PreconditionFailed if `parts` overlap or their union differs from `whole`.
CheckReport check_finite_additivity(const MeasureDesc& m, const SetExpr& whole, const std::vector<SetExpr>& parts);

}  // namespace mf
