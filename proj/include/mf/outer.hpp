#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mf/spaces.hpp"

namespace mf {

/// Pieces from the generating family claimed to cover `target`.
struct Cover {
    std::vector<SetExpr> pieces;
    SetExpr target;
};

enum class Exactness { Exact, UpperBound };

/// mu*(A) with the cover attaining it. No witness means no cover exists
/// (value inf) or, for UpperBound, that the search found none in budget.
struct OuterValue {
    ExtReal value;
    std::optional<Cover> witness_cover;
    Exactness exactness = Exactness::Exact;
};

struct OuterConfig {
    /// Branch-and-bound node limit before falling back to UpperBound.
    std::size_t node_budget = 4'000'000;
    /// Universes up to this size get a full mu* table and Caratheodory tests.
    std::size_t table_max_points = 12;
    /// Longest sample sublist used for the subadditivity clause.
    std::size_t subadditivity_max_len = 3;
};

/// Sum of mu over the pieces; throws NotACover if they miss part of the target.
ExtReal cover_bound(const MeasureDesc& m, const Cover& c);

/*
 * Generated outer measure
 *
 *     mu*(A) = inf { sum mu(A_n) : A covered by A_1, A_2, ... from Sigma }
 *
 * On a finite universe a countable cover carries the same cost as its set of
 * distinct pieces (values are nonnegative), so the infimum ranges over
 * finite subfamilies and is attained. It is found by branch-and-bound:
 * branch on the lowest uncovered point, prune on the best cover so far plus
 * a per-point lower bound, and drop states already reached more cheaply.
 * The witness is the first optimal cover in that canonical search order.
 *
 * On the rational line only interval-union targets are accepted; their
 * outer length is their canonical total length.
 */
OuterValue outer_measure(const MeasureSpace& space, const SetExpr& a, const OuterConfig& config = {});

/// Value only. Uses the memo table when the universe is small enough,
/// otherwise outer_measure; throws BudgetExceeded when not exact.
ExtReal outer_value(const MeasureSpace& space, const SetExpr& a, const OuterConfig& config = {});

/// mu*(S) for every S of a finite universe of at most `table_max_points`
/// points, indexed by bitmask; computed once per space.
const std::vector<ExtReal>& outer_table(const MeasureSpace& space, const OuterConfig& config = {});

/// Outer-measure axioms on the samples: mu*(empty) = 0, monotonicity over
/// nested pairs, subadditivity over sublists, and mu* <= mu on members.
CheckReport check_outer_axioms(const MeasureSpace& space, const std::vector<SetExpr>& samples,
                               const OuterConfig& config = {});

/// mu*(E) = mu*(E n D) + mu*(E \ D) for every E in the universe. The first
/// violating E is reported with its three values.
CheckReport caratheodory_measurable(const MeasureSpace& space, const SetExpr& d, const OuterConfig& config = {});

}  // namespace mf
