#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mf/error.hpp"
#include "mf/outer.hpp"
#include "mf/product.hpp"

namespace mf {

struct TheoremConfig {
    OuterConfig outer;
    /// Deepest dyadic-tail truncation tried before BudgetExceeded.
    std::size_t max_tail_depth = 96;
};

/// One term mu_X(B_n) * mu_Y(C_n) of a witness sum.
struct WitnessTerm {
    std::size_t index;
    Rect rect;
    ExtReal mu_x;
    ExtReal mu_y;
};

/// A point x of D^{>r} chosen into M, with the cell of X it stands for and
/// its index set M_x (ascending) and the intersection of the B_n over M_x.
struct PointChoice {
    Point x;
    SetExpr cell;
    std::vector<std::size_t> m_x;
    SetExpr meet;
};

/*
 * Finite certificate for
 *
 *     r s < sum_{n in F} mu_X(B_n) mu_Y(C_n),      F = U_{x in M} M_x.
 *
 * The terms carry every exact value the inequality needs, so it can be
 * re-checked without the spaces.
 */
struct Witness {
    ExtReal r;
    ExtReal s;
    std::vector<std::size_t> F;
    std::vector<PointChoice> per_point;
    std::vector<WitnessTerm> terms;
    ExtReal lhs;
    ExtReal rhs;
    /// mu*_X(D^{>r}), which exceeds s.
    ExtReal superlevel_outer;
    /// mu*_X of the union of the chosen intersections, which exceeds s.
    ExtReal union_outer;
    /// Tail truncation depth used, when the cover has a tail.
    std::optional<std::size_t> tail_depth;
};

Witness extract_witness(const MeasureSpace& space_x, const MeasureSpace& space_y, const ProductSet& d,
                        const RectFamily& cover, const ExtReal& r, const ExtReal& s, const TheoremConfig& config = {});

struct Truncation {
    /// Number of leading parts summed.
    std::size_t count;
    ExtReal partial;
};

struct CertReport {
    bool certified = false;
    ExtReal product;
    ExtReal t;
    ExtReal r;
    ExtReal s;
    /// Partial sums over leading parts, all checked against the product.
    std::vector<Truncation> truncations;
    std::optional<ExtReal> tail_limit;
    bool upper_pass = false;
    std::optional<Truncation> failing_truncation;
    /// Finite families: the full sum, which must equal the product.
    std::optional<ExtReal> finite_total;
    bool exact_pass = true;
    std::optional<Witness> witness;
    bool lower_pass = false;
    std::string failure;
    /// Tailed families: least N whose truncation 0..N already exceeds t.
    std::optional<std::size_t> min_sufficient_depth;
};

/// Thrown by certify_sigma_additivity; carries the full report.
class CertificationError : public Error {
public:
    CertificationError(const std::string& what, CertReport report)
        : Error(ErrorKind::CertificationFailed, what), report_(std::move(report)) {}
    [[nodiscard]] const CertReport& report() const noexcept { return report_; }

private:
    CertReport report_;
};

/// Countable additivity of mu_X x mu_Y on whole = B x C split into `parts`,
/// certified from both sides for the level t < mu_X(B) mu_Y(C).
CertReport certify_sigma_additivity(const MeasureSpace& space_x, const MeasureSpace& space_y, const Rect& whole,
                                    const RectFamily& parts, const ExtReal& t, const TheoremConfig& config = {});

/// The (r, s) pair used for level t: rational, 0 < r < mu_Y(C), 0 < s < mu_X(B), t < r s.
std::pair<ExtReal, ExtReal> choose_levels(const ExtReal& t, const ExtReal& mu_base, const ExtReal& mu_side);

enum class Direction { Forward, Converse };

struct NullSectionVerdict {
    Direction direction = Direction::Forward;
    bool holds = false;
    /// { x : mu*_Y(D^x) > 0 }.
    SetExpr exceptional_set;
    ExtReal exceptional_outer;
    std::map<std::string, ExtReal> values;
    std::vector<std::size_t> thresholds_k;
};

NullSectionVerdict null_section_forward(const ProductSpace& space, const ProductSet& d, const TheoremConfig& config = {});
NullSectionVerdict null_section_converse(const ProductSpace& space, const ProductSet& d, const TheoremConfig& config = {});

inline NullSectionVerdict null_section_forward(const MeasureSpace& x, const MeasureSpace& y, const ProductSet& d) {
    return null_section_forward(ProductSpace(x, y), d);
}
inline NullSectionVerdict null_section_converse(const MeasureSpace& x, const MeasureSpace& y, const ProductSet& d) {
    return null_section_converse(ProductSpace(x, y), d);
}

}  // namespace mf
