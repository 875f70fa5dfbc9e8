#include "mf/theorem.hpp"

#include <algorithm>
#include <set>

namespace mf {

namespace {

SetExpr empty_like(const Universe& u) { return u.is_finite() ? SetExpr(FiniteSet{}) : SetExpr(IntervalUnion{}); }

[[noreturn]] void precondition(const std::string& what, nlohmann::json detail = nullptr) {
    throw Error(ErrorKind::PreconditionFailed, what, std::move(detail));
}

// Points of D^{>r} in canonical order: point ids on a finite X, cells of the
// partition induced by every base endpoint (left to right) on the line.
std::vector<Cell> candidate_points(const Universe& ux, const ProductSet& d, const std::vector<Rect>& cover,
                                   const SetExpr& sup) {
    std::vector<SetExpr> bases;
    for (const auto& b : d.blocks()) bases.push_back(b.base);
    for (const auto& r : cover) bases.push_back(r.base);
    std::vector<Cell> out;
    for (auto& cell : axis_cells(ux, bases))
        if (sup.contains(cell.rep)) out.push_back(std::move(cell));
    return out;
}

struct Attempt {
    bool reached = false;
    std::vector<PointChoice> chosen;
    ExtReal union_outer;
};

// The construction for one finite list of rectangles (indices 0..n-1).
Attempt build_from(const MeasureSpace& space_x, const MeasureSpace& space_y, const ProductSet& d,
                   const std::vector<Rect>& cover, const SetExpr& sup, const ExtReal& r, const ExtReal& s,
                   const OuterConfig& outer_config) {
    Attempt attempt;
    std::vector<ExtReal> side_measure;
    side_measure.reserve(cover.size());
    for (const auto& rect : cover) side_measure.push_back(measure_eval(space_y.measure(), rect.side));

    SetExpr covered = empty_like(space_x.universe());
    for (auto& cell : candidate_points(space_x.universe(), d, cover, sup)) {
        // N_x, scanned in ascending index order until the side measures pass r.
        std::vector<std::size_t> m_x;
        ExtReal sum;
        for (std::size_t n = 0; n < cover.size() && !(sum > r); ++n) {
            if (!cover[n].base.contains(cell.rep)) continue;
            m_x.push_back(n);
            sum += side_measure[n];
        }
        if (!(sum > r)) continue;

        SetExpr meet = cover[m_x.front()].base;
        for (std::size_t k = 1; k < m_x.size(); ++k) meet = set_intersect(meet, cover[m_x[k]].base);
        covered = set_union(covered, meet);
        attempt.chosen.push_back({cell.rep, cell.set, std::move(m_x), std::move(meet)});
        attempt.union_outer = outer_value(space_x, covered, outer_config);
        if (attempt.union_outer > s) {
            attempt.reached = true;
            return attempt;
        }
    }
    return attempt;
}

}  // namespace

Witness extract_witness(const MeasureSpace& space_x, const MeasureSpace& space_y, const ProductSet& d,
                        const RectFamily& cover, const ExtReal& r, const ExtReal& s, const TheoremConfig& config) {
    if (!r.is_finite() || !r.is_positive() || !s.is_finite() || !s.is_positive())
        precondition("r and s must be finite and positive");
    if (!(d.x_universe() == space_x.universe()) || !(d.y_universe() == space_y.universe()))
        precondition("D is not a subset of X x Y for the given spaces");
    try {
        require_members(cover, space_x.semiring(), space_y.semiring());
    } catch (const Error& e) {
        precondition(std::string("cover invalid: ") + e.what());
    }
    if (auto overlap = first_overlap(cover))
        precondition("cover rectangles " + std::to_string(overlap->first) + " and " + std::to_string(overlap->second) +
                     " are not disjoint");
    if (!blocks_subset(space_x.universe(), space_y.universe(), d.blocks(), cover.hull_blocks()))
        precondition("D is not contained in the union of the cover");

    Witness w;
    w.r = r;
    w.s = s;
    const SetExpr sup = superlevel(d, space_y, r, config.outer);
    w.superlevel_outer = outer_value(space_x, sup, config.outer);
    if (!(w.superlevel_outer > s))
        precondition("mu*_X(D^{>r}) = " + w.superlevel_outer.str() + " does not exceed s = " + s.str(),
                     {{"superlevel_outer", w.superlevel_outer.str()}, {"s", s.str()}});

    const std::size_t last_depth = cover.tail() ? config.max_tail_depth : 0;
    for (std::size_t depth = 0; depth <= last_depth; ++depth) {
        const std::vector<Rect> truncated = cover.truncate(depth);
        Attempt attempt = build_from(space_x, space_y, d, truncated, sup, r, s, config.outer);
        if (!attempt.reached) continue;

        std::set<std::size_t> f;
        for (const auto& choice : attempt.chosen) f.insert(choice.m_x.begin(), choice.m_x.end());
        w.F.assign(f.begin(), f.end());
        w.per_point = std::move(attempt.chosen);
        w.union_outer = attempt.union_outer;
        if (cover.tail()) w.tail_depth = depth;
        for (std::size_t n : w.F) {
            const Rect& rect = truncated[n];
            WitnessTerm term{n, rect, measure_eval(space_x.measure(), rect.base), measure_eval(space_y.measure(), rect.side)};
            w.rhs += term.mu_x * term.mu_y;
            w.terms.push_back(std::move(term));
        }
        w.lhs = r * s;
        if (!(w.lhs < w.rhs))
            precondition("hypothesis violated: r s = " + w.lhs.str() + " is not below the witness sum " + w.rhs.str() +
                             " (the product set function is not finitely additive)",
                         {{"lhs", w.lhs.str()}, {"rhs", w.rhs.str()}});
        return w;
    }
    if (cover.tail())
        throw Error(ErrorKind::BudgetExceeded,
                    "no witness within tail truncation depth " + std::to_string(config.max_tail_depth),
                    {{"depth_tried", config.max_tail_depth}});
    precondition("hypothesis violated: the chosen intersections never exceed s (measures are not sigma-additive)");
}

std::pair<ExtReal, ExtReal> choose_levels(const ExtReal& t, const ExtReal& mu_base, const ExtReal& mu_side) {
    const ExtReal half(1, 2);
    // r sits between t / mu_X(B) and mu_Y(C); s between t / r and mu_X(B).
    ExtReal r_floor = mu_base.is_infinite() ? ExtReal{} : divide(t, mu_base);
    ExtReal r = mu_side.is_infinite() ? r_floor + ExtReal(1) : (r_floor + mu_side) * half;
    ExtReal s_floor = divide(t, r);
    ExtReal s = mu_base.is_infinite() ? s_floor + ExtReal(1) : (s_floor + mu_base) * half;
    return {r, s};
}

CertReport certify_sigma_additivity(const MeasureSpace& space_x, const MeasureSpace& space_y, const Rect& whole,
                                    const RectFamily& parts, const ExtReal& t, const TheoremConfig& config) {
    if (!space_x.semiring().contains(whole.base) || !space_y.semiring().contains(whole.side))
        precondition("the whole rectangle is not in the product semiring");
    try {
        require_members(parts, space_x.semiring(), space_y.semiring());
    } catch (const Error& e) {
        precondition(std::string("parts invalid: ") + e.what());
    }
    if (auto overlap = first_overlap(parts))
        precondition("parts " + std::to_string(overlap->first) + " and " + std::to_string(overlap->second) + " overlap");
    if (!blocks_equal(space_x.universe(), space_y.universe(), parts.hull_blocks(), {whole}))
        precondition("the parts do not union to the whole rectangle");

    const MeasureDesc& mx = space_x.measure();
    const MeasureDesc& my = space_y.measure();
    CertReport report;
    report.t = t;
    report.product = product_measure(mx, my, whole);
    if (!t.is_finite() || !(t < report.product))
        precondition("t = " + t.str() + " must be finite and below the product " + report.product.str());

    auto fail = [&](std::string why) {
        report.certified = false;
        report.failure = why;
        throw CertificationError(why, report);
    };

    // Upper half: every truncation stays at or below the product.
    report.upper_pass = true;
    ExtReal partial;
    for (std::size_t i = 0; i < parts.rects().size(); ++i) {
        partial += product_measure(mx, my, parts.rects()[i]);
        report.truncations.push_back({i + 1, partial});
        if (report.product < partial && !report.failing_truncation) {
            report.upper_pass = false;
            report.failing_truncation = report.truncations.back();
        }
    }
    const ExtReal explicit_total = partial;
    if (const auto& tail = parts.tail()) {
        report.tail_limit = explicit_total + tail->total_measure(mx, my);
        if (report.product < *report.tail_limit && !report.failing_truncation) {
            report.upper_pass = false;
            // The closed form is increasing, so the first truncation above the product exists.
            for (std::size_t n = 0; n <= config.max_tail_depth; ++n) {
                ExtReal p = explicit_total + tail->partial_measure(mx, my, n);
                if (report.product < p) {
                    report.failing_truncation = Truncation{parts.explicit_size() + n + 1, p};
                    break;
                }
            }
            if (!report.failing_truncation) report.failing_truncation = Truncation{0, *report.tail_limit};
        }
        for (std::size_t n = 0; n <= config.max_tail_depth; ++n) {
            if (explicit_total + tail->partial_measure(mx, my, n) > t) {
                report.min_sufficient_depth = n;
                break;
            }
        }
    } else {
        report.finite_total = explicit_total;
        report.exact_pass = explicit_total == report.product;
    }
    if (!report.upper_pass) fail("upper half failed: a truncation exceeds the product " + report.product.str());
    if (!report.exact_pass)
        fail("finite additivity failed: parts sum to " + explicit_total.str() + ", product is " + report.product.str());

    // Lower half: the witness theorem with D = B x C, where D^{>r} = B.
    ExtReal mu_base = measure_eval(mx, whole.base);
    ExtReal mu_side = measure_eval(my, whole.side);
    std::tie(report.r, report.s) = choose_levels(t, mu_base, mu_side);
    if (!(t < report.r * report.s)) fail("level selection failed: t is not below r s");
    ProductSet d(space_x.universe(), space_y.universe(), {whole});
    try {
        report.witness = extract_witness(space_x, space_y, d, parts, report.r, report.s, config);
    } catch (const CertificationError&) {
        throw;
    } catch (const Error& e) {
        fail(std::string("lower half failed: ") + e.what());
    }
    if (!(t < report.witness->rhs)) fail("lower half failed: witness sum does not exceed t");
    report.lower_pass = true;

    if (parts.tail()) {
        // Record the truncations the witness reached, for re-verification.
        std::size_t depth = std::max(*report.witness->tail_depth, report.min_sufficient_depth.value_or(0));
        for (std::size_t n = 0; n <= depth; ++n)
            report.truncations.push_back(
                {parts.explicit_size() + n + 1, explicit_total + parts.tail()->partial_measure(mx, my, n)});
    }
    report.certified = true;
    return report;
}

// ---------------------------------------------------------------------------
// Null sections

namespace {

// Distinct positive values mu*_Y can take on the sections that matter.
std::set<ExtReal> attainable_positive(const ProductSpace& space, const ProductSet& d, const OuterConfig& oc) {
    std::set<ExtReal> values;
    const MeasureSpace& y = space.y();
    if (y.universe().is_finite() && y.universe().size() <= oc.table_max_points) {
        for (const auto& v : outer_table(y, oc))
            if (v.is_positive()) values.insert(v);
        return values;
    }
    std::vector<SetExpr> bases;
    for (const auto& b : d.blocks()) bases.push_back(b.base);
    for (const auto& cell : axis_cells(space.x().universe(), bases)) {
        ExtReal v = outer_value(y, section(d, cell.rep), oc);
        if (v.is_positive()) values.insert(v);
    }
    return values;
}

nlohmann::json pairs_json(const ProductSpace& space, FiniteSet s) {
    const std::size_t ny = space.y().universe().size();
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t p : s.members()) out.push_back({p / ny, p % ny});
    return out;
}

// { x : mu*_Y(D^x) > 0 } evaluated point by point; finite X only.
FiniteSet positive_sections(const ProductSpace& space, const ProductSet& d, const OuterConfig& oc) {
    FiniteSet out;
    for (std::size_t x = 0; x < space.x().universe().size(); ++x)
        if (outer_value(space.y(), section(d, Point{x}), oc).is_positive()) out = out | FiniteSet{x};
    return out;
}

}  // namespace

NullSectionVerdict null_section_forward(const ProductSpace& space, const ProductSet& d, const TheoremConfig& config) {
    const OuterConfig& oc = config.outer;
    NullSectionVerdict v;
    v.direction = Direction::Forward;
    ExtReal outer_d = space.outer(d, oc);
    v.values["product_outer_D"] = outer_d;
    if (!outer_d.is_zero())
        precondition("(mu_X x mu_Y)*(D) = " + outer_d.str() + " is not zero", {{"product_outer_D", outer_d.str()}});

    // U_k D^{>1/k}: only the k just past each attainable value can add points.
    std::set<std::size_t> ks;
    const std::set<ExtReal> attainable = attainable_positive(space, d, oc);
    if (!attainable.empty()) v.values["min_positive_value"] = *attainable.begin();
    for (const auto& value : attainable) {
        if (value.is_infinite()) {
            ks.insert(1);
            continue;
        }
        Rational inv = 1 / value.value();
        Integer fl = inv.get_num() / inv.get_den();
        if (!fl.fits_ulong_p() || fl.get_ui() > (std::size_t{1} << 40))
            throw Error(ErrorKind::BudgetExceeded, "stabilization depth too large");
        ks.insert(static_cast<std::size_t>(fl.get_ui()) + 1);
    }
    v.exceptional_set = empty_like(space.x().universe());
    for (std::size_t k : ks) {
        v.thresholds_k.push_back(k);
        v.exceptional_set = set_union(v.exceptional_set, superlevel(d, space.y(), ExtReal(Rational(1, k)), oc));
    }
    v.exceptional_outer = outer_value(space.x(), v.exceptional_set, oc);
    v.holds = v.exceptional_outer.is_zero();
    return v;
}

NullSectionVerdict null_section_converse(const ProductSpace& space, const ProductSet& d, const TheoremConfig& config) {
    const OuterConfig& oc = config.outer;
    if (!space.is_finite()) precondition("the converse is checked on finite universes only");
    const MeasureSpace& joint = space.joint();
    const FiniteSet dbits = space.encode(d);

    CheckReport measurable = caratheodory_measurable(joint, dbits, oc);
    if (!measurable.pass) {
        nlohmann::json detail{{"violating_E", pairs_json(space, measurable.violations.front().sets.front().finite())}};
        for (const auto& [k, val] : measurable.values) detail[k] = val.str();
        precondition("D is not Caratheodory measurable: " + measurable.violations.front().detail, detail);
    }
    if (!space.x().is_sigma_finite() || !space.y().is_sigma_finite()) precondition("a factor is not sigma-finite");

    NullSectionVerdict v;
    v.direction = Direction::Converse;
    FiniteSet exceptional = positive_sections(space, d, oc);
    v.exceptional_set = exceptional;
    v.exceptional_outer = outer_value(space.x(), exceptional, oc);
    if (!v.exceptional_outer.is_zero())
        precondition("sections are not null for almost all x: mu*_X{x : mu*_Y(D^x) > 0} = " + v.exceptional_outer.str(),
                     {{"exceptional_outer", v.exceptional_outer.str()}});

    // Finite-measure reduction: mu*(X), mu*(Y) are finite on sigma-finite finite spaces.
    const ExtReal mu_x_total = outer_value(space.x(), space.x().universe().full(), oc);
    const ExtReal mu_y_total = outer_value(space.y(), space.y().universe().full(), oc);
    v.values["mu_X_X"] = mu_x_total;
    v.values["mu_Y_Y"] = mu_y_total;

    // Complement sections are full for almost all x.
    const ProductSet dc = space.complement(d);
    FiniteSet full_sections;
    for (std::size_t x = 0; x < space.x().universe().size(); ++x)
        if (outer_value(space.y(), section(dc, Point{x}), oc) == mu_y_total) full_sections = full_sections | FiniteSet{x};
    const ExtReal full_sections_outer = outer_value(space.x(), full_sections, oc);
    v.values["mu_X_full_complement_sections"] = full_sections_outer;

    const ExtReal outer_dc = space.outer(dc, oc);
    const ExtReal outer_total = outer_value(joint, joint.universe().full(), oc);
    const ExtReal outer_d = space.outer(d, oc);
    v.values["product_outer_complement"] = outer_dc;
    v.values["product_outer_total"] = outer_total;
    v.values["product_outer_D"] = outer_d;

    const bool complement_full = full_sections_outer == mu_x_total && outer_dc == mu_x_total * mu_y_total;
    bool split_zero = false;
    if (outer_total.is_finite() && !(outer_total < outer_dc)) {
        ExtReal derived = monus(outer_total, outer_dc);
        v.values["derived_outer_D"] = derived;
        split_zero = derived.is_zero();
    }
    v.holds = complement_full && split_zero && outer_d.is_zero();
    return v;
}

}  // namespace mf
