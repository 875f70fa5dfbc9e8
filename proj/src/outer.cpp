#include "mf/outer.hpp"

#include <algorithm>
#include <unordered_map>

#include "mf/detail/outer_cache.hpp"
#include "mf/error.hpp"

namespace mf {

namespace {

struct Candidate {
    std::size_t index;
    FiniteSet set;
    ExtReal value;
};

// Family members meeting the target, in family order.
std::vector<Candidate> candidates_for(const MeasureSpace& space, FiniteSet target) {
    std::vector<Candidate> out;
    const auto& family = space.semiring().family();
    for (std::size_t i = 0; i < family.size(); ++i) {
        FiniteSet s = family[i];
        if ((s & target).empty()) continue;
        out.push_back({i, s, measure_eval(space.measure(), s)});
    }
    return out;
}

class CoverSearch {
public:
    CoverSearch(std::vector<Candidate> cands, FiniteSet target, std::size_t budget)
        : cands_(std::move(cands)), target_(target), budget_(budget) {
        for (std::size_t p : target.members()) {
            auto& list = by_point_[p];
            ExtReal cheapest = ExtReal::infinity();
            for (std::size_t k = 0; k < cands_.size(); ++k) {
                if (!cands_[k].set.contains(p)) continue;
                list.push_back(k);
                cheapest = min(cheapest, cands_[k].value);
            }
            point_floor_[p] = cheapest;
        }
    }

    // Returns false when the node budget ran out.
    bool run() {
        dfs(target_, ExtReal{});
        return !exhausted_;
    }

    [[nodiscard]] bool found() const { return found_; }
    [[nodiscard]] const ExtReal& best() const { return best_; }
    [[nodiscard]] const std::vector<std::size_t>& best_choice() const { return best_choice_; }

private:
    ExtReal lower_bound(FiniteSet uncovered) const {
        ExtReal lb;
        for (std::uint64_t b = uncovered.bits(); b; b &= b - 1)
            lb = max(lb, point_floor_.at(static_cast<std::size_t>(std::countr_zero(b))));
        return lb;
    }

    void dfs(FiniteSet uncovered, const ExtReal& sum) {
        if (exhausted_) return;
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return;
        }
        if (uncovered.empty()) {
            if (!found_ || sum < best_) {
                found_ = true;
                best_ = sum;
                best_choice_ = chosen_;
            }
            return;
        }
        if (found_ && !(sum + lower_bound(uncovered) < best_)) return;
        auto [it, fresh] = reached_.try_emplace(uncovered.bits(), sum);
        if (!fresh) {
            if (!(sum < it->second)) return;
            it->second = sum;
        }
        const std::size_t p = uncovered.lowest();
        for (std::size_t k : by_point_.at(p)) {
            chosen_.push_back(k);
            dfs(uncovered - cands_[k].set, sum + cands_[k].value);
            chosen_.pop_back();
        }
    }

    std::vector<Candidate> cands_;
    FiniteSet target_;
    std::size_t budget_;
    std::unordered_map<std::size_t, std::vector<std::size_t>> by_point_;
    std::unordered_map<std::size_t, ExtReal> point_floor_;
    std::unordered_map<std::uint64_t, ExtReal> reached_;
    std::vector<std::size_t> chosen_;
    std::vector<std::size_t> best_choice_;
    ExtReal best_;
    bool found_ = false;
    bool exhausted_ = false;
    std::size_t nodes_ = 0;
};

// Every subfamily of the candidates; only used when the search is out of
// budget and the candidate list is short.
std::optional<std::vector<std::size_t>> exhaustive_cover(const std::vector<Candidate>& cands, FiniteSet target,
                                                         ExtReal& best) {
    std::optional<std::vector<std::size_t>> choice;
    const std::size_t n = cands.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        FiniteSet u;
        ExtReal sum;
        std::vector<std::size_t> picked;
        for (std::size_t k = 0; k < n; ++k) {
            if (!((mask >> k) & 1u)) continue;
            u = u | cands[k].set;
            sum += cands[k].value;
            picked.push_back(k);
        }
        if (!target.subset_of(u)) continue;
        if (!choice || sum < best) {
            best = sum;
            choice = std::move(picked);
        }
    }
    return choice;
}

constexpr std::size_t kExhaustiveFallbackMax = 12;

}  // namespace

ExtReal cover_bound(const MeasureDesc& m, const Cover& c) {
    SetExpr uncovered = c.target;
    ExtReal total;
    for (const auto& piece : c.pieces) {
        uncovered = set_minus(uncovered, piece);
        total += measure_eval(m, piece);
    }
    if (!uncovered.empty()) throw Error(ErrorKind::NotACover, "cover pieces do not contain the target");
    return total;
}

OuterValue outer_measure(const MeasureSpace& space, const SetExpr& a, const OuterConfig& config) {
    if (!space.universe().admits(a)) throw Error(ErrorKind::UniverseMismatch, "target set is not in the space's universe");

    if (!space.universe().is_finite()) {
        Cover cover{{}, a};
        for (const auto& iv : a.intervals().pieces()) cover.pieces.push_back(SetExpr::interval(iv.lo, iv.hi));
        return {ExtReal(a.intervals().length()), std::move(cover), Exactness::Exact};
    }

    const FiniteSet target = a.finite();
    if (target.empty()) return {ExtReal{}, Cover{{}, a}, Exactness::Exact};

    if (space.semiring().kind() == SemiringKind::PowerSet) {
        // Only PointMass lives on a power set; A covers itself at cost mu(A)
        // and any cover costs at least mu of its union.
        return {measure_eval(space.measure(), a), Cover{{a}, a}, Exactness::Exact};
    }

    auto cands = candidates_for(space, target);
    FiniteSet reach;
    for (const auto& c : cands) reach = reach | c.set;
    if (!target.subset_of(reach)) return {ExtReal::infinity(), std::nullopt, Exactness::Exact};

    auto to_cover = [&](const std::vector<std::size_t>& picks) {
        std::vector<std::size_t> order = picks;
        std::vector<SetExpr> pieces;
        for (std::size_t k : order) pieces.emplace_back(cands[k].set);
        return Cover{std::move(pieces), a};
    };

    CoverSearch search(cands, target, config.node_budget);
    if (search.run()) return {search.best(), to_cover(search.best_choice()), Exactness::Exact};

    if (cands.size() <= kExhaustiveFallbackMax) {
        ExtReal best;
        auto choice = exhaustive_cover(cands, target, best);
        return {best, to_cover(*choice), Exactness::Exact};
    }
    if (search.found()) return {search.best(), to_cover(search.best_choice()), Exactness::UpperBound};
    return {ExtReal::infinity(), std::nullopt, Exactness::UpperBound};
}

const std::vector<ExtReal>& outer_table(const MeasureSpace& space, const OuterConfig& config) {
    const auto& u = space.universe();
    if (!u.is_finite() || u.size() > config.table_max_points)
        throw Error(ErrorKind::BudgetExceeded, "outer-measure table needs a finite universe of at most " +
                                                   std::to_string(config.table_max_points) + " points");
    auto& cache = space.outer_cache();
    std::call_once(cache.once, [&] {
        const std::size_t n = u.size();
        const std::size_t states = std::size_t{1} << n;
        std::vector<ExtReal> table(states);
        if (space.semiring().kind() == SemiringKind::PowerSet) {
            const auto& w = space.measure().weights();
            for (std::size_t s = 1; s < states; ++s) {
                std::size_t low = static_cast<std::size_t>(std::countr_zero(s));
                table[s] = table[s & (s - 1)] + w[low];
            }
        } else {
            // f(S) = min over members F containing min(S) of mu(F) + f(S \ F).
            std::vector<std::vector<Candidate>> by_point(n);
            const auto& family = space.semiring().family();
            for (std::size_t i = 0; i < family.size(); ++i) {
                if (family[i].empty()) continue;
                ExtReal v = measure_eval(space.measure(), family[i]);
                for (std::size_t p : family[i].members()) by_point[p].push_back({i, family[i], v});
            }
            for (std::size_t s = 1; s < states; ++s) {
                std::size_t low = static_cast<std::size_t>(std::countr_zero(s));
                ExtReal best = ExtReal::infinity();
                for (const auto& c : by_point[low]) {
                    ExtReal v = c.value + table[s & ~c.set.bits()];
                    if (v < best) best = std::move(v);
                }
                table[s] = std::move(best);
            }
        }
        cache.table = std::move(table);
        cache.available = true;
    });
    return cache.table;
}

ExtReal outer_value(const MeasureSpace& space, const SetExpr& a, const OuterConfig& config) {
    const auto& u = space.universe();
    if (!u.admits(a)) throw Error(ErrorKind::UniverseMismatch, "target set is not in the space's universe");
    if (!u.is_finite()) return ExtReal(a.intervals().length());
    if (space.semiring().kind() == SemiringKind::PowerSet) return measure_eval(space.measure(), a);
    if (u.size() <= config.table_max_points) return outer_table(space, config)[a.finite().bits()];
    OuterValue v = outer_measure(space, a, config);
    if (v.exactness != Exactness::Exact) throw Error(ErrorKind::BudgetExceeded, "outer measure not resolved within the node budget");
    return v.value;
}

CheckReport check_outer_axioms(const MeasureSpace& space, const std::vector<SetExpr>& samples, const OuterConfig& config) {
    CheckReport report;
    std::vector<ExtReal> values;
    values.reserve(samples.size());
    for (const auto& s : samples) {
        OuterValue v = outer_measure(space, s, config);
        if (v.exactness != Exactness::Exact) throw Error(ErrorKind::BudgetExceeded, "sample outer measure not exact");
        values.push_back(v.value);
    }

    const SetExpr empty = space.universe().is_finite() ? SetExpr(FiniteSet{}) : SetExpr(IntervalUnion{});
    ExtReal at_empty = outer_measure(space, empty, config).value;
    ++report.checked;
    report.values["mu_star_empty"] = at_empty;
    if (!at_empty.is_zero()) report.fail({"empty", {empty}, "mu*(empty) = " + at_empty.str()});

    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = 0; j < samples.size(); ++j) {
            if (i == j || !samples[i].subset_of(samples[j])) continue;
            ++report.checked;
            if (values[j] < values[i])
                report.fail({"monotone", {samples[i], samples[j]},
                             "mu*(A) = " + values[i].str() + " > mu*(B) = " + values[j].str() + " with A subset of B"});
        }
    }

    // Combinations of 2..L distinct samples.
    std::vector<std::size_t> pick;
    auto visit = [&](auto&& self, std::size_t start) -> void {
        if (pick.size() >= 2) {
            SetExpr u = samples[pick[0]];
            ExtReal sum = values[pick[0]];
            for (std::size_t k = 1; k < pick.size(); ++k) {
                u = set_union(u, samples[pick[k]]);
                sum += values[pick[k]];
            }
            ExtReal whole = outer_value(space, u, config);
            ++report.checked;
            if (sum < whole) {
                std::vector<SetExpr> sets;
                for (auto k : pick) sets.push_back(samples[k]);
                report.fail({"subadditive", std::move(sets),
                             "mu*(union) = " + whole.str() + " exceeds the sum " + sum.str()});
            }
        }
        if (pick.size() == config.subadditivity_max_len) return;
        for (std::size_t k = start; k < samples.size(); ++k) {
            pick.push_back(k);
            self(self, k + 1);
            pick.pop_back();
        }
    };
    visit(visit, 0);

    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!space.semiring().contains(samples[i])) continue;
        ExtReal mu = measure_eval(space.measure(), samples[i]);
        ++report.checked;
        if (mu < values[i]) report.fail({"below_mu", {samples[i]}, "mu*(A) = " + values[i].str() + " > mu(A) = " + mu.str()});
    }
    return report;
}

CheckReport caratheodory_measurable(const MeasureSpace& space, const SetExpr& d, const OuterConfig& config) {
    const auto& u = space.universe();
    if (!u.is_finite()) throw Error(ErrorKind::PreconditionFailed, "Caratheodory testing needs a finite universe");
    if (u.size() > config.table_max_points)
        throw Error(ErrorKind::BudgetExceeded, "Caratheodory testing is limited to " +
                                                   std::to_string(config.table_max_points) + " points");
    if (!u.admits(d)) throw Error(ErrorKind::UniverseMismatch, "D is not in the space's universe");
    const auto& table = outer_table(space, config);
    const std::uint64_t dbits = d.finite().bits();
    CheckReport report;
    const std::uint64_t states = std::uint64_t{1} << u.size();
    for (std::uint64_t e = 0; e < states; ++e) {
        ++report.checked;
        const ExtReal& whole = table[e];
        const ExtReal& inside = table[e & dbits];
        const ExtReal& outside = table[e & ~dbits];
        if (whole == inside + outside) continue;
        report.values["mu_star_E"] = whole;
        report.values["mu_star_E_cap_D"] = inside;
        report.values["mu_star_E_minus_D"] = outside;
        report.fail({"caratheodory", {FiniteSet(e)},
                     "mu*(E) = " + whole.str() + " but mu*(E n D) + mu*(E \\ D) = " + (inside + outside).str()});
        break;
    }
    return report;
}

}  // namespace mf
