#include "mf/io.hpp"

#include "mf/error.hpp"

namespace mf::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::size_t natural(const json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 0) bad(std::string(what) + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

json values_json(const std::map<std::string, ExtReal>& values) {
    json out = json::object();
    for (const auto& [k, v] : values) out[k] = v.str();
    return out;
}

}  // namespace

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    bad("expected a rational as \"p/q\" or an integer, got " + j.dump());
}

ExtReal ext_from_json(const json& j) {
    if (j.is_number_integer()) {
        if (j.get<long long>() < 0) bad("negative value " + j.dump());
        return ExtReal(Rational(Integer(std::to_string(j.get<long long>()))));
    }
    if (j.is_string()) return ExtReal::parse(j.get<std::string>());
    bad("expected a value in [0, inf] as \"p/q\", \"inf\" or an integer, got " + j.dump());
}

json to_json(const ExtReal& x) { return x.str(); }
json to_json(const Rational& q) { return format_rational(q); }

json to_json(const Point& p) {
    if (const auto* i = std::get_if<std::size_t>(&p)) return *i;
    return format_rational(std::get<Rational>(p));
}

SetExpr set_from_json(const json& j, const Universe& u) {
    if (!j.is_array()) bad("a set must be a JSON array, got " + j.dump());
    if (u.is_finite()) {
        std::vector<std::size_t> pts;
        for (const auto& e : j) {
            std::size_t p = natural(e, "point id");
            if (p >= u.size()) bad("point " + std::to_string(p) + " is outside the universe of size " + std::to_string(u.size()));
            pts.push_back(p);
        }
        std::vector<std::size_t> sorted = pts;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) bad("duplicate point in set " + j.dump());
        return FiniteSet::from_points(pts);
    }
    std::vector<Interval> pieces;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) bad("an interval must be a [lo, hi] pair, got " + e.dump());
        Interval iv{rational_from_json(e[0]), rational_from_json(e[1])};
        if (iv.hi < iv.lo) bad("interval with hi < lo: " + e.dump());
        pieces.push_back(std::move(iv));
    }
    return IntervalUnion(std::move(pieces));
}

json to_json(const SetExpr& s) {
    json out = json::array();
    if (s.is_finite()) {
        for (auto p : s.finite().members()) out.push_back(p);
        return out;
    }
    for (const auto& iv : s.intervals().pieces()) out.push_back({format_rational(iv.lo), format_rational(iv.hi)});
    return out;
}

Universe universe_from_json(const json& j) {
    if (j == "interval") return Universe::interval();
    if (j.is_object() && j.contains("finite")) {
        std::size_t n = natural(j.at("finite"), "universe size");
        if (n == 0 || n > kMaxFinitePoints) bad("finite universe size must be in 1..64");
        return Universe::finite(n);
    }
    bad("universe must be {\"finite\": n} or \"interval\"");
}

SemiringDesc semiring_from_json(const json& j, const Universe& u) {
    if (j == "interval") {
        if (u.is_finite()) bad("interval semiring over a finite universe");
        return SemiringDesc::intervals();
    }
    if (j == "power_set") {
        if (!u.is_finite()) bad("power_set semiring needs a finite universe");
        return SemiringDesc::power_set(u.size());
    }
    if (j.is_object() && j.contains("explicit")) {
        if (!u.is_finite()) bad("explicit semiring needs a finite universe");
        std::vector<FiniteSet> family;
        for (const auto& s : j.at("explicit")) family.push_back(set_from_json(s, u).finite());
        return SemiringDesc::explicit_family(u.size(), std::move(family));
    }
    bad("semiring must be {\"explicit\": [...]}, \"power_set\" or \"interval\"");
}

MeasureSpace space_from_json(const json& j) {
    Universe u = universe_from_json(field(j, "universe"));
    SemiringDesc sr = semiring_from_json(field(j, "semiring"), u);
    const json& mj = field(j, "measure");
    MeasureDesc m;
    if (mj == "length") {
        m = MeasureDesc::length();
    } else if (mj.is_object() && mj.contains("point_mass")) {
        const json& w = mj.at("point_mass");
        if (!u.is_finite()) bad("point masses need a finite universe");
        std::vector<ExtReal> weights(u.size());
        if (w.is_array()) {
            if (w.size() != u.size()) bad("point_mass array needs one weight per point");
            for (std::size_t i = 0; i < w.size(); ++i) weights[i] = ext_from_json(w[i]);
        } else if (w.is_object()) {
            for (const auto& [key, value] : w.items()) {
                std::size_t p = 0;
                try {
                    p = std::stoul(key);
                } catch (const std::exception&) {
                    bad("point_mass key '" + key + "' is not a point id");
                }
                if (p >= u.size() || std::to_string(p) != key) bad("point_mass key '" + key + "' is not a point id in range");
                weights[p] = ext_from_json(value);
            }
        } else {
            bad("point_mass must be an array or an object");
        }
        m = MeasureDesc::point_mass(std::move(weights));
    } else if (mj.is_object() && mj.contains("tabulated")) {
        std::vector<std::pair<FiniteSet, ExtReal>> table;
        for (const auto& entry : mj.at("tabulated"))
            table.emplace_back(set_from_json(field(entry, "set"), u).finite(), ext_from_json(field(entry, "value")));
        m = MeasureDesc::tabulated(std::move(table));
    } else {
        bad("measure must be {\"point_mass\": ...}, {\"tabulated\": [...]} or \"length\"");
    }
    std::optional<std::vector<SetExpr>> witness;
    if (j.contains("sigma_finite")) {
        witness.emplace();
        for (const auto& s : j.at("sigma_finite")) witness->push_back(set_from_json(s, u));
    }
    return MeasureSpace(u, std::move(sr), std::move(m), std::move(witness));
}

json to_json(const Universe& u) {
    if (u.is_finite()) return {{"finite", u.size()}};
    return "interval";
}

json to_json(const SemiringDesc& sr) {
    switch (sr.kind()) {
        case SemiringKind::Interval: return "interval";
        case SemiringKind::PowerSet: return "power_set";
        case SemiringKind::Explicit: {
            json fam = json::array();
            for (FiniteSet s : sr.family()) fam.push_back(to_json(SetExpr(s)));
            return {{"explicit", fam}};
        }
    }
    return nullptr;
}

json to_json(const MeasureSpace& space) {
    json out{{"universe", to_json(space.universe())}, {"semiring", to_json(space.semiring())}};
    const auto& m = space.measure();
    switch (m.kind()) {
        case MeasureKind::Length: out["measure"] = "length"; break;
        case MeasureKind::PointMass: {
            json w = json::array();
            for (const auto& v : m.weights()) w.push_back(v.str());
            out["measure"] = {{"point_mass", w}};
            break;
        }
        case MeasureKind::Tabulated: {
            json t = json::array();
            for (const auto& [s, v] : m.assignments()) t.push_back({{"set", to_json(SetExpr(s))}, {"value", v.str()}});
            out["measure"] = {{"tabulated", t}};
            break;
        }
    }
    if (const auto& w = space.sigma_finite_witness()) {
        json pieces = json::array();
        for (const auto& s : *w) pieces.push_back(to_json(s));
        out["sigma_finite"] = pieces;
    }
    return out;
}

Rect rect_from_json(const json& j, const Universe& x, const Universe& y) {
    return {set_from_json(field(j, "base"), x), set_from_json(field(j, "side"), y)};
}

RectFamily family_from_json(const json& j, const Universe& x, const Universe& y) {
    const json& list = j.is_object() ? field(j, "rects") : j;
    if (!list.is_array()) bad("a rectangle family must be a list or {\"rects\": [...]}");
    std::vector<Rect> rects;
    for (const auto& r : list) rects.push_back(rect_from_json(r, x, y));
    std::optional<DyadicTail> tail;
    if (j.is_object() && j.contains("tail")) {
        const json& tj = j.at("tail");
        if (field(tj, "kind") != "dyadic") bad("only dyadic tails are supported");
        DyadicTail t;
        const json& axis = field(tj, "axis");
        if (axis == "base") t.axis = DyadicTail::Axis::Base;
        else if (axis == "side") t.axis = DyadicTail::Axis::Side;
        else bad("tail axis must be \"base\" or \"side\"");
        const Universe& axis_u = t.axis == DyadicTail::Axis::Base ? x : y;
        const Universe& fixed_u = t.axis == DyadicTail::Axis::Base ? y : x;
        if (axis_u.is_finite()) bad("tail axis must be the rational line");
        t.fixed = set_from_json(field(tj, "fixed"), fixed_u);
        t.lo = rational_from_json(field(tj, "lo"));
        t.hi = rational_from_json(field(tj, "hi"));
        tail = std::move(t);
    }
    return RectFamily(std::move(rects), std::move(tail));
}

ProductSet product_set_from_json(const json& j, const Universe& x, const Universe& y) {
    if (j.is_object() && j.contains("points")) {
        if (!x.is_finite() || !y.is_finite()) bad("point-list product sets need finite universes");
        std::vector<std::pair<std::size_t, std::size_t>> pts;
        for (const auto& p : j.at("points")) {
            if (!p.is_array() || p.size() != 2) bad("a product point must be [x, y]");
            std::size_t px = natural(p[0], "x"), py = natural(p[1], "y");
            if (px >= x.size() || py >= y.size()) bad("product point " + p.dump() + " outside X x Y");
            pts.emplace_back(px, py);
        }
        return ProductSet::from_points(x, y, pts);
    }
    const json& list = j.is_object() ? field(j, "blocks") : j;
    if (!list.is_array()) bad("a product set must be a list, {\"blocks\": [...]} or {\"points\": [...]}");
    std::vector<Rect> blocks;
    for (const auto& r : list) blocks.push_back(rect_from_json(r, x, y));
    return ProductSet(x, y, std::move(blocks));
}

json to_json(const Rect& r) { return {{"base", to_json(r.base)}, {"side", to_json(r.side)}}; }

json to_json(const RectFamily& f) {
    json rects = json::array();
    for (const auto& r : f.rects()) rects.push_back(to_json(r));
    json out{{"rects", rects}};
    if (const auto& t = f.tail())
        out["tail"] = {{"kind", "dyadic"},
                       {"axis", t->axis == DyadicTail::Axis::Base ? "base" : "side"},
                       {"fixed", to_json(t->fixed)},
                       {"lo", format_rational(t->lo)},
                       {"hi", format_rational(t->hi)}};
    return out;
}

json to_json(const ProductSet& d) {
    json blocks = json::array();
    for (const auto& b : d.blocks()) blocks.push_back(to_json(b));
    return {{"blocks", blocks}};
}

json to_json(const Violation& v) {
    json sets = json::array();
    for (const auto& s : v.sets) sets.push_back(to_json(s));
    return {{"clause", v.clause}, {"sets", sets}, {"detail", v.detail}};
}

json to_json(const CheckReport& r) {
    json violations = json::array();
    for (const auto& v : r.violations) violations.push_back(to_json(v));
    return {{"pass", r.pass}, {"checked", r.checked}, {"values", values_json(r.values)}, {"violations", violations}};
}

json to_json(const ValidationReport& r) {
    json violations = json::array();
    for (const auto& v : r.violations) violations.push_back(to_json(v));
    return {{"valid", r.valid},
            {"is_algebra", r.is_algebra},
            {"is_sigma_algebra", r.is_sigma_algebra},
            {"pairs_checked", r.pairs_checked},
            {"violations", violations}};
}

json to_json(const OuterValue& v) {
    json out{{"value", v.value.str()}, {"exactness", v.exactness == Exactness::Exact ? "exact" : "upper_bound"}};
    if (v.witness_cover) {
        json pieces = json::array();
        for (const auto& p : v.witness_cover->pieces) pieces.push_back(to_json(p));
        out["witness"] = pieces;
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

json to_json(const Witness& w) {
    json per_point = json::array();
    for (const auto& c : w.per_point) {
        per_point.push_back(
            {{"x", to_json(c.x)}, {"cell", to_json(c.cell)}, {"M_x", c.m_x}, {"meet", to_json(c.meet)}});
    }
    json terms = json::array();
    for (const auto& t : w.terms)
        terms.push_back({{"n", t.index}, {"rect", to_json(t.rect)}, {"mu_x", t.mu_x.str()}, {"mu_y", t.mu_y.str()}});
    json out{{"r", w.r.str()},
             {"s", w.s.str()},
             {"F", w.F},
             {"M", per_point},
             {"terms", terms},
             {"lhs", w.lhs.str()},
             {"rhs", w.rhs.str()},
             {"superlevel_outer", w.superlevel_outer.str()},
             {"union_outer", w.union_outer.str()}};
    out["tail_depth"] = w.tail_depth ? json(*w.tail_depth) : json(nullptr);
    return out;
}

json to_json(const CertReport& r) {
    json truncs = json::array();
    for (const auto& t : r.truncations) truncs.push_back({{"count", t.count}, {"partial", t.partial.str()}});
    json out{{"certified", r.certified},
             {"product", r.product.str()},
             {"t", r.t.str()},
             {"r", r.r.str()},
             {"s", r.s.str()},
             {"upper", {{"pass", r.upper_pass}, {"truncations", truncs}}},
             {"exact_pass", r.exact_pass},
             {"lower", {{"pass", r.lower_pass}}}};
    if (r.tail_limit) out["upper"]["tail_limit"] = r.tail_limit->str();
    if (r.failing_truncation)
        out["upper"]["failing_truncation"] = {{"count", r.failing_truncation->count},
                                              {"partial", r.failing_truncation->partial.str()}};
    if (r.finite_total) out["finite_total"] = r.finite_total->str();
    if (r.witness) out["lower"]["witness"] = to_json(*r.witness);
    if (r.min_sufficient_depth) out["min_sufficient_depth"] = *r.min_sufficient_depth;
    if (!r.failure.empty()) out["failure"] = r.failure;
    return out;
}

json to_json(const NullSectionVerdict& v) {
    return {{"direction", v.direction == Direction::Forward ? "forward" : "converse"},
            {"holds", v.holds},
            {"exceptional_set", to_json(v.exceptional_set)},
            {"exceptional_outer", v.exceptional_outer.str()},
            {"thresholds_k", v.thresholds_k},
            {"values", values_json(v.values)}};
}

}  // namespace mf::io
