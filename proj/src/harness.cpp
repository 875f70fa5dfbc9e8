#include "mf/harness.hpp"

#include <algorithm>
#include <set>

#include "mf/io.hpp"

namespace mf {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

FiniteSet random_subset(Rng& rng, std::size_t n) { return FiniteSet(rng.next() & FiniteSet::full(n).bits()); }

FiniteSet random_nonempty(Rng& rng, std::size_t n) {
    for (;;) {
        FiniteSet s = random_subset(rng, n);
        if (!s.empty()) return s;
    }
}

std::vector<FiniteSet> random_partition(Rng& rng, std::size_t n) {
    std::size_t blocks = rng.between(1, n);
    std::vector<FiniteSet> parts(blocks);
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t b = rng.below(blocks);
        parts[b] = parts[b] | FiniteSet{p};
    }
    std::erase_if(parts, [](FiniteSet s) { return s.empty(); });
    return parts;
}

// Valid semiring recipes 0..3.
std::vector<FiniteSet> valid_family(Rng& rng, std::size_t n, std::size_t recipe, std::string& name) {
    std::vector<FiniteSet> fam{FiniteSet{}};
    switch (recipe) {
        case 0: {
            name = "partition";
            for (FiniteSet b : random_partition(rng, n)) fam.push_back(b);
            break;
        }
        case 1: {
            name = "partition_algebra";
            auto blocks = random_partition(rng, n);
            for (std::size_t code = 1; code < (std::size_t{1} << blocks.size()); ++code) {
                FiniteSet u;
                for (std::size_t i = 0; i < blocks.size(); ++i)
                    if ((code >> i) & 1u) u = u | blocks[i];
                fam.push_back(u);
            }
            break;
        }
        case 2: {
            name = "intervals";
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j <= n; ++j) fam.push_back(FiniteSet(FiniteSet::full(j).bits() - FiniteSet::full(i).bits()));
            break;
        }
        default: {
            name = "sub_power_set";
            FiniteSet base = random_nonempty(rng, n);
            for (std::uint64_t sub = base.bits();; sub = (sub - 1) & base.bits()) {
                if (sub) fam.push_back(FiniteSet(sub));
                if (!sub) break;
            }
            break;
        }
    }
    return fam;
}

std::vector<FiniteSet> dedupe(std::vector<FiniteSet> fam) {
    std::sort(fam.begin(), fam.end());
    fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
    return fam;
}

MeasureDesc random_point_mass(Rng& rng, std::size_t n, std::size_t max_den) {
    std::vector<ExtReal> w;
    for (std::size_t i = 0; i < n; ++i) w.emplace_back(rng.chance(1, 4) ? Rational(0) : rng.rational(3, max_den) + Rational(1, 8));
    return MeasureDesc::point_mass(std::move(w));
}

Rect interval_rect(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
    return {SetExpr::interval(a, b), SetExpr::interval(c, d)};
}

Rational positive_rational(Rng& rng, std::size_t max_num, std::size_t max_den) {
    Rational q = Rational(static_cast<long>(rng.between(1, max_num)), static_cast<long>(rng.between(1, max_den)));
    q.canonicalize();
    return q;
}

// A level strictly inside (0, v) for finite positive v.
ExtReal below_level(Rng& rng, const ExtReal& v) {
    long k = static_cast<long>(rng.between(1, 4));
    return v * ExtReal(k, k + 1);
}

}  // namespace

Rational Rng::rational(std::size_t max_num, std::size_t max_den) {
    Rational q(static_cast<long>(between(0, max_num)), static_cast<long>(between(1, max_den)));
    q.canonicalize();
    return q;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& stream, std::uint64_t index) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : stream) h = (h ^ c) * 0x100000001b3ULL;
    return splitmix(splitmix(seed ^ h) + index);
}

std::optional<GenKind> parse_gen_kind(const std::string& name) {
    if (name == "guillotine_partition") return GenKind::GuillotinePartition;
    if (name == "random_finite_space") return GenKind::RandomFiniteSpace;
    if (name == "dyadic_staircase") return GenKind::DyadicStaircase;
    if (name == "corrupted_measure") return GenKind::CorruptedMeasure;
    if (name == "random_rect_family") return GenKind::RandomRectFamily;
    return std::nullopt;
}

std::string to_string(GenKind kind) {
    switch (kind) {
        case GenKind::GuillotinePartition: return "guillotine_partition";
        case GenKind::RandomFiniteSpace: return "random_finite_space";
        case GenKind::DyadicStaircase: return "dyadic_staircase";
        case GenKind::CorruptedMeasure: return "corrupted_measure";
        case GenKind::RandomRectFamily: return "random_rect_family";
    }
    return "";
}

RectFamily gen_guillotine(std::uint64_t seed, std::size_t pieces, const Rect& whole, std::size_t denominator_bound) {
    if (pieces == 0) throw Error(ErrorKind::PreconditionFailed, "pieces must be at least 1");
    if (denominator_bound < 2) throw Error(ErrorKind::PreconditionFailed, "denominator bound must be at least 2");
    if (!whole.base.is_interval_union() || !whole.side.is_interval_union() || whole.base.intervals().pieces().size() != 1 ||
        whole.side.intervals().pieces().size() != 1)
        throw Error(ErrorKind::PreconditionFailed, "the whole must be a product of two nonempty intervals");
    Rng rng(seed);
    std::vector<std::pair<Interval, Interval>> cells{{whole.base.intervals().pieces()[0], whole.side.intervals().pieces()[0]}};
    while (cells.size() < pieces) {
        std::size_t i = rng.below(cells.size());
        bool on_base = rng.chance(1, 2);
        Interval& axis = on_base ? cells[i].first : cells[i].second;
        long q = static_cast<long>(rng.between(2, denominator_bound));
        long k = static_cast<long>(rng.between(1, static_cast<std::size_t>(q - 1)));
        Rational frac(k, q);
        frac.canonicalize();
        Rational cut = axis.lo + (axis.hi - axis.lo) * frac;
        auto right = cells[i];
        (on_base ? right.first : right.second).lo = cut;
        axis.hi = cut;
        cells.insert(cells.begin() + static_cast<std::ptrdiff_t>(i) + 1, right);
    }
    std::vector<Rect> rects;
    for (const auto& [b, s] : cells) rects.push_back(interval_rect(b.lo, b.hi, s.lo, s.hi));
    return RectFamily(std::move(rects));
}

MeasureSpace gen_corrupted(std::uint64_t seed, const MeasureSpace& base, const ExtReal& magnitude) {
    const MeasureDesc& m = base.measure();
    if (m.kind() == MeasureKind::Length)
        throw Error(ErrorKind::PreconditionFailed, "corruption needs a tabulated or point-mass measure");
    if (magnitude.is_zero()) return base;

    std::vector<FiniteSet> family = base.semiring().enumerate();
    std::vector<std::pair<FiniteSet, ExtReal>> table;
    for (FiniteSet s : family) table.emplace_back(s, measure_eval(m, s));
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < table.size(); ++i)
        if (!table[i].first.empty() && table[i].second.is_finite()) eligible.push_back(i);
    if (eligible.empty()) throw Error(ErrorKind::PreconditionFailed, "no non-empty member with a finite value to corrupt");

    Rng rng(seed);
    auto& [set, value] = table[eligible[rng.below(eligible.size())]];
    bool up = value.is_zero() || rng.chance(1, 2);
    if (up) value = value + magnitude;
    else value = magnitude < value ? monus(value, magnitude) : ExtReal{};
    return MeasureSpace(base.universe(), SemiringDesc::explicit_family(base.universe().size(), std::move(family)),
                        MeasureDesc::tabulated(std::move(table)));
}

FamilyInstance gen_explicit_family(std::uint64_t seed, std::size_t max_points) {
    Rng rng(seed);
    FamilyInstance out;
    out.n = rng.between(1, max_points);
    const std::size_t n = out.n;
    std::vector<FiniteSet> fam;
    std::size_t recipe = rng.below(8);
    if (recipe < 4) {
        fam = valid_family(rng, n, recipe, out.construction);
    } else if (recipe == 4) {
        out.construction = "intersection_closure";
        fam.push_back(FiniteSet{});
        std::size_t k = rng.between(1, 4);
        for (std::size_t i = 0; i < k; ++i) fam.push_back(random_nonempty(rng, n));
        for (bool grew = true; grew;) {
            grew = false;
            fam = dedupe(fam);
            std::vector<FiniteSet> add;
            for (FiniteSet a : fam)
                for (FiniteSet b : fam)
                    if (!std::binary_search(fam.begin(), fam.end(), a & b)) add.push_back(a & b);
            if (!add.empty()) {
                grew = true;
                fam.insert(fam.end(), add.begin(), add.end());
            }
        }
    } else if (recipe == 5) {
        out.construction = "random";
        fam.push_back(FiniteSet{});
        std::size_t k = rng.between(1, 5);
        for (std::size_t i = 0; i < k; ++i) fam.push_back(random_nonempty(rng, n));
    } else {
        std::string inner;
        fam = dedupe(valid_family(rng, n, rng.below(4), inner));
        if (recipe == 6 && fam.size() > 1) {
            out.construction = "drop_member:" + inner;
            fam.erase(fam.begin() + 1 + static_cast<std::ptrdiff_t>(rng.below(fam.size() - 1)));
        } else {
            out.construction = "add_member:" + inner;
            fam.push_back(random_nonempty(rng, n));
        }
    }
    fam = dedupe(std::move(fam));
    shuffle(fam, rng);
    out.family = std::move(fam);
    return out;
}

MeasureSpace gen_random_finite_space(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    const Universe u = Universe::finite(n);
    switch (rng.below(3)) {
        case 0: {
            std::string name;
            auto fam = dedupe(valid_family(rng, n, rng.below(4), name));
            shuffle(fam, rng);
            return MeasureSpace(u, SemiringDesc::explicit_family(n, fam), random_point_mass(rng, n, 4));
        }
        case 1: {
            // Point masses on an explicit copy of the power set, so covers are searched.
            std::vector<FiniteSet> fam;
            for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) fam.emplace_back(b);
            shuffle(fam, rng);
            return MeasureSpace(u, SemiringDesc::explicit_family(n, fam), random_point_mass(rng, n, 4));
        }
        default: {
            std::vector<FiniteSet> fam{FiniteSet{}};
            std::size_t k = rng.between(1, std::min<std::size_t>(8, (std::size_t{1} << n) - 1));
            for (std::size_t i = 0; i < k; ++i) fam.push_back(random_nonempty(rng, n));
            fam = dedupe(std::move(fam));
            shuffle(fam, rng);
            std::vector<std::pair<FiniteSet, ExtReal>> table;
            for (FiniteSet s : fam) {
                ExtReal v;
                if (!s.empty()) v = rng.chance(1, 8) ? ExtReal::infinity() : ExtReal(rng.rational(4, 3));
                table.emplace_back(s, v);
            }
            return MeasureSpace(u, SemiringDesc::explicit_family(n, fam), MeasureDesc::tabulated(std::move(table)));
        }
    }
}

MeasureSpace gen_point_mass_space(std::uint64_t seed, std::size_t n, std::size_t max_den) {
    Rng rng(seed);
    return MeasureSpace(Universe::finite(n), SemiringDesc::power_set(n), random_point_mass(rng, n, max_den));
}

std::pair<Rect, RectFamily> gen_dyadic_staircase(std::uint64_t seed) {
    Rng rng(seed);
    Rational a = rng.rational(8, 4), c = rng.rational(8, 4);
    Rational w = positive_rational(rng, 4, 4);
    Rational h = 1 / w;
    Rect whole = interval_rect(a, a + w, c, c + h);
    DyadicTail tail{DyadicTail::Axis::Base, SetExpr::interval(c, c + h), a, a + w};
    return {whole, RectFamily({}, tail)};
}

json gen_witness_instance(std::uint64_t seed) {
    Rng rng(seed);
    if (rng.chance(3, 4)) {
        auto finite_space = [&](std::size_t n) {
            std::string name;
            std::size_t recipe = rng.below(4);
            if (recipe == 3) return MeasureSpace(Universe::finite(n), SemiringDesc::power_set(n), random_point_mass(rng, n, 4));
            // Partitions, their algebras and intervals all cover X.
            auto fam = dedupe(valid_family(rng, n, recipe, name));
            shuffle(fam, rng);
            return MeasureSpace(Universe::finite(n), SemiringDesc::explicit_family(n, fam), random_point_mass(rng, n, 4));
        };
        MeasureSpace sx = finite_space(rng.between(1, 4));
        MeasureSpace sy = finite_space(rng.between(1, 4));
        const std::size_t nx = sx.universe().size(), ny = sy.universe().size();
        auto members_with = [](const MeasureSpace& s, std::size_t p) {
            std::vector<FiniteSet> out;
            for (FiniteSet f : s.semiring().enumerate())
                if (f.contains(p)) out.push_back(f);
            return out;
        };
        for (std::size_t attempt = 0; attempt < 64; ++attempt) {
            std::vector<std::pair<std::size_t, std::size_t>> pts;
            for (std::size_t x = 0; x < nx; ++x)
                for (std::size_t y = 0; y < ny; ++y)
                    if (rng.chance(1, 2)) pts.emplace_back(x, y);
            if (pts.empty()) continue;
            ProductSet d = ProductSet::from_points(sx.universe(), sy.universe(), pts);
            std::vector<Rect> rects;
            for (const auto& [x, y] : pts) {
                auto bx = members_with(sx, x), by = members_with(sy, y);
                rects.push_back({bx[rng.below(bx.size())], by[rng.below(by.size())]});
            }
            RectFamily cover = rect_disjointify(rects, sx.semiring(), sy.semiring());

            std::vector<ExtReal> levels;
            for (std::size_t x = 0; x < nx; ++x) {
                ExtReal v = outer_value(sy, section(d, Point{x}));
                if (v.is_positive() && v.is_finite()) levels.push_back(v);
            }
            if (levels.empty()) continue;
            ExtReal r = below_level(rng, levels[rng.below(levels.size())]);
            ExtReal m = outer_value(sx, superlevel(d, sy, r));
            if (!m.is_positive() || !m.is_finite()) continue;
            ExtReal s = below_level(rng, m);
            return {{"x", io::to_json(sx)}, {"y", io::to_json(sy)}, {"d", io::to_json(d)},
                    {"cover", io::to_json(cover)}, {"r", r.str()}, {"s", s.str()}};
        }
    }
    // Length x Length: D is a few random rectangles inside [0, 4)^2.
    const MeasureSpace line(Universe::interval(), SemiringDesc::intervals(), MeasureDesc::length());
    for (;;) {
        std::vector<Rect> blocks;
        std::size_t k = rng.between(1, 3);
        for (std::size_t i = 0; i < k; ++i) {
            Rational a = rng.rational(12, 4), c = rng.rational(12, 4);
            Rational b = std::min<Rational>(a + positive_rational(rng, 4, 4), Rational(4));
            Rational d = std::min<Rational>(c + positive_rational(rng, 4, 4), Rational(4));
            if (a < b && c < d) blocks.push_back(interval_rect(a, b, c, d));
        }
        if (blocks.empty()) continue;
        ProductSet d(Universe::interval(), Universe::interval(), blocks);
        RectFamily cover;
        if (rng.chance(1, 3)) {
            RectFamily head = gen_guillotine(rng.next(), rng.between(1, 12), interval_rect(0, 2, 0, 4));
            cover = RectFamily(head.rects(), DyadicTail{DyadicTail::Axis::Base, SetExpr::interval(0, 4), 2, 4});
        } else {
            cover = gen_guillotine(rng.next(), rng.between(1, 16), interval_rect(0, 4, 0, 4));
        }
        std::vector<SetExpr> bases;
        for (const auto& b : blocks) bases.push_back(b.base);
        std::vector<ExtReal> levels;
        for (const auto& cell : axis_cells(Universe::interval(), bases)) {
            ExtReal v = outer_value(line, section(d, cell.rep));
            if (v.is_positive()) levels.push_back(v);
        }
        if (levels.empty()) continue;
        ExtReal r = below_level(rng, levels[rng.below(levels.size())]);
        ExtReal m = outer_value(line, superlevel(d, line, r));
        if (!m.is_positive()) continue;
        ExtReal s = below_level(rng, m);
        return {{"x", io::to_json(line)}, {"y", io::to_json(line)}, {"d", io::to_json(d)},
                {"cover", io::to_json(cover)}, {"r", r.str()}, {"s", s.str()}};
    }
}

json generate(const GenSpec& spec) {
    const MeasureSpace line(Universe::interval(), SemiringDesc::intervals(), MeasureDesc::length());
    switch (spec.kind) {
        case GenKind::GuillotinePartition: {
            Rng rng(spec.seed);
            Rational a = rng.rational(4, 4), c = rng.rational(4, 4);
            Rect whole = interval_rect(a, a + positive_rational(rng, 4, 2), c, c + positive_rational(rng, 4, 2));
            RectFamily parts = gen_guillotine(rng.next(), spec.pieces, whole, spec.denominator_bound);
            return {{"x", io::to_json(line)}, {"y", io::to_json(line)}, {"whole", io::to_json(whole)}, {"parts", io::to_json(parts)}};
        }
        case GenKind::RandomFiniteSpace:
            return io::to_json(gen_random_finite_space(spec.seed, spec.universe_size));
        case GenKind::DyadicStaircase: {
            auto [whole, parts] = gen_dyadic_staircase(spec.seed);
            return {{"x", io::to_json(line)}, {"y", io::to_json(line)}, {"whole", io::to_json(whole)}, {"parts", io::to_json(parts)}};
        }
        case GenKind::CorruptedMeasure: {
            MeasureSpace base = gen_point_mass_space(spec.seed, spec.universe_size);
            MeasureSpace bad = gen_corrupted(derive_seed(spec.seed, "corrupt", 0), base, spec.magnitude);
            json out = io::to_json(bad);
            out["base"] = io::to_json(base);
            return out;
        }
        case GenKind::RandomRectFamily:
            return gen_witness_instance(spec.seed);
    }
    return nullptr;
}

}  // namespace mf
