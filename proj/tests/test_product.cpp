#include "helpers.hpp"

using namespace mf;
using namespace mf::test;

namespace {

bool member(const std::vector<Rect>& rects, const Point& px, const Point& py) {
    for (const auto& r : rects)
        if (r.base.contains(px) && r.side.contains(py)) return true;
    return false;
}

// Area of a union of axis-parallel rectangles by inclusion-exclusion.
Rational inclusion_exclusion_area(const std::vector<Rect>& rects) {
    Rational total = 0;
    const std::size_t k = rects.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
        SetExpr b = iv("-1000", "1000"), s = iv("-1000", "1000");
        int bits = 0;
        for (std::size_t i = 0; i < k; ++i)
            if ((mask >> i) & 1u) {
                b = set_intersect(b, rects[i].base);
                s = set_intersect(s, rects[i].side);
                ++bits;
            }
        Rational area = b.intervals().length() * s.intervals().length();
        total += bits % 2 ? area : Rational(-area);
    }
    return total;
}

}  // namespace

TEST_SUITE("product") {

TEST_CASE("product_measure examples") {
    auto len = MeasureDesc::length();
    CHECK(product_measure(len, len, rect(iv("0", "1/2"), iv("0", "1/3"))) == x("1/6"));
    auto zero = MeasureDesc::point_mass({0, 1});
    auto inf = MeasureDesc::point_mass({ExtReal::infinity()});
    CHECK(product_measure(zero, inf, rect(FiniteSet{0}, FiniteSet{0})).is_zero());
    auto c2 = MeasureDesc::point_mass({1, 1});
    auto c3 = MeasureDesc::point_mass({1, 1, 1});
    CHECK(product_measure(c2, c3, rect(FiniteSet{0, 1}, FiniteSet{0, 1, 2})) == ExtReal(6));
}

TEST_CASE("rect_disjointify examples") {
    auto ivs = SemiringDesc::intervals();
    std::vector<Rect> disjoint{rect(iv("0", "1"), iv("0", "1")), rect(iv("1", "2"), iv("0", "1"))};
    auto same = rect_disjointify(disjoint, ivs, ivs);
    CHECK(same.rects() == disjoint);

    std::vector<Rect> overlap{rect(iv("0", "2"), iv("0", "2")), rect(iv("1", "3"), iv("1", "3"))};
    auto fam = rect_disjointify(overlap, ivs, ivs);
    CHECK(fam.rects().size() == 3);
    CHECK_FALSE(first_overlap(fam).has_value());
    ExtReal total;
    for (const auto& r : fam.rects()) total += product_measure(MeasureDesc::length(), MeasureDesc::length(), r);
    CHECK(total == ExtReal(7));
    CHECK(Rational(7) == inclusion_exclusion_area(overlap));
    CHECK(blocks_equal(Universe::interval(), Universe::interval(), fam.rects(), overlap));

    auto ps = SemiringDesc::power_set(3);
    auto pts = rect_disjointify({rect(FiniteSet{0, 1}, FiniteSet{0}), rect(FiniteSet{1, 2}, FiniteSet{0})}, ps, ps);
    REQUIRE(pts.rects().size() == 2);
    CHECK(pts.rects()[0] == rect(FiniteSet{0, 1}, FiniteSet{0}));
    CHECK(pts.rects()[1] == rect(FiniteSet{2}, FiniteSet{0}));
}

TEST_CASE("rect_disjointify preserves membership") {
    Rng rng(23);
    auto ivs = SemiringDesc::intervals();
    std::size_t samples = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Rect> input;
        for (std::size_t k = rng.between(1, 5); k > 0; --k) {
            Rational a = rng.rational(8, 2), c = rng.rational(8, 2);
            input.push_back(rect(SetExpr::interval(a, a + rng.rational(4, 2) + 1), SetExpr::interval(c, c + rng.rational(4, 2) + 1)));
        }
        auto out = rect_disjointify(input, ivs, ivs);
        CHECK_FALSE(first_overlap(out).has_value());
        ExtReal total;
        for (const auto& r : out.rects()) total += product_measure(MeasureDesc::length(), MeasureDesc::length(), r);
        CHECK(total == ExtReal(inclusion_exclusion_area(input)));
        for (int s = 0; s < 250; ++s, ++samples) {
            Rational px(static_cast<long>(rng.between(0, 80)), 8), py(static_cast<long>(rng.between(0, 80)), 8);
            px.canonicalize();
            py.canonicalize();
            CHECK(member(input, px, py) == member(out.rects(), px, py));
        }
    }
    CHECK(samples == 10000);
}

TEST_CASE("section examples") {
    Universe u = Universe::finite(3);
    ProductSet bc(u, u, {rect(FiniteSet{0, 1}, FiniteSet{1, 2})});
    CHECK(section(bc, Point{std::size_t{0}}) == SetExpr(FiniteSet{1, 2}));
    CHECK(section(bc, Point{std::size_t{2}}).empty());
    ProductSet none(u, u);
    for (std::size_t p = 0; p < 3; ++p) CHECK(section(none, Point{p}).empty());
    ProductSet two(u, u, {rect(FiniteSet{0}, FiniteSet{0}), rect(FiniteSet{0}, FiniteSet{2})});
    CHECK(section(two, Point{std::size_t{0}}) == SetExpr(FiniteSet{0, 2}));

    ProductSet lines(Universe::interval(), Universe::interval(), {rect(iv("0", "1"), iv("2", "3"))});
    CHECK(section(lines, Point{q("1/2")}) == iv("2", "3"));
    CHECK(section(lines, Point{q("1")}).empty());
}

TEST_CASE("section commutes with unions") {
    Universe u = Universe::finite(3);
    for (std::uint64_t a = 0; a < 512; a += 7)
        for (std::uint64_t b = 0; b < 512; b += 11) {
            auto to_pts = [](std::uint64_t bits) {
                std::vector<std::pair<std::size_t, std::size_t>> pts;
                for (std::size_t p = 0; p < 9; ++p)
                    if ((bits >> p) & 1u) pts.emplace_back(p / 3, p % 3);
                return pts;
            };
            ProductSet da = ProductSet::from_points(u, u, to_pts(a)), db = ProductSet::from_points(u, u, to_pts(b));
            std::vector<Rect> joined = da.blocks();
            joined.insert(joined.end(), db.blocks().begin(), db.blocks().end());
            ProductSet dj(u, u, joined);
            for (std::size_t p = 0; p < 3; ++p)
                CHECK(section(dj, Point{p}) == set_union(section(da, Point{p}), section(db, Point{p})));
        }
}

TEST_CASE("superlevel examples") {
    auto l = line();
    ProductSet bc(Universe::interval(), Universe::interval(), {rect(iv("0", "1"), iv("0", "2"))});
    CHECK(superlevel(bc, l, ExtReal(1)) == iv("0", "1"));
    CHECK(superlevel(bc, l, ExtReal(2)).empty());
    CHECK(superlevel(bc, l, ExtReal(3)).empty());

    auto c3 = counting(3);
    Universe u = Universe::finite(3);
    ProductSet square(u, u, {rect(FiniteSet{0, 1, 2}, FiniteSet{0, 1, 2})});
    CHECK(superlevel(square, c3, ExtReal(2)) == SetExpr(FiniteSet{0, 1, 2}));
    CHECK_THROWS_AS(superlevel(square, c3, ExtReal(0)), Error);
    CHECK_THROWS_AS(superlevel(square, c3, ExtReal::infinity()), Error);
}

TEST_CASE("superlevel on interval staircases") {
    auto l = line();
    // Sections of length 3 on [0,1), 1 on [1,2), 2 on [2,3).
    ProductSet d(Universe::interval(), Universe::interval(),
                 {rect(iv("0", "1"), iv("0", "3")), rect(iv("0", "3"), iv("5", "6")), rect(iv("2", "3"), iv("7", "8"))});
    CHECK(superlevel(d, l, x("1/2")) == iv("0", "3"));
    CHECK(superlevel(d, l, ExtReal(1)) == SetExpr(IntervalUnion({{q("0"), q("1")}, {q("2"), q("3")}})));
    CHECK(superlevel(d, l, ExtReal(2)) == iv("0", "1"));
}

TEST_CASE("superlevel is antitone") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        json inst = gen_witness_instance(seed);
        MeasureSpace sx = io::space_from_json(inst["x"]), sy = io::space_from_json(inst["y"]);
        ProductSet d = io::product_set_from_json(inst["d"], sx.universe(), sy.universe());
        std::vector<ExtReal> levels{x("1/8"), x("1/3"), x("1/2"), ExtReal(1), x("3/2"), ExtReal(2), ExtReal(4)};
        for (std::size_t i = 0; i + 1 < levels.size(); ++i)
            CHECK(superlevel(d, sy, levels[i + 1]).subset_of(superlevel(d, sy, levels[i])));
    }
}

TEST_CASE("rectangle family structure") {
    DyadicTail tail{DyadicTail::Axis::Base, iv("0", "1"), q("0"), q("1")};
    CHECK(tail.piece_interval(0) == Interval{q("0"), q("1/2")});
    CHECK(tail.piece_interval(3) == Interval{q("7/8"), q("15/16")});
    auto len = MeasureDesc::length();
    CHECK(tail.partial_measure(len, len, 9) == monus(ExtReal(1), pow2_neg(10)));
    CHECK(tail.total_measure(len, len) == ExtReal(1));
    RectFamily fam({rect(iv("5", "6"), iv("0", "1"))}, tail);
    CHECK(fam.at(0) == rect(iv("5", "6"), iv("0", "1")));
    CHECK(fam.at(1) == rect(iv("0", "1/2"), iv("0", "1")));
    CHECK(fam.truncate(2).size() == 4);
    CHECK_FALSE(first_overlap(fam).has_value());
    RectFamily clash({rect(iv("1/4", "3/4"), iv("0", "1"))}, tail);
    auto o = first_overlap(clash);
    REQUIRE(o.has_value());
    CHECK(o->second == 1);
}

TEST_CASE("blocks equality is exact") {
    Universe l = Universe::interval();
    std::vector<Rect> whole{rect(iv("0", "1"), iv("0", "1"))};
    std::vector<Rect> quads{rect(iv("0", "1/2"), iv("0", "1/2")), rect(iv("1/2", "1"), iv("0", "1/2")),
                            rect(iv("0", "1/2"), iv("1/2", "1")), rect(iv("1/2", "1"), iv("1/2", "1"))};
    CHECK(blocks_equal(l, l, quads, whole));
    quads.pop_back();
    CHECK_FALSE(blocks_equal(l, l, quads, whole));
    CHECK(blocks_subset(l, l, quads, whole));
}

TEST_CASE("product space outer measures") {
    auto px = point_masses({0, 1});
    auto py = counting(2);
    ProductSpace ps(px, py);
    REQUIRE(ps.is_finite());
    Universe ux = px.universe(), uy = py.universe();
    ProductSet row0(ux, uy, {rect(FiniteSet{0}, FiniteSet{0, 1})});
    CHECK(ps.outer(row0).is_zero());
    ProductSet point(ux, uy, {rect(FiniteSet{1}, FiniteSet{1})});
    CHECK(ps.outer(point) == ExtReal(1));
    CHECK(ps.decode(ps.encode(row0)).blocks().size() == 2);
    CHECK(ps.encode(ps.complement(row0)) == FiniteSet{2, 3});

    ProductSpace lines(line(), line());
    ProductSet l(Universe::interval(), Universe::interval(),
                 {rect(iv("0", "2"), iv("0", "2")), rect(iv("1", "3"), iv("1", "3"))});
    CHECK(lines.outer(l) == ExtReal(7));
    CHECK_THROWS_AS((void)lines.joint(), Error);
}

TEST_CASE("guillotine generator") {
    Rect unit = rect(iv("0", "1"), iv("0", "1"));
    auto one = gen_guillotine(9, 1, unit);
    REQUIRE(one.rects().size() == 1);
    CHECK(one.rects()[0] == unit);
    CHECK_THROWS_AS(gen_guillotine(9, 0, unit), Error);
    auto len = MeasureDesc::length();
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t pieces = 1 + seed % 64;
        auto fam = gen_guillotine(seed, pieces, unit, 2 + seed % 63);
        CHECK(fam.rects().size() == pieces);
        CHECK_FALSE(first_overlap(fam).has_value());
        CHECK(blocks_equal(Universe::interval(), Universe::interval(), fam.rects(), {unit}));
        ExtReal total;
        for (const auto& r : fam.rects()) total += product_measure(len, len, r);
        CHECK(total == ExtReal(1));
    }
    // Same seed, same output.
    CHECK(gen_guillotine(42, 20, unit).rects() == gen_guillotine(42, 20, unit).rects());
}

}
