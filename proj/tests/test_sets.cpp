#include <algorithm>

#include "helpers.hpp"

using namespace mf;
using namespace mf::test;

TEST_SUITE("sets") {

TEST_CASE("set_intersect examples") {
    CHECK(set_intersect(FiniteSet{0, 1, 2}, FiniteSet{1, 2, 3}) == SetExpr(FiniteSet{1, 2}));
    CHECK(set_intersect(iv("0", "1"), iv("1/2", "2")) == iv("1/2", "1"));
    CHECK(set_intersect(FiniteSet{0, 4}, FiniteSet{}).empty());
    CHECK(set_intersect(iv("0", "1"), SetExpr(IntervalUnion{})).empty());
}

TEST_CASE("mixing universes is an error") {
    try {
        (void)set_intersect(FiniteSet{0}, iv("0", "1"));
        FAIL("expected UniverseMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UniverseMismatch);
    }
}

TEST_CASE("interval canonical form") {
    IntervalUnion u({{q("2"), q("3")}, {q("0"), q("1")}, {q("1"), q("3/2")}, {q("5"), q("5")}});
    REQUIRE(u.pieces().size() == 2);
    CHECK(u.pieces()[0] == Interval{q("0"), q("3/2")});
    CHECK(u.pieces()[1] == Interval{q("2"), q("3")});
    CHECK(u.length() == q("5/2"));
    CHECK(u.contains(q("1")));
    CHECK_FALSE(u.contains(q("3/2")));
    CHECK_FALSE(u.contains(q("3")));
    // Degenerate [a, a) is the empty set.
    CHECK(iv("1", "1").empty());
}

TEST_CASE("canonicalization is idempotent and order-insensitive") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Interval> pieces;
        std::size_t k = rng.between(0, 6);
        for (std::size_t i = 0; i < k; ++i) {
            Rational a = rng.rational(8, 3), b = a + rng.rational(3, 2);
            pieces.push_back({a, b});
        }
        IntervalUnion c(pieces);
        CHECK(IntervalUnion(c.pieces()) == c);
        std::vector<Interval> shuffled = pieces;
        for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
        CHECK(IntervalUnion(shuffled) == c);
        for (std::size_t i = 1; i < c.pieces().size(); ++i) CHECK(c.pieces()[i - 1].hi < c.pieces()[i].lo);
    }
}

TEST_CASE("interval set algebra against point sampling") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        auto random_union = [&] {
            std::vector<Interval> p;
            for (std::size_t i = rng.between(0, 4); i > 0; --i) {
                Rational a = rng.rational(12, 4);
                p.push_back({a, a + rng.rational(4, 4)});
            }
            return IntervalUnion(p);
        };
        IntervalUnion a = random_union(), b = random_union();
        IntervalUnion meet = a & b, join = a | b, diff = a - b;
        for (int s = 0; s < 60; ++s) {
            Rational p(static_cast<long>(rng.between(0, 160)), 8);
            p.canonicalize();
            CHECK(meet.contains(p) == (a.contains(p) && b.contains(p)));
            CHECK(join.contains(p) == (a.contains(p) || b.contains(p)));
            CHECK(diff.contains(p) == (a.contains(p) && !b.contains(p)));
        }
        CHECK((a - b).length() + (a & b).length() == a.length());
    }
}

TEST_CASE("finite sets") {
    FiniteSet s{3, 0, 5};
    CHECK(s.members() == std::vector<std::size_t>{0, 3, 5});
    CHECK(s.size() == 3);
    CHECK(s.lowest() == 0);
    CHECK(s.extent() == 6);
    CHECK(FiniteSet::full(3) == FiniteSet{0, 1, 2});
    CHECK(FiniteSet::full(64).size() == 64);
    CHECK((FiniteSet{0, 1} - FiniteSet{1, 2}) == FiniteSet{0});
    CHECK(FiniteSet{1}.subset_of(FiniteSet{0, 1}));
}

TEST_CASE("universe") {
    CHECK_THROWS_AS(Universe::finite(0), Error);
    CHECK_THROWS_AS(Universe::finite(65), Error);
    Universe u = Universe::finite(3);
    CHECK(u.admits(SetExpr(FiniteSet{0, 2})));
    CHECK_FALSE(u.admits(SetExpr(FiniteSet{3})));
    CHECK_FALSE(u.admits(iv("0", "1")));
    CHECK(Universe::interval().admits(iv("0", "1")));
}

}
