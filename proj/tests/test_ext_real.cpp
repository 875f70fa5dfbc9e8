#include "helpers.hpp"

using namespace mf;
using namespace mf::test;

TEST_SUITE("ext_real") {

TEST_CASE("add") {
    CHECK(add(x("1/2"), x("1/3")) == x("5/6"));
    CHECK(add(ExtReal::infinity(), ExtReal(0)).is_infinite());
    ExtReal one = add(x("1/4"), x("3/4"));
    CHECK(one.str() == "1/1");
}

TEST_CASE("mul") {
    CHECK(mul(x("2/3"), x("3/4")) == x("1/2"));
    CHECK(mul(ExtReal(0), ExtReal::infinity()).is_zero());
    CHECK(mul(ExtReal::infinity(), ExtReal(0)).is_zero());
    CHECK(mul(ExtReal::infinity(), x("5/1")).is_infinite());
}

TEST_CASE("cmp") {
    CHECK(cmp(x("1/3"), ExtReal(Rational(2, 6))) == Order::EQ);
    CHECK(cmp(x("7/8"), ExtReal::infinity()) == Order::LT);
    CHECK(cmp(x("5/6"), x("4/5")) == Order::GT);
    CHECK(cmp(ExtReal::infinity(), ExtReal::infinity()) == Order::EQ);
}

TEST_CASE("serialization") {
    CHECK(ExtReal(3).str() == "3/1");
    CHECK(ExtReal::infinity().str() == "inf");
    CHECK(ExtReal(0).str() == "0/1");
    CHECK(x("7") == ExtReal(7));
    CHECK(x("inf").is_infinite());
}

TEST_CASE("non-canonical forms are rejected") {
    for (const char* bad : {"2/4", "0/3", "01", "-0", "+1", "1/0", "1/-2", "", "/", "1/", "a", "1.5", " 1", "-1"}) {
        INFO(bad);
        CHECK_THROWS_AS(ExtReal::parse(bad), Error);
    }
    for (const char* bad : {"2/4", "0/3", "01", "-0", "+1", "1/0"}) {
        INFO(bad);
        CHECK_THROWS_AS(parse_rational(bad), Error);
    }
    CHECK(parse_rational("-3/2") == Rational(-3, 2));
}

TEST_CASE("monus and divide") {
    CHECK(monus(x("3/4"), x("1/4")) == x("1/2"));
    CHECK(monus(ExtReal::infinity(), x("5")).is_infinite());
    CHECK_THROWS(monus(x("1/4"), x("3/4")));
    CHECK(divide(x("3/4"), x("3/2")) == x("1/2"));
    CHECK(pow2_neg(10) == ExtReal(1, 1024));
}

TEST_CASE("algebraic laws over a value pool") {
    const std::vector<ExtReal> pool{ExtReal(0), x("1/3"), x("1/2"), ExtReal(1), x("7/5"), ExtReal(4), ExtReal::infinity()};
    for (const auto& a : pool) {
        for (const auto& b : pool) {
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            for (const auto& c : pool) {
                CHECK((a + b) + c == a + (b + c));
                CHECK((a * b) * c == a * (b * c));
                if (a < b) CHECK(a + c <= b + c);
                CHECK(a * (b + c) == a * b + a * c);
            }
        }
    }
    // The stated convention on (inf, 0, finite): inf * (0 + 2) = inf, inf * 0 + inf * 2 = inf.
    CHECK(ExtReal::infinity() * (ExtReal(0) + ExtReal(2)) == ExtReal::infinity() * ExtReal(0) + ExtReal::infinity() * ExtReal(2));
    CHECK((ExtReal::infinity() * ExtReal(0)).is_zero());
}

TEST_CASE("total order") {
    const std::vector<ExtReal> pool{ExtReal(0), x("1/3"), x("2/5"), ExtReal(1), ExtReal::infinity()};
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = 0; j < pool.size(); ++j) {
            CHECK((pool[i] < pool[j]) == (i < j));
            CHECK((pool[i] == pool[j]) == (i == j));
        }
}

}
