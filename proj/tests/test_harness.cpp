#include <set>

#include "helpers.hpp"

using namespace mf;
using namespace mf::test;
using nlohmann::json;

TEST_SUITE("harness") {

TEST_CASE("rng and seeds are reproducible") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    CHECK(derive_seed(1, "outer", 0) == derive_seed(1, "outer", 0));
    std::set<std::uint64_t> seen;
    for (const char* stream : {"outer", "semiring", "witness"})
        for (std::uint64_t i = 0; i < 50; ++i) seen.insert(derive_seed(1, stream, i));
    CHECK(seen.size() == 150);
    Rng r(3);
    for (int i = 0; i < 200; ++i) {
        Rational v = r.rational(5, 7);
        CHECK(v >= 0);
        CHECK(v <= 5);
    }
}

TEST_CASE("generate is a function of its spec") {
    for (GenKind k : {GenKind::GuillotinePartition, GenKind::RandomFiniteSpace, GenKind::DyadicStaircase,
                      GenKind::CorruptedMeasure, GenKind::RandomRectFamily}) {
        CHECK(parse_gen_kind(to_string(k)) == k);
        for (std::uint64_t seed : {0u, 1u, 77u}) {
            GenSpec spec;
            spec.kind = k;
            spec.seed = seed;
            CHECK(generate(spec).dump() == generate(spec).dump());
        }
    }
    CHECK_FALSE(parse_gen_kind("nonsense").has_value());
}

TEST_CASE("guillotine with three pieces") {
    Rect unit = rect(iv("0", "1"), iv("0", "1"));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RectFamily f = gen_guillotine(seed, 3, unit, 8);
        REQUIRE(f.rects().size() == 3);
        CHECK_FALSE(first_overlap(f).has_value());
        ExtReal area;
        for (const Rect& r : f.rects()) {
            area += product_measure(MeasureDesc::length(), MeasureDesc::length(), r);
            for (const SetExpr* side : {&r.base, &r.side})
                for (const auto& p : side->intervals().pieces()) {
                    CHECK(p.lo.get_den() <= 8 * 8);
                    CHECK(p.hi.get_den() <= 8 * 8);
                }
        }
        CHECK(area == ExtReal(1));
        CHECK(blocks_equal(Universe::interval(), Universe::interval(), f.rects(), {unit}));
    }
    CHECK_THROWS_AS(gen_guillotine(0, 0, unit), Error);
}

TEST_CASE("corruption with magnitude zero is the identity") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        MeasureSpace base = gen_random_finite_space(seed, 3);
        MeasureSpace same = gen_corrupted(seed, base, ExtReal(0));
        CHECK(io::to_json(same) == io::to_json(base));
    }
}

TEST_CASE("corruption moves exactly one assignment") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        MeasureSpace base = gen_point_mass_space(seed, 3);
        MeasureSpace bad = gen_corrupted(seed, base, ExtReal(1, 4));
        std::size_t moved = 0;
        for (const auto& [s, v] : bad.measure().assignments())
            if (v != measure_eval(base.measure(), s)) ++moved;
        CHECK(moved == 1);
    }
}

TEST_CASE("generated explicit families are deterministic and mostly valid") {
    std::size_t valid = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        FamilyInstance a = gen_explicit_family(seed), b = gen_explicit_family(seed);
        CHECK(a.family == b.family);
        CHECK(a.construction == b.construction);
        if (validate_semiring(SemiringDesc::explicit_family(a.n, a.family)).valid) ++valid;
    }
    CHECK(valid > 50);
    CHECK(valid < 200);
}

TEST_CASE("witness instances meet their preconditions") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        json inst = gen_witness_instance(seed);
        MeasureSpace sx = io::space_from_json(inst["x"]), sy = io::space_from_json(inst["y"]);
        ProductSet d = io::product_set_from_json(inst["d"], sx.universe(), sy.universe());
        RectFamily cover = io::family_from_json(inst["cover"], sx.universe(), sy.universe());
        ExtReal r = io::ext_from_json(inst["r"]), s = io::ext_from_json(inst["s"]);
        CHECK(s < outer_value(sx, superlevel(d, sy, r)));
        CHECK(blocks_subset(sx.universe(), sy.universe(), d.blocks(), cover.hull_blocks()));
    }
}

TEST_CASE("suite configuration") {
    SuiteConfig all = parse_suite_config(json::object());
    CHECK(all.suites.size() == default_suites().size());
    SuiteConfig some = parse_suite_config(json::parse(R"({"seed": 5, "suites": ["outer", {"name": "witness", "count": 3}]})"));
    CHECK(some.seed == 5);
    REQUIRE(some.suites.size() == 2);
    CHECK(some.suites[1].count == 3);
    CHECK_THROWS_AS(parse_suite_config(json::parse(R"({"suites": ["bogus"]})")), Error);

    SuiteConfig none = parse_suite_config(json::parse(R"({"suites": []})"));
    std::size_t emitted = 0;
    CHECK(run_suite(none, [&](const RunReport&) { ++emitted; }));
    CHECK(emitted == 0);
}

TEST_CASE("suite runs are reproducible and ordered") {
    SuiteConfig cfg = parse_suite_config(json::parse(R"({"seed": 9, "suites": [{"name": "negative", "count": 12},
                                                                                {"name": "witness", "count": 12}]})"));
    std::vector<std::string> first, second;
    CHECK(run_suite(cfg, [&](const RunReport& r) { first.push_back(r.to_json(false).dump()); }));
    cfg.threads = 3;
    CHECK(run_suite(cfg, [&](const RunReport& r) { second.push_back(r.to_json(false).dump()); }));
    CHECK(first == second);
    REQUIRE(first.size() == 24);
    for (std::size_t i = 0; i < 12; ++i) {
        json j = json::parse(first[i]);
        CHECK(j["index"] == i);
        CHECK(j["expected_negative"] == (i % 2 == 0));
    }
}

}
