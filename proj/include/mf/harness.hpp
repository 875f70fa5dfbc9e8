#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "mf/product.hpp"
#include "mf/spaces.hpp"
#include "mf/theorem.hpp"

namespace mf {

using nlohmann::json;

/// Seeded source for every generator. Draws are taken from mt19937_64 with
/// plain modular reduction so output does not depend on the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    /// Uniform-ish in [0, n).
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    /// In [lo, hi].
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    bool chance(std::size_t num, std::size_t den) { return below(den) < num; }
    /// p/q with 1 <= q <= max_den and 0 <= p <= max_num.
    Rational rational(std::size_t max_num, std::size_t max_den);

private:
    std::mt19937_64 engine_;
};

/// Reproducible stream seed for item `index` of a named stream.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& stream, std::uint64_t index);

enum class GenKind { GuillotinePartition, RandomFiniteSpace, DyadicStaircase, CorruptedMeasure, RandomRectFamily };

std::optional<GenKind> parse_gen_kind(const std::string& name);
std::string to_string(GenKind kind);

struct GenSpec {
    GenKind kind = GenKind::GuillotinePartition;
    std::uint64_t seed = 0;
    std::size_t pieces = 8;
    std::size_t universe_size = 3;
    ExtReal magnitude = ExtReal(1);
    std::size_t denominator_bound = 64;
};

/// The instance a GenSpec describes, in the input format of the matching
/// CLI command.
json generate(const GenSpec& spec);

/// Recursive axis-aligned splits of an interval x interval rectangle at cuts
/// lo + (hi - lo) k / q, 2 <= q <= denominator_bound.
RectFamily gen_guillotine(std::uint64_t seed, std::size_t pieces, const Rect& whole, std::size_t denominator_bound = 64);

/// One non-empty assignment moved by +-magnitude (floored at 0; + when the
/// value is 0). PointMass bases are tabulated over their family first.
MeasureSpace gen_corrupted(std::uint64_t seed, const MeasureSpace& base, const ExtReal& magnitude);

/// Explicit family on n points from a mix of semiring constructions and
/// mutations; `construction` names the recipe.
struct FamilyInstance {
    std::size_t n = 0;
    std::vector<FiniteSet> family;
    std::string construction;
};
FamilyInstance gen_explicit_family(std::uint64_t seed, std::size_t max_points = 6);

/// Finite measure space on n points: a point-mass measure on a valid explicit
/// semiring or on the power set, or arbitrary tabulated values (with zeros
/// and occasional inf) on a family containing the empty set.
MeasureSpace gen_random_finite_space(std::uint64_t seed, std::size_t n);

/// Point masses (some zero) on the power set of n points.
MeasureSpace gen_point_mass_space(std::uint64_t seed, std::size_t n, std::size_t max_den = 6);

/// Staircase whole [a, a+w) x [c, c + 1/w) (product 1) with a dyadic tail along
/// the base and no explicit rectangles.
std::pair<Rect, RectFamily> gen_dyadic_staircase(std::uint64_t seed);

/// Theorem instance {"x", "y", "d", "cover", "r", "s"} meeting the preconditions.
json gen_witness_instance(std::uint64_t seed);

// ---------------------------------------------------------------------------
// Suites

/// One instance of a suite. `checks` maps check names to pass flags; `wall_ms`
/// is the only field excluded from determinism comparisons.
struct RunReport {
    std::string suite;
    std::size_t index = 0;
    std::uint64_t seed = 0;
    json instance;
    json checks = json::object();
    json values = json::object();
    json errors = json::array();
    bool expected_negative = false;
    bool pass = true;
    double wall_ms = 0;

    void check(const std::string& name, bool ok);
    [[nodiscard]] json to_json(bool with_time = true) const;
};

struct SuiteSpec {
    std::string name;
    std::size_t count = 0;
};

struct SuiteConfig {
    std::uint64_t seed = 20260101;
    std::size_t threads = 1;
    std::size_t denominator_bound = 64;
    std::vector<SuiteSpec> suites;
};

/// Suite names in run order with their default instance counts.
const std::vector<SuiteSpec>& default_suites();
SuiteConfig parse_suite_config(const json& j);

/// Runs every instance, calling `emit` in instance order. Returns true when
/// every report passes.
bool run_suite(const SuiteConfig& config, const std::function<void(const RunReport&)>& emit);

/// A single suite instance; exposed for tests.
RunReport run_instance(const std::string& suite, std::uint64_t config_seed, std::size_t index,
                       std::size_t denominator_bound = 64);

}  // namespace mf
