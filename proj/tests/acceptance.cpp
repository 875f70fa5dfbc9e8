// Runs the acceptance suites at their full sizes and time limits and prints
// one PASS/FAIL line per criterion. Exit status 0 only when all pass.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "mf/harness.hpp"

using namespace mf;

namespace {

struct Criterion {
    int number;
    std::string suite;
    std::size_t count;
    double limit_s;
    // Check names every report of the suite must carry.
    std::vector<std::string> required;
};

struct Outcome {
    std::vector<std::string> lines;
    std::size_t passed = 0;
    std::size_t negatives = 0;
    std::size_t negatives_flagged = 0;
    std::size_t controls = 0;
    std::size_t controls_clean = 0;
    bool checks_present = true;
    std::string first_failure;
    double seconds = 0;
};

Outcome run(const Criterion& c, std::uint64_t seed) {
    SuiteConfig cfg;
    cfg.seed = seed;
    cfg.suites = {{c.suite, c.count}};
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    run_suite(cfg, [&](const RunReport& r) {
        out.lines.push_back(r.to_json(false).dump());
        if (r.pass) ++out.passed;
        else if (out.first_failure.empty()) out.first_failure = out.lines.back();
        for (const auto& name : c.required)
            if (!r.checks.contains(name)) out.checks_present = false;
        if (r.expected_negative) {
            ++out.negatives;
            if (r.pass) ++out.negatives_flagged;
        } else {
            ++out.controls;
            if (r.pass) ++out.controls_clean;
        }
    });
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : SuiteConfig{}.seed;
    const std::vector<Criterion> criteria{
        {1, "semiring", 1000, 10, {"valid_agrees", "algebra_agrees"}},
        {2, "outer", 50, 30, {"exact", "matches_all_covers", "axioms"}},
        {3, "partition_exact", 500, 20, {"sum_equals_product", "oracle_sum"}},
        {4, "partition_cert", 100, 30, {"certified", "witness_recheck", "t_below_rs"}},
        {5, "witness", 1000, 60, {"recheck"}},
        {6, "null_section", 180, 120, {"no_counterexample", "oracle_agrees"}},
        // 200 corrupted measures and their 200 uncorrupted controls, interleaved.
        {7, "negative", 400, 30, {}},
    };

    bool all = true;
    std::vector<std::vector<std::string>> first_run;
    for (const Criterion& c : criteria) {
        Outcome o = run(c, seed);
        bool ok = o.passed == c.count && o.lines.size() == c.count && o.checks_present && o.seconds < c.limit_s;
        std::string extra;
        if (c.suite == "negative") {
            ok = ok && o.negatives == c.count / 2 && o.negatives_flagged == o.negatives && o.controls_clean == o.controls;
            extra = "  flagged " + std::to_string(o.negatives_flagged) + "/" + std::to_string(o.negatives) +
                    ", clean controls " + std::to_string(o.controls_clean) + "/" + std::to_string(o.controls);
        }
        std::printf("%s  criterion %d  %-15s  %zu/%zu passed  %.2f s (limit %.0f s)%s\n", ok ? "PASS" : "FAIL", c.number,
                    c.suite.c_str(), o.passed, c.count, o.seconds, c.limit_s, extra.c_str());
        if (!o.checks_present) std::printf("      missing required checks in some report\n");
        if (!o.first_failure.empty()) std::printf("      first failure: %s\n", o.first_failure.substr(0, 2000).c_str());
        all = all && ok;
        first_run.push_back(std::move(o.lines));
    }

    std::size_t mismatched = 0, compared = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome again = run(criteria[i], seed);
        const auto& a = first_run[i];
        const auto& b = again.lines;
        if (a.size() != b.size()) ++mismatched;
        for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k, ++compared)
            if (a[k] != b[k]) ++mismatched;
    }
    const bool det = mismatched == 0 && compared > 0;
    std::printf("%s  criterion 8  determinism  %zu reports compared, %zu differ\n", det ? "PASS" : "FAIL", compared,
                mismatched);
    all = all && det;
    std::fflush(stdout);
    return all ? 0 : 1;
}
