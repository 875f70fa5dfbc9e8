#include <atomic>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "mf/harness.hpp"
#include "mf/io.hpp"
#include "mf/oracle.hpp"

namespace mf {

namespace {

const MeasureSpace& line_space() {
    static const MeasureSpace line(Universe::interval(), SemiringDesc::intervals(), MeasureDesc::length());
    return line;
}

std::vector<std::vector<std::size_t>> point_lists(const std::vector<FiniteSet>& family) {
    std::vector<std::vector<std::size_t>> out;
    for (FiniteSet s : family) out.push_back(s.members());
    return out;
}

std::string set_key(FiniteSet s) { return io::to_json(SetExpr(s)).dump(); }

Rational positive(Rng& rng, std::size_t max_num, std::size_t max_den) {
    Rational q(static_cast<long>(rng.between(1, max_num)), static_cast<long>(rng.between(1, max_den)));
    q.canonicalize();
    return q;
}

void run_semiring(RunReport& rep) {
    FamilyInstance inst = gen_explicit_family(rep.seed);
    json fam = json::array();
    for (FiniteSet s : inst.family) fam.push_back(io::to_json(SetExpr(s)));
    rep.instance = {{"construction", inst.construction}, {"universe", inst.n}, {"family", fam}};
    ValidationReport v = validate_semiring(SemiringDesc::explicit_family(inst.n, inst.family));
    oracle::SemiringVerdict o = oracle::classify_family(inst.n, point_lists(inst.family));
    rep.values = io::to_json(v);
    rep.values["oracle"] = {{"valid", o.valid}, {"is_algebra", o.algebra}, {"failed_clause", o.failed_clause}};
    rep.check("valid_agrees", v.valid == o.valid);
    rep.check("algebra_agrees", v.is_algebra == o.algebra);
    rep.check("violation_reported", v.valid || !v.violations.empty());
}

void run_outer(RunReport& rep) {
    Rng rng(rep.seed);
    const std::size_t n = rng.between(1, 4);
    MeasureSpace space = gen_random_finite_space(rng.next(), n);
    rep.instance = io::to_json(space);

    const std::vector<FiniteSet> family = space.semiring().enumerate();
    std::vector<oracle::XQ> values;
    for (FiniteSet s : family) values.push_back(oracle::parse_xq(measure_eval(space.measure(), s).str()));
    const auto brute = oracle::all_covers_outer(n, point_lists(family), values);

    std::vector<SetExpr> all;
    bool exact = true, agree = true, witnesses = true;
    json table = json::object();
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
        FiniteSet a(code);
        all.emplace_back(a);
        OuterValue ov = outer_measure(space, a);
        table[set_key(a)] = ov.value.str();
        exact = exact && ov.exactness == Exactness::Exact;
        const std::string expected = oracle::str(brute.at(a.members()));
        if (ov.value.str() != expected) {
            agree = false;
            rep.errors.push_back({{"set", set_key(a)}, {"branch_and_bound", ov.value.str()}, {"all_covers", expected}});
        }
        if (ov.witness_cover) {
            FiniteSet covered;
            for (const auto& p : ov.witness_cover->pieces) covered = covered | p.finite();
            witnesses = witnesses && a.subset_of(covered) && cover_bound(space.measure(), *ov.witness_cover) == ov.value;
        } else {
            witnesses = witnesses && ov.value.is_infinite();
        }
    }
    rep.values["outer"] = table;
    CheckReport axioms = check_outer_axioms(space, all);
    rep.values["axioms"] = io::to_json(axioms);
    rep.check("exact", exact);
    rep.check("matches_all_covers", agree);
    rep.check("witness_covers", witnesses);
    rep.check("axioms", axioms.pass);
}

Rect random_whole(Rng& rng, bool area_at_least_one) {
    Rational a = rng.rational(8, 4), c = rng.rational(8, 4);
    Rational w = positive(rng, 4, 4), h = positive(rng, 4, 4);
    if (area_at_least_one && w * h < 1) h += 1 / w;
    return {SetExpr::interval(a, a + w), SetExpr::interval(c, c + h)};
}

void run_partition_exact(RunReport& rep, std::size_t denominator_bound) {
    Rng rng(rep.seed);
    Rect whole = random_whole(rng, false);
    std::size_t pieces = rng.between(1, 64);
    RectFamily parts = gen_guillotine(rng.next(), pieces, whole, denominator_bound);
    const MeasureSpace& line = line_space();
    rep.instance = {{"x", io::to_json(line)}, {"y", io::to_json(line)}, {"whole", io::to_json(whole)},
                    {"parts", io::to_json(parts)}};
    ExtReal sum;
    for (const auto& r : parts.rects()) sum += product_measure(line.measure(), line.measure(), r);
    ExtReal product = product_measure(line.measure(), line.measure(), whole);
    rep.values = {{"pieces", parts.rects().size()}, {"sum", sum.str()}, {"product", product.str()}};
    oracle::Recheck re = oracle::recheck_exact_sum(rep.instance);
    if (!re.ok) rep.errors.push_back(re.reason);
    rep.check("piece_count", parts.rects().size() == pieces);
    rep.check("disjoint", !first_overlap(parts).has_value());
    rep.check("union_is_whole", blocks_equal(line.universe(), line.universe(), parts.rects(), {whole}));
    rep.check("sum_equals_product", sum == product);
    rep.check("oracle_sum", re.ok);
}

void run_partition_cert(RunReport& rep, std::size_t denominator_bound) {
    Rng rng(rep.seed);
    const bool staircase = rep.index % 5 == 4;
    Rect whole;
    RectFamily parts;
    if (staircase) {
        std::tie(whole, parts) = gen_dyadic_staircase(rng.next());
    } else {
        whole = random_whole(rng, true);
        parts = gen_guillotine(rng.next(), rng.between(1, 24), whole, denominator_bound);
    }
    const MeasureSpace& line = line_space();
    rep.instance = {{"kind", staircase ? "dyadic_staircase" : "guillotine_partition"},
                    {"x", io::to_json(line)}, {"y", io::to_json(line)}, {"whole", io::to_json(whole)},
                    {"parts", io::to_json(parts)}};
    const json recheck_instance = {{"x", rep.instance["x"]}, {"y", rep.instance["y"]}, {"cover", rep.instance["parts"]}};
    const ExtReal product = product_measure(line.measure(), line.measure(), whole);

    bool certified = true, verified = true, above_t = true, depth_ok = true;
    json levels = json::array();
    for (std::size_t k = 1; k <= 10; ++k) {
        const ExtReal t = monus(product, pow2_neg(k));
        json entry{{"k", k}, {"t", t.str()}};
        try {
            CertReport cert = certify_sigma_additivity(line, line, whole, parts, t);
            entry["report"] = io::to_json(cert);
            certified = certified && cert.certified;
            json wj = io::to_json(*cert.witness);
            oracle::Recheck re = oracle::recheck_witness(recheck_instance, wj);
            if (!re.ok) rep.errors.push_back({{"k", k}, {"recheck", re.reason}});
            verified = verified && re.ok;
            // t < r s < sum over F, with t read back from the report.
            above_t = above_t && oracle::parse_xq(entry["t"]) < oracle::parse_xq(wj["lhs"]);
            if (staircase) {
                // Closed form 1 - 2^-(N+1): the first sufficient depth is k.
                depth_ok = depth_ok && cert.min_sufficient_depth == k && cert.witness->tail_depth.value_or(0) >= k;
                for (const auto& tr : cert.truncations)
                    depth_ok = depth_ok && tr.partial == monus(ExtReal(1), pow2_neg(tr.count));
            }
        } catch (const CertificationError& e) {
            certified = false;
            entry["report"] = io::to_json(e.report());
            rep.errors.push_back({{"k", k}, {"kind", to_string(e.kind())}, {"message", e.what()}});
        }
        levels.push_back(std::move(entry));
    }
    rep.values = {{"product", product.str()}, {"levels", levels}};
    rep.check("certified", certified);
    rep.check("witness_recheck", verified);
    rep.check("t_below_rs", above_t);
    if (staircase) rep.check("staircase_depth", depth_ok);
}

void run_witness(RunReport& rep) {
    json inst = gen_witness_instance(rep.seed);
    rep.instance = inst;
    MeasureSpace sx = io::space_from_json(inst["x"]);
    MeasureSpace sy = io::space_from_json(inst["y"]);
    ProductSet d = io::product_set_from_json(inst["d"], sx.universe(), sy.universe());
    RectFamily cover = io::family_from_json(inst["cover"], sx.universe(), sy.universe());
    ExtReal r = io::ext_from_json(inst["r"]), s = io::ext_from_json(inst["s"]);
    Witness w = extract_witness(sx, sy, d, cover, r, s);
    json wj = io::to_json(w);
    rep.values = {{"witness", wj}};
    oracle::Recheck re = oracle::recheck_witness(inst, wj);
    if (!re.ok) rep.errors.push_back(re.reason);
    rep.check("recheck", re.ok);
    rep.check("union_exceeds_s", w.union_outer > s && w.superlevel_outer > s);
}

void run_null_section(RunReport& rep) {
    const std::size_t pair = (rep.index / 20) % 9;
    const std::size_t nx = pair / 3 + 1, ny = pair % 3 + 1;
    MeasureSpace sx = gen_point_mass_space(derive_seed(rep.seed, "x", 0), nx);
    MeasureSpace sy = gen_point_mass_space(derive_seed(rep.seed, "y", 0), ny);
    rep.instance = {{"x", io::to_json(sx)}, {"y", io::to_json(sy)}};
    std::vector<oracle::XQ> wx, wy;
    for (const auto& w : sx.measure().weights()) wx.push_back(oracle::parse_xq(w.str()));
    for (const auto& w : sy.measure().weights()) wy.push_back(oracle::parse_xq(w.str()));

    ProductSpace ps(sx, sy);
    std::size_t forward_checked = 0, converse_checked = 0, converse_skipped = 0, oracle_mismatch = 0;
    json counterexamples = json::array();
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (nx * ny)); ++code) {
        ProductSet d = ps.decode(FiniteSet(code));
        std::vector<std::pair<std::size_t, std::size_t>> pts;
        for (std::size_t p : FiniteSet(code).members()) pts.emplace_back(p / ny, p % ny);
        const oracle::XQ ref_outer = oracle::point_mass_product_outer(wx, wy, pts);
        const oracle::XQ ref_exceptional = oracle::point_mass_exceptional(wx, wy, pts);
        const ExtReal outer_d = ps.outer(d);
        if (outer_d.str() != oracle::str(ref_outer)) ++oracle_mismatch;

        auto counterexample = [&](const char* direction, const std::string& why) {
            if (counterexamples.size() < 8) counterexamples.push_back({{"D", code}, {"direction", direction}, {"why", why}});
        };
        if (outer_d.is_zero()) {
            ++forward_checked;
            NullSectionVerdict v = null_section_forward(ps, d);
            if (!v.holds) counterexample("forward", "exceptional set has outer measure " + v.exceptional_outer.str());
            if (v.exceptional_outer.str() != oracle::str(ref_exceptional)) ++oracle_mismatch;
        }
        try {
            NullSectionVerdict v = null_section_converse(ps, d);
            ++converse_checked;
            if (!v.holds) counterexample("converse", "(mu x mu)*(D) = " + v.values.at("product_outer_D").str());
            if (!(ref_exceptional == oracle::XQ{}) || !(ref_outer == oracle::XQ{})) ++oracle_mismatch;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::PreconditionFailed) throw;
            ++converse_skipped;
            // The only precondition that can fail here is null sections.
            if (ref_exceptional == oracle::XQ{}) ++oracle_mismatch;
        }
    }
    rep.values = {{"sets", std::uint64_t{1} << (nx * ny)},
                  {"forward_checked", forward_checked},
                  {"converse_checked", converse_checked},
                  {"converse_skipped", converse_skipped},
                  {"oracle_mismatches", oracle_mismatch},
                  {"counterexamples", counterexamples}};
    rep.check("no_counterexample", counterexamples.empty());
    rep.check("oracle_agrees", oracle_mismatch == 0);
}

MeasureSpace tabulate(const MeasureSpace& space) {
    std::vector<FiniteSet> family = space.semiring().enumerate();
    std::vector<std::pair<FiniteSet, ExtReal>> table;
    for (FiniteSet s : family) table.emplace_back(s, measure_eval(space.measure(), s));
    return MeasureSpace(space.universe(), SemiringDesc::explicit_family(space.universe().size(), std::move(family)),
                        MeasureDesc::tabulated(std::move(table)));
}

void run_negative(RunReport& rep) {
    const bool corrupted = rep.index % 2 == 0;
    // Both members of a pair share the base; only the corrupted one is perturbed.
    Rng rng(rep.seed);
    const std::size_t n = rng.between(2, 4);
    MeasureSpace base = gen_point_mass_space(rng.next(), n, 8);
    const ExtReal magnitude(positive(rng, 3, 8));
    MeasureSpace space = corrupted ? gen_corrupted(rng.next(), base, magnitude) : tabulate(base);
    rep.expected_negative = corrupted;
    rep.instance = {{"space", io::to_json(space)}, {"corrupted", corrupted}};
    if (corrupted) rep.instance["magnitude"] = magnitude.str();

    bool flagged = false;
    std::size_t additivity_checks = 0;
    const auto family = space.semiring().family();
    const MeasureDesc& m = space.measure();
    for (FiniteSet a : family) {
        for (FiniteSet b : family) {
            if (a.empty() || b.empty() || !(a < b) || !(a & b).empty() || !space.semiring().index_of(a | b)) continue;
            ++additivity_checks;
            CheckReport cr = check_finite_additivity(m, a | b, {a, b});
            if (!cr.pass) {
                if (!flagged)
                    rep.errors.push_back({{"kind", "finite_additivity"}, {"report", io::to_json(cr)}});
                flagged = true;
            }
        }
    }

    // X x {pt} split into singletons.
    MeasureSpace pt(Universe::finite(1), SemiringDesc::power_set(1), MeasureDesc::point_mass({ExtReal(1)}));
    Rect whole{FiniteSet::full(n), FiniteSet{0}};
    std::vector<Rect> singles;
    for (std::size_t x = 0; x < n; ++x) singles.push_back({FiniteSet{x}, FiniteSet{0}});
    const ExtReal product = product_measure(m, pt.measure(), whole);
    bool certified = false;
    if (product.is_positive() && product.is_finite()) {
        try {
            CertReport cert = certify_sigma_additivity(space, pt, whole, RectFamily(singles), product * ExtReal(1023, 1024));
            certified = cert.certified;
        } catch (const CertificationError& e) {
            rep.errors.push_back({{"kind", to_string(e.kind())}, {"message", e.what()}, {"report", io::to_json(e.report())}});
            flagged = true;
        }
    }
    rep.values = {{"additivity_checks", additivity_checks}, {"certified", certified}, {"flagged", flagged}};
    rep.check(corrupted ? "corruption_flagged" : "control_clean", flagged == corrupted);
}

}  // namespace

void RunReport::check(const std::string& name, bool ok) {
    checks[name] = ok;
    pass = pass && ok;
}

json RunReport::to_json(bool with_time) const {
    json out{{"suite", suite},
             {"index", index},
             {"seed", seed},
             {"instance", instance},
             {"checks", checks},
             {"values", values},
             {"errors", errors},
             {"expected_negative", expected_negative},
             {"pass", pass}};
    if (with_time) out["wall_ms"] = wall_ms;
    return out;
}

const std::vector<SuiteSpec>& default_suites() {
    static const std::vector<SuiteSpec> suites{{"semiring", 1000},  {"outer", 50},         {"partition_exact", 500},
                                               {"partition_cert", 100}, {"witness", 1000},    {"null_section", 180},
                                               {"negative", 400}};
    return suites;
}

SuiteConfig parse_suite_config(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "suite config must be a JSON object");
    SuiteConfig c;
    auto natural = [&](const char* key, auto& out) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_number_unsigned()) throw Error(ErrorKind::Parse, std::string(key) + " must be a nonnegative integer");
        out = j.at(key).get<std::remove_reference_t<decltype(out)>>();
    };
    natural("seed", c.seed);
    natural("threads", c.threads);
    natural("denominator_bound", c.denominator_bound);
    if (c.denominator_bound < 2) throw Error(ErrorKind::Parse, "denominator_bound must be at least 2");
    if (!j.contains("suites")) {
        c.suites = default_suites();
        return c;
    }
    if (!j.at("suites").is_array()) throw Error(ErrorKind::Parse, "suites must be a list");
    for (const auto& s : j.at("suites")) {
        SuiteSpec spec;
        if (s.is_string()) {
            spec.name = s.get<std::string>();
        } else if (s.is_object() && s.contains("name") && s.at("name").is_string()) {
            spec.name = s.at("name").get<std::string>();
        } else {
            throw Error(ErrorKind::Parse, "a suite entry must be a name or {\"name\", \"count\"}");
        }
        auto known = std::find_if(default_suites().begin(), default_suites().end(),
                                  [&](const SuiteSpec& d) { return d.name == spec.name; });
        if (known == default_suites().end()) throw Error(ErrorKind::Parse, "unknown suite '" + spec.name + "'");
        spec.count = known->count;
        if (s.is_object() && s.contains("count")) {
            if (!s.at("count").is_number_unsigned()) throw Error(ErrorKind::Parse, "count must be a nonnegative integer");
            spec.count = s.at("count").get<std::size_t>();
        }
        c.suites.push_back(spec);
    }
    return c;
}

RunReport run_instance(const std::string& suite, std::uint64_t config_seed, std::size_t index,
                       std::size_t denominator_bound) {
    RunReport rep;
    rep.suite = suite;
    rep.index = index;
    // Negative instances come in (corrupted, control) pairs over one base.
    rep.seed = derive_seed(config_seed, suite, suite == "negative" ? index / 2 : index);
    const auto start = std::chrono::steady_clock::now();
    try {
        if (suite == "semiring") run_semiring(rep);
        else if (suite == "outer") run_outer(rep);
        else if (suite == "partition_exact") run_partition_exact(rep, denominator_bound);
        else if (suite == "partition_cert") run_partition_cert(rep, denominator_bound);
        else if (suite == "witness") run_witness(rep);
        else if (suite == "null_section") run_null_section(rep);
        else if (suite == "negative") run_negative(rep);
        else throw Error(ErrorKind::Parse, "unknown suite '" + suite + "'");
    } catch (const Error& e) {
        rep.errors.push_back({{"kind", to_string(e.kind())}, {"message", e.what()}, {"detail", e.detail()}});
        rep.check("completed", false);
    } catch (const std::exception& e) {
        rep.errors.push_back({{"kind", "internal"}, {"message", e.what()}});
        rep.check("completed", false);
    }
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

bool run_suite(const SuiteConfig& config, const std::function<void(const RunReport&)>& emit) {
    bool all_pass = true;
    for (const auto& spec : config.suites) {
        const std::size_t workers = std::max<std::size_t>(1, std::min(config.threads, spec.count));
        if (workers == 1) {
            for (std::size_t i = 0; i < spec.count; ++i) {
                RunReport rep = run_instance(spec.name, config.seed, i, config.denominator_bound);
                all_pass = all_pass && rep.pass;
                emit(rep);
            }
            continue;
        }
        // Workers fill slots; this thread emits them in index order.
        std::vector<std::optional<RunReport>> slots(spec.count);
        std::atomic<std::size_t> next{0};
        std::mutex mu;
        std::condition_variable ready;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < spec.count;) {
                    RunReport rep = run_instance(spec.name, config.seed, i, config.denominator_bound);
                    std::lock_guard lock(mu);
                    slots[i] = std::move(rep);
                    ready.notify_all();
                }
            });
        }
        for (std::size_t i = 0; i < spec.count; ++i) {
            std::unique_lock lock(mu);
            ready.wait(lock, [&] { return slots[i].has_value(); });
            RunReport rep = std::move(*slots[i]);
            slots[i].reset();
            lock.unlock();
            all_pass = all_pass && rep.pass;
            emit(rep);
        }
        for (auto& t : pool) t.join();
    }
    return all_pass;
}

}  // namespace mf
