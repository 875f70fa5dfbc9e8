// mf: command-line front end. Inputs are JSON files ("-" for stdin), outputs
// are JSON on stdout; --pretty adds a short summary on stderr.
//
// Exit status: 0 everything checked passes, 1 a verified failure was found,
// 2 a precondition or parse error stopped the check.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mf/harness.hpp"
#include "mf/io.hpp"

namespace {

using namespace mf;
using nlohmann::json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

json read_json(const std::string& path) {
    std::stringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
        buf << in.rdbuf();
    }
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
    }
}

json error_json(const Error& e) {
    json out{{"kind", to_string(e.kind())}, {"message", e.what()}};
    if (!e.detail().is_null()) out["detail"] = e.detail();
    return out;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

struct Options {
    std::string file = "-";
    bool pretty = false;
};

int cmd_validate(const Options& o) {
    json in = read_json(o.file);
    Universe u = io::universe_from_json(in.at("universe"));
    ValidationReport rep = validate_semiring(io::semiring_from_json(in.at("semiring"), u));
    print(io::to_json(rep));
    if (o.pretty) {
        std::cerr << (rep.valid ? "semiring: valid" : "semiring: INVALID") << ", algebra: " << (rep.is_algebra ? "yes" : "no")
                  << ", pairs checked: " << rep.pairs_checked << '\n';
        for (const auto& v : rep.violations) std::cerr << "  " << v.clause << ": " << v.detail << '\n';
    }
    return rep.valid ? kPass : kFail;
}

int cmd_outer(const Options& o, const std::string& target) {
    json in = read_json(o.file);
    MeasureSpace space = io::space_from_json(in);
    json tj;
    if (!target.empty()) {
        try {
            tj = json::parse(target);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::Parse, std::string("invalid --target: ") + e.what());
        }
    } else if (in.contains("target")) {
        tj = in.at("target");
    } else {
        throw Error(ErrorKind::Parse, "no target set: pass --target or a \"target\" field");
    }
    OuterValue v = outer_measure(space, io::set_from_json(tj, space.universe()));
    print(io::to_json(v));
    if (o.pretty)
        std::cerr << "mu*(" << tj.dump() << ") = " << v.value.str() << " ("
                  << (v.exactness == Exactness::Exact ? "exact" : "upper bound") << ", "
                  << (v.witness_cover ? std::to_string(v.witness_cover->pieces.size()) + " cover pieces" : "no cover") << ")\n";
    return kPass;
}

int cmd_certify(const Options& o, const std::string& t_arg) {
    json in = read_json(o.file);
    MeasureSpace sx = io::space_from_json(in.at("x"));
    MeasureSpace sy = io::space_from_json(in.at("y"));
    Rect whole = io::rect_from_json(in.at("whole"), sx.universe(), sy.universe());
    RectFamily parts = io::family_from_json(in.at("parts"), sx.universe(), sy.universe());
    ExtReal t;
    if (!t_arg.empty()) {
        t = ExtReal(parse_rational(t_arg));
    } else if (in.contains("t")) {
        t = io::ext_from_json(in.at("t"));
    } else {
        ExtReal product = product_measure(sx.measure(), sy.measure(), whole);
        if (!product.is_finite()) throw Error(ErrorKind::PreconditionFailed, "the product is infinite; pass --t");
        t = product * ExtReal(1023, 1024);
    }
    try {
        CertReport rep = certify_sigma_additivity(sx, sy, whole, parts, t);
        print(io::to_json(rep));
        if (o.pretty)
            std::cerr << "certified: product " << rep.product.str() << ", t = " << t.str() << ", |F| = " << rep.witness->F.size()
                      << ", witness sum " << rep.witness->rhs.str() << '\n';
        return kPass;
    } catch (const CertificationError& e) {
        print(io::to_json(e.report()));
        if (o.pretty) std::cerr << "NOT certified: " << e.what() << '\n';
        return kFail;
    }
}

int cmd_witness(const Options& o, const std::string& r_arg, const std::string& s_arg) {
    json in = read_json(o.file);
    MeasureSpace sx = io::space_from_json(in.at("x"));
    MeasureSpace sy = io::space_from_json(in.at("y"));
    ProductSet d = io::product_set_from_json(in.at("d"), sx.universe(), sy.universe());
    RectFamily cover = io::family_from_json(in.at("cover"), sx.universe(), sy.universe());
    auto level = [&](const std::string& arg, const char* key) {
        if (!arg.empty()) return ExtReal(parse_rational(arg));
        if (in.contains(key)) return io::ext_from_json(in.at(key));
        throw Error(ErrorKind::Parse, std::string("no level ") + key + ": pass --" + key);
    };
    ExtReal r = level(r_arg, "r"), s = level(s_arg, "s");
    Witness w = extract_witness(sx, sy, d, cover, r, s);
    print(io::to_json(w));
    if (o.pretty)
        std::cerr << "witness: |M| = " << w.per_point.size() << ", |F| = " << w.F.size() << ", r s = " << w.lhs.str() << " < "
                  << w.rhs.str() << '\n';
    return kPass;
}

int cmd_null_section(const Options& o, const std::string& direction) {
    json in = read_json(o.file);
    MeasureSpace sx = io::space_from_json(in.at("x"));
    MeasureSpace sy = io::space_from_json(in.at("y"));
    ProductSet d = io::product_set_from_json(in.at("d"), sx.universe(), sy.universe());
    ProductSpace ps(sx, sy);
    json out = json::object();
    bool any_ran = false, all_hold = true;
    std::optional<Error> last_error;
    auto run = [&](const char* name, auto check) {
        try {
            NullSectionVerdict v = check(ps, d, TheoremConfig{});
            out[name] = io::to_json(v);
            any_ran = true;
            all_hold = all_hold && v.holds;
            if (o.pretty)
                std::cerr << name << ": " << (v.holds ? "holds" : "FAILS") << ", mu*_X(exceptional) = " << v.exceptional_outer.str()
                          << '\n';
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::PreconditionFailed) throw;
            out[name] = {{"applicable", false}, {"error", error_json(e)}};
            last_error = e;
            if (o.pretty) std::cerr << name << ": not applicable: " << e.what() << '\n';
        }
    };
    if (direction == "forward" || direction == "both")
        run("forward", [](const ProductSpace& p, const ProductSet& s, const TheoremConfig& c) { return null_section_forward(p, s, c); });
    if (direction == "converse" || direction == "both")
        run("converse", [](const ProductSpace& p, const ProductSet& s, const TheoremConfig& c) { return null_section_converse(p, s, c); });
    print(out);
    if (!any_ran) return kError;
    return all_hold ? kPass : kFail;
}

int cmd_gen(const std::string& kind_name, std::uint64_t seed, std::size_t pieces, std::size_t size,
            const std::string& magnitude, std::size_t denominator_bound) {
    auto kind = parse_gen_kind(kind_name);
    if (!kind) throw Error(ErrorKind::Parse, "unknown generator kind '" + kind_name + "'");
    if (size == 0 || size > 6) throw Error(ErrorKind::Parse, "--size must be in 1..6");
    GenSpec spec;
    spec.kind = *kind;
    spec.seed = seed;
    spec.pieces = pieces;
    spec.universe_size = size;
    spec.magnitude = ExtReal::parse(magnitude);
    spec.denominator_bound = denominator_bound;
    print(generate(spec));
    return kPass;
}

int cmd_suite(const Options& o, bool no_time) {
    SuiteConfig config = parse_suite_config(read_json(o.file));
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
    std::map<std::string, double> wall;
    bool ok = run_suite(config, [&](const RunReport& rep) {
        std::cout << rep.to_json(!no_time).dump() << '\n';
        auto& [passed, total] = tally[rep.suite];
        ++total;
        if (rep.pass) ++passed;
        wall[rep.suite] += rep.wall_ms;
    });
    std::cout.flush();
    if (o.pretty)
        for (const auto& spec : config.suites) {
            auto [passed, total] = tally[spec.name];
            std::cerr << spec.name << ": " << passed << "/" << total << " pass, " << static_cast<long>(wall[spec.name])
                      << " ms\n";
        }
    return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact measure-space checks: semirings, outer measures, products and their certificates"};
    app.require_subcommand(1);
    Options opt;
    app.add_flag("--pretty", opt.pretty, "Print a human-readable summary on stderr");

    auto* validate = app.add_subcommand("validate-semiring", "Check the semiring axioms of a family");
    validate->add_option("file", opt.file, "Space or semiring JSON (- for stdin)");

    std::string target;
    auto* outer = app.add_subcommand("outer", "Generated outer measure of a set");
    outer->add_option("file", opt.file, "Space JSON (- for stdin)");
    outer->add_option("--target", target, "Target set as JSON, e.g. [0,2] or [[\"0\",\"1/2\"]]");

    std::string t_arg;
    auto* certify = app.add_subcommand("certify-product", "Certify countable additivity of a rectangle partition");
    certify->add_option("file", opt.file, "Instance JSON with x, y, whole, parts (- for stdin)");
    certify->add_option("--t", t_arg, "Level t below the product, as p/q");

    std::string r_arg, s_arg;
    auto* witness = app.add_subcommand("extract-witness", "Finite witness for r s below a cover sum");
    witness->add_option("file", opt.file, "Instance JSON with x, y, d, cover (- for stdin)");
    witness->add_option("--r", r_arg, "Section level r, as p/q");
    witness->add_option("--s", s_arg, "Superlevel threshold s, as p/q");

    std::string direction = "both";
    auto* nulls = app.add_subcommand("null-section", "Null sets of the product and their sections");
    nulls->add_option("file", opt.file, "Instance JSON with x, y, d (- for stdin)");
    nulls->add_option("--direction", direction, "forward, converse or both")
        ->check(CLI::IsMember({"forward", "converse", "both"}));

    std::string kind;
    std::uint64_t seed = 0;
    std::size_t pieces = 8, size = 3, denominator_bound = 64;
    std::string magnitude = "1";
    auto* gen = app.add_subcommand("gen", "Generate a seeded instance");
    gen->add_option("kind", kind,
                    "guillotine_partition, random_finite_space, dyadic_staircase, corrupted_measure or random_rect_family")
        ->required();
    gen->add_option("--seed", seed, "Seed")->required();
    gen->add_option("--pieces", pieces, "Pieces of a guillotine partition")->check(CLI::PositiveNumber);
    gen->add_option("--size", size, "Universe size of finite spaces");
    gen->add_option("--magnitude", magnitude, "Corruption magnitude, as p/q");
    gen->add_option("--denominator-bound", denominator_bound, "Bound on cut denominators")->check(CLI::Range(2, 1 << 20));

    bool no_time = false;
    auto* suite = app.add_subcommand("suite", "Run verification suites, one JSON report per line");
    suite->add_option("--config", opt.file, "Suite configuration JSON (- for stdin)")->required();
    suite->add_flag("--no-time", no_time, "Omit wall_ms from reports");

    for (auto* sub : {validate, outer, certify, witness, nulls, gen, suite})
        sub->add_flag("--pretty", opt.pretty, "Print a human-readable summary on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kError;
    }

    try {
        if (*validate) return cmd_validate(opt);
        if (*outer) return cmd_outer(opt, target);
        if (*certify) return cmd_certify(opt, t_arg);
        if (*witness) return cmd_witness(opt, r_arg, s_arg);
        if (*nulls) return cmd_null_section(opt, direction);
        if (*gen) return cmd_gen(kind, seed, pieces, size, magnitude, denominator_bound);
        if (*suite) return cmd_suite(opt, no_time);
    } catch (const Error& e) {
        print({{"error", error_json(e)}});
        if (opt.pretty) std::cerr << "error: " << e.what() << '\n';
        return kError;
    } catch (const json::exception& e) {
        print({{"error", {{"kind", "Parse"}, {"message", e.what()}}}});
        return kError;
    }
    return kError;
}
