#include "bmo/cli.hpp"

#include "bmo/bellman.hpp"
#include "bmo/domain.hpp"
#include "bmo/errors.hpp"
#include "bmo/testfn.hpp"
#include "bmo/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace bmo::cli {
namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Options {
    double p = 1.0;
    double r = 3.0;
    double eps = 1.0;
    std::vector<double> x;
    bool min = false;
    std::string suite = "all";
    std::uint64_t seed = 7;
    int samples = 1000;
    int cells = 64;
    std::string grid = "0:1:11,11";
    std::string format;  // empty: json for verify, csv elsewhere
    int levels = 12;
    double lambda = 0.999;
    double delta = 0.05;
    int depth = 0;
    std::string kind = "phi0";
    double u = 0.0;
    std::string input;
};

// Params for commands that evaluate G, with the regime matched against --min.
Params regime_params(const Options& o) {
    const Params params(o.p, o.r, o.eps);
    if (o.min && params.regime() != Regime::Min)
        throw DomainError("--min needs (r-2)(p-r) > 0; got regime " + std::string(to_string(params.regime())));
    if (!o.min && params.regime() == Regime::Min)
        throw DomainError("(r-2)(p-r) > 0 gives the lower Bellman function; pass --min");
    return params;
}

struct GridSpec {
    double x2_lo, x2_hi;
    int n2, n3;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g{};
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d,%d%c", &g.x2_lo, &g.x2_hi, &g.n2, &g.n3, &tail) != 4 || g.n2 < 1 ||
        g.n3 < 1)
        throw CLI::ValidationError("--grid", "expected x2lo:x2hi:n,x3n with n, x3n >= 1");
    return g;
}

double lerp(double lo, double hi, int i, int n) {
    if (n == 1) return lo;
    if (i == n - 1) return hi;
    return lo + (hi - lo) * i / (n - 1);
}

int cmd_eval(const Options& o, std::ostream& out) {
    if (o.x.size() != 3) throw CLI::ValidationError("--x", "eval needs three coordinates a,b,c");
    const Params params = regime_params(o);
    const Point3 x{o.x[0], o.x[1], o.x[2]};
    const double value = bellman::eval(params, x);
    if (o.format == "json") {
        json j = {{"x", o.x}, {"region", std::string(to_string(domain::classify(params, x)))}, {"B", value}};
        if (params.regime() != Regime::Degenerate) j["u"] = bellman::solve_leaf(params, x).u;
        out << j.dump() << "\n";
    } else {
        out << num(value) << "\n";
    }
    return 0;
}

int cmd_scan(const Options& o, std::ostream& out) {
    if (o.x.empty()) throw CLI::ValidationError("--x", "scan needs at least one x1 value");
    const Params params = regime_params(o);
    const GridSpec g = parse_grid(o.grid);
    const bool degenerate = params.regime() == Regime::Degenerate;
    out << "x1,x2,x3,region,u,B\n";
    for (double x1 : o.x) {
        for (int i = 0; i < g.n2; ++i) {
            const double x2 = lerp(g.x2_lo, g.x2_hi, i, g.n2);
            if (!domain::omega2_contains(params.eps(), {x1, x2})) {
                out << num(x1) << "," << num(x2) << ",,Outside,,\n";
                continue;
            }
            const double lo = domain::bellman2d(params, {x1, x2}, domain::Side::Lower);
            const double hi = domain::bellman2d(params, {x1, x2}, domain::Side::Upper);
            for (int j = 0; j < g.n3; ++j) {
                const Point3 x{x1, x2, lerp(lo, hi, j, g.n3)};
                const Region region = domain::classify(params, x);
                const std::string u = degenerate ? "" : num(bellman::solve_leaf(params, x).u);
                out << num(x.x1) << "," << num(x.x2) << "," << num(x.x3) << "," << to_string(region) << "," << u
                    << "," << num(bellman::eval(params, x)) << "\n";
            }
        }
    }
    return 0;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = lerp(lo, hi, i, n);
    return v;
}

int cmd_verify(const Options& o, std::ostream& out) {
    static const std::vector<std::string> known{"identities", "closed_forms", "skeleton", "extremal",
                                                "concavity",  "c1_glue",      "oracle",   "attainment",
                                                "phi0",       "scaling",      "slice",    "transference",
                                                "all"};
    if (std::find(known.begin(), known.end(), o.suite) == known.end())
        throw CLI::ValidationError("--suite", "unknown suite '" + o.suite + "'");
    std::vector<verify::VerifyReport> reports;
    auto want = [&](const char* name) { return o.suite == name || (o.suite == "all" && std::string(name) != "transference"); };

    if (o.suite == "transference") {
        const int depth = o.depth > 0 ? o.depth : verify::depth_for(o.lambda);
        reports.push_back(verify::transference_demo(o.p, o.r, o.delta, o.lambda, depth, std::min(o.levels, 10)));
    } else {
        const Params params(o.p, o.r, o.eps);
        const double eps = params.eps();
        const bool regime = params.regime() != Regime::Degenerate;
        const int n_small = std::min(o.samples, 1000);
        if (want("identities")) reports.push_back(verify::check_identities(params, linspace(eps, eps + 10.0, 101)));
        if (want("closed_forms"))
            reports.push_back(verify::check_closed_forms(eps, {1.0, 1.5, 2.5, 3.0, params.p(), params.r()},
                                                         linspace(0.0, 10.0, 101)));
        if (want("skeleton")) reports.push_back(verify::check_skeleton(params, linspace(-5.0, 5.0, 201)));
        if (want("extremal")) reports.push_back(verify::check_extremal_point(params));
        if (want("concavity") && regime) reports.push_back(verify::check_concavity(params, n_small, o.seed));
        if (want("c1_glue")) reports.push_back(verify::check_c1_glue(params, 100));
        if (want("oracle") && regime)
            reports.push_back(verify::check_inequality_oracle(params, o.samples, o.cells, o.seed));
        if (want("attainment")) reports.push_back(verify::check_attainment(params, {eps, 1.5 * eps, 3.0 * eps}));
        if (want("phi0")) reports.push_back(verify::check_phi0(params, o.levels));
        if (want("scaling")) reports.push_back(verify::check_scaling(params, n_small, o.seed));
        if (want("slice") && params.regime() == Regime::Max)
            reports.push_back(verify::check_slice_monotone(params, 1000));
    }

    bool all_passed = true;
    if (o.format == "json") {
        for (const auto& rep : reports) out << verify::to_json(rep) << "\n";
    } else {
        out << "suite,p,r,eps,cases,worst_residual,tolerance,passed\n";
        for (const auto& rep : reports)
            out << rep.suite << "," << num(rep.p) << "," << num(rep.r) << "," << num(rep.eps) << "," << rep.cases
                << "," << num(rep.worst_residual) << "," << num(rep.tolerance) << ","
                << (rep.passed ? "true" : "false") << "\n";
    }
    for (const auto& rep : reports) all_passed = all_passed && rep.passed;
    return all_passed ? 0 : 1;
}

int cmd_constant(const Options& o, std::ostream& out, bool scan) {
    const double c = verify::sharp_constant(o.p, o.r);
    if (!scan) {
        if (o.format == "json")
            out << json{{"p", o.p}, {"r", o.r}, {"constant", c}}.dump() << "\n";
        else
            out << num(c) << "\n";
        return 0;
    }
    const auto found = verify::extract_constant(Params(o.p, o.r, 1.0), o.samples);
    if (o.format == "json") {
        out << json{{"p", o.p},
                    {"r", o.r},
                    {"constant", c},
                    {"c_observed", found.c_observed},
                    {"ratio", found.ratio},
                    {"argmax", {found.argmax.x1, found.argmax.x2, found.argmax.x3}}}
                   .dump()
            << "\n";
    } else {
        out << "constant,c_observed,ratio,argmax_x1,argmax_x2,argmax_x3\n"
            << num(c) << "," << num(found.c_observed) << "," << num(found.ratio) << "," << num(found.argmax.x1) << ","
            << num(found.argmax.x2) << "," << num(found.argmax.x3) << "\n";
    }
    return 0;
}

int cmd_optimizer(const Options& o, std::ostream& out) {
    std::optional<testfn::PiecewiseFn> f;
    if (o.kind == "uplus")
        f = testfn::optimizer_uplus(o.eps, o.u);
    else if (o.kind == "uminus")
        f = testfn::optimizer_uminus(o.eps, o.u);
    else if (o.kind == "phi0")
        f = testfn::optimizer_phi0();
    else
        throw CLI::ValidationError("--kind", "expected uplus, uminus or phi0");
    if (o.format == "json") {
        out << json{{"kind", o.kind},
                    {"mean", testfn::mean(*f)},
                    {"second_moment", testfn::second_moment(*f)},
                    {"moment_p", testfn::moments(*f, o.p)},
                    {"moment_r", testfn::moments(*f, o.r)},
                    {"csv", testfn::to_csv(*f)}}
                   .dump()
            << "\n";
    } else {
        out << testfn::to_csv(*f);
    }
    return 0;
}

int cmd_bmo(const Options& o, std::istream& in, std::ostream& out) {
    std::optional<testfn::PiecewiseFn> f;
    if (o.input.empty() || o.input == "-") {
        f = testfn::from_csv(in);
    } else {
        std::ifstream file(o.input);
        if (!file) throw DomainError("cannot open " + o.input);
        f = testfn::from_csv(file);
    }
    const double grid = testfn::bmo_norm(*f, o.levels);
    if (o.format == "json") {
        json j = {{"levels", o.levels}, {"bmo_grid", grid}, {"pieces", f->pieces().size()}};
        if (f->is_step()) j["bmo_exact"] = testfn::bmo_norm_steps(*f);
        out << j.dump() << "\n";
    } else {
        out << num(grid) << "\n";
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bellman function evaluator for the BMO L^p-L^r interpolation problem", "bmo"};
    app.require_subcommand(1);
    Options o;

    auto add_params = [&](CLI::App* cmd) {
        cmd->add_option("--p", o.p, "exponent p >= 1")->capture_default_str();
        cmd->add_option("--r", o.r, "exponent r")->capture_default_str();
        cmd->add_option("--eps", o.eps, "BMO bound eps > 0")->capture_default_str();
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* eval = app.add_subcommand("eval", "evaluate G at one point");
    add_params(eval);
    eval->add_option("--x", o.x, "point x1,x2,x3")->delimiter(',')->required();
    eval->add_flag("--min", o.min, "lower Bellman function (regime Min)");
    add_format(eval);

    auto* scan = app.add_subcommand("scan", "CSV rows x1,x2,x3,region,u,B over a grid");
    add_params(scan);
    scan->add_option("--x", o.x, "x1 values")->delimiter(',')->required();
    scan->add_option("--grid", o.grid, "x2lo:x2hi:n,x3n")->capture_default_str();
    scan->add_flag("--min", o.min, "lower Bellman function (regime Min)");
    add_format(scan);

    auto* ver = app.add_subcommand("verify", "run verification suites");
    add_params(ver);
    ver->add_option("--suite", o.suite, "suite name or all")->capture_default_str();
    ver->add_option("--seed", o.seed, "random seed")->capture_default_str();
    ver->add_option("--samples", o.samples, "random cases")->check(CLI::PositiveNumber)->capture_default_str();
    ver->add_option("--cells", o.cells, "cells per random step function")->check(CLI::Range(2, 4096))->capture_default_str();
    ver->add_option("--levels", o.levels, "dyadic levels for grid BMO")->check(CLI::Range(0, 16))->capture_default_str();
    ver->add_option("--lambda", o.lambda, "homogenization ratio")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    ver->add_option("--delta", o.delta, "BMO slack for the transference demo")->capture_default_str();
    ver->add_option("--depth", o.depth, "homogenization depth (0: residual 1e-6)")->capture_default_str();
    add_format(ver);

    auto* con = app.add_subcommand("constant", "sharp constant; with --samples n also scan the x1 = 0 slice");
    con->add_option("--p", o.p)->capture_default_str();
    con->add_option("--r", o.r)->capture_default_str();
    auto* con_samples = con->add_option("--samples", o.samples, "grid density of the slice scan")->check(CLI::Range(2, 100000));
    add_format(con);

    auto* opt = app.add_subcommand("optimizer", "print an explicit optimizer as CSV pieces");
    add_params(opt);
    opt->add_option("--kind", o.kind, "uplus, uminus or phi0")->check(CLI::IsMember({"uplus", "uminus", "phi0"}))->capture_default_str();
    opt->add_option("--u", o.u, "leaf parameter")->capture_default_str();
    add_format(opt);

    auto* bmo = app.add_subcommand("bmo", "grid BMO seminorm of a piecewise function read as CSV");
    bmo->add_option("--input", o.input, "CSV file (default stdin)");
    bmo->add_option("--levels", o.levels)->check(CLI::Range(0, 16))->capture_default_str();
    add_format(bmo);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (o.format.empty()) o.format = ver->parsed() ? "json" : "csv";

    try {
        if (eval->parsed()) return cmd_eval(o, out);
        if (scan->parsed()) return cmd_scan(o, out);
        if (ver->parsed()) return cmd_verify(o, out);
        if (con->parsed()) return cmd_constant(o, out, con_samples->count() > 0);
        if (opt->parsed()) return cmd_optimizer(o, out);
        if (bmo->parsed()) return cmd_bmo(o, in, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return run(args, std::cin, out, err);
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cin, std::cout, std::cerr);
}

}  // namespace bmo::cli
