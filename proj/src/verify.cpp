#include "bmo/verify.hpp"

#include "bmo/bellman.hpp"
#include "bmo/errors.hpp"
#include "bmo/specfn.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bmo::verify {
namespace {

using nlohmann::json;

VerifyReport make_report(std::string suite, double p, double r, double eps, double tolerance) {
    VerifyReport rep;
    rep.suite = std::move(suite);
    rep.p = p;
    rep.r = r;
    rep.eps = eps;
    rep.tolerance = tolerance;
    rep.worst_residual = -std::numeric_limits<double>::infinity();
    return rep;
}

VerifyReport make_report(std::string suite, const Params& params, double tolerance) {
    return make_report(std::move(suite), params.p(), params.r(), params.eps(), tolerance);
}

// Records one case; NaN residuals count as failures.
void record(VerifyReport& rep, double residual, const json& witness) {
    ++rep.cases;
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    if (residual > rep.worst_residual) {
        rep.worst_residual = residual;
        rep.witness = witness.dump();
    }
}

VerifyReport& finish(VerifyReport& rep) {
    if (rep.cases == 0) rep.worst_residual = 0.0;
    rep.passed = rep.worst_residual <= rep.tolerance;
    return rep;
}

double rel(double got, double want, double floor = 1.0) {
    return std::abs(got - want) / std::max({floor, std::abs(want)});
}

json point_json(Point3 x) { return json::array({x.x1, x.x2, x.x3}); }

double boundary_value(const Params& params, double x1, double x2, domain::Side side) {
    return domain::bellman2d(params, {x1, x2}, side);
}

}  // namespace

std::string to_json(const VerifyReport& report) {
    json j;
    j["suite"] = report.suite;
    j["params"] = {{"p", report.p}, {"r", report.r}, {"eps", report.eps}};
    j["cases"] = report.cases;
    j["worst_residual"] = report.worst_residual;
    j["tolerance"] = report.tolerance;
    j["witness"] = report.witness;
    j["passed"] = report.passed;
    return j.dump();
}

VerifyReport from_json(const std::string& text) {
    const json j = json::parse(text);
    VerifyReport rep;
    rep.suite = j.at("suite").get<std::string>();
    rep.p = j.at("params").at("p").get<double>();
    rep.r = j.at("params").at("r").get<double>();
    rep.eps = j.at("params").at("eps").get<double>();
    rep.cases = j.at("cases").get<long>();
    rep.worst_residual = j.at("worst_residual").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                         : j.at("worst_residual").get<double>();
    rep.tolerance = j.at("tolerance").get<double>();
    rep.witness = j.at("witness").get<std::string>();
    rep.passed = j.at("passed").get<bool>();
    return rep;
}

Kernels default_kernels() {
    return {[](double p, double eps, double u, int order) { return specfn::m_fn(p, eps, u, order); },
            [](double p, double eps, double u, int order) { return specfn::k_fn(p, eps, u, order); }};
}

VerifyReport check_identities(const Params& params, const std::vector<double>& u_grid, const Kernels& kernels) {
    const double eps = params.eps();
    VerifyReport rep = make_report("identities", params, 1e-8);
    for (double u : u_grid) {
        if (u < eps - 1e-12 || u > eps + 10.0 + 1e-12) throw DomainError("check_identities: u outside [eps, eps + 10]");
        for (double q : {params.p(), params.r()}) {
            double m[3], k[3];
            for (int o = 0; o < 3; ++o) {
                m[o] = kernels.m(q, eps, u, o);
                k[o] = kernels.k(q, eps, u, o);
            }
            const double power = q * std::pow(u, q - 1.0);
            const double scale = std::max({1.0, std::abs(m[0]), std::abs(power)});
            const double res_m = std::abs(-eps * m[1] + m[0] - power) / scale;
            const double res_k = std::abs(eps * k[1] + k[0] - power) / scale;
            double res = std::max(res_m, res_k);
            for (int l = 0; l < 2; ++l) {
                const double lhs = eps * (m[l + 1] + k[l + 1]);
                const double rhs = m[l] - k[l];
                res = std::max(res, std::abs(lhs - rhs) / std::max({1.0, std::abs(m[l]), std::abs(k[l])}));
            }
            record(rep, res, {{"q", q}, {"u", u}, {"m_diff", res_m}, {"k_diff", res_k}});
        }
    }
    return finish(rep);
}

VerifyReport check_closed_forms(double eps, const std::vector<double>& p_values, const std::vector<double>& u_grid) {
    VerifyReport rep = make_report("closed_forms", 0.0, 0.0, eps, 1e-10);
    for (double u : u_grid) {
        const double x = u * eps;  // grid is in units of eps
        record(rep, rel(specfn::m_fn(1.0, eps, x), 1.0), {{"form", "m1"}, {"u", x}});
        record(rep, rel(specfn::m_fn(2.0, eps, x), 2.0 * (x + eps)), {{"form", "m2"}, {"u", x}});
        if (x >= eps) record(rep, rel(specfn::k_fn(2.0, eps, x), 2.0 * (x - eps)), {{"form", "k2"}, {"u", x}});
    }
    for (double p : p_values) {
        record(rep, std::abs(specfn::k_fn(p, eps, eps)), {{"form", "k(eps)"}, {"p", p}});
        record(rep, rel(specfn::k_fn(p, eps, eps, 1), p * std::pow(eps, p - 2.0)), {{"form", "k'(eps)"}, {"p", p}});
        record(rep, rel(specfn::m_fn(p, eps, 0.0), std::pow(eps, p - 1.0) * std::tgamma(p + 1.0)),
               {{"form", "m(0)"}, {"p", p}});
    }
    return finish(rep);
}

VerifyReport check_skeleton(const Params& params, const std::vector<double>& t_grid) {
    VerifyReport rep = make_report("skeleton", params, 1e-8);
    for (double t : t_grid) {
        const Point3 x{t, t * t, std::pow(std::abs(t), params.p())};
        const double got = bellman::eval(params, x);
        const double want = std::pow(std::abs(t), params.r());
        const double res = want == 0.0 ? std::abs(got) : std::abs(got - want) / want;
        record(rep, res, {{"x", point_json(x)}, {"eval", got}, {"expected", want}});
    }
    return finish(rep);
}

VerifyReport check_extremal_point(const Params& params) {
    VerifyReport rep = make_report("extremal_point", params, 1e-8);
    const double eps = params.eps();
    const Point3 x{0.0, eps * eps, std::pow(eps, params.p()) * std::tgamma(params.p() + 1.0) / 2.0};
    const double got = bellman::eval(params, x);
    const double want = std::pow(eps, params.r()) * std::tgamma(params.r() + 1.0) / 2.0;
    record(rep, std::abs(got - want) / want, {{"x", point_json(x)}, {"eval", got}, {"expected", want}});
    return finish(rep);
}

Point3 sample_interior(const Params& params, Rng& rng, double margin) {
    const double eps = params.eps();
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const double x1 = rng.uniform(-3.0 * eps, 3.0 * eps);
        const double x2 = x1 * x1 + rng.uniform(0.0, eps * eps);
        const double lo = boundary_value(params, x1, x2, domain::Side::Lower);
        const double hi = boundary_value(params, x1, x2, domain::Side::Upper);
        const Point3 x{x1, x2, rng.uniform(lo, hi)};
        if (domain::interior_margin(params, x) >= margin) return x;
    }
    throw ConvergenceError("sample_interior: rejection sampling found no point");
}

VerifyReport check_concavity(const Params& params, int n_samples, std::uint64_t seed) {
    if (params.regime() == Regime::Degenerate) throw DomainError("check_concavity: degenerate regime");
    VerifyReport rep = make_report("concavity", params, 1e-6);
    const bool max_regime = params.regime() == Regime::Max;
    Rng rng(seed, 1);
    for (int i = 0; i < n_samples; ++i) {
        const Point3 x = sample_interior(params, rng, 1e-3);
        const auto ev = bellman::symmetric_eigenvalues(bellman::hessian(params, x));
        const double res = max_regime ? ev[2] : -ev[0];
        record(rep, res, {{"x", point_json(x)}, {"eigenvalues", json::array({ev[0], ev[1], ev[2]})}});
    }
    return finish(rep);
}

VerifyReport check_c1_glue(const Params& params, int n_samples) {
    // Residuals are multiples of each check's own tolerance.
    VerifyReport rep = make_report("c1_glue", params, 1.0);
    const double p = params.p(), r = params.r(), eps = params.eps();
    if (params.regime() != Regime::Degenerate) {
        const double lhs = (specfn::m_fn(r, eps, eps, 2) + specfn::k_fn(r, eps, eps, 2)) /
                           (specfn::m_fn(p, eps, eps, 2) + specfn::k_fn(p, eps, eps, 2));
        const double rhs = (specfn::m_fn(r, eps, eps, 1) - r * std::pow(eps, r - 2.0)) /
                           (specfn::m_fn(p, eps, eps, 1) - p * std::pow(eps, p - 2.0));
        record(rep, rel(lhs, rhs, 0.0) / 1e-8, {{"identity_lhs", lhs}, {"identity_rhs", rhs}});
    }
    if (params.regime() == Regime::Degenerate) return finish(rep);
    const double m_eps = specfn::m_fn(p, eps, eps);
    Rng rng(0x5EA3, 2);
    for (int i = 0; i < n_samples; ++i) {
        // A point of the seam leaf u = eps, away from the rest of the boundary.
        const double side = i % 2 == 0 ? 1.0 : -1.0;
        const double a1 = rng.uniform(0.05, 1.95) * eps;
        const double lo2 = std::max({a1 * a1, 4.0 * eps * a1 - 3.0 * eps * eps, eps * eps});
        const double hi2 = a1 * a1 + eps * eps;
        const double x2 = lo2 + rng.uniform(0.05, 0.95) * (hi2 - lo2);
        const double seam = std::pow(eps, p) + (x2 - eps * eps) * m_eps / (4.0 * eps);
        const double step = 1e-11 * std::max(1.0, std::abs(seam));
        const Point3 above{side * a1, x2, seam + step}, below{side * a1, x2, seam - step};
        const auto ga = bellman::gradient(params, above);
        const auto gb = bellman::gradient(params, below);
        double jump = 0.0, scale = 1.0;
        for (int c = 0; c < 3; ++c) {
            jump = std::max(jump, std::abs(ga[c] - gb[c]));
            scale = std::max({scale, std::abs(ga[c]), std::abs(gb[c])});
        }
        const Region ra = domain::formula_region(params, above), rb = domain::formula_region(params, below);
        const double res = ra == rb ? std::numeric_limits<double>::infinity() : jump / scale / 1e-6;
        record(rep, res,
               {{"x", point_json({side * a1, x2, seam})},
                {"grad_above", json::array({ga[0], ga[1], ga[2]})},
                {"grad_below", json::array({gb[0], gb[1], gb[2]})},
                {"regions", json::array({std::string(to_string(ra)), std::string(to_string(rb))})}});
    }
    return finish(rep);
}

VerifyReport check_inequality_oracle(const Params& params, int n_fns, int cells, std::uint64_t seed) {
    if (params.regime() == Regime::Degenerate) throw DomainError("check_inequality_oracle: degenerate regime");
    VerifyReport rep = make_report("inequality_oracle", params, 1e-6);
    const double eps = params.eps();
    const bool max_regime = params.regime() == Regime::Max;
    for (int i = 0; i < n_fns; ++i) {
        const std::uint64_t fn_seed = Rng(seed, static_cast<std::uint64_t>(i) + 100).next();
        const testfn::PiecewiseFn phi = testfn::random_step_fn(fn_seed, cells, eps);
        Point3 x{testfn::mean(phi), testfn::second_moment(phi), testfn::moments(phi, params.p())};
        // Rounding can put x a hair outside the domain; more than 1e-9 means a generator bug.
        const double h = x.x2 - x.x1 * x.x1;
        const double h_excess = std::max(-h, h - eps * eps);
        if (h_excess > 1e-9) throw std::logic_error("check_inequality_oracle: generated point outside the strip");
        x.x2 = x.x1 * x.x1 + std::clamp(h, 0.0, eps * eps);
        const double lo = boundary_value(params, x.x1, x.x2, domain::Side::Lower);
        const double hi = boundary_value(params, x.x1, x.x2, domain::Side::Upper);
        if (x.x3 < lo - 1e-9 * std::max(1.0, lo) || x.x3 > hi + 1e-9 * std::max(1.0, hi))
            throw std::logic_error("check_inequality_oracle: generated point outside the Bellman domain");
        x.x3 = std::clamp(x.x3, lo, hi);
        const double lhs = testfn::moments(phi, params.r());
        const double bound = bellman::eval(params, x);
        const double excess = max_regime ? lhs - bound - 1e-9 : bound - lhs - 1e-9;
        record(rep, excess / std::max(std::abs(bound), 1e-300),
               {{"fn_seed", fn_seed}, {"x", point_json(x)}, {"moment_r", lhs}, {"bound", bound}});
    }
    return finish(rep);
}

VerifyReport check_attainment(const Params& params, const std::vector<double>& u_grid) {
    VerifyReport rep = make_report("attainment", params, 1e-6);
    const double p = params.p(), r = params.r(), eps = params.eps();
    for (double u : u_grid) {
        const Point3 up{u + eps, (u + eps) * (u + eps) + eps * eps, std::pow(u, p) + eps * specfn::m_fn(p, eps, u)};
        const testfn::PiecewiseFn fp = testfn::optimizer_uplus(eps, u);
        const double gp = bellman::eval(params, up);
        const double res_plus = std::max({rel(testfn::moments(fp, r), gp), rel(testfn::moments(fp, p), up.x3),
                                          rel(testfn::mean(fp), up.x1), rel(testfn::second_moment(fp), up.x2)});
        record(rep, res_plus, {{"vertex", "U+"}, {"u", u}, {"x", point_json(up)}, {"eval", gp}});
        if (u < eps) continue;
        const Point3 um{u - eps, (u - eps) * (u - eps) + eps * eps, std::pow(u, p) - eps * specfn::k_fn(p, eps, u)};
        const testfn::PiecewiseFn fm = testfn::optimizer_uminus(eps, u);
        const double gm = bellman::eval(params, um);
        const double res_minus = std::max({rel(testfn::moments(fm, r), gm), rel(testfn::moments(fm, p), um.x3),
                                           rel(testfn::mean(fm), um.x1), rel(testfn::second_moment(fm), um.x2)});
        record(rep, res_minus, {{"vertex", "U-"}, {"u", u}, {"x", point_json(um)}, {"eval", gm}});
    }
    return finish(rep);
}

VerifyReport check_phi0(const Params& params, int levels) {
    // Residuals are multiples of each check's own tolerance.
    VerifyReport rep = make_report("phi0", params, 1.0);
    const testfn::PiecewiseFn f = testfn::optimizer_phi0();
    record(rep, std::abs(testfn::mean(f)) / 1e-8, {{"check", "mean"}});
    record(rep, std::abs(testfn::second_moment(f) - 1.0) / 1e-8, {{"check", "second_moment"}});
    for (double q : {params.p(), params.r()}) {
        const double got = testfn::moments(f, q), want = std::tgamma(q + 1.0) / 2.0;
        record(rep, rel(got, want) / 1e-8, {{"check", "moment"}, {"q", q}, {"value", got}});
    }
    const double bmo = testfn::bmo_norm(f, levels);
    record(rep, std::abs(bmo - 1.0) / 5e-3, {{"check", "bmo"}, {"levels", levels}, {"value", bmo}});
    return finish(rep);
}

VerifyReport check_scaling(const Params& params, int n_samples, std::uint64_t seed) {
    VerifyReport rep = make_report("scaling", params, 1e-8);
    const double p = params.p(), r = params.r(), eps = params.eps();
    const Params unit(p, r, 1.0);
    Rng rng(seed, 3);
    for (int i = 0; i < n_samples; ++i) {
        const Point3 x = sample_interior(params, rng, 0.0);
        const Point3 y{x.x1 / eps, x.x2 / (eps * eps), x.x3 / std::pow(eps, p)};
        const double direct = bellman::eval(params, x);
        const double scaled = std::pow(eps, r) * bellman::eval(unit, y);
        record(rep, rel(direct, scaled, 0.0), {{"x", point_json(x)}, {"direct", direct}, {"scaled", scaled}});
    }
    return finish(rep);
}

VerifyReport check_slice_monotone(const Params& params, int n) {
    VerifyReport rep = make_report("slice_monotone", params.p(), params.r(), 1.0, 0.0);
    const double p = params.p(), r = params.r();
    auto g = [&](double u) {
        return (2.0 * std::pow(u, r) + (1.0 - u) * specfn::m_fn(r, 1.0, u)) /
               (2.0 * std::pow(u, p) + (1.0 - u) * specfn::m_fn(p, 1.0, u));
    };
    const double g0 = g(0.0);
    double prev = g0;
    for (int k = 1; k <= n; ++k) {
        const double u = static_cast<double>(k) / n;
        const double cur = g(u);
        record(rep, (cur - prev) / g0, {{"u", u}, {"g_prev", prev}, {"g", cur}});
        prev = cur;
    }
    return finish(rep);
}

ConstantScan extract_constant(const Params& params, int grid_density) {
    if (params.regime() != Regime::Max) throw DomainError("extract_constant: requires regime Max");
    if (grid_density < 2) throw DomainError("extract_constant: grid_density must be >= 2");
    const Params unit(params.p(), params.r(), 1.0);
    ConstantScan best;
    for (int i = 1; i <= grid_density; ++i) {
        const double x2 = static_cast<double>(i) / grid_density;
        const double lo = boundary_value(unit, 0.0, x2, domain::Side::Lower);
        const double hi = boundary_value(unit, 0.0, x2, domain::Side::Upper);
        for (int j = 0; j < grid_density; ++j) {
            const double x3 = j + 1 == grid_density ? hi : lo + (hi - lo) * j / (grid_density - 1);
            const Point3 x{0.0, x2, x3};
            const double ratio = bellman::eval(unit, x) / x3;
            // The maximum is attained along the whole u = 0 leaf, so near-ties are
            // resolved towards the largest x2.
            if (ratio > best.ratio * (1.0 + 1e-12)) {
                best.ratio = ratio;
                best.argmax = x;
            } else if (ratio >= best.ratio * (1.0 - 1e-12)) {
                best.ratio = std::max(best.ratio, ratio);
                if (x2 >= best.argmax.x2) best.argmax = x;
            }
        }
    }
    best.c_observed = std::pow(best.ratio, 1.0 / params.r());
    return best;
}

double sharp_constant(double p, double r) {
    if (!(p >= 1.0) || !(r >= std::max(2.0, p)) || !(r > p))
        throw DomainError("sharp_constant: need p >= 1, r >= max(2, p), r > p");
    return std::exp((std::lgamma(r + 1.0) - std::lgamma(p + 1.0)) / r);
}

VerifyReport transference_check(const testfn::PiecewiseFn& psi, double p, double r, double delta, int levels) {
    VerifyReport rep = make_report("transference", p, r, 1.0, 0.0);
    const double constant = sharp_constant(p, r);
    double outside = 0.0;
    for (const auto& piece : psi.pieces()) {
        if (piece.b <= 0.0 || piece.a >= 1.0 || piece.a < 0.0 || piece.b > 1.0) {
            const bool zero = piece.kind == testfn::PieceKind::Const && piece.c0 == 0.0;
            const bool inside = piece.a >= 0.0 && piece.b <= 1.0;
            if (!inside && !zero)
                outside = std::max(outside, piece.kind == testfn::PieceKind::Const
                                                ? std::abs(piece.c0)
                                                : std::numeric_limits<double>::infinity());
        }
    }
    const double int_p = testfn::moments(psi, p) * psi.length();
    const double int_r = testfn::moments(psi, r) * psi.length();
    if (!(int_p > 0.0)) throw DomainError("transference_check: psi vanishes identically");
    const double moment_p = rel(int_p, std::tgamma(p + 1.0) / 2.0, 0.0);
    const double moment_r = rel(int_r, std::tgamma(r + 1.0) / 2.0, 0.0);
    const double bmo = testfn::bmo_norm(psi, levels);
    const double ratio = std::pow(int_r, 1.0 / r) / (std::pow(int_p, 1.0 / r) * std::pow(bmo, 1.0 - p / r));
    const json witness = {{"support_violation", outside}, {"moment_p_rel_err", moment_p},
                          {"moment_r_rel_err", moment_r}, {"bmo", bmo},
                          {"bmo_limit", 1.0 + delta},     {"ratio", ratio},
                          {"sharp_constant", constant},    {"ratio_fraction", ratio / constant},
                          {"levels", levels},              {"pieces", psi.pieces().size()}};
    record(rep, outside, witness);
    record(rep, std::max(moment_p, moment_r) - 0.02, witness);
    record(rep, bmo - (1.0 + delta), witness);
    record(rep, 0.95 * constant - ratio, witness);
    rep.witness = witness.dump();
    return finish(rep);
}

VerifyReport transference_demo(double p, double r, double delta, double lambda, int depth, int levels) {
    if (!(delta > 0.0)) throw DomainError("transference_demo: delta must be positive");
    return transference_check(testfn::build_psi(lambda, depth), p, r, delta, levels);
}

int depth_for(double lambda, double residual) {
    if (!(lambda > 0.0 && lambda < 1.0) || !(residual > 0.0 && residual < 1.0))
        throw DomainError("depth_for: need lambda and residual in (0, 1)");
    return static_cast<int>(std::ceil(std::log(residual) / std::log(lambda)));
}

}  // namespace bmo::verify
