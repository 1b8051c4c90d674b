#include "bmo/bellman.hpp"

#include "bmo/errors.hpp"
#include "bmo/specfn.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

namespace bmo::bellman {
namespace {

constexpr double kResidual = 1e-12;
constexpr double kClamp = 1e-10;
constexpr int kMaxIterations = 200;
constexpr double kGradientMargin = 1e-6;
constexpr double kHessianMargin = 1e-4;
constexpr double kHessianStep = 1e-5;

std::string describe(Point3 x) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << x.x1 << ", " << x.x2 << ", " << x.x3 << ")";
    return os.str();
}

// Brent's zeroin on [a, b] with f(a), f(b) of opposite signs. Iterates until the
// bracket collapses to machine precision; the caller checks the residual.
double zeroin(const std::function<double(double)>& f, double a, double b, double fa, double fb) {
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double xtol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 1e-300;
        const double half = 0.5 * (c - b);
        if (fb == 0.0 || std::abs(half) <= xtol) return b;
        if (std::abs(e) >= xtol && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc, r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * half * q - std::abs(xtol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > xtol ? d : (half > 0.0 ? xtol : -xtol);
        fb = f(b);
    }
    return b;
}

void require_solvable(const Params& params, Point3 x, const char* who) {
    if (params.regime() == Regime::Degenerate)
        throw DomainError(std::string(who) + ": degenerate regime has no foliation");
    if (!domain::omega3_contains(params, x))
        throw DomainError(std::string(who) + ": point " + describe(x) + " is outside the Bellman domain");
}

Vec3 gradient_unchecked(const Params& params, Point3 x) {
    const double p = params.p(), r = params.r(), eps = params.eps();
    if (params.regime() == Regime::Degenerate) {
        if (r == p) return {0.0, 0.0, 1.0};
        return {0.0, 1.0, 0.0};
    }
    const Leaf leaf = solve_leaf(params, x);
    const double u = leaf.u;
    if (leaf.region == Region::XiZero) {
        const double dr = specfn::m_fn(r, eps, u, 1) - r * std::pow(u, r - 2.0);
        const double dp = specfn::m_fn(p, eps, u, 1) - p * std::pow(u, p - 2.0);
        const double g3 = dr / dp;
        const double g2 = (specfn::m_fn(r, eps, u) - g3 * specfn::m_fn(p, eps, u)) / (2.0 * (u + eps));
        return {0.0, g2, g3};
    }
    const double sign = leaf.region == Region::XiMinus ? -1.0 : 1.0;
    const double m_p = specfn::m_fn(p, eps, u), k_p = specfn::k_fn(p, eps, u);
    const double m_r = specfn::m_fn(r, eps, u), k_r = specfn::k_fn(r, eps, u);
    const double g3 = (specfn::m_fn(r, eps, u, 2) + specfn::k_fn(r, eps, u, 2)) /
                      (specfn::m_fn(p, eps, u, 2) + specfn::k_fn(p, eps, u, 2));
    // Partial derivatives of the plane right-hand side at fixed u.
    auto d_x1 = [&](double m, double k) { return -(m - k) * u / (2.0 * eps) + 0.5 * (m + k); };
    auto d_x2 = [&](double m, double k) { return (m - k) / (4.0 * eps); };
    const double g1 = d_x1(m_r, k_r) - g3 * d_x1(m_p, k_p);
    const double g2 = d_x2(m_r, k_r) - g3 * d_x2(m_p, k_p);
    return {sign * g1, g2, g3};
}

}  // namespace

double plane_plus(double q, double eps, double u, double x1, double x2) {
    const double m = specfn::m_fn(q, eps, u);
    const double k = specfn::k_fn(q, eps, u);
    const double quad = x2 - x1 * x1 + (x1 - u) * (x1 - u);
    return std::pow(u, q) + (m - k) * quad / (4.0 * eps) + 0.5 * (m + k) * (x1 - u);
}

double plane_zero(double q, double eps, double u, double x2) {
    return std::pow(u, q) + (x2 - u * u) * specfn::m_fn(q, eps, u) / (2.0 * (u + eps));
}

Leaf solve_leaf(const Params& params, Point3 x) {
    require_solvable(params, x, "solve_leaf");
    const double p = params.p(), eps = params.eps();
    Leaf leaf;
    leaf.region = domain::formula_region(params, x);
    const double x1 = std::abs(x.x1);
    const auto [u_plus, u_minus] = domain::tangent_params(eps, {x1, x.x2});
    std::function<double(double)> residual;
    if (leaf.region == Region::XiZero) {
        const double hi = std::min(std::sqrt(std::max(x.x2, 0.0)), eps);
        leaf.bracket = {std::min(std::max(0.0, u_plus), hi), hi};
        residual = [&](double u) { return plane_zero(p, eps, u, x.x2) - x.x3; };
    } else {
        leaf.bracket = {std::min(std::max(eps, u_plus), u_minus), std::max(u_minus, eps)};
        residual = [&, x1](double u) { return plane_plus(p, eps, u, x1, x.x2) - x.x3; };
    }
    const auto [lo, hi] = leaf.bracket;
    const double scale = std::max(1.0, std::abs(x.x3));
    const double f_lo = residual(lo);
    if (lo == hi || std::abs(f_lo) <= kResidual * scale) {
        leaf.u = lo;
        if (std::abs(f_lo) > kClamp * scale)
            throw ConvergenceError("solve_leaf: degenerate bracket misses " + describe(x));
        return leaf;
    }
    const double f_hi = residual(hi);
    if (std::abs(f_hi) <= kResidual * scale) {
        leaf.u = hi;
        return leaf;
    }
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        // Float-thin layer outside the bracket: clamp to the nearer endpoint.
        const bool lo_nearer = std::abs(f_lo) <= std::abs(f_hi);
        if (std::min(std::abs(f_lo), std::abs(f_hi)) <= kClamp * scale) {
            leaf.u = lo_nearer ? lo : hi;
            return leaf;
        }
        throw ConvergenceError("solve_leaf: no leaf through " + describe(x) + " in region " +
                               std::string(to_string(leaf.region)));
    }
    leaf.u = zeroin(residual, lo, hi, f_lo, f_hi);
    if (std::abs(residual(leaf.u)) > kResidual * scale)
        throw ConvergenceError("solve_leaf: residual target not reached at " + describe(x));
    return leaf;
}

double eval_on_leaf(const Params& params, Point3 x, const Leaf& leaf) {
    const double r = params.r(), eps = params.eps();
    if (leaf.region == Region::XiZero) return plane_zero(r, eps, leaf.u, x.x2);
    return plane_plus(r, eps, leaf.u, std::abs(x.x1), x.x2);
}

double eval(const Params& params, Point3 x) {
    if (params.regime() == Regime::Degenerate) {
        if (!domain::omega3_contains(params, x))
            throw DomainError("eval: point " + describe(x) + " is outside the Bellman domain");
        return params.r() == params.p() ? x.x3 : x.x2;
    }
    return eval_on_leaf(params, x, solve_leaf(params, x));
}

Vec3 gradient(const Params& params, Point3 x) {
    if (!domain::omega3_contains(params, x))
        throw DomainError("gradient: point " + describe(x) + " is outside the Bellman domain");
    if (domain::interior_margin(params, x) < kGradientMargin)
        throw BoundaryError("gradient: point " + describe(x) + " is within 1e-6 of the boundary");
    return gradient_unchecked(params, x);
}

Mat3 hessian(const Params& params, Point3 x) {
    if (!domain::omega3_contains(params, x))
        throw DomainError("hessian: point " + describe(x) + " is outside the Bellman domain");
    if (domain::interior_margin(params, x) < kHessianMargin)
        throw BoundaryError("hessian: point " + describe(x) + " is within 1e-4 of the boundary");
    // G is only C1 across the seams between regions, so every stencil point must
    // share the region of x. Each column uses central differences when possible,
    // otherwise a one-sided second-order formula; both at steps h and h/2
    // combined by one Richardson step. The step halves near seams and curved
    // parts of the boundary before a one-sided scheme is tried.
    const Region home = domain::formula_region(params, x);
    auto shifted = [&](int j, double delta) {
        Point3 y = x;
        (j == 0 ? y.x1 : (j == 1 ? y.x2 : y.x3)) += delta;
        return y;
    };
    auto usable = [&](const Point3& y) {
        return domain::interior_margin(params, y) > 0.0 && domain::formula_region(params, y) == home;
    };
    const Vec3 g0 = gradient_unchecked(params, x);
    Mat3 h{};
    for (int j = 0; j < 3; ++j) {
        bool done = false;
        for (int scheme = 0; scheme < 3 && !done; ++scheme) {
            for (double step = kHessianStep; !done && step > kHessianStep * 1e-2; step *= 0.5) {
                // scheme 0: central; 1: forward; 2: backward.
                const double dir = scheme == 2 ? -1.0 : 1.0;
                const std::array<double, 4> offsets = scheme == 0
                    ? std::array<double, 4>{step, -step, 0.5 * step, -0.5 * step}
                    : std::array<double, 4>{dir * 0.5 * step, dir * step, dir * 2.0 * step, dir * step};
                bool ok = true;
                for (double off : offsets) ok = ok && usable(shifted(j, off));
                if (!ok) continue;
                auto column = [&](double hs) {
                    Vec3 d{};
                    if (scheme == 0) {
                        const Vec3 gf = gradient_unchecked(params, shifted(j, hs));
                        const Vec3 gb = gradient_unchecked(params, shifted(j, -hs));
                        for (int i = 0; i < 3; ++i) d[i] = (gf[i] - gb[i]) / (2.0 * hs);
                    } else {
                        const Vec3 g1 = gradient_unchecked(params, shifted(j, dir * hs));
                        const Vec3 g2 = gradient_unchecked(params, shifted(j, 2.0 * dir * hs));
                        for (int i = 0; i < 3; ++i) d[i] = dir * (-3.0 * g0[i] + 4.0 * g1[i] - g2[i]) / (2.0 * hs);
                    }
                    return d;
                };
                const Vec3 coarse = column(step);
                const Vec3 fine = column(0.5 * step);
                for (int i = 0; i < 3; ++i) h[i][j] = (4.0 * fine[i] - coarse[i]) / 3.0;
                done = true;
            }
        }
        if (!done) throw ConvergenceError("hessian: no admissible stencil at " + describe(x));
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) h[i][j] = h[j][i] = 0.5 * (h[i][j] + h[j][i]);
    return h;
}

Vec3 symmetric_eigenvalues(const Mat3& h) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = h[i][j];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m, Eigen::EigenvaluesOnly);
    return {solver.eigenvalues()(0), solver.eigenvalues()(1), solver.eigenvalues()(2)};
}

}  // namespace bmo::bellman
