#include "bmo/domain.hpp"

#include "bmo/errors.hpp"
#include "bmo/specfn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace bmo {

Params::Params(double p, double r, double eps) : p_(p), r_(r), eps_(eps) {
    if (!(p >= 1.0)) throw DomainError("Params: p must be >= 1");
    if (!(r >= 1.0)) throw DomainError("Params: r must be >= 1");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("Params: eps must be positive");
    if (p == 2.0) throw DomainError("Params: p = 2 is excluded (x3 would duplicate x2)");
    const double s = (r - 2.0) * (p - r);
    regime_ = s < 0.0 ? Regime::Max : (s > 0.0 ? Regime::Min : Regime::Degenerate);
}

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::Max: return "Max";
        case Regime::Min: return "Min";
        case Regime::Degenerate: return "Degenerate";
    }
    return "?";
}

std::string_view to_string(Region region) {
    switch (region) {
        case Region::XiZero: return "XiZero";
        case Region::XiPlus: return "XiPlus";
        case Region::XiMinus: return "XiMinus";
        case Region::Skeleton: return "Skeleton";
        case Region::Outside: return "Outside";
    }
    return "?";
}

namespace domain {
namespace {

std::string describe(Point2 pt) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << pt.x1 << ", " << pt.x2 << ")";
    return os.str();
}

std::string describe(Point3 x) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << x.x1 << ", " << x.x2 << ", " << x.x3 << ")";
    return os.str();
}

void require_omega2(double eps, Point2 pt, const char* who) {
    if (!omega2_contains(eps, pt))
        throw DomainError(std::string(who) + ": point " + describe(pt) + " is outside the parabolic strip");
}

// Height above the lower parabola, clamped into [0, eps^2].
double lift(double eps, Point2 pt) {
    return std::clamp(pt.x2 - pt.x1 * pt.x1, 0.0, eps * eps);
}

}  // namespace

bool omega2_contains(double eps, Point2 pt) {
    const double h = pt.x2 - pt.x1 * pt.x1;
    return h >= -kMembershipTol && h <= eps * eps + kMembershipTol;
}

TangentParams tangent_params(double eps, Point2 pt) {
    require_omega2(eps, pt, "tangent_params");
    const double root = std::sqrt(eps * eps - lift(eps, pt));
    return {pt.x1 - eps + root, pt.x1 + eps - root};
}

double a_m(double p, double eps, Point2 pt) {
    const auto [u_plus, u_minus] = tangent_params(eps, pt);
    if (u_plus >= 0.0) return std::pow(u_plus, p) + specfn::m_fn(p, eps, u_plus) * (pt.x1 - u_plus);
    if (u_minus <= 0.0) return std::pow(-u_minus, p) - specfn::m_fn(p, eps, -u_minus) * (pt.x1 - u_minus);
    return specfn::m_fn(p, eps, 0.0) * pt.x2 / (2.0 * eps);
}

double a_k(double p, double eps, Point2 pt) {
    const auto [u_plus, u_minus] = tangent_params(eps, pt);
    if (pt.x2 <= eps * eps) return std::pow(std::max(pt.x2, 0.0), 0.5 * p);
    if (pt.x1 >= 0.0) {
        const double u = std::max(u_minus, eps);
        return std::pow(u, p) + specfn::k_fn(p, eps, u) * (pt.x1 - u);
    }
    const double u = std::max(-u_plus, eps);
    return std::pow(u, p) - specfn::k_fn(p, eps, u) * (pt.x1 + u);
}

double bellman2d(double p, double eps, Point2 pt, Side side) {
    const bool m_on_top = p >= 2.0;
    const bool want_m = (side == Side::Upper) == m_on_top;
    return want_m ? a_m(p, eps, pt) : a_k(p, eps, pt);
}

double bellman2d(const Params& params, Point2 pt, Side side) {
    return bellman2d(params.p(), params.eps(), pt, side);
}

bool omega3_contains(const Params& params, Point3 x) {
    const Point2 pt{x.x1, x.x2};
    if (!std::isfinite(x.x3) || !omega2_contains(params.eps(), pt)) return false;
    const double lo = bellman2d(params, pt, Side::Lower);
    const double hi = bellman2d(params, pt, Side::Upper);
    return x.x3 >= lo - kMembershipTol && x.x3 <= hi + kMembershipTol;
}

Region formula_region(const Params& params, Point3 x) {
    const double eps = params.eps();
    const double p = params.p();
    const double ax1 = std::abs(x.x1);
    const double tol = kMembershipTol * std::max(1.0, std::abs(x.x3));
    bool in_zero = ax1 <= 2.0 * eps + kMembershipTol && x.x2 >= 4.0 * eps * ax1 - 3.0 * eps * eps - kMembershipTol;
    if (in_zero) {
        const double seam = std::pow(eps, p) + (x.x2 - eps * eps) * specfn::m_fn(p, eps, eps) / (4.0 * eps);
        in_zero = (p - 2.0) * (x.x3 - seam) >= -tol * std::abs(p - 2.0);
    }
    // x1 = 0 always belongs to XiZero: the two other regions require a sign.
    if (in_zero || x.x1 == 0.0) return Region::XiZero;
    return x.x1 > 0.0 ? Region::XiPlus : Region::XiMinus;
}

Region classify(const Params& params, Point3 x) {
    if (!omega3_contains(params, x))
        throw DomainError("classify: point " + describe(x) + " is outside the Bellman domain");
    if (std::abs(x.x2 - x.x1 * x.x1) <= kMembershipTol) return Region::Skeleton;
    return formula_region(params, x);
}

double interior_margin(const Params& params, Point3 x) {
    const double eps = params.eps();
    const Point2 pt{x.x1, x.x2};
    if (!omega2_contains(eps, pt)) return -1.0;
    const double h = x.x2 - x.x1 * x.x1;
    const double lo = bellman2d(params, pt, Side::Lower);
    const double hi = bellman2d(params, pt, Side::Upper);
    return std::min({h, eps * eps - h, x.x3 - lo, hi - x.x3});
}

}  // namespace domain
}  // namespace bmo
