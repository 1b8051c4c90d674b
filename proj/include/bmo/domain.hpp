#pragma once

#include <string_view>
#include <utility>

namespace bmo {

/// Which extremal problem the constructed function solves for a given (p, r).
enum class Regime { Max, Min, Degenerate };

/// Problem triple (p, r, eps). Construction validates and derives the regime:
/// Max iff (r-2)(p-r) < 0, Min iff > 0, Degenerate iff = 0. p = 2 is rejected.
class Params {
public:
    Params(double p, double r, double eps = 1.0);

    double p() const noexcept { return p_; }
    double r() const noexcept { return r_; }
    double eps() const noexcept { return eps_; }
    Regime regime() const noexcept { return regime_; }

private:
    double p_;
    double r_;
    double eps_;
    Regime regime_;
};

std::string_view to_string(Regime regime);

/// (mean, second moment).
struct Point2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// (mean, second moment, p-th absolute moment).
struct Point3 {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
};

enum class Region { XiZero, XiPlus, XiMinus, Skeleton, Outside };

std::string_view to_string(Region region);

/// Absolute tolerance on all membership comparisons.
inline constexpr double kMembershipTol = 1e-12;

namespace domain {

/// x1^2 <= x2 <= x1^2 + eps^2 (within kMembershipTol).
bool omega2_contains(double eps, Point2 pt);

struct TangentParams {
    double u_plus;
    double u_minus;
};

/// Parameters of the tangent chords S_+(u_+) and S_-(u_-) through pt.
/// S_+(u) joins (u, u^2) to (u+eps, (u+eps)^2+eps^2); S_-(u) mirrors it.
TangentParams tangent_params(double eps, Point2 pt);

/// Boundary function built from m_p: tangent extension along S_+ for u >= 0,
/// mirrored for u <= 0, and m_p(0) x2 / (2 eps) in the central triangle.
double a_m(double p, double eps, Point2 pt);

/// Boundary function built from k_p: x2^{p/2} for x2 <= eps^2, tangent
/// extension along S_-(u), u >= eps, elsewhere (mirrored for x1 < 0).
double a_k(double p, double eps, Point2 pt);

enum class Side { Upper, Lower };

/// Upper/lower two-dimensional Bellman function: upper is a_m for p >= 2 and
/// a_k for p <= 2; lower is the other.
double bellman2d(double p, double eps, Point2 pt, Side side);
double bellman2d(const Params& params, Point2 pt, Side side);

/// Membership in the three-dimensional domain (all comparisons within kMembershipTol).
bool omega3_contains(const Params& params, Point3 x);

/// Region of a point of the domain. Skeleton for x2 = x1^2; ties on the
/// shared boundary resolve to XiZero. DomainError outside the domain.
Region classify(const Params& params, Point3 x);

/// Region whose formula evaluates x (never Skeleton/Outside). Precondition: x in domain.
Region formula_region(const Params& params, Point3 x);

/// Smallest distance of x to the boundary surfaces of the domain, measured
/// along coordinate directions (x2 to both parabolas, x3 to both boundary functions).
double interior_margin(const Params& params, Point3 x);

}  // namespace domain
}  // namespace bmo
