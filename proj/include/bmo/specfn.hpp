#pragma once

namespace bmo::specfn {

/// Numerical integration settings for the auxiliary integrals.
struct QuadratureSpec {
    enum class Scheme { ExponentialWeight, FiniteAdaptive };

    int node_count = 64;
    double target_abs_tol = 1e-12;
    Scheme scheme = Scheme::ExponentialWeight;

    /// Throws DomainError unless node_count >= 8 and the tolerance is non-negative.
    void validate() const;
};

/// Gamma function; DomainError for a <= 0.
double gamma_fn(double a);

/// e^x * Gamma(a, x), the exponentially scaled upper incomplete gamma function.
/// Series below the transition, Lentz continued fraction above, and the
/// recurrence Gamma(a, x) = (Gamma(a + 1, x) - x^a e^{-x}) / a for a < 1, x < 1.
double upper_gamma_scaled(double a, double x);

/// e^{-x} * int_0^x v^{a-1} e^{v} dv for a > 0 (positive-term Kummer series).
double lower_exp_scaled(double a, double x);

/// int_0^{x-1} e^{-s} (x - s)^{a-1} ds for x >= 1, by graded Gauss-Legendre panels.
double ramp_integral(double a, double x, const QuadratureSpec& spec = {});

/// m_p(u) = (p/eps) int_u^inf e^{(u-t)/eps} t^{p-1} dt and its first two derivatives.
///
/// Derivative `order` l is p(p-1)...(p-l) eps^{p-1-l} e^{x} Gamma(p-l, x) with x = u/eps,
/// i.e. differentiation under the integral sign. Orders 1 and 2 are rejected at
/// u = 0 when p < 2.
double m_fn(double p, double eps, double u, int order = 0);

/// Same quantity as m_fn, computed by an exponential-weight rule: graded
/// Gauss-Legendre on [u, u + eps] and Gauss-Laguerre on [u + eps, inf).
double m_quadrature(double p, double eps, double u, int order, const QuadratureSpec& spec = {});

/// k_p(u) = (p/eps) int_eps^u e^{(t-u)/eps} t^{p-1} dt, u >= eps, and its first two
/// derivatives (the boundary term of the moving upper limit included).
double k_fn(double p, double eps, double u, int order = 0, const QuadratureSpec& spec = {});

}  // namespace bmo::specfn
