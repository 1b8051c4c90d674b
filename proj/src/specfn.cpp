#include "bmo/specfn.hpp"

#include "bmo/errors.hpp"
#include "bmo/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bmo::specfn {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxTerms = 5000;

void check_order(int order) {
    if (order < 0 || order > 2) throw DomainError("derivative order must be 0, 1 or 2");
}

// p (p-1) ... (p-order)
double falling(double p, int order) {
    double c = p;
    for (int i = 1; i <= order; ++i) c *= p - i;
    return c;
}

double gamma_series_scaled(double a, double x) {
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < kMaxTerms; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return std::exp(x) * std::tgamma(a) - std::pow(x, a) * sum;
}

double gamma_cf_scaled(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxTerms; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return std::pow(x, a) * h;
    }
    throw ConvergenceError("incomplete gamma continued fraction did not converge");
}

// e^x E_1(x) for 0 < x < 1.
double e1_scaled(double x) {
    constexpr double euler = 0.57721566490153286061;
    double term = 1.0, sum = 0.0;
    for (int n = 1; n < kMaxTerms; ++n) {
        term *= -x / n;
        sum += term / n;
        if (std::abs(term) < kEps * 1e-2) break;
    }
    return std::exp(x) * (-euler - std::log(x) - sum);
}

}  // namespace

void QuadratureSpec::validate() const {
    if (node_count < 8) throw DomainError("QuadratureSpec.node_count must be >= 8");
    if (!(target_abs_tol >= 0.0)) throw DomainError("QuadratureSpec.target_abs_tol must be >= 0");
}

double gamma_fn(double a) {
    if (!(a > 0.0)) throw DomainError("gamma_fn: argument must be positive, got " + std::to_string(a));
    return std::tgamma(a);
}

double upper_gamma_scaled(double a, double x) {
    if (!(x >= 0.0)) throw DomainError("upper_gamma_scaled: x must be >= 0");
    if (x == 0.0) {
        if (a > 0.0) return std::tgamma(a);
        throw SingularityError("upper_gamma_scaled: Gamma(a, 0) diverges for a <= 0");
    }
    if (a >= 1.0 && x < a + 1.0) return gamma_series_scaled(a, x);
    if (x >= 1.0) return gamma_cf_scaled(a, x);
    if (a == 0.0) return e1_scaled(x);
    return (upper_gamma_scaled(a + 1.0, x) - std::pow(x, a)) / a;
}

double lower_exp_scaled(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("lower_exp_scaled: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    // e^{-x} sum_n x^{a+n} / (n! (a+n))
    double coef = std::exp(a * std::log(x) - x);
    double sum = coef / a;
    for (int n = 1; n < kMaxTerms; ++n) {
        coef *= x / n;
        const double term = coef / (a + n);
        sum += term;
        if (n > x && term < sum * kEps) break;
    }
    return sum;
}

double ramp_integral(double a, double x, const QuadratureSpec& spec) {
    spec.validate();
    if (!(x >= 1.0)) throw DomainError("ramp_integral: x must be >= 1");
    if (x == 1.0) return 0.0;
    // Beyond s = 60 the weight e^{-s} is below double resolution of the result.
    const double hi = std::min(x - 1.0, 60.0);
    const int n = std::max(spec.node_count / 4, 8);
    return quad::graded_legendre([a, x](double s) { return std::exp(-s) * std::pow(x - s, a - 1.0); },
                                 0.0, hi, x, n, 2.0);
}

double m_fn(double p, double eps, double u, int order) {
    check_order(order);
    if (!(p >= 1.0)) throw DomainError("m_fn: p must be >= 1, got " + std::to_string(p));
    if (!(eps > 0.0)) throw DomainError("m_fn: eps must be positive");
    if (!(u >= 0.0)) throw DomainError("m_fn: u must be >= 0, got " + std::to_string(u));
    if (order > 0 && u == 0.0 && p < 2.0)
        throw SingularityError("m_fn: derivative of order " + std::to_string(order) +
                               " is singular at u = 0 for p < 2");
    const double c = falling(p, order);
    if (c == 0.0) return 0.0;
    return c * std::pow(eps, p - 1.0 - order) * upper_gamma_scaled(p - order, u / eps);
}

double m_quadrature(double p, double eps, double u, int order, const QuadratureSpec& spec) {
    check_order(order);
    spec.validate();
    if (!(p >= 1.0)) throw DomainError("m_quadrature: p must be >= 1");
    if (!(eps > 0.0)) throw DomainError("m_quadrature: eps must be positive");
    if (!(u >= 0.0)) throw DomainError("m_quadrature: u must be >= 0");
    const double c = falling(p, order);
    if (c == 0.0) return 0.0;
    const double x = u / eps;
    const double power = p - 1.0 - order;
    if (x == 0.0 && power <= -1.0) throw SingularityError("m_quadrature: integral diverges at u = 0");
    const int n = std::max(spec.node_count / 4, 8);
    // s in [0, 1] is t in [u, u + eps]; the integrand (x + s)^power is singular at s = -x.
    const double head = quad::graded_legendre(
        [x, power](double s) { return std::exp(-s) * std::pow(x + s, power); }, 0.0, 1.0, -x, n, 0.5);
    const double tail = std::exp(-1.0) *
        quad::laguerre([x, power](double s) { return std::pow(x + 1.0 + s, power); }, spec.node_count);
    return c * std::pow(eps, power) * (head + tail);
}

double k_fn(double p, double eps, double u, int order, const QuadratureSpec& spec) {
    check_order(order);
    if (!(p >= 1.0)) throw DomainError("k_fn: p must be >= 1, got " + std::to_string(p));
    if (!(eps > 0.0)) throw DomainError("k_fn: eps must be positive");
    if (!(u >= eps)) throw DomainError("k_fn: u must be >= eps, got " + std::to_string(u));
    const double x = u / eps;
    const double c = falling(p, order);
    const double integral = c == 0.0 ? 0.0 : c * std::pow(eps, p - 1.0 - order) * ramp_integral(p - order, x, spec);
    // Boundary terms from the moving limit: k' gains p eps^{p-2} e^{1-x},
    // k'' gains p(p-2) eps^{p-3} e^{1-x}.
    switch (order) {
        case 0: return integral;
        case 1: return integral + p * std::pow(eps, p - 2.0) * std::exp(1.0 - x);
        default: return integral + p * (p - 2.0) * std::pow(eps, p - 3.0) * std::exp(1.0 - x);
    }
}

}  // namespace bmo::specfn
