#pragma once

#include <functional>
#include <vector>

namespace bmo::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]. Cached per n.
const Rule& gauss_legendre(int n);

/// n-point Gauss-Laguerre rule for the weight e^{-s} on [0, inf). Cached per n.
const Rule& gauss_laguerre(int n);

/// Integral of f over [lo, hi] with a fixed Gauss-Legendre rule.
double legendre_panel(const std::function<double(double)>& f, double lo, double hi, int n);

/// Composite Gauss-Legendre over [lo, hi] for an integrand that is analytic
/// except at a point `sing` outside the interval. Panels grow geometrically with
/// their distance from the singular point and never exceed `max_panel`.
double graded_legendre(const std::function<double(double)>& f, double lo, double hi,
                       double sing, int n, double max_panel);

/// Integral of e^{-s} g(s) over [0, inf) with the n-point Gauss-Laguerre rule.
double laguerre(const std::function<double(double)>& g, int n);

}  // namespace bmo::quad
