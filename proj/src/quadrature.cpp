#include "bmo/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace bmo::quad {
namespace {

Rule make_legendre(int n) {
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double step = p0 / dp;
            z -= step;
            if (std::abs(step) < 1e-16) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return rule;
}

// Laguerre L_n and L_{n-1} at x by the three-term recurrence.
std::pair<long double, long double> laguerre_pair(int n, long double x) {
    long double prev = 1.0L, cur = 1.0L - x;
    if (n == 0) return {1.0L, 0.0L};
    for (int k = 1; k < n; ++k) {
        const long double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return {cur, prev};
}

Rule make_laguerre(int n) {
    // Golub-Welsch for starting values, then Newton on L_n.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        jacobi(i, i) = 2.0 * i + 1.0;
        if (i + 1 < n) jacobi(i, i + 1) = jacobi(i + 1, i) = i + 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        long double x = solver.eigenvalues()(i);
        for (int iter = 0; iter < 40; ++iter) {
            const auto [ln, lnm1] = laguerre_pair(n, x);
            const long double step = ln / (n * (ln - lnm1) / x);
            x -= step;
            if (std::abs(step) <= 1e-19L * x) break;
        }
        // w_i = 1 / (x_i L_n'(x_i)^2)
        const auto [ln, lnm1] = laguerre_pair(n, x);
        const long double deriv = n * (ln - lnm1) / x;
        rule.nodes[i] = static_cast<double>(x);
        rule.weights[i] = static_cast<double>(1.0L / (x * deriv * deriv));
    }
    return rule;
}

template <typename Maker>
const Rule& cached(std::map<int, std::unique_ptr<Rule>>& cache, std::mutex& mu, int n, Maker make) {
    if (n < 1) throw std::invalid_argument("quadrature rule needs at least one node");
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Rule>(make(n));
    return *slot;
}

}  // namespace

const Rule& gauss_legendre(int n) {
    static std::map<int, std::unique_ptr<Rule>> cache;
    static std::mutex mu;
    return cached(cache, mu, n, make_legendre);
}

const Rule& gauss_laguerre(int n) {
    static std::map<int, std::unique_ptr<Rule>> cache;
    static std::mutex mu;
    return cached(cache, mu, n, make_laguerre);
}

double legendre_panel(const std::function<double(double)>& f, double lo, double hi, int n) {
    const Rule& rule = gauss_legendre(n);
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

double graded_legendre(const std::function<double(double)>& f, double lo, double hi,
                       double sing, int n, double max_panel) {
    if (!(hi > lo)) return 0.0;
    const bool from_left = sing <= lo;
    const double near = from_left ? lo : hi;
    const double far = from_left ? hi : lo;
    const double length = hi - lo;
    // Distance from the singular point; a touching singularity starts the
    // grading at a negligible first panel.
    double dist = std::abs(near - sing);
    double total = 0.0;
    if (dist < 1e-30 * length) {
        const double first = 1e-30 * length;
        total += from_left ? legendre_panel(f, near, near + first, n)
                           : legendre_panel(f, near - first, near, n);
        dist = first;
    }
    double pos = from_left ? sing + dist : sing - dist;
    while (from_left ? pos < far : pos > far) {
        const double step = std::min(dist, max_panel);
        double next = from_left ? std::min(pos + step, far) : std::max(pos - step, far);
        total += from_left ? legendre_panel(f, pos, next, n) : legendre_panel(f, next, pos, n);
        dist += step;
        pos = next;
    }
    return total;
}

double laguerre(const std::function<double(double)>& g, int n) {
    const Rule& rule = gauss_laguerre(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * g(rule.nodes[i]);
    return sum;
}

}  // namespace bmo::quad
