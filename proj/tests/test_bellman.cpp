#include <doctest.h>

#include "bmo/bellman.hpp"
#include "bmo/domain.hpp"
#include "bmo/errors.hpp"
#include "bmo/rng.hpp"
#include "bmo/specfn.hpp"
#include "bmo/verify.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <functional>

using namespace bmo;
using bellman::Vec3;

namespace {

const Params kSets[] = {Params(1, 3), Params(1, 2.5), Params(2.5, 4), Params(1.5, 3),
                        Params(4, 3), Params(1.2, 1.5), Params(1.5, 3, 0.5), Params(4, 3, 2.0)};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Height of the leaf plane through the solved leaf as a function of (x1, x2).
std::function<double(double, double)> leaf_plane(const Params& pr, const bellman::Leaf& leaf) {
    const double p = pr.p(), eps = pr.eps(), u = leaf.u;
    switch (leaf.region) {
        case Region::XiZero: return [=](double, double x2) { return bellman::plane_zero(p, eps, u, x2); };
        case Region::XiMinus:
            return [=](double x1, double x2) { return bellman::plane_plus(p, eps, u, -x1, x2); };
        default: return [=](double x1, double x2) { return bellman::plane_plus(p, eps, u, x1, x2); };
    }
}

// Two orthonormal-ish unit directions spanning the leaf plane at x.
std::array<Vec3, 2> in_plane_directions(const Params& pr, Point3 x) {
    const auto leaf = bellman::solve_leaf(pr, x);
    const auto plane = leaf_plane(pr, leaf);
    const double h = 1e-6;
    const double d1 = (plane(x.x1 + h, x.x2) - plane(x.x1 - h, x.x2)) / (2 * h);
    const double d2 = (plane(x.x1, x.x2 + h) - plane(x.x1, x.x2 - h)) / (2 * h);
    auto unit = [](Vec3 v) {
        const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        return Vec3{v[0] / n, v[1] / n, v[2] / n};
    };
    return {unit({1, 0, d1}), unit({0, 1, d2})};
}

double quad_form(const bellman::Mat3& h, const Vec3& v) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += v[i] * h[i][j] * v[j];
    return s;
}

}  // namespace

TEST_SUITE("bellman") {

TEST_CASE("solve_leaf examples") {
    const Params pr(1, 3);
    auto leaf = bellman::solve_leaf(pr, {0.4, 0.16, 0.4});
    CHECK(leaf.u == doctest::Approx(0.4).epsilon(1e-10));
    leaf = bellman::solve_leaf(pr, {0, 1, 0.5});
    CHECK(leaf.region == Region::XiZero);
    CHECK(std::abs(leaf.u) < 1e-10);
    leaf = bellman::solve_leaf(pr, {2, 5, 2});
    CHECK(leaf.u == doctest::Approx(1).epsilon(1e-10));
    CHECK_THROWS_AS(bellman::solve_leaf(pr, {2, 5, 3}), DomainError);
}

TEST_CASE("eval examples") {
    const Params pr(1, 3);
    CHECK(bellman::eval(pr, {2, 4, 2}) == doctest::Approx(8).epsilon(1e-12));
    CHECK(bellman::eval(pr, {0, 1, 0.5}) == doctest::Approx(3).epsilon(1e-12));
    CHECK(bellman::eval(pr, {2, 5, 2}) == doctest::Approx(16).epsilon(1e-12));
    CHECK(bellman::eval(pr, {-2, 5, 2}) == doctest::Approx(16).epsilon(1e-12));
    CHECK(bellman::eval(pr, {0, 1, 0.75}) == doctest::Approx(2.5625).epsilon(1e-12));
    CHECK_THROWS_AS(bellman::eval(pr, {0, 1.5, 0.5}), DomainError);
}

TEST_CASE("the m_3 values behind the eval examples") {
    boost::math::quadrature::exp_sinh<double> rule;
    auto m3 = [&](double u) { return 3 * rule.integrate([u](double s) { return std::exp(-s) * (u + s) * (u + s); }); };
    CHECK(m3(1.0) == doctest::Approx(15).epsilon(1e-12));
    CHECK(m3(0.5) == doctest::Approx(9.75).epsilon(1e-12));
    CHECK(specfn::m_fn(3, 1, 1) == doctest::Approx(m3(1.0)).epsilon(1e-13));
    CHECK(specfn::m_fn(3, 1, 0.5) == doctest::Approx(m3(0.5)).epsilon(1e-13));
}

TEST_CASE("degenerate regime") {
    const Params same(3, 3), quadratic(1.5, 2);
    for (const auto& pr : {same, quadratic}) {
        const Point2 pt{0.5, 0.7};
        const double lo = domain::bellman2d(pr, pt, domain::Side::Lower);
        const double hi = domain::bellman2d(pr, pt, domain::Side::Upper);
        const Point3 x{pt.x1, pt.x2, 0.5 * (lo + hi)};
        CHECK(bellman::eval(pr, x) == (pr.r() == pr.p() ? x.x3 : x.x2));
    }
}

TEST_CASE("leaf invariants: bracket contains u and the plane reproduces x3") {
    Rng rng(21);
    for (const auto& pr : kSets)
        for (int i = 0; i < 200; ++i) {
            const Point3 x = verify::sample_interior(pr, rng, 0.0);
            const auto leaf = bellman::solve_leaf(pr, x);
            CAPTURE(pr.p());
            CAPTURE(pr.r());
            CHECK(leaf.u >= leaf.bracket.first);
            CHECK(leaf.u <= leaf.bracket.second);
            CHECK(std::abs(leaf_plane(pr, leaf)(x.x1, x.x2) - x.x3) <= 1e-10 * std::max(1.0, std::abs(x.x3)));
            if (leaf.region == Region::XiZero) {
                CHECK(leaf.u >= -1e-12);
                CHECK(leaf.u <= std::min(std::sqrt(x.x2), pr.eps()) + 1e-12);
            } else {
                CHECK(leaf.u >= pr.eps() - 1e-12);
            }
        }
}

TEST_CASE("monotone leaf map on each bracket") {
    Rng rng(22);
    for (const auto& pr : kSets)
        for (int i = 0; i < 50; ++i) {
            const Point3 x = verify::sample_interior(pr, rng, 0.0);
            auto leaf = bellman::solve_leaf(pr, x);
            const auto [a, b] = leaf.bracket;
            if (!(b > a)) continue;
            int sign = 0;
            double prev = 0.0;
            bool monotone = true;
            for (int k = 0; k <= 40; ++k) {
                leaf.u = a + (b - a) * k / 40.0;
                const double v = leaf_plane(pr, leaf)(x.x1, x.x2);
                if (k > 0) {
                    const int s = v > prev ? 1 : (v < prev ? -1 : 0);
                    if (s == 0 || (sign != 0 && s != sign)) monotone = false;
                    sign = s;
                }
                prev = v;
            }
            CAPTURE(pr.p());
            CAPTURE(x.x1);
            CAPTURE(x.x2);
            CAPTURE(x.x3);
            CHECK(monotone);
        }
}

TEST_CASE("skeleton boundary values") {
    for (const auto& pr : kSets)
        for (int i = -50; i <= 50; ++i) {
            if (i == 0) continue;
            const double t = 0.1 * i;
            const double got = bellman::eval(pr, {t, t * t, std::pow(std::abs(t), pr.p())});
            const double want = std::pow(std::abs(t), pr.r());
            CHECK(std::abs(got - want) <= 1e-8 * want);
        }
}

TEST_CASE("mirror symmetry of eval and gradient") {
    Rng rng(23);
    for (const auto& pr : kSets)
        for (int i = 0; i < 100; ++i) {
            const Point3 x = verify::sample_interior(pr, rng, 1e-3);
            const Point3 y{-x.x1, x.x2, x.x3};
            CHECK(bellman::eval(pr, x) == doctest::Approx(bellman::eval(pr, y)).epsilon(1e-12));
            const auto gx = bellman::gradient(pr, x);
            const auto gy = bellman::gradient(pr, y);
            CHECK(gx[0] == doctest::Approx(-gy[0]).epsilon(1e-9));
            CHECK(gx[1] == doctest::Approx(gy[1]).epsilon(1e-9));
            CHECK(gx[2] == doctest::Approx(gy[2]).epsilon(1e-9));
        }
}

TEST_CASE("gradient matches central differences of eval") {
    Rng rng(24);
    const double h = 1e-5;
    int compared = 0;
    for (const auto& pr : kSets)
        for (int i = 0; i < 100; ++i) {
            const Point3 x = verify::sample_interior(pr, rng, 1e-3);
            const Region region = domain::formula_region(pr, x);
            const auto g = bellman::gradient(pr, x);
            const double scale = std::max({1.0, std::abs(g[0]), std::abs(g[1]), std::abs(g[2])});
            for (int c = 0; c < 3; ++c) {
                Point3 a = x, b = x;
                (c == 0 ? a.x1 : c == 1 ? a.x2 : a.x3) += h;
                (c == 0 ? b.x1 : c == 1 ? b.x2 : b.x3) -= h;
                if (!domain::omega3_contains(pr, a) || !domain::omega3_contains(pr, b)) continue;
                // Central differences straddling the seam only see the one-sided slope.
                if (domain::formula_region(pr, a) != region || domain::formula_region(pr, b) != region) continue;
                const double fd = (bellman::eval(pr, a) - bellman::eval(pr, b)) / (2 * h);
                CAPTURE(pr.p());
                CAPTURE(pr.r());
                CAPTURE(c);
                CHECK(std::abs(fd - g[c]) <= 1e-6 * scale);
                ++compared;
            }
        }
    CHECK(compared > 2000);
}

TEST_CASE("x3-component of the gradient is the ratio of second derivatives") {
    for (const auto& pr : {Params(1, 3), Params(2.5, 4), Params(4, 3)}) {
        const double p = pr.p(), r = pr.r(), eps = pr.eps();
        auto g3_plus = [&](double u) {
            return (specfn::m_fn(r, eps, u, 2) + specfn::k_fn(r, eps, u, 2)) /
                   (specfn::m_fn(p, eps, u, 2) + specfn::k_fn(p, eps, u, 2));
        };
        // Points of the leaf at u, approaching the seam leaf u = eps. The chord
        // between the two upper vertices leaves the domain, so stay near U.
        for (double u : {1.5, 1.1, 1.01, 1.001}) {
            const double a = 0.2, b = 0.1;
            const double x1 = u + a * eps - b * eps;
            const double x2 = u * u + a * (2 * u * eps + 2 * eps * eps) + b * (-2 * u * eps + 2 * eps * eps);
            const double x3 = std::pow(u, p) + a * eps * specfn::m_fn(p, eps, u) - b * eps * specfn::k_fn(p, eps, u);
            const Point3 x{x1, x2, x3};
            REQUIRE(domain::formula_region(pr, x) == Region::XiPlus);
            CHECK(bellman::solve_leaf(pr, x).u == doctest::Approx(u).epsilon(1e-10));
            CHECK(bellman::gradient(pr, x)[2] == doctest::Approx(g3_plus(u)).epsilon(1e-9));
        }
        // The limit at the seam agrees with the central formula.
        const double g0 = (specfn::m_fn(r, eps, eps, 1) - r * std::pow(eps, r - 2)) /
                          (specfn::m_fn(p, eps, eps, 1) - p * std::pow(eps, p - 2));
        CHECK(g3_plus(eps) == doctest::Approx(g0).epsilon(1e-9));
    }
}

TEST_CASE("gradient and hessian reject points at the boundary") {
    const Params pr(1, 3);
    CHECK_THROWS_AS(bellman::gradient(pr, {0.5, 0.25, 0.5}), BoundaryError);
    CHECK_THROWS_AS(bellman::hessian(pr, {0, 1, 0.5}), BoundaryError);
}

TEST_CASE("hessian: symmetry, sign and flat leaf directions") {
    Rng rng(25);
    for (const auto& pr : {Params(1, 3), Params(2.5, 4), Params(4, 3), Params(1.2, 1.5)})
        for (int i = 0; i < 100; ++i) {
            const Point3 x = verify::sample_interior(pr, rng, 1e-3);
            const auto h = bellman::hessian(pr, x);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) CHECK(std::abs(h[a][b] - h[b][a]) <= 1e-8);
            const auto ev = bellman::symmetric_eigenvalues(h);
            CAPTURE(pr.p());
            CAPTURE(pr.r());
            CAPTURE(x.x1);
            CAPTURE(x.x2);
            CAPTURE(x.x3);
            if (pr.regime() == Regime::Max)
                CHECK(ev[2] <= 1e-6);
            else
                CHECK(ev[0] >= -1e-6);
            for (const auto& v : in_plane_directions(pr, x)) CHECK(std::abs(quad_form(h, v)) <= 1e-6);
        }
}

TEST_CASE("eval is affine along the leaf plane") {
    Rng rng(26);
    for (const auto& pr : kSets)
        for (int i = 0; i < 100; ++i) {
            const Point3 x = verify::sample_interior(pr, rng, 1e-2);
            const double t = 1e-4 * pr.eps();
            for (const auto& v : in_plane_directions(pr, x)) {
                const Point3 a{x.x1 + t * v[0], x.x2 + t * v[1], x.x3 + t * v[2]};
                const Point3 b{x.x1 - t * v[0], x.x2 - t * v[1], x.x3 - t * v[2]};
                if (domain::formula_region(pr, a) != domain::formula_region(pr, b)) continue;
                const double mid = bellman::eval(pr, x);
                const double res = bellman::eval(pr, a) + bellman::eval(pr, b) - 2 * mid;
                CHECK(std::abs(res) <= 1e-9 * std::max(1.0, std::abs(mid)));
            }
        }
}

TEST_CASE("scaling covariance, including a non-dyadic eps") {
    Rng rng(27);
    for (double eps : {0.5, 1.7, 2.0})
        for (auto base : {Params(1, 3), Params(2.5, 4), Params(4, 3)}) {
            const Params pe(base.p(), base.r(), eps);
            for (int i = 0; i < 100; ++i) {
                const Point3 x = verify::sample_interior(pe, rng, 0.0);
                const Point3 y{x.x1 / eps, x.x2 / (eps * eps), x.x3 / std::pow(eps, base.p())};
                const double want = std::pow(eps, base.r()) * bellman::eval(base, y);
                CHECK(rel(bellman::eval(pe, x), want) <= 1e-8);
            }
        }
}

TEST_CASE("moment sandwich") {
    // Any admissible function has <|f|^r> >= <f^2>^{r/2} when r >= 2, and the
    // power-mean inequality between the p- and r-moments.
    Rng rng(28);
    for (const auto& pr : kSets)
        for (int i = 0; i < 200; ++i) {
            const Point3 x = verify::sample_interior(pr, rng, 0.0);
            const double g = bellman::eval(pr, x);
            const double p = pr.p(), r = pr.r();
            const double slack = 1e-9 * std::max(1.0, g);
            if (r >= 2) CHECK(g >= std::pow(x.x2, r / 2) - slack);
            if (r <= 2) CHECK(g <= std::pow(x.x2, r / 2) + slack);
            if (r >= p) CHECK(g >= std::pow(x.x3, r / p) - slack);
            if (r <= p) CHECK(g <= std::pow(x.x3, r / p) + slack);
            if (pr.regime() == Regime::Max) {
                const auto leaf = bellman::solve_leaf(pr, x);
                if (leaf.region != Region::XiZero) {
                    // Largest value at a vertex of the leaf triangle.
                    CHECK(g <= std::pow(leaf.u, r) + pr.eps() * specfn::m_fn(r, pr.eps(), leaf.u) + slack);
                }
            }
        }
}

}  // TEST_SUITE
