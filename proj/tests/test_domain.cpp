#include <doctest.h>

#include "bmo/domain.hpp"
#include "bmo/errors.hpp"
#include "bmo/rng.hpp"
#include "bmo/specfn.hpp"

#include <cmath>

using namespace bmo;
using namespace bmo::domain;

namespace {

// Line through the two endpoints of S_+(u) (sign = +1) or S_-(u) (sign = -1),
// evaluated at x1: its height minus x2.
double chord_residual(double eps, double u, int sign, Point2 pt) {
    const double x1b = u + sign * eps;
    const double x2b = x1b * x1b + eps * eps;
    const double slope = (x2b - u * u) / (x1b - u);
    return u * u + slope * (pt.x1 - u) - pt.x2;
}

// Bisection oracle for the chord parameter through pt.
double chord_bisect(double eps, Point2 pt, int sign) {
    // S_+(u) passes through pt for u in [x1 - eps, x1]; S_-(u) for u in [x1, x1 + eps].
    double lo = sign > 0 ? pt.x1 - eps : pt.x1;
    double hi = sign > 0 ? pt.x1 : pt.x1 + eps;
    double flo = chord_residual(eps, lo, sign, pt);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = chord_residual(eps, mid, sign, pt);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Point2 random_point2(Rng& rng, double eps) {
    const double x1 = rng.uniform(-4 * eps, 4 * eps);
    return {x1, x1 * x1 + eps * eps * rng.uniform()};
}

}  // namespace

TEST_SUITE("domain") {

TEST_CASE("Params regime and validation") {
    CHECK(Params(1, 3).regime() == Regime::Max);
    CHECK(Params(2.5, 4).regime() == Regime::Max);
    CHECK(Params(4, 3).regime() == Regime::Min);
    CHECK(Params(1.2, 1.5).regime() == Regime::Min);
    CHECK(Params(3, 3).regime() == Regime::Degenerate);
    CHECK(Params(1.5, 2).regime() == Regime::Degenerate);
    CHECK_THROWS_AS(Params(2, 3), DomainError);
    CHECK_THROWS_AS(Params(0.5, 3), DomainError);
    CHECK_THROWS_AS(Params(1, 3, 0.0), DomainError);
    CHECK_THROWS_AS(Params(1, 3, -1.0), DomainError);
}

TEST_CASE("omega2_contains examples") {
    CHECK(omega2_contains(1, {0.3, 0.09}));
    CHECK(omega2_contains(1, {0, 1}));
    CHECK_FALSE(omega2_contains(1, {0, 1.1}));
    CHECK_FALSE(omega2_contains(1, {1, 0.9}));
}

TEST_CASE("tangent_params examples") {
    for (double t : {-2.0, 0.0, 0.7}) {
        const auto tp = tangent_params(1, {t, t * t});
        CHECK(tp.u_plus == doctest::Approx(t));
        CHECK(tp.u_minus == doctest::Approx(t));
    }
    auto tp = tangent_params(1, {0, 1});
    CHECK(tp.u_plus == doctest::Approx(-1));
    CHECK(tp.u_minus == doctest::Approx(1));
    tp = tangent_params(1, {2, 5});
    CHECK(tp.u_plus == doctest::Approx(1));
    CHECK(tp.u_minus == doctest::Approx(3));
    CHECK_THROWS_AS(tangent_params(1, {0, 2}), DomainError);
}

TEST_CASE("tangent_params round trip against a bisection oracle") {
    Rng rng(11);
    for (double eps : {0.5, 1.0, 2.0})
        for (int i = 0; i < 300; ++i) {
            const Point2 pt = random_point2(rng, eps);
            const auto tp = tangent_params(eps, pt);
            CAPTURE(pt.x1);
            CAPTURE(pt.x2);
            CHECK(std::abs(chord_residual(eps, tp.u_plus, +1, pt)) <= 1e-10 * std::max(1.0, pt.x2));
            CHECK(std::abs(chord_residual(eps, tp.u_minus, -1, pt)) <= 1e-10 * std::max(1.0, pt.x2));
            CHECK(tp.u_plus <= tp.u_minus);
            CHECK(tp.u_plus == doctest::Approx(chord_bisect(eps, pt, +1)).epsilon(1e-9));
            CHECK(tp.u_minus == doctest::Approx(chord_bisect(eps, pt, -1)).epsilon(1e-9));
        }
}

TEST_CASE("a_m and a_k examples") {
    for (double t : {-1.5, 0.2, 3.0}) {
        CHECK(a_m(1.7, 1, {t, t * t}) == doctest::Approx(std::pow(std::abs(t), 1.7)));
        CHECK(a_k(3, 1, {t, t * t}) == doctest::Approx(std::pow(std::abs(t), 3)));
    }
    CHECK(a_m(1, 1, {2, 5}) == doctest::Approx(2).epsilon(1e-13));
    CHECK(a_m(2.5, 1, {0, 0.5}) == doctest::Approx(std::tgamma(3.5) / 4).epsilon(1e-13));
    CHECK(a_k(1, 1, {0.5, 0.3}) == doctest::Approx(std::sqrt(0.3)).epsilon(1e-13));
    CHECK(a_k(1, 1, {2, 5}) == doctest::Approx(2 + std::exp(-2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(a_m(1, 1, {0, 2}), DomainError);
    CHECK_THROWS_AS(a_k(1, 1, {0, 2}), DomainError);
}

TEST_CASE("a_m and a_k: ordering by p and evenness") {
    Rng rng(12);
    for (double p : {1.0, 1.5, 1.9, 2.5, 3.0, 4.0})
        for (int i = 0; i < 200; ++i) {
            const Point2 pt = random_point2(rng, 1.0);
            const double am = a_m(p, 1, pt);
            const double ak = a_k(p, 1, pt);
            CAPTURE(p);
            CAPTURE(pt.x1);
            CAPTURE(pt.x2);
            if (p > 2)
                CHECK(am >= ak - 1e-10);
            else
                CHECK(am <= ak + 1e-10);
            CHECK(a_m(p, 1, {-pt.x1, pt.x2}) == am);
            CHECK(a_k(p, 1, {-pt.x1, pt.x2}) == ak);
        }
}

TEST_CASE("a_m tangent extension uses m_p") {
    // On S_+(u) the value is u^p + m_p(u)(x1 - u).
    for (double p : {1.5, 3.0})
        for (double u : {0.5, 2.0}) {
            const double x1 = u + 0.4;
            const Point2 pt{x1, u * u + (2 * u + 2) * (x1 - u)};
            CHECK(a_m(p, 1, pt) ==
                  doctest::Approx(std::pow(u, p) + specfn::m_fn(p, 1, u) * (x1 - u)).epsilon(1e-12));
        }
}

TEST_CASE("bellman2d sides") {
    CHECK(bellman2d(3, 1, {2, 5}, Side::Upper) == a_m(3, 1, {2, 5}));
    CHECK(bellman2d(1.5, 1, {0, 0.25}, Side::Upper) == doctest::Approx(std::pow(0.25, 0.75)));
    CHECK(bellman2d(1.5, 1, {0.6, 0.36}, Side::Lower) == doctest::Approx(std::pow(0.6, 1.5)));
    CHECK(bellman2d(Params(1, 3), {2, 5}, Side::Lower) == a_m(1, 1, {2, 5}));
}

TEST_CASE("omega3_contains examples") {
    const Params pr(1, 3);
    CHECK(omega3_contains(pr, {0, 1, 0.5}));
    for (double t : {-2.0, 0.3, 4.0}) CHECK(omega3_contains(pr, {t, t * t, std::abs(t)}));
    CHECK_FALSE(omega3_contains(pr, {2, 5, 3}));
    CHECK_FALSE(omega3_contains(pr, {0, 1.5, 0.5}));
}

TEST_CASE("classify examples") {
    const Params pr(1, 3);
    CHECK(classify(pr, {0, 1, 0.5}) == Region::XiZero);
    const double lo = bellman2d(pr, {3, 9.5}, Side::Lower);
    const double hi = bellman2d(pr, {3, 9.5}, Side::Upper);
    CHECK(classify(pr, {3, 9.5, 0.5 * (lo + hi)}) == Region::XiPlus);
    CHECK(classify(pr, {-3, 9.5, 0.5 * (lo + hi)}) == Region::XiMinus);
    CHECK(classify(pr, {2, 5, 2}) == Region::XiZero);
    CHECK(classify(pr, {0.5, 0.25, 0.5}) == Region::Skeleton);
    CHECK_THROWS_AS(classify(pr, {2, 5, 3}), DomainError);
}

TEST_CASE("classify is consistent under the mirror") {
    Rng rng(13);
    for (auto pr : {Params(1, 3), Params(2.5, 4), Params(4, 3), Params(1.5, 3, 0.5)})
        for (int i = 0; i < 300; ++i) {
            const Point2 pt = random_point2(rng, pr.eps());
            const double lo = bellman2d(pr, pt, Side::Lower);
            const double hi = bellman2d(pr, pt, Side::Upper);
            const Point3 x{pt.x1, pt.x2, lo + (hi - lo) * rng.uniform()};
            const Region a = classify(pr, x);
            const Region b = classify(pr, {-x.x1, x.x2, x.x3});
            if (a == Region::XiPlus)
                CHECK(b == Region::XiMinus);
            else if (a == Region::XiMinus)
                CHECK(b == Region::XiPlus);
            else
                CHECK(b == a);
        }
}

}  // TEST_SUITE
