#pragma once

#include "bmo/domain.hpp"

#include <array>
#include <utility>

namespace bmo::bellman {

/// Leaf of the foliation through a point: the owning region, the leaf
/// parameter u, and the bracket the root was solved on.
struct Leaf {
    Region region = Region::XiZero;
    double u = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
};

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

/// Right-hand side of the leaf-plane equation in XiPlus (x1 >= 0):
/// u^q + (m_q - k_q)(x2 - x1^2 + (x1-u)^2)/(4 eps) + (m_q + k_q)(x1 - u)/2.
double plane_plus(double q, double eps, double u, double x1, double x2);

/// Right-hand side of the leaf-plane equation in XiZero: u^q + (x2 - u^2) m_q(u) / (2(u + eps)).
double plane_zero(double q, double eps, double u, double x2);

/// Leaf parameter through x. The leaf map u -> x3 is monotone on the bracket;
/// the root is found by a bracketed derivative-free iteration to a residual of
/// 1e-12 (relative to max(1, |x3|)).
Leaf solve_leaf(const Params& params, Point3 x);

/// Value of the constructed function G at x: the Bellman function in regime
/// Max, the lower Bellman function in regime Min, x3 (r = p) or x2 (r = 2) when degenerate.
double eval(const Params& params, Point3 x);

/// Value of G on a leaf already solved for x.
double eval_on_leaf(const Params& params, Point3 x, const Leaf& leaf);

/// Analytic gradient through the leaf constraint. Requires interior margin >= 1e-6.
Vec3 gradient(const Params& params, Point3 x);

/// Finite-difference Hessian of the gradient (base step 1e-5, one Richardson
/// step), symmetrised.
/// Requires interior margin >= 1e-4.
Mat3 hessian(const Params& params, Point3 x);

/// Eigenvalues of a symmetric 3x3 matrix in ascending order.
Vec3 symmetric_eigenvalues(const Mat3& h);

}  // namespace bmo::bellman
