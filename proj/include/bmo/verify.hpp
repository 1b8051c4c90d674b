#pragma once

#include "bmo/domain.hpp"
#include "bmo/rng.hpp"
#include "bmo/testfn.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bmo::verify {

/// Outcome of one verification suite. passed == (worst_residual <= tolerance).
struct VerifyReport {
    std::string suite;
    double p = 0.0;
    double r = 0.0;
    double eps = 1.0;
    long cases = 0;
    double worst_residual = 0.0;
    double tolerance = 0.0;
    std::string witness;
    bool passed = false;
};

/// {suite, params:{p,r,eps}, cases, worst_residual, tolerance, witness, passed}.
std::string to_json(const VerifyReport& report);
VerifyReport from_json(const std::string& text);

/// m_p, k_p and their derivatives; replaceable so the identity suite can be fed a
/// corrupted kernel.
struct Kernels {
    std::function<double(double p, double eps, double u, int order)> m;
    std::function<double(double p, double eps, double u, int order)> k;
};
Kernels default_kernels();

/// Differential identities of m and k for both exponents, u_grid inside [eps, eps + 10].
/// Relative residual tolerance 1e-8.
VerifyReport check_identities(const Params& params, const std::vector<double>& u_grid,
                              const Kernels& kernels = default_kernels());

/// Closed forms of m and k at special exponents and points. Relative tolerance 1e-10.
VerifyReport check_closed_forms(double eps, const std::vector<double>& p_values, const std::vector<double>& u_grid);

/// eval(t, t^2, |t|^p) against |t|^r, relative tolerance 1e-8.
VerifyReport check_skeleton(const Params& params, const std::vector<double>& t_grid);

/// eval(0, eps^2, eps^p Gamma(p+1)/2) against eps^r Gamma(r+1)/2, relative tolerance 1e-8.
VerifyReport check_extremal_point(const Params& params);

/// Random interior point of the Bellman domain at distance >= margin from its boundary,
/// with |x1| <= 3 eps.
Point3 sample_interior(const Params& params, Rng& rng, double margin);

/// Hessian eigenvalues at random interior points (margin 1e-3): regime Max reports the
/// largest eigenvalue, regime Min the negated smallest. Tolerance 1e-6.
VerifyReport check_concavity(const Params& params, int n_samples, std::uint64_t seed);

/// Gradient jump across the seam between XiZero and XiPlus/XiMinus at n_samples seam
/// points (tolerance 1e-6) together with the scalar gluing identity at u = eps (1e-8).
VerifyReport check_c1_glue(const Params& params, int n_samples);

/// Random step functions with seminorm eps against the Bellman bound. The residual is
/// the relative excess beyond 1e-9 absolute slack; tolerance 1e-6.
VerifyReport check_inequality_oracle(const Params& params, int n_fns, int cells, std::uint64_t seed);

/// Moments of the optimizers for U_+ and U_- against eval and the vertex coordinates.
/// Relative tolerance 1e-6.
VerifyReport check_attainment(const Params& params, const std::vector<double>& u_grid);

/// Mean 0, second moment 1, p- and r-moments Gamma(q+1)/2 of phi0 (1e-8), and its grid
/// BMO seminorm within 5e-3 of 1 at the given levels.
VerifyReport check_phi0(const Params& params, int levels);

/// eval with eps against eps^r times eval with eps = 1 at rescaled points; relative 1e-8.
VerifyReport check_scaling(const Params& params, int n_samples, std::uint64_t seed);

/// g(u) = (2u^r + (1-u) m_r(u)) / (2u^p + (1-u) m_p(u)) with eps = 1, on n + 1 points of
/// [0, 1]. Residual is the largest increment relative to g(0); tolerance 0.
VerifyReport check_slice_monotone(const Params& params, int n);

struct ConstantScan {
    double c_observed = 0.0;
    double ratio = 0.0;  ///< max of eval / x3, i.e. c_observed^r
    Point3 argmax;
};

/// Scan of the x1 = 0 slice with eps = 1: x2 = i/n for i = 1..n and n points of x3
/// between the lower and upper boundary.
ConstantScan extract_constant(const Params& params, int grid_density);

/// (Gamma(r+1)/Gamma(p+1))^{1/r}. Requires p >= 1, r >= max(2, p), r > p.
double sharp_constant(double p, double r);

/// Line-inequality checks on a candidate psi: zero outside (0, 1), p- and r-moments on
/// [0, 1] within 2% of phi0's, grid BMO over the whole domain <= 1 + delta, and the
/// ratio ||psi||_r / (||psi||_p^{p/r} ||psi||_BMO^{1-p/r}) >= 0.95 sharp_constant.
/// The residual is the largest violation over the four checks; tolerance 0.
VerifyReport transference_check(const testfn::PiecewiseFn& psi, double p, double r, double delta, int levels);

/// Builds psi from phi0 by homogenization and runs transference_check.
VerifyReport transference_demo(double p, double r, double delta, double lambda, int depth, int levels = 10);

/// Smallest depth with lambda^depth <= residual.
int depth_for(double lambda, double residual = 1e-6);

}  // namespace bmo::verify
