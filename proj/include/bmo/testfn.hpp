#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bmo::testfn {

enum class PieceKind { Const, AffineLog };

/// One piece on the half-open interval [a, b). Const pieces hold their value in c0;
/// AffineLog pieces are t -> c0 + c1 ln(sigma (t - tau)).
struct Piece {
    double a = 0.0;
    double b = 0.0;
    PieceKind kind = PieceKind::Const;
    double c0 = 0.0;
    double c1 = 0.0;
    int sigma = 1;
    double tau = 0.0;

    static Piece constant(double a, double b, double v);
    static Piece affine_log(double a, double b, double c0, double c1, int sigma, double tau);

    double value(double t) const;
};

/// Ordered pieces that partition [lo, hi] with no gaps or overlaps.
class PiecewiseFn {
public:
    explicit PiecewiseFn(std::vector<Piece> pieces);

    const std::vector<Piece>& pieces() const noexcept { return pieces_; }
    double lo() const noexcept { return pieces_.front().a; }
    double hi() const noexcept { return pieces_.back().b; }
    double length() const noexcept { return hi() - lo(); }
    bool is_step() const noexcept;

    double operator()(double t) const;

private:
    std::vector<Piece> pieces_;
};

/// -eps ln t + u on (0, 1].
PiecewiseFn optimizer_uplus(double eps, double u);
/// -eps on [0, 1/2), eps on [1/2, 1), eps (1 + ln t) on [1, e^{(u - eps)/eps}).
PiecewiseFn optimizer_uminus(double eps, double u);
/// ln(t + 2) on (-2, -1], 0 on [-1, 1], -ln(2 - t) on [1, 2).
PiecewiseFn optimizer_phi0();

/// |I|^{-1} int_I |f|^q.
double moments(const PiecewiseFn& f, double q);
/// |I|^{-1} int_I f.
double mean(const PiecewiseFn& f);
/// |I|^{-1} int_I f^2.
double second_moment(const PiecewiseFn& f);

/// int_{t0}^{t1} f^power over a sub-interval of one piece, power in {1, 2}.
double piece_integral(const Piece& piece, double t0, double t1, int power);

/// int_{y0}^{y1} |c0 + c1 ln y|^q dy for 0 <= y0 <= y1.
double abs_power_log_integral(double c0, double c1, double y0, double y1, double q);

/// Grid BMO seminorm: the dyadic grid of 2^levels cells plus all breakpoints, and
/// the largest L2 oscillation over intervals with endpoints on that grid. A lower
/// bound for the seminorm, nondecreasing in levels.
double bmo_norm(const PiecewiseFn& f, int levels);

/// Seminorm of a step function over all subintervals of its domain. Interval ends
/// may cut cells at any point; for each pair of end cells the cut fractions are
/// optimised by coordinate ascent, each step being an exact 1-D maximisation.
double bmo_norm_steps(const PiecewiseFn& f);

/// g_J(t) = g(i1 + (t - j1)(i2 - i1)/(j2 - j1)) on J. j2 < j1 is allowed and reflects.
PiecewiseFn transfer(const PiecewiseFn& g, double j1, double j2);

/// lambda-homogenization of g on [-1/2, 1/2] truncated after `depth` intervals on
/// each side; the two end gaps of total length lambda^depth hold the mean of g.
PiecewiseFn homogenize(const PiecewiseFn& g, double lambda, int depth);

/// Homogenized copy of phi0 moved to [0, 1] and extended by zero to [ambient_lo, ambient_hi].
PiecewiseFn build_psi(double lambda, int depth, double ambient_lo = -4.0, double ambient_hi = 5.0);

/// |{t in I : f(t) > c}| (Lebesgue measure, not normalised).
double distribution(const PiecewiseFn& f, double c);

/// Random step function on `cells` equal cells of [0, 1], scaled so that
/// bmo_norm_steps equals eps. Deterministic per seed.
PiecewiseFn random_step_fn(std::uint64_t seed, int cells, double eps);

/// CSV with header kind,a,b,c0,c1,sigma,tau; kind is "const" or "affine_log".
std::string to_csv(const PiecewiseFn& f);
PiecewiseFn from_csv(std::istream& in);

}  // namespace bmo::testfn
