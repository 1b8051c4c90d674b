#include "bmo/testfn.hpp"

#include "bmo/errors.hpp"
#include "bmo/rng.hpp"
#include "bmo/specfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

namespace bmo::testfn {
namespace {

constexpr double kJoinTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Range of y = sigma (t - tau) over [t0, t1], ordered and clamped at 0.
std::pair<double, double> y_range(const Piece& piece, double t0, double t1) {
    double y0 = piece.sigma * (t0 - piece.tau);
    double y1 = piece.sigma * (t1 - piece.tau);
    if (y0 > y1) std::swap(y0, y1);
    return {std::max(y0, 0.0), std::max(y1, 0.0)};
}

// Antiderivatives in y of (c0 + c1 ln y) and its square, both vanishing at y = 0.
double log_antiderivative(double c0, double c1, double y) {
    if (y <= 0.0) return 0.0;
    return y * (c0 + c1 * (std::log(y) - 1.0));
}

double log_square_antiderivative(double c0, double c1, double y) {
    if (y <= 0.0) return 0.0;
    const double z = c0 + c1 * std::log(y);
    return y * (z * z - 2.0 * c1 * z + 2.0 * c1 * c1);
}

double piece_power_integral(const Piece& piece, double q) {
    if (piece.kind == PieceKind::Const) return (piece.b - piece.a) * std::pow(std::abs(piece.c0), q);
    const auto [y0, y1] = y_range(piece, piece.a, piece.b);
    return abs_power_log_integral(piece.c0, piece.c1, y0, y1, q);
}

// Measure of {f > c} on one piece.
double piece_distribution(const Piece& piece, double c) {
    if (piece.kind == PieceKind::Const || piece.c1 == 0.0) return piece.c0 > c ? piece.b - piece.a : 0.0;
    const auto [y0, y1] = y_range(piece, piece.a, piece.b);
    const double yc = std::exp((c - piece.c0) / piece.c1);
    if (piece.c1 > 0.0) return std::max(0.0, y1 - std::max(y0, yc));
    return std::max(0.0, std::min(y1, yc) - y0);
}

}  // namespace

Piece Piece::constant(double a, double b, double v) {
    Piece p;
    p.a = a;
    p.b = b;
    p.kind = PieceKind::Const;
    p.c0 = v;
    return p;
}

Piece Piece::affine_log(double a, double b, double c0, double c1, int sigma, double tau) {
    Piece p;
    p.a = a;
    p.b = b;
    p.kind = PieceKind::AffineLog;
    p.c0 = c0;
    p.c1 = c1;
    p.sigma = sigma;
    p.tau = tau;
    return p;
}

double Piece::value(double t) const {
    if (kind == PieceKind::Const) return c0;
    return c0 + c1 * std::log(sigma * (t - tau));
}

PiecewiseFn::PiecewiseFn(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw DomainError("PiecewiseFn: no pieces");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        Piece& p = pieces_[i];
        if (!(p.a < p.b)) throw DomainError("PiecewiseFn: piece " + std::to_string(i) + " has a >= b");
        if (i > 0) {
            const double prev = pieces_[i - 1].b;
            if (std::abs(prev - p.a) > kJoinTol * std::max(1.0, std::abs(prev)))
                throw DomainError("PiecewiseFn: gap or overlap before piece " + std::to_string(i));
            p.a = prev;
        }
        if (p.kind == PieceKind::AffineLog) {
            if (p.sigma != 1 && p.sigma != -1) throw DomainError("PiecewiseFn: sigma must be +1 or -1");
            const double scale = kJoinTol * std::max(1.0, std::abs(p.tau));
            if (p.sigma * (p.a - p.tau) < -scale || p.sigma * (p.b - p.tau) < -scale)
                throw DomainError("PiecewiseFn: log argument negative on piece " + std::to_string(i));
        }
    }
}

bool PiecewiseFn::is_step() const noexcept {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) {
        return p.kind == PieceKind::Const || p.c1 == 0.0;
    });
}

double PiecewiseFn::operator()(double t) const {
    if (t < lo() || t > hi()) throw DomainError("PiecewiseFn: argument outside the domain");
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t, [](double v, const Piece& p) { return v < p.b; });
    if (it == pieces_.end()) --it;
    return it->value(t);
}

PiecewiseFn optimizer_uplus(double eps, double u) {
    if (!(eps > 0.0)) throw DomainError("optimizer_uplus: eps must be positive");
    if (!(u >= 0.0)) throw DomainError("optimizer_uplus: u must be >= 0");
    return PiecewiseFn({Piece::affine_log(0.0, 1.0, u, -eps, 1, 0.0)});
}

PiecewiseFn optimizer_uminus(double eps, double u) {
    if (!(eps > 0.0)) throw DomainError("optimizer_uminus: eps must be positive");
    if (!(u >= eps)) throw DomainError("optimizer_uminus: u must be >= eps");
    std::vector<Piece> pieces{Piece::constant(0.0, 0.5, -eps), Piece::constant(0.5, 1.0, eps)};
    const double end = std::exp((u - eps) / eps);
    if (end > 1.0) pieces.push_back(Piece::affine_log(1.0, end, eps, eps, 1, 0.0));
    return PiecewiseFn(std::move(pieces));
}

PiecewiseFn optimizer_phi0() {
    return PiecewiseFn({Piece::affine_log(-2.0, -1.0, 0.0, 1.0, 1, -2.0), Piece::constant(-1.0, 1.0, 0.0),
                        Piece::affine_log(1.0, 2.0, 0.0, -1.0, -1, 2.0)});
}

double abs_power_log_integral(double c0, double c1, double y0, double y1, double q) {
    if (!(y0 >= 0.0) || !(y1 >= y0)) throw DomainError("abs_power_log_integral: need 0 <= y0 <= y1");
    if (y1 == y0) return 0.0;
    if (c1 == 0.0) return (y1 - y0) * std::pow(std::abs(c0), q);
    // With s = c0/c1 + ln y the integrand is |c1|^q |s|^q e^{s - c0/c1} ds.
    const double shift = c0 / c1;
    const double s_lo = y0 > 0.0 ? shift + std::log(y0) : -kInf;
    const double s_hi = shift + std::log(y1);
    double total = 0.0;
    if (s_lo < 0.0) {
        // v = -s on [max(-s_hi, 0), -s_lo]: e^{-shift} (Gamma(q+1, v1) - Gamma(q+1, v2)).
        const double v1 = std::max(-s_hi, 0.0);
        const double y_v1 = s_hi < 0.0 ? y1 : std::exp(-shift);
        double part = y_v1 * specfn::upper_gamma_scaled(q + 1.0, v1);
        if (y0 > 0.0) part -= y0 * specfn::upper_gamma_scaled(q + 1.0, -s_lo);
        total += part;
    }
    if (s_hi > 0.0) {
        double part = y1 * specfn::lower_exp_scaled(q + 1.0, s_hi);
        if (s_lo > 0.0) part -= y0 * specfn::lower_exp_scaled(q + 1.0, s_lo);
        total += part;
    }
    return std::pow(std::abs(c1), q) * total;
}

double piece_integral(const Piece& piece, double t0, double t1, int power) {
    if (power != 1 && power != 2) throw DomainError("piece_integral: power must be 1 or 2");
    if (piece.kind == PieceKind::Const) return (t1 - t0) * (power == 1 ? piece.c0 : piece.c0 * piece.c0);
    const auto [y0, y1] = y_range(piece, t0, t1);
    if (power == 1)
        return log_antiderivative(piece.c0, piece.c1, y1) - log_antiderivative(piece.c0, piece.c1, y0);
    return log_square_antiderivative(piece.c0, piece.c1, y1) - log_square_antiderivative(piece.c0, piece.c1, y0);
}

double moments(const PiecewiseFn& f, double q) {
    if (!(q >= 1.0)) throw DomainError("moments: q must be >= 1");
    double total = 0.0;
    for (const Piece& p : f.pieces()) total += piece_power_integral(p, q);
    return total / f.length();
}

double mean(const PiecewiseFn& f) {
    double total = 0.0;
    for (const Piece& p : f.pieces()) total += piece_integral(p, p.a, p.b, 1);
    return total / f.length();
}

double second_moment(const PiecewiseFn& f) {
    double total = 0.0;
    for (const Piece& p : f.pieces()) total += piece_integral(p, p.a, p.b, 2);
    return total / f.length();
}

double bmo_norm(const PiecewiseFn& f, int levels) {
    if (levels < 0 || levels > 16) throw DomainError("bmo_norm: levels must be in 0..16");
    const double lo = f.lo(), hi = f.hi();
    const std::size_t cells = std::size_t{1} << levels;
    std::vector<double> nodes;
    nodes.reserve(cells + 1 + f.pieces().size());
    for (std::size_t k = 0; k < cells; ++k) nodes.push_back(lo + (hi - lo) * static_cast<double>(k) / cells);
    for (const Piece& p : f.pieces()) nodes.push_back(p.a);
    nodes.push_back(hi);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    // Integrals of f and f^2 over each grid cell.
    const std::size_t n = nodes.size() - 1;
    std::vector<double> len(n), i1(n), i2(n);
    std::size_t piece_index = 0;
    const auto& pieces = f.pieces();
    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = nodes[k], t1 = nodes[k + 1];
        while (pieces[piece_index].b <= t0) ++piece_index;
        const Piece& p = pieces[piece_index];
        len[k] = t1 - t0;
        i1[k] = piece_integral(p, t0, t1, 1);
        i2[k] = piece_integral(p, t0, t1, 2);
    }

    // Running sums over cells rather than differences of prefix sums, to avoid
    // cancellation on short intervals.
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double l = 0.0, s1 = 0.0, s2 = 0.0;
        for (std::size_t j = i; j < n; ++j) {
            l += len[j];
            s1 += i1[j];
            s2 += i2[j];
            const double m = s1 / l;
            best = std::max(best, s2 / l - m * m);
        }
    }
    return std::sqrt(best);
}

double bmo_norm_steps(const PiecewiseFn& f) {
    if (!f.is_step()) throw DomainError("bmo_norm_steps: function is not piecewise constant");
    const auto& pieces = f.pieces();
    const std::size_t n = pieces.size();
    std::vector<double> w(n), v(n);
    for (std::size_t k = 0; k < n; ++k) {
        w[k] = pieces[k].b - pieces[k].a;
        v[k] = pieces[k].c0;
    }

    // Largest variance of the mixture of `rest` with mass x of value `val`, x in [0, cap].
    struct Moments {
        double mass, s1, s2;
    };
    auto best_extra = [](const Moments& rest, double val, double cap) {
        if (rest.mass <= 0.0) return cap;
        const double mu = rest.s1 / rest.mass;
        const double var = std::max(rest.s2 / rest.mass - mu * mu, 0.0);
        const double d2 = (val - mu) * (val - mu);
        if (d2 <= var) return 0.0;
        const double wstar = (d2 - var) / (2.0 * d2);
        return std::min(cap, wstar * rest.mass / (1.0 - wstar));
    };
    auto variance = [](const Moments& m) {
        const double mu = m.s1 / m.mass;
        return std::max(m.s2 / m.mass - mu * mu, 0.0);
    };

    double best = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Moments block{0.0, 0.0, 0.0};
        double vmin = v[i], vmax = v[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            vmin = std::min(vmin, v[j]);
            vmax = std::max(vmax, v[j]);
            // Any distribution on [vmin, vmax] has variance at most a quarter of the range squared.
            if (0.25 * (vmax - vmin) * (vmax - vmin) > best) {
                for (auto [xa, xb] : {std::pair{1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}}) {
                    double mass_i = xa * w[i], mass_j = xb * w[j];
                    for (int iter = 0; iter < 200; ++iter) {
                        const Moments rest_i{block.mass + mass_j, block.s1 + mass_j * v[j],
                                             block.s2 + mass_j * v[j] * v[j]};
                        const double new_i = best_extra(rest_i, v[i], w[i]);
                        const Moments rest_j{block.mass + new_i, block.s1 + new_i * v[i],
                                             block.s2 + new_i * v[i] * v[i]};
                        const double new_j = best_extra(rest_j, v[j], w[j]);
                        const bool settled = std::abs(new_i - mass_i) <= 1e-15 * w[i] &&
                                             std::abs(new_j - mass_j) <= 1e-15 * w[j];
                        mass_i = new_i;
                        mass_j = new_j;
                        if (settled) break;
                    }
                    const Moments total{block.mass + mass_i + mass_j,
                                        block.s1 + mass_i * v[i] + mass_j * v[j],
                                        block.s2 + mass_i * v[i] * v[i] + mass_j * v[j] * v[j]};
                    if (total.mass > 0.0) best = std::max(best, variance(total));
                }
            }
            block.mass += w[j];
            block.s1 += w[j] * v[j];
            block.s2 += w[j] * v[j] * v[j];
        }
    }
    return std::sqrt(best);
}

PiecewiseFn transfer(const PiecewiseFn& g, double j1, double j2) {
    if (!(j1 != j2) || !std::isfinite(j1) || !std::isfinite(j2)) throw DomainError("transfer: degenerate target interval");
    const double i1 = g.lo(), i2 = g.hi();
    const double k = (j2 - j1) / (i2 - i1);
    const bool reflect = k < 0.0;
    auto map = [&](double t) {
        if (t == i1) return j1;
        if (t == i2) return j2;
        return j1 + (t - i1) * k;
    };
    std::vector<Piece> out;
    out.reserve(g.pieces().size());
    for (const Piece& p : g.pieces()) {
        Piece q = p;
        q.a = map(reflect ? p.b : p.a);
        q.b = map(reflect ? p.a : p.b);
        if (p.kind == PieceKind::AffineLog) {
            q.tau = j1 + (p.tau - i1) * k;
            q.sigma = reflect ? -p.sigma : p.sigma;
            q.c0 = p.c0 - p.c1 * std::log(std::abs(k));
        }
        out.push_back(q);
    }
    if (reflect) std::reverse(out.begin(), out.end());
    return PiecewiseFn(std::move(out));
}

PiecewiseFn homogenize(const PiecewiseFn& g, double lambda, int depth) {
    if (std::abs(g.lo() + 0.5) > kJoinTol || std::abs(g.hi() - 0.5) > kJoinTol)
        throw DomainError("homogenize: g must live on [-1/2, 1/2]");
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("homogenize: lambda must be in (0, 1)");
    if (depth < 1) throw DomainError("homogenize: depth must be positive");
    std::vector<double> bound(static_cast<std::size_t>(depth) + 1);
    for (int k = 0; k <= depth; ++k) bound[k] = 0.5 * (1.0 - std::pow(lambda, k));
    const double fill = mean(g);

    std::vector<Piece> pieces;
    pieces.reserve(2 * (static_cast<std::size_t>(depth) * g.pieces().size() + 1));
    auto append = [&](const PiecewiseFn& part) {
        pieces.insert(pieces.end(), part.pieces().begin(), part.pieces().end());
    };
    if (bound[depth] < 0.5) pieces.push_back(Piece::constant(-0.5, -bound[depth], fill));
    // I_{k,-} runs from -bound[k-1] to -bound[k]; as a transfer target it is reversed.
    for (int k = depth; k >= 1; --k) append(transfer(g, k == 1 ? 0.0 : -bound[k - 1], -bound[k]));
    for (int k = 1; k <= depth; ++k) append(transfer(g, bound[k - 1], bound[k]));
    if (bound[depth] < 0.5) pieces.push_back(Piece::constant(bound[depth], 0.5, fill));
    return PiecewiseFn(std::move(pieces));
}

PiecewiseFn build_psi(double lambda, int depth, double ambient_lo, double ambient_hi) {
    if (!(ambient_lo <= 0.0 && ambient_hi >= 1.0)) throw DomainError("build_psi: ambient interval must contain [0, 1]");
    const PiecewiseFn shrunk = transfer(optimizer_phi0(), -0.5, 0.5);
    const PiecewiseFn placed = transfer(homogenize(shrunk, lambda, depth), 0.0, 1.0);
    std::vector<Piece> pieces;
    pieces.reserve(placed.pieces().size() + 2);
    if (ambient_lo < 0.0) pieces.push_back(Piece::constant(ambient_lo, 0.0, 0.0));
    pieces.insert(pieces.end(), placed.pieces().begin(), placed.pieces().end());
    if (ambient_hi > 1.0) pieces.push_back(Piece::constant(1.0, ambient_hi, 0.0));
    return PiecewiseFn(std::move(pieces));
}

double distribution(const PiecewiseFn& f, double c) {
    double total = 0.0;
    for (const Piece& p : f.pieces()) total += piece_distribution(p, c);
    return total;
}

PiecewiseFn random_step_fn(std::uint64_t seed, int cells, double eps) {
    if (cells < 2) throw DomainError("random_step_fn: need at least 2 cells");
    if (!(eps > 0.0)) throw DomainError("random_step_fn: eps must be positive");
    Rng rng(seed);
    std::vector<double> values(static_cast<std::size_t>(cells));
    for (;;) {
        const auto shape = rng.next() % 4;
        for (double& v : values) {
            switch (shape) {
                case 0: v = rng.normal(); break;
                case 1: v = (rng.uniform() < 0.5 ? -1.0 : 1.0) * -std::log(1.0 - rng.uniform()); break;
                case 2: v = rng.uniform() < 0.5 ? 0.0 : 1.0; break;
                default: v = rng.uniform() < 0.1 ? rng.normal() * 4.0 : rng.uniform(); break;
            }
        }
        const double offset = rng.uniform(-2.0, 2.0) * eps;
        std::vector<Piece> pieces;
        pieces.reserve(values.size());
        for (int k = 0; k < cells; ++k)
            pieces.push_back(Piece::constant(static_cast<double>(k) / cells,
                                             k + 1 == cells ? 1.0 : static_cast<double>(k + 1) / cells, values[k]));
        const double norm = bmo_norm_steps(PiecewiseFn(pieces));
        if (!(norm > 0.0)) continue;
        for (Piece& p : pieces) p.c0 = p.c0 * (eps / norm) + offset;
        return PiecewiseFn(std::move(pieces));
    }
}

std::string to_csv(const PiecewiseFn& f) {
    std::string out = "kind,a,b,c0,c1,sigma,tau\n";
    char line[256];
    for (const Piece& p : f.pieces()) {
        const bool is_const = p.kind == PieceKind::Const;
        std::snprintf(line, sizeof line, "%s,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", is_const ? "const" : "affine_log",
                      p.a, p.b, p.c0, is_const ? 0.0 : p.c1, is_const ? 0 : p.sigma, is_const ? 0.0 : p.tau);
        out += line;
    }
    return out;
}

PiecewiseFn from_csv(std::istream& in) {
    std::string line;
    std::vector<Piece> pieces;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.rfind("kind,", 0) == 0) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7) throw DomainError("from_csv: row " + std::to_string(row) + " needs 7 fields");
        try {
            const double a = std::stod(fields[1]), b = std::stod(fields[2]);
            const double c0 = std::stod(fields[3]), c1 = std::stod(fields[4]);
            const int sigma = std::stoi(fields[5]);
            const double tau = std::stod(fields[6]);
            if (fields[0] == "const")
                pieces.push_back(Piece::constant(a, b, c0));
            else if (fields[0] == "affine_log")
                pieces.push_back(Piece::affine_log(a, b, c0, c1, sigma, tau));
            else
                throw DomainError("from_csv: row " + std::to_string(row) + " has unknown kind '" + fields[0] + "'");
        } catch (const std::logic_error& e) {
            if (dynamic_cast<const DomainError*>(&e)) throw;
            throw DomainError("from_csv: row " + std::to_string(row) + " is not numeric");
        }
    }
    return PiecewiseFn(std::move(pieces));
}

}  // namespace bmo::testfn
