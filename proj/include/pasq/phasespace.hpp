// Wigner-grid engine: sampling closed forms and density matrices onto a grid,
// photon addition and subtraction as second-order differential operators on W,
// and the identity-of-outcome residual.
//
//   W[a^dag rho a] = (s+1)/2 W - div(xW, pW)/2 + lap W / 8
//   W[a rho a^dag] = (s-1)/2 W + div(xW, pW)/2 + lap W / 8,   s = x^2 + p^2
//
// with div(xW, pW) = 2W + x dW/dx + p dW/dp expanded before discretization.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pasq/error.hpp"
#include "pasq/fock.hpp"
#include "pasq/gaussian.hpp"
#include "pasq/grid.hpp"
#include "pasq/special.hpp"

namespace pasq::phasespace {

using grid::GridGeometry;
using grid::WignerGrid;

inline constexpr int kDefaultStencilOrder = 8;
inline constexpr std::size_t kDefaultPoints = 257;
inline constexpr double kBoundaryDecay = 1e-12;
inline constexpr double kNormalizationTolerance = 1e-6;

// ---------------------------------------------------------------------------
// Geometry selection

/// Square grid with half-extent `reach` (at least 6) and spacing at most narrowest/5.
inline GridGeometry geometry_for(double reach, double narrowest, std::size_t min_points = kDefaultPoints) {
    const double half = std::max(6.0, reach);
    const double h = narrowest / 5.0;
    auto n = static_cast<std::size_t>(2.0 * std::ceil(half / h) + 1.0);
    n = std::max(n, min_points);
    if (n % 2 == 0) ++n;
    return GridGeometry::square(half, n);
}

inline GridGeometry auto_geometry(const gaussian::ClosedFormState& state) {
    if (const auto* avg = std::get_if<gaussian::AngularAverage>(&state)) {
        const double s = avg->sigma_x;
        return geometry_for(6.0 * std::max({1.0, s, 1.0 / s}), std::min(s, 1.0 / s));
    }
    double reach = 6.0;
    double narrowest = 1.0;
    for (const auto& c : std::get<gaussian::GaussianWignerSpec>(state).components()) {
        const double offset = std::hypot(c.mean_x(), c.mean_p());
        reach = std::max(reach, offset + 6.0 * std::max({1.0, c.sigma_x(), c.sigma_p()}));
        narrowest = std::min({narrowest, c.sigma_x(), c.sigma_p()});
    }
    return geometry_for(reach, narrowest);
}

/// Geometry from the first and second moments of rho. Widths are quoted in the
/// exp(-x^2/sigma^2) convention, sigma^2 = 2 var.
inline GridGeometry auto_geometry(const fock::DensityMatrix& rho) {
    const auto n = rho.trunc();
    const fock::Matrix x = fock::position_matrix(n);
    const fock::Matrix p = fock::momentum_matrix(n);
    const fock::Matrix& r = rho.elems();
    const double mx = (r * x).trace().real();
    const double mp = (r * p).trace().real();
    Eigen::Matrix2d cov;
    cov(0, 0) = (r * x * x).trace().real() - mx * mx;
    cov(1, 1) = (r * p * p).trace().real() - mp * mp;
    cov(0, 1) = cov(1, 0) = 0.5 * (r * (x * p + p * x)).trace().real() - mx * mp;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
    const double widest = std::sqrt(2.0 * std::max(eig.eigenvalues()(1), 1e-300));
    const double thinnest = std::sqrt(2.0 * std::max(eig.eigenvalues()(0), 1e-300));
    const double narrowest = std::min({1.0, thinnest, 1.0 / widest});
    return geometry_for(std::hypot(mx, mp) + 6.0 * std::max(1.0, widest), narrowest);
}

// ---------------------------------------------------------------------------
// Grid construction

template <class F>
WignerGrid sample_function(const GridGeometry& geom, F&& f) {
    std::vector<double> v(geom.size());
    for (std::size_t i = 0; i < geom.nx; ++i)
        for (std::size_t j = 0; j < geom.np; ++j) v[i * geom.np + j] = f(geom.x(i), geom.p(j));
    return WignerGrid(geom, std::move(v));
}

namespace detail {
inline WignerGrid flag_normalized(WignerGrid g, double tol, const char* who) {
    const double total = grid::integrate(g);
    if (std::fabs(total - 1.0) > tol)
        throw GeometryError(std::string(who) + ": grid integral " + std::to_string(total) +
                            " deviates from 1; enlarge the extent or refine the spacing");
    return WignerGrid(g.geometry(), g.values(), true);
}
} // namespace detail

/// Samples a closed-form state; the result is flagged normalized once its
/// Simpson integral is within 1e-6 of one.
inline WignerGrid rasterize(const gaussian::ClosedFormState& state, const GridGeometry& geom) {
    auto g = sample_function(geom, [&](double x, double p) { return gaussian::closed_form_eval(state, x, p); });
    return detail::flag_normalized(std::move(g), kNormalizationTolerance, "rasterize");
}

/// W(x,p) = (1/2pi) int dy <x - y/2| rho |x + y/2> e^{ipy}, with the kernel expanded in
/// Hermite functions and the y integral done by Simpson over |y| <= (nx-1) dx, step dx.
inline WignerGrid wigner_from_density(const fock::DensityMatrix& rho, const GridGeometry& geom) {
    if (std::fabs(rho.trace() - 1.0) > 1e-8)
        throw ConfigError("wigner_from_density: density matrix must have unit trace");
    const auto dim = static_cast<Eigen::Index>(rho.trunc());
    const auto half = static_cast<Eigen::Index>(geom.nx - 1);  // y_j = j dx, |j| <= half
    const Eigen::Index ny = 2 * half + 1;
    const Eigen::Index lattice = 4 * half + 1;                  // x0 + (k - half) dx/2

    Eigen::MatrixXd psi(dim, lattice);
    for (Eigen::Index k = 0; k < lattice; ++k) {
        const double u = geom.x0 + static_cast<double>(k - half) * 0.5 * geom.dx;
        const auto col = special::hermite_psi_all(static_cast<std::size_t>(dim), u);
        for (Eigen::Index m = 0; m < dim; ++m) psi(m, k) = col[static_cast<std::size_t>(m)];
    }
    const fock::Matrix psi_c = psi.cast<fock::Complex>();
    const fock::Matrix phi = rho.elems() * psi_c;

    const auto wy = grid::simpson_weights(static_cast<std::size_t>(ny), geom.dx);
    fock::Matrix kernel(static_cast<Eigen::Index>(geom.nx), ny);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(geom.nx); ++i)
        for (Eigen::Index j = -half; j <= half; ++j) {
            const Eigen::Index ku = 2 * i - j + half;
            const Eigen::Index kv = 2 * i + j + half;
            const fock::Complex val = psi_c.col(ku).dot(phi.col(kv));  // psi is real
            kernel(i, j + half) = wy[static_cast<std::size_t>(j + half)] * val;
        }

    fock::Matrix phase(ny, static_cast<Eigen::Index>(geom.np));
    for (Eigen::Index j = 0; j < ny; ++j) {
        const double y = static_cast<double>(j - half) * geom.dx;
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(geom.np); ++k)
            phase(j, k) = std::polar(1.0, geom.p(static_cast<std::size_t>(k)) * y);
    }
    const fock::Matrix w = kernel * phase;

    std::vector<double> values(geom.size());
    const double scale = 1.0 / (2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < geom.nx; ++i)
        for (std::size_t k = 0; k < geom.np; ++k)
            values[i * geom.np + k] =
                scale * w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)).real();
    return detail::flag_normalized(WignerGrid(geom, std::move(values)), 1e-4, "wigner_from_density");
}

// ---------------------------------------------------------------------------
// Photon addition / subtraction

/// Throws GeometryError unless |W| on the boundary is below 1e-12 of the peak.
inline void require_boundary_decay(const WignerGrid& g, double tol = kBoundaryDecay) {
    const auto& geom = g.geometry();
    double peak = 0.0;
    for (double v : g.values()) peak = std::max(peak, std::fabs(v));
    double edge = 0.0;
    for (std::size_t i = 0; i < geom.nx; ++i)
        edge = std::max({edge, std::fabs(g.at(i, 0)), std::fabs(g.at(i, geom.np - 1))});
    for (std::size_t j = 0; j < geom.np; ++j)
        edge = std::max({edge, std::fabs(g.at(0, j)), std::fabs(g.at(geom.nx - 1, j))});
    if (edge > tol * peak)
        throw GeometryError("grid boundary value " + std::to_string(edge / std::max(peak, 1e-300)) +
                            " (relative to peak) exceeds decay bound; enlarge the extent");
}

struct LadderPair {
    WignerGrid added;       ///< W[a^dag rho a], integral <a a^dag>
    WignerGrid subtracted;  ///< W[a rho a^dag], integral <a^dag a>
};

/// Both unnormalized outcomes in one stencil pass.
inline LadderPair ladder_terms(const WignerGrid& g, int order = kDefaultStencilOrder) {
    require_boundary_decay(g);
    const auto& geom = g.geometry();
    const grid::AxisStencil sx(geom.nx, geom.dx, order);
    const grid::AxisStencil sp(geom.np, geom.dp, order);
    const std::size_t np = geom.np;
    const double* w = g.values().data();

    std::vector<double> add(geom.size());
    std::vector<double> sub(geom.size());
    std::vector<double> wx(np), wxx(np);
    for (std::size_t i = 0; i < geom.nx; ++i) {
        std::fill(wx.begin(), wx.end(), 0.0);
        std::fill(wxx.begin(), wxx.end(), 0.0);
        const double* c1 = sx.first(i);
        const double* c2 = sx.second(i);
        for (std::size_t k = 0; k < sx.width(); ++k) {
            const double* row = w + (sx.start(i) + k) * np;
            for (std::size_t j = 0; j < np; ++j) {
                wx[j] += c1[k] * row[j];
                wxx[j] += c2[k] * row[j];
            }
        }
        const double x = geom.x(i);
        const double* row = w + i * np;
        for (std::size_t j = 0; j < np; ++j) {
            const double* d1 = sp.first(j);
            const double* d2 = sp.second(j);
            const double* seg = row + sp.start(j);
            double wp = 0.0, wpp = 0.0;
            for (std::size_t k = 0; k < sp.width(); ++k) {
                wp += d1[k] * seg[k];
                wpp += d2[k] * seg[k];
            }
            const double p = geom.p(j);
            const double s = x * x + p * p;
            const double euler = x * wx[j] + p * wp;
            const double lap = (wxx[j] + wpp) / 8.0;
            add[i * np + j] = 0.5 * (s - 1.0) * row[j] - 0.5 * euler + lap;
            sub[i * np + j] = 0.5 * (s + 1.0) * row[j] + 0.5 * euler + lap;
        }
    }
    return {WignerGrid(geom, std::move(add)), WignerGrid(geom, std::move(sub))};
}

/// Unnormalized W[a^dag rho a].
inline WignerGrid add_photon(const WignerGrid& g, int order = kDefaultStencilOrder) {
    return ladder_terms(g, order).added;
}

/// Unnormalized W[a rho a^dag].
inline WignerGrid sub_photon(const WignerGrid& g, int order = kDefaultStencilOrder) {
    return ladder_terms(g, order).subtracted;
}

/// Divides by the Simpson integral; near-null outcomes (integral < 1e-6) are rejected.
inline WignerGrid renormalize(const WignerGrid& g) {
    const double total = grid::integrate(g);
    if (std::fabs(total) < 1e-6)
        throw DegenerateError("renormalize: outcome integral " + std::to_string(total) +
                              " vanishes (photon subtraction from the vacuum)");
    std::vector<double> v = g.values();
    for (auto& x : v) x /= total;
    return WignerGrid(g.geometry(), std::move(v), true);
}

struct IdentityResidual {
    double residual;            ///< int |A - R S| / int |A|
    double R_used;
    double sup_residual;        ///< max |A - R S| / max |A|
    double added_integral;      ///< <a a^dag>
    double subtracted_integral; ///< <a^dag a>
};

/// Identity-of-outcome test A - R S = 0 with A, S the unnormalized added and subtracted
/// grids. With no R given, R = int A / int S.
inline IdentityResidual identity_residual(const WignerGrid& g, std::optional<double> R = std::nullopt,
                                          int order = kDefaultStencilOrder) {
    const LadderPair pair = ladder_terms(g, order);
    const double ia = grid::integrate(pair.added);
    const double is = grid::integrate(pair.subtracted);
    if (std::fabs(is) < 1e-6)
        throw DegenerateError(
            "identity_residual: photon subtraction annihilates this input (vacuum, sigma_x = 1 is "
            "excluded: the add/subtract ratio diverges)");
    const double r = R.value_or(ia / is);

    const auto& geom = g.geometry();
    std::vector<double> diff(geom.size());
    std::vector<double> mag(geom.size());
    double sup_diff = 0.0, sup_a = 0.0;
    for (std::size_t k = 0; k < geom.size(); ++k) {
        const double a = pair.added.values()[k];
        const double d = a - r * pair.subtracted.values()[k];
        diff[k] = std::fabs(d);
        mag[k] = std::fabs(a);
        sup_diff = std::max(sup_diff, diff[k]);
        sup_a = std::max(sup_a, mag[k]);
    }
    const double residual = grid::integrate(geom, diff) / grid::integrate(geom, mag);
    return {residual, r, sup_diff / sup_a, ia, is};
}

// ---------------------------------------------------------------------------
// Functionals

struct GridReport {
    double integral;
    double purity;
    double mean_photon;
    double origin_value;
};

inline GridReport grid_metrics(const WignerGrid& g) {
    const auto& geom = g.geometry();
    std::vector<double> sq(geom.size());
    std::vector<double> energy(geom.size());
    for (std::size_t i = 0; i < geom.nx; ++i)
        for (std::size_t j = 0; j < geom.np; ++j) {
            const double w = g.at(i, j);
            const double x = geom.x(i);
            const double p = geom.p(j);
            sq[i * geom.np + j] = w * w;
            energy[i * geom.np + j] = 0.5 * (x * x + p * p) * w;
        }
    double origin = std::numeric_limits<double>::quiet_NaN();
    try {
        origin = grid::sample(g, 0.0, 0.0);
    } catch (const GeometryError&) {
    }
    return {grid::integrate(g), 2.0 * std::numbers::pi * grid::integrate(geom, sq),
            grid::integrate(geom, energy) - 0.5, origin};
}

/// max |a - b| over two grids of identical geometry.
inline double max_abs_difference(const WignerGrid& a, const WignerGrid& b) {
    if (!(a.geometry() == b.geometry())) throw GeometryError("max_abs_difference: geometry mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.values().size(); ++k)
        m = std::max(m, std::fabs(a.values()[k] - b.values()[k]));
    return m;
}

inline WignerGrid difference(const WignerGrid& a, const WignerGrid& b) {
    if (!(a.geometry() == b.geometry())) throw GeometryError("difference: geometry mismatch");
    std::vector<double> v(a.values().size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.values()[k] - b.values()[k];
    return WignerGrid(a.geometry(), std::move(v));
}

} // namespace pasq::phasespace
