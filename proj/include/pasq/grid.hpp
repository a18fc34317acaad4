// Uniform phase-space grids: geometry, Simpson quadrature, finite-difference
// stencils and the wigner-grid-v1 CSV format.
#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pasq/error.hpp"

namespace pasq::grid {

inline constexpr std::size_t kMinPoints = 33;

/// Uniform lattice x_i = x0 + i dx (i < nx), p_j = p0 + j dp (j < np).
/// Point counts are odd so that composite Simpson weights apply.
struct GridGeometry {
    double x0 = 0.0;
    double dx = 0.0;
    std::size_t nx = 0;
    double p0 = 0.0;
    double dp = 0.0;
    std::size_t np = 0;

    GridGeometry() = default;
    GridGeometry(double x0_, double dx_, std::size_t nx_, double p0_, double dp_, std::size_t np_)
        : x0(x0_), dx(dx_), nx(nx_), p0(p0_), dp(dp_), np(np_) {
        validate();
    }

    /// Square grid [-half_extent, half_extent]^2 with `points` samples per axis.
    static GridGeometry square(double half_extent, std::size_t points) {
        if (!(half_extent > 0.0)) throw ConfigError("GridGeometry: extent must be positive");
        if (points < 2) throw ConfigError("GridGeometry: need at least two points per axis");
        const double h = 2.0 * half_extent / static_cast<double>(points - 1);
        return GridGeometry(-half_extent, h, points, -half_extent, h, points);
    }

    void validate() const {
        if (!(dx > 0.0 && dp > 0.0)) throw ConfigError("GridGeometry: spacings must be positive");
        if (!std::isfinite(x0) || !std::isfinite(p0)) throw ConfigError("GridGeometry: non-finite origin");
        if (nx < kMinPoints || np < kMinPoints)
            throw ConfigError("GridGeometry: at least 33 points per axis are required");
        if (nx % 2 == 0 || np % 2 == 0)
            throw ConfigError("GridGeometry: point counts must be odd (Simpson quadrature)");
    }

    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double p(std::size_t j) const { return p0 + static_cast<double>(j) * dp; }
    std::size_t size() const { return nx * np; }
    double x_max() const { return x(nx - 1); }
    double p_max() const { return p(np - 1); }

    /// Same box with the spacing halved: 2n - 1 points per axis.
    GridGeometry refined() const {
        return GridGeometry(x0, dx / 2.0, 2 * nx - 1, p0, dp / 2.0, 2 * np - 1);
    }

    bool operator==(const GridGeometry&) const = default;
};

/// Real samples W(x_i, p_j) stored row-major with x as the outer index.
class WignerGrid {
public:
    WignerGrid(GridGeometry geometry, std::vector<double> values, bool normalized = false)
        : geometry_(geometry), values_(std::move(values)), normalized_(normalized) {
        geometry_.validate();
        if (values_.size() != geometry_.size())
            throw ConfigError("WignerGrid: value count does not match geometry");
    }

    const GridGeometry& geometry() const { return geometry_; }
    const std::vector<double>& values() const { return values_; }
    bool normalized() const { return normalized_; }

    double at(std::size_t i, std::size_t j) const { return values_[i * geometry_.np + j]; }

private:
    GridGeometry geometry_;
    std::vector<double> values_;
    bool normalized_;
};

// ---------------------------------------------------------------------------
// Quadrature

/// Composite Simpson weights h/3 [1, 4, 2, 4, ..., 2, 4, 1] for an odd count.
inline std::vector<double> simpson_weights(std::size_t n, double h) {
    if (n < 3 || n % 2 == 0) throw ConfigError("simpson_weights: need an odd count >= 3");
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    for (auto& v : w) v *= h / 3.0;
    return w;
}

/// 2D Simpson integral of `values` laid out on `geom`.
inline double integrate(const GridGeometry& geom, const std::vector<double>& values) {
    const auto wx = simpson_weights(geom.nx, geom.dx);
    const auto wp = simpson_weights(geom.np, geom.dp);
    double total = 0.0;
    for (std::size_t i = 0; i < geom.nx; ++i) {
        double row = 0.0;
        const double* v = values.data() + i * geom.np;
        for (std::size_t j = 0; j < geom.np; ++j) row += wp[j] * v[j];
        total += wx[i] * row;
    }
    return total;
}

inline double integrate(const WignerGrid& g) { return integrate(g.geometry(), g.values()); }

/// Bilinear interpolation; throws if (x, p) lies outside the grid.
inline double sample(const WignerGrid& g, double x, double p) {
    const auto& geom = g.geometry();
    const double fi = (x - geom.x0) / geom.dx;
    const double fj = (p - geom.p0) / geom.dp;
    if (!(fi >= 0.0 && fj >= 0.0 && fi <= static_cast<double>(geom.nx - 1) &&
          fj <= static_cast<double>(geom.np - 1)))
        throw GeometryError("sample: point outside grid");
    const auto i = std::min(static_cast<std::size_t>(fi), geom.nx - 2);
    const auto j = std::min(static_cast<std::size_t>(fj), geom.np - 2);
    const double tx = fi - static_cast<double>(i);
    const double tp = fj - static_cast<double>(j);
    return (1 - tx) * (1 - tp) * g.at(i, j) + tx * (1 - tp) * g.at(i + 1, j) +
           (1 - tx) * tp * g.at(i, j + 1) + tx * tp * g.at(i + 1, j + 1);
}

// ---------------------------------------------------------------------------
// Finite differences

/// Fornberg's recursion: weights c[d][k] so that f^{(d)}(at) ~ sum_k c[d][k] f(nodes[k]),
/// for d = 0..max_deriv.
inline std::vector<std::vector<double>> fornberg_weights(double at, const std::vector<double>& nodes,
                                                         int max_deriv) {
    const std::size_t n = nodes.size();
    const auto m = static_cast<std::size_t>(max_deriv);
    std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - at;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - at;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

/// First- and second-derivative stencils of a given even order on a uniform axis.
/// Interior points use centred windows; windows are shifted inward near the edges.
class AxisStencil {
public:
    AxisStencil(std::size_t n, double h, int order) : n_(n), width_(static_cast<std::size_t>(order) + 1) {
        if (order < 2 || order % 2 != 0) throw ConfigError("AxisStencil: order must be even and >= 2");
        if (n < width_) throw ConfigError("AxisStencil: axis shorter than stencil");
        const std::size_t half = width_ / 2;
        start_.resize(n);
        d1_.resize(n * width_);
        d2_.resize(n * width_);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t s = i >= half ? i - half : 0;
            if (s + width_ > n) s = n - width_;
            start_[i] = s;
            std::vector<double> nodes(width_);
            for (std::size_t k = 0; k < width_; ++k) nodes[k] = static_cast<double>(s + k);
            const auto c = fornberg_weights(static_cast<double>(i), nodes, 2);
            for (std::size_t k = 0; k < width_; ++k) {
                d1_[i * width_ + k] = c[1][k] / h;
                d2_[i * width_ + k] = c[2][k] / (h * h);
            }
        }
    }

    std::size_t size() const { return n_; }
    std::size_t width() const { return width_; }
    std::size_t start(std::size_t i) const { return start_[i]; }
    const double* first(std::size_t i) const { return d1_.data() + i * width_; }
    const double* second(std::size_t i) const { return d2_.data() + i * width_; }

private:
    std::size_t n_;
    std::size_t width_;
    std::vector<std::size_t> start_;
    std::vector<double> d1_;
    std::vector<double> d2_;
};

// ---------------------------------------------------------------------------
// wigner-grid-v1 CSV:
//   # wigner-grid-v1 x0 dx nx p0 dp np
//   [# key value]...
//   x,p,value           (nx*np rows, x outer, 17 significant digits)

namespace detail {
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    const bool overflow = errno == ERANGE && std::isinf(v);  // underflow to subnormals is fine
    if (end == s.c_str() || overflow) throw FormatError("wigner-grid-v1: bad number '" + s + "'");
    return v;
}
} // namespace detail

inline void write_grid_csv(std::ostream& os, const WignerGrid& grid,
                           const std::vector<std::pair<std::string, std::string>>& meta = {}) {
    const auto& g = grid.geometry();
    os << "# wigner-grid-v1 " << detail::fmt17(g.x0) << ' ' << detail::fmt17(g.dx) << ' ' << g.nx << ' '
       << detail::fmt17(g.p0) << ' ' << detail::fmt17(g.dp) << ' ' << g.np << '\n';
    for (const auto& [k, v] : meta) os << "# " << k << ' ' << v << '\n';
    std::string line;
    for (std::size_t i = 0; i < g.nx; ++i)
        for (std::size_t j = 0; j < g.np; ++j) {
            line = detail::fmt17(g.x(i));
            line += ',';
            line += detail::fmt17(g.p(j));
            line += ',';
            line += detail::fmt17(grid.at(i, j));
            line += '\n';
            os << line;
        }
}

/// Writes through a sibling temporary file and renames it into place.
template <class Writer>
void write_atomically(const std::filesystem::path& path, Writer&& writer) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw FormatError("cannot open " + tmp.string() + " for writing");
        writer(os);
        os.flush();
        if (!os) throw FormatError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_grid_csv(const std::filesystem::path& path, const WignerGrid& grid,
                           const std::vector<std::pair<std::string, std::string>>& meta = {}) {
    write_atomically(path, [&](std::ostream& os) { write_grid_csv(os, grid, meta); });
}

inline WignerGrid read_grid_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("wigner-grid-v1: empty input");
    std::istringstream head(line);
    std::string hash, tag, x0s, dxs, p0s, dps;
    std::size_t nx = 0, np = 0;
    head >> hash >> tag >> x0s >> dxs >> nx >> p0s >> dps >> np;
    if (hash != "#" || tag != "wigner-grid-v1" || !head)
        throw FormatError("wigner-grid-v1: missing or malformed header");
    GridGeometry geom;
    try {
        geom = GridGeometry(detail::parse_double(x0s), detail::parse_double(dxs), nx,
                            detail::parse_double(p0s), detail::parse_double(dps), np);
    } catch (const ConfigError& e) {
        throw FormatError(std::string("wigner-grid-v1: ") + e.what());
    }
    std::vector<double> values;
    values.reserve(geom.size());
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw FormatError("wigner-grid-v1: expected x,p,value rows");
        values.push_back(detail::parse_double(line.substr(c2 + 1)));
    }
    if (values.size() != geom.size())
        throw FormatError("wigner-grid-v1: expected " + std::to_string(geom.size()) + " rows, got " +
                          std::to_string(values.size()));
    return WignerGrid(geom, std::move(values));
}

inline WignerGrid read_grid_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open " + path.string());
    return read_grid_csv(is);
}

} // namespace pasq::grid
