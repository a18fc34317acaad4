#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "pasq/grid.hpp"

using namespace pasq;
using grid::GridGeometry;
using grid::WignerGrid;

namespace {
WignerGrid fill(const GridGeometry& g, double (*f)(double, double)) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.nx; ++i)
        for (std::size_t j = 0; j < g.np; ++j) v[i * g.np + j] = f(g.x(i), g.p(j));
    return WignerGrid(g, std::move(v));
}
} // namespace

TEST(Geometry, Validation) {
    EXPECT_THROW(GridGeometry::square(5.0, 32), ConfigError);
    EXPECT_THROW(GridGeometry::square(5.0, 31), ConfigError);
    EXPECT_THROW(GridGeometry::square(-1.0, 33), ConfigError);
    EXPECT_THROW(GridGeometry(0.0, 0.0, 33, 0.0, 1.0, 33), ConfigError);
    const auto g = GridGeometry::square(4.0, 33);
    EXPECT_DOUBLE_EQ(g.dx, 0.25);
    EXPECT_DOUBLE_EQ(g.x_max(), 4.0);
    const auto r = g.refined();
    EXPECT_EQ(r.nx, 65u);
    EXPECT_DOUBLE_EQ(r.x_max(), 4.0);
}

TEST(Quadrature, SimpsonExactForCubics) {
    const auto g = GridGeometry(-1.0, 0.125, 33, 0.0, 0.0625, 33);
    const auto w = fill(g, [](double x, double p) { return x * x * x + 3 * x * x * p + p * p; });
    // int_{-1}^{3} int_0^{2} (x^3 + 3x^2 p + p^2) dp dx
    EXPECT_NEAR(grid::integrate(w), 40.0 + 56.0 + 32.0 / 3.0, 1e-12);
    EXPECT_THROW(grid::simpson_weights(4, 0.1), ConfigError);
}

TEST(Quadrature, GaussianNormalization) {
    const auto w = fill(GridGeometry::square(8.0, 161), [](double x, double p) { return std::exp(-x * x - p * p) / M_PI; });
    EXPECT_NEAR(grid::integrate(w), 1.0, 1e-13);
}

TEST(Sample, BilinearAndBounds) {
    const auto w = fill(GridGeometry::square(2.0, 41), [](double x, double p) { return 2 * x - p + 1; });
    EXPECT_NEAR(grid::sample(w, 0.33, -0.71), 2 * 0.33 + 0.71 + 1, 1e-13);
    EXPECT_THROW(grid::sample(w, 2.5, 0.0), GeometryError);
}

TEST(Fornberg, ClassicalWeights) {
    const auto w = grid::fornberg_weights(0.0, {-1.0, 0.0, 1.0}, 2);
    EXPECT_NEAR(w[1][0], -0.5, 1e-15);
    EXPECT_NEAR(w[1][2], 0.5, 1e-15);
    EXPECT_NEAR(w[2][0], 1.0, 1e-15);
    EXPECT_NEAR(w[2][1], -2.0, 1e-15);
    const auto one_sided = grid::fornberg_weights(0.0, {0.0, 1.0, 2.0}, 1);
    EXPECT_NEAR(one_sided[1][0], -1.5, 1e-15);
    EXPECT_NEAR(one_sided[1][1], 2.0, 1e-15);
    EXPECT_NEAR(one_sided[1][2], -0.5, 1e-15);
}

TEST(AxisStencil, ExactOnPolynomialsIncludingEdges) {
    const std::size_t n = 41;
    const double h = 0.1, x0 = -2.0;
    for (int order : {2, 4, 8}) {
        grid::AxisStencil st(n, h, order);
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = std::pow(x0 + h * i, order);
        for (std::size_t i : {0ul, 3ul, 20ul, 40ul}) {
            const double x = x0 + h * i;
            double d1 = 0, d2 = 0;
            for (std::size_t k = 0; k < st.width(); ++k) {
                d1 += st.first(i)[k] * f[st.start(i) + k];
                d2 += st.second(i)[k] * f[st.start(i) + k];
            }
            EXPECT_NEAR(d1, order * std::pow(x, order - 1), 1e-7 * std::pow(2.0, order)) << order << " " << i;
            EXPECT_NEAR(d2, order * (order - 1) * std::pow(x, order - 2), 1e-5 * std::pow(2.0, order)) << order << " " << i;
        }
    }
}

TEST(Csv, RoundTripIsBitExact) {
    const auto w = fill(GridGeometry(-3.1, 0.1875, 35, -2.0, 0.125, 33),
                        [](double x, double p) { return std::sin(x) * std::exp(-p * p) / 3.0; });
    std::stringstream ss;
    grid::write_grid_csv(ss, w, {{"seed", "0"}, {"source", "test"}});
    const auto back = grid::read_grid_csv(ss);
    EXPECT_TRUE(back.geometry() == w.geometry());
    EXPECT_EQ(back.values(), w.values());
}

TEST(Csv, MalformedInput) {
    std::stringstream empty;
    EXPECT_THROW(grid::read_grid_csv(empty), FormatError);
    std::stringstream bad_header("# other-format 0 1 33 0 1 33\n");
    EXPECT_THROW(grid::read_grid_csv(bad_header), FormatError);
    std::stringstream short_rows("# wigner-grid-v1 0 1 33 0 1 33\n0,0,1\n");
    EXPECT_THROW(grid::read_grid_csv(short_rows), FormatError);
    std::stringstream bad_number("# wigner-grid-v1 0 1 33 0 1 33\n0,0,abc\n");
    EXPECT_THROW(grid::read_grid_csv(bad_number), FormatError);
    std::stringstream even("# wigner-grid-v1 0 1 34 0 1 33\n");
    EXPECT_THROW(grid::read_grid_csv(even), FormatError);
}

TEST(Csv, SubnormalValuesRoundTripAndOverflowRejected) {
    std::vector<double> v(33 * 33, 0.0);
    v[5] = -7.7782773944203712e-313;
    v[6] = 4.9406564584124654e-324;
    const WignerGrid w(GridGeometry::square(1.0, 33), v);
    std::stringstream ss;
    grid::write_grid_csv(ss, w);
    EXPECT_EQ(grid::read_grid_csv(ss).values(), v);
    std::stringstream huge("# wigner-grid-v1 0 1 33 0 1 33\n0,0,1e999\n");
    EXPECT_THROW(grid::read_grid_csv(huge), FormatError);
}
