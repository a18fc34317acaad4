#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pasq/fock.hpp"
#include "pasq/gaussian.hpp"
#include "pasq/phasespace.hpp"

using namespace pasq;
using gaussian::GaussianWignerSpec;
using gaussian::Photon;
using grid::GridGeometry;
using grid::WignerGrid;

constexpr double kPi = std::numbers::pi;

namespace {
double sup_against(const WignerGrid& g, auto&& f) {
    double m = 0.0;
    const auto& geom = g.geometry();
    for (std::size_t i = 0; i < geom.nx; ++i)
        for (std::size_t j = 0; j < geom.np; ++j) m = std::max(m, std::fabs(g.at(i, j) - f(geom.x(i), geom.p(j))));
    return m;
}
} // namespace

TEST(Rasterize, NormalizedAndChecked) {
    const gaussian::ClosedFormState s = GaussianWignerSpec::pure(2.0);
    const auto w = phasespace::rasterize(s, phasespace::auto_geometry(s));
    EXPECT_TRUE(w.normalized());
    EXPECT_NEAR(grid::integrate(w), 1.0, 1e-12);
    EXPECT_NO_THROW(phasespace::require_boundary_decay(w));
    EXPECT_THROW(phasespace::rasterize(gaussian::ClosedFormState(GaussianWignerSpec::pure(4.0)),
                                       GridGeometry::square(3.0, 65)),
                 GeometryError);
}

TEST(AutoGeometry, OddAndWideEnough) {
    for (double s : {0.5, 2.0, 4.0}) {
        const auto g = phasespace::auto_geometry(gaussian::ClosedFormState(GaussianWignerSpec::pure(s)));
        EXPECT_EQ(g.nx % 2, 1u);
        EXPECT_GE(g.nx, phasespace::kDefaultPoints);
        EXPECT_GE(g.x_max(), 6.0 * std::max(s, 1.0 / s) - 1e-12);
    }
}

TEST(Ladder, VacuumAddedIsFockOne) {
    const gaussian::ClosedFormState vac = GaussianWignerSpec::pure(1.0);
    const auto w = phasespace::rasterize(vac, phasespace::auto_geometry(vac));
    const auto added = phasespace::add_photon(w);
    EXPECT_LT(sup_against(added, [](double x, double p) {
                  const double s = x * x + p * p;
                  return (2 * s - 1) * std::exp(-s) / kPi;
              }),
              1e-6);
    EXPECT_LT(sup_against(phasespace::sub_photon(w), [](double, double) { return 0.0; }), 1e-6);
    EXPECT_THROW(phasespace::renormalize(phasespace::sub_photon(w)), DegenerateError);
}

TEST(Ladder, MatchesClosedFormOutcomes) {
    for (double s : {0.5, 2.2}) {
        const gaussian::ClosedFormState st = GaussianWignerSpec::pure(s, 0.3);
        const auto pair = phasespace::ladder_terms(phasespace::rasterize(st, phasespace::auto_geometry(st)));
        const auto plus = phasespace::renormalize(pair.added);
        EXPECT_LT(sup_against(plus, [&](double x, double p) { return gaussian::closed_form_outcome(st, Photon::Added, x, p); }),
                  1e-5);
        EXPECT_NEAR(grid::integrate(pair.added) - grid::integrate(pair.subtracted), 1.0, 1e-10);
    }
}

TEST(Ladder, RotationCovariance) {
    // W_{theta + pi/2}(x, p) = W_theta(p, -x): a quarter turn permutes grid indices.
    const auto make = [](double th) {
        const gaussian::ClosedFormState st = GaussianWignerSpec::pure(2.5, th);
        return phasespace::rasterize(st, GridGeometry::square(16.0, 401));
    };
    const auto w0 = make(0.2), w1 = make(0.2 + kPi / 2);
    const auto p0 = phasespace::ladder_terms(w0), p1 = phasespace::ladder_terms(w1);
    const std::size_t n = w0.geometry().nx;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            worst = std::max(worst, std::fabs(p1.added.at(i, j) - p0.added.at(j, n - 1 - i)));
            worst = std::max(worst, std::fabs(p1.subtracted.at(i, j) - p0.subtracted.at(j, n - 1 - i)));
        }
    EXPECT_LT(worst, 1e-10);
}

TEST(WignerFromDensity, NumberStates) {
    for (std::size_t n : {1u, 2u, 5u}) {
        const auto rho = fock::DensityMatrix::pure(fock::FockVector::number_state(n, n + 6));
        const auto w = phasespace::wigner_from_density(rho, phasespace::auto_geometry(rho));
        const double sign = n % 2 ? -1.0 : 1.0;
        EXPECT_LT(sup_against(w,
                              [&](double x, double p) {
                                  const double s = x * x + p * p;
                                  return sign * std::laguerre(static_cast<unsigned>(n), 2 * s) * std::exp(-s) / kPi;
                              }),
                  1e-10)
            << "n=" << n;
    }
}

TEST(WignerFromDensity, SqueezedVacuumMatchesGaussian) {
    for (double z : {0.3, -std::log(2.0)}) {
        const auto rho = fock::DensityMatrix::pure(fock::squeezed_vacuum(z, fock::suggested_trunc(z)));
        const gaussian::ClosedFormState st = GaussianWignerSpec::pure(std::exp(-z));
        const auto w = phasespace::wigner_from_density(rho, phasespace::auto_geometry(st));
        EXPECT_LT(sup_against(w, [&](double x, double p) { return gaussian::closed_form_eval(st, x, p); }), 1e-8);
    }
}

TEST(WignerFromDensity, MixtureAndMetrics) {
    const auto rho = fock::DensityMatrix::mixture(
        {{0.5, fock::FockVector::number_state(0, 8)}, {0.5, fock::FockVector::number_state(1, 8)}});
    const auto w = phasespace::wigner_from_density(rho, phasespace::auto_geometry(rho));
    const auto m = phasespace::grid_metrics(w);
    EXPECT_NEAR(m.integral, 1.0, 1e-10);
    EXPECT_NEAR(m.purity, 0.5, 1e-8);
    EXPECT_NEAR(m.mean_photon, 0.5, 1e-8);
    EXPECT_NEAR(m.origin_value, 0.0, 1e-12);
}

TEST(Metrics, PureGaussian) {
    const gaussian::ClosedFormState st = GaussianWignerSpec::pure(3.0, 0.7);
    const auto m = phasespace::grid_metrics(phasespace::rasterize(st, phasespace::auto_geometry(st)));
    EXPECT_NEAR(m.purity, 1.0, 1e-9);
    EXPECT_NEAR(m.mean_photon, GaussianWignerSpec::pure(3.0).mean_photon(), 1e-9);
    EXPECT_NEAR(m.origin_value, 1.0 / kPi, 1e-14);
}

TEST(Residual, PureSqueezedAndFailures) {
    const gaussian::ClosedFormState st = GaussianWignerSpec::pure(2.0);
    const auto w = phasespace::rasterize(st, phasespace::auto_geometry(st));
    const auto res = phasespace::identity_residual(w);
    EXPECT_LT(res.residual, 1e-4);
    EXPECT_NEAR(res.R_used, 25.0 / 9.0, 1e-10);
    EXPECT_GT(phasespace::identity_residual(w, 2.0).residual, 0.1);

    const gaussian::ClosedFormState vac = GaussianWignerSpec::pure(1.0);
    try {
        phasespace::identity_residual(phasespace::rasterize(vac, phasespace::auto_geometry(vac)));
        FAIL() << "expected DegenerateError";
    } catch (const DegenerateError& e) {
        EXPECT_NE(std::string(e.what()).find("sigma_x = 1"), std::string::npos);
    }
}

TEST(Residual, ConvergesUnderRefinement) {
    const gaussian::ClosedFormState st = GaussianWignerSpec::pure(2.0);
    const GridGeometry coarse = GridGeometry::square(12.0, 129);
    const double r0 = phasespace::identity_residual(phasespace::rasterize(st, coarse)).residual;
    const double r1 = phasespace::identity_residual(phasespace::rasterize(st, coarse.refined())).residual;
    EXPECT_GT(r0 / r1, 8.0);
    for (int order : {2, 4}) {
        const double a = phasespace::identity_residual(phasespace::rasterize(st, coarse), std::nullopt, order).residual;
        const double b =
            phasespace::identity_residual(phasespace::rasterize(st, coarse.refined()), std::nullopt, order).residual;
        EXPECT_GT(a / b, std::pow(2.0, order) * 0.8) << "order " << order;
    }
}

TEST(Difference, ShapeMismatch) {
    const gaussian::ClosedFormState st = GaussianWignerSpec::pure(2.0);
    const auto a = phasespace::rasterize(st, GridGeometry::square(12.0, 129));
    const auto b = phasespace::rasterize(st, GridGeometry::square(12.0, 131));
    EXPECT_THROW(phasespace::max_abs_difference(a, b), GeometryError);
    EXPECT_EQ(phasespace::max_abs_difference(a, a), 0.0);
}
