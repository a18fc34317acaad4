#include <cmath>
#include <complex>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "pasq/fock.hpp"
#include "pasq/gaussian.hpp"

using namespace pasq;
using fock::Complex;

namespace {
double lgamma_ratio_amp(std::size_t m, double z) {
    // <2m|S(z)|0> = (-tanh z)^m sqrt((2m)!) / (2^m m!) / sqrt(cosh z)
    const double log_mag = 0.5 * std::lgamma(2.0 * m + 1) - m * std::log(2.0) - std::lgamma(m + 1.0) +
                           m * std::log(std::tanh(std::fabs(z))) - 0.5 * std::log(std::cosh(z));
    const double sign = (m % 2 == 1 && z > 0) ? -1.0 : 1.0;
    return sign * std::exp(log_mag);
}
} // namespace

TEST(FockVector, Validation) {
    EXPECT_THROW(fock::FockVector(fock::Vector::Zero(1)), ConfigError);
    EXPECT_THROW(fock::FockVector::number_state(5, 5), ConfigError);
    EXPECT_THROW(fock::FockVector::zero(8).normalized(), DegenerateError);
    EXPECT_TRUE(fock::FockVector::number_state(3, 8).is_normalized());
}

TEST(FockVector, LadderOnNumberStates) {
    const auto n3 = fock::FockVector::number_state(3, 10);
    const auto down = fock::lower(n3);
    EXPECT_NEAR(std::abs(down[2] - std::sqrt(3.0)), 0.0, 1e-15);
    const auto up = fock::raise(n3);
    EXPECT_NEAR(std::abs(up[4] - 2.0), 0.0, 1e-15);
    EXPECT_EQ(fock::lower(fock::FockVector::number_state(0, 4)).norm(), 0.0);
}

TEST(FockVector, RaiseRefusesTopLevelWeight) {
    const auto top = fock::FockVector::number_state(7, 8);
    try {
        fock::raise(top);
        FAIL() << "expected TruncationError";
    } catch (const TruncationError& e) {
        EXPECT_NEAR(e.lost_weight(), 1.0, 1e-12);
    }
}

TEST(DensityMatrix, Validation) {
    fock::Matrix m = fock::Matrix::Zero(3, 3);
    m(0, 1) = 1.0;
    EXPECT_THROW(fock::DensityMatrix{m}, ConfigError);
    EXPECT_THROW(fock::DensityMatrix{fock::Matrix::Zero(2, 3)}, ConfigError);
    const auto rho = fock::DensityMatrix::mixture(
        {{0.25, fock::FockVector::number_state(0, 4)}, {0.75, fock::FockVector::number_state(2, 4)}});
    EXPECT_TRUE(rho.is_normalized());
    const auto m2 = fock::state_metrics(rho);
    EXPECT_NEAR(m2.mean_photon, 1.5, 1e-15);
    EXPECT_NEAR(m2.purity, 0.625, 1e-15);
}

TEST(SqueezedVacuum, MatchesClosedFormAmplitudes) {
    for (double z : {0.1, std::log(2.0), 1.0, -0.5}) {
        const auto psi = fock::squeezed_vacuum(z, fock::suggested_trunc(z));
        EXPECT_TRUE(psi.is_normalized(1e-12));
        for (std::size_t m = 0; 2 * m < std::min<std::size_t>(psi.trunc(), 40); ++m) {
            EXPECT_NEAR(psi[2 * m].real(), lgamma_ratio_amp(m, z), 1e-12) << "z=" << z << " m=" << m;
            if (2 * m + 1 < psi.trunc()) {
                EXPECT_EQ(psi[2 * m + 1], Complex(0.0));
            }
        }
    }
}

TEST(SqueezedVacuum, TruncationErrorWhenTailTooHeavy) {
    EXPECT_THROW(fock::squeezed_vacuum(1.5, 16), TruncationError);
    EXPECT_EQ(fock::suggested_trunc(0.0), 32u);
}

TEST(Expm, MatchesEigenMatrixExponential) {
    const std::size_t n = 24;
    const fock::Matrix a = fock::annihilation_matrix(n);
    const Complex zeta = std::polar(0.8, 0.4);
    const fock::Matrix g = 0.5 * (std::conj(zeta) * a * a - zeta * a.adjoint() * a.adjoint());
    const fock::Matrix ours = fock::expm(g);
    const fock::Matrix ref = g.exp();
    EXPECT_LT((ours - ref).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((ours.adjoint() * ours - fock::Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Displacement, CoherentStateClosedForm) {
    const Complex alpha(0.7, -0.4);
    const std::size_t n = 40;
    const auto coh = fock::apply(fock::displacement_operator(alpha, n), fock::FockVector::number_state(0, n));
    Complex expect = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t k = 0; k < 20; ++k) {
        EXPECT_NEAR(std::abs(coh[k] - expect), 0.0, 1e-12) << "k=" << k;
        expect *= alpha / std::sqrt(static_cast<double>(k + 1));
    }
}

TEST(Ladder, CommutatorOnRandomStates) {
    std::srand(7);
    for (int trial = 0; trial < 10; ++trial) {
        fock::Vector v = fock::Vector::Zero(40);
        v.head(20) = fock::Vector::Random(20);
        const auto psi = fock::FockVector(v).normalized();
        const double diff = fock::raise(psi).norm_squared() - fock::lower(psi).norm_squared();
        EXPECT_NEAR(diff, 1.0, 1e-12);
    }
}

TEST(OutcomeRatio, SqueezedVacuumLaw) {
    for (double z : {0.1, 0.4, std::log(2.0), 1.0}) {
        const auto out = fock::outcome_ratio(fock::squeezed_vacuum(z, fock::suggested_trunc(z)));
        EXPECT_NEAR(out.ratio.real(), -std::tanh(z), 1e-10);
        EXPECT_NEAR(out.ratio.imag(), 0.0, 1e-14);
        EXPECT_LT(out.residual, 1e-6);
    }
}

TEST(OutcomeRatio, PhaseFollowsSqueezeAngle) {
    const double z = 0.6, phi = 0.9;
    const std::size_t n = 80;
    const auto psi = fock::apply(fock::squeeze_operator({z, phi}, n), fock::FockVector::number_state(0, n));
    const auto out = fock::outcome_ratio(psi);
    EXPECT_NEAR(std::abs(out.ratio - (-std::tanh(z) * std::polar(1.0, -phi))), 0.0, 1e-9);
    EXPECT_LT(out.residual, 1e-8);
}

TEST(OutcomeRatio, ResidualShrinksWithTruncation) {
    const double z = std::log(2.0);
    double previous = 1.0;
    for (std::size_t n : {24u, 48u, 96u, 192u}) {
        const double r = fock::outcome_ratio(fock::squeezed_vacuum(z, n, 1.0)).residual;
        EXPECT_LE(r, previous);
        previous = r;
    }
    EXPECT_LT(previous, 1e-13);
}

TEST(OutcomeRatio, FailuresAndVacuum) {
    EXPECT_THROW(fock::outcome_ratio(fock::FockVector::number_state(0, 6)), DegenerateError);
    const auto coh = fock::apply(fock::displacement_operator({1.0, 0.0}, 48), fock::FockVector::number_state(0, 48));
    EXPECT_GT(fock::outcome_ratio(coh).residual, 0.1);
}

TEST(Bogoliubov, AnnihilatesRotatedSqueezedVacuum) {
    for (double z : {0.1, std::log(2.0), 1.0}) {
        const std::size_t n = fock::suggested_trunc(z);
        const auto target = fock::squeezed_vacuum(-z, n);
        EXPECT_LT(fock::bogoliubov_lower(z, target).norm(), 1e-6);
        // On squeezed_vacuum(+z) the same operator leaves -2 sinh z a^dag psi.
        const auto other = fock::squeezed_vacuum(z, n);
        EXPECT_NEAR(fock::bogoliubov_lower(z, other).norm(), 2 * std::sinh(z) * fock::raise(other).norm(), 1e-6);
        const auto s_dag_vac = fock::apply(fock::squeeze_operator({z}, n).adjoint(), fock::FockVector::number_state(0, n));
        EXPECT_GT(std::norm(s_dag_vac.amps().dot(target.amps())), 1.0 - 1e-10);
    }
}

TEST(Bogoliubov, SigmaAnnihilator) {
    for (double sigma : {0.5, 2.0, 4.0}) {
        const double z = gaussian::z_of_sigma(sigma);
        const auto psi = fock::squeezed_vacuum(z, fock::suggested_trunc(z));
        const double r = gaussian::r_of_sigma(sigma);
        EXPECT_LT(fock::sigma_lower(r, psi).norm() / fock::lower(psi).norm(), 1e-6) << "sigma=" << sigma;
    }
}

TEST(FockJson, RoundTripAndErrors) {
    const auto psi = fock::apply(fock::displacement_operator({0.3, 0.2}, 12), fock::FockVector::number_state(0, 12));
    const auto back = fock::fock_from_json(nlohmann::json::parse(fock::to_json(psi).dump()));
    EXPECT_EQ((back.amps() - psi.amps()).norm(), 0.0);
    EXPECT_THROW(fock::fock_from_json(nlohmann::json{{"format", "gauss-v1"}}), FormatError);
    EXPECT_THROW(fock::fock_from_json(nlohmann::json{{"format", "fock-v1"}, {"trunc", 3}, {"amps", {{1, 0}}}}),
                 FormatError);
}
