// Adds and subtracts a photon on a few gaussian states and prints the residuals.
#include <chrono>
#include <cstdio>

#include "pasq/pasq.hpp"

using namespace pasq;

static void report(const char* label, const gaussian::ClosedFormState& state) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto geom = phasespace::auto_geometry(state);
    const auto w = phasespace::rasterize(state, geom);
    const auto res = phasespace::identity_residual(w);
    const auto plus = phasespace::renormalize(phasespace::add_photon(w));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%-36s n=%-5zu residual=%.3e  R=%.6f  W+(0,0)=%.6f  %.2fs\n", label, geom.nx, res.residual,
                res.R_used, phasespace::grid_metrics(plus).origin_value, secs);
}

int main() {
    report("pure sigma_x=2", gaussian::GaussianWignerSpec::pure(2.0));
    report("pure sigma_x=4 theta=pi/4", gaussian::GaussianWignerSpec::pure(4.0, gaussian::kPi / 4));
    report("impure sigma_x=4 sigma_p=1/2", gaussian::GaussianWignerSpec::single(4.0, 0.5));
    report("W_II P=0.5 sigma_x=2.2", gaussian::GaussianWignerSpec::two_angle_mixture(0.5, 0.0, gaussian::kPi / 4, 2.2));
    report("W_[2pi] sigma_x=2.2", gaussian::AngularAverage(2.2));
    std::printf("-1/pi = %.6f\n", -1.0 / gaussian::kPi);
}
