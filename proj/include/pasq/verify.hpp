// Named verification suites that check the add/subtract identity across the
// wavefunction, Fock and Wigner-grid representations, plus figure-data export.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pasq/error.hpp"
#include "pasq/fock.hpp"
#include "pasq/gaussian.hpp"
#include "pasq/grid.hpp"
#include "pasq/phasespace.hpp"

namespace pasq::verify {

using gaussian::AngularAverage;
using gaussian::ClosedFormState;
using gaussian::GaussianComponent;
using gaussian::GaussianWignerSpec;
using gaussian::Photon;
using grid::GridGeometry;
using grid::WignerGrid;

inline constexpr double kPi = std::numbers::pi;

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"pure-identity", "impure-difference", "fock-ratio",
                                                   "commutator",    "mixtures",          "angular-average",
                                                   "bogoliubov",    "negative-cases"};
    return names;
}

inline std::map<std::string, double> default_tolerances() {
    return {
        {"identity", 1e-4},          // residual at which the identity holds
        {"violation", 1e-2},         // residual floor for inputs that must fail
        {"impure_floor", 0.05},      // sigma_x = 4, sigma_p = 1/2
        {"displaced_floor", 0.1},    // coherent alpha = 1
        {"R", 1e-3},                 // |R_used - R(sigma_x)|
        {"origin", 1e-3},            // outcome W(0,0) against -1/pi
        {"ratio", 1e-6},             // Fock ratio against -tanh z
        {"fock_residual", 1e-6},     // relative Fock residual
        {"ratio_consistency", 1e-10},
        {"cross", 1e-4},             // pointwise agreement between representations
        {"commutator", 1e-4},
        {"purity", 1e-4},
        {"purity_unity", 1e-10},
        {"bogoliubov", 1e-6},
        {"squeeze_fidelity", 1e-8},
        {"fig1_diff", 1e-2},
        {"profile_deviation", 0.05},
    };
}

struct SuiteConfig {
    std::map<std::string, double> tolerances = default_tolerances();
    std::size_t trunc = 0;                 ///< 0 selects ceil(32 cosh 2z) per state
    std::optional<double> extent;          ///< overrides the automatic half-extent
    std::optional<std::size_t> points;     ///< overrides the automatic point count
    std::vector<double> sigma_list = {0.5, 2.0, 2.2, 4.0};
    std::vector<double> theta_list = {0.0, kPi / 4.0};
    std::vector<double> z_list = {0.1, std::log(2.0), 1.0};
    int stencil_order = phasespace::kDefaultStencilOrder;

    double tol(const std::string& name) const {
        const auto it = tolerances.find(name);
        if (it == tolerances.end()) throw ConfigError("SuiteConfig: unknown tolerance '" + name + "'");
        return it->second;
    }

    void validate() const {
        for (const auto& [k, v] : tolerances)
            if (!(v > 0.0)) throw ConfigError("SuiteConfig: tolerance '" + k + "' must be positive");
        if (points && (*points < grid::kMinPoints || *points % 2 == 0))
            throw ConfigError("SuiteConfig: points must be odd and >= 33");
        if (extent && !(*extent > 0.0)) throw ConfigError("SuiteConfig: extent must be positive");
    }

    std::size_t trunc_for(double z) const { return trunc ? trunc : fock::suggested_trunc(z); }

    GridGeometry geometry(const GridGeometry& automatic) const {
        if (!extent && !points) return automatic;
        const double half = extent.value_or(automatic.x_max());
        return GridGeometry::square(half, points.value_or(automatic.nx));
    }

    GridGeometry geometry(const ClosedFormState& state) const { return geometry(phasespace::auto_geometry(state)); }
};

enum class Relation { AtMost, AtLeast };

struct SuiteCase {
    std::string label;
    double measured;
    double bound;
    Relation relation;
    bool pass;
};

struct VerificationReport {
    std::string suite;
    std::vector<SuiteCase> cases;
    std::vector<std::string> artifacts;
    std::vector<std::string> notes;

    void check_le(std::string label, double measured, double bound) {
        cases.push_back({std::move(label), measured, bound, Relation::AtMost, measured <= bound});
    }
    void check_ge(std::string label, double measured, double bound) {
        cases.push_back({std::move(label), measured, bound, Relation::AtLeast, measured >= bound});
    }

    std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const auto& c) { return !c.pass; }));
    }
    bool passed() const { return failures() == 0; }

    nlohmann::json to_json() const {
        nlohmann::json cs = nlohmann::json::array();
        for (const auto& c : cases)
            cs.push_back({{"label", c.label},
                          {"measured", c.measured},
                          {"bound", c.bound},
                          {"relation", c.relation == Relation::AtMost ? "le" : "ge"},
                          {"pass", c.pass}});
        return {{"suite", suite}, {"cases", std::move(cs)}, {"artifacts", artifacts}, {"notes", notes}};
    }
};

// ---------------------------------------------------------------------------
// Shared helpers

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string pure_label(double sigma, double theta) {
    return "sigma_x=" + num(sigma) + " theta=" + num(theta);
}

template <class F>
bool raises_degenerate(F&& f) {
    try {
        f();
    } catch (const DegenerateError&) {
        return true;
    }
    return false;
}

/// max |grid - closed form outcome| over the grid.
inline double outcome_deviation(const WignerGrid& g, const ClosedFormState& state, Photon which) {
    const auto& geom = g.geometry();
    double m = 0.0;
    for (std::size_t i = 0; i < geom.nx; ++i)
        for (std::size_t j = 0; j < geom.np; ++j)
            m = std::max(m, std::fabs(g.at(i, j) - gaussian::closed_form_outcome(state, which, geom.x(i), geom.p(j))));
    return m;
}

} // namespace detail

/// Coherent state D(alpha)|0> as a displaced vacuum gaussian: centre (sqrt2 Re a, sqrt2 Im a).
inline GaussianWignerSpec coherent_spec(std::complex<double> alpha) {
    return GaussianWignerSpec({GaussianComponent(1.0, 0.0, 1.0, 1.0, std::sqrt(2.0) * alpha.real(),
                                                 std::sqrt(2.0) * alpha.imag())});
}

/// Grid purities over sigma_x, sampled on a grid that only needs to resolve W itself.
inline double angular_average_grid_purity(double sigma_x) {
    const AngularAverage avg(sigma_x);
    const double narrow = std::min(sigma_x, 1.0 / sigma_x);
    const GridGeometry geom =
        phasespace::geometry_for(6.0 * std::max({1.0, sigma_x, 1.0 / sigma_x}), 2.0 * narrow, 129);
    return phasespace::grid_metrics(phasespace::rasterize(avg, geom)).purity;
}

struct RadialFit {
    std::vector<double> r;
    std::vector<double> log10_w;
    std::vector<double> log10_fit;
    double max_deviation;  ///< max |W/W_fit - 1| for 3 <= r <= 3 sigma_x
};

/// Radial profile W_[2pi](r, 0) and a least-squares gaussian fit of ln W on r <= 3.
inline RadialFit angular_average_profile(double sigma_x, std::size_t samples = 601) {
    RadialFit fit;
    const double r_max = 6.0 * std::max(1.0, sigma_x);
    double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
    std::vector<double> lnw(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double r = r_max * static_cast<double>(k) / static_cast<double>(samples - 1);
        lnw[k] = std::log(gaussian::angular_average_eval(sigma_x, r, 0.0));
        fit.r.push_back(r);
        if (r <= 3.0) {
            const double q = r * r;
            s0 += 1;
            s1 += q;
            s2 += q * q;
            t0 += lnw[k];
            t1 += q * lnw[k];
        }
    }
    const double det = s0 * s2 - s1 * s1;
    const double a = (t0 * s2 - t1 * s1) / det;
    const double b = (s0 * t1 - s1 * t0) / det;
    fit.max_deviation = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double r = fit.r[k];
        const double lnfit = a + b * r * r;
        fit.log10_w.push_back(lnw[k] / std::log(10.0));
        fit.log10_fit.push_back(lnfit / std::log(10.0));
        if (r >= 3.0 && r <= 3.0 * sigma_x)
            fit.max_deviation = std::max(fit.max_deviation, std::fabs(std::exp(lnw[k] - lnfit) - 1.0));
    }
    return fit;
}

// ---------------------------------------------------------------------------
// Suites

namespace suites {

inline void pure_identity(const SuiteConfig& cfg, VerificationReport& rep) {
    for (double sigma : cfg.sigma_list)
        for (double theta : cfg.theta_list) {
            const ClosedFormState state = GaussianWignerSpec::pure(sigma, theta);
            const WignerGrid w = phasespace::rasterize(state, cfg.geometry(state));
            const auto pair = phasespace::ladder_terms(w, cfg.stencil_order);
            const auto res = phasespace::identity_residual(w, std::nullopt, cfg.stencil_order);
            const std::string tag = detail::pure_label(sigma, theta);
            rep.check_le(tag + ": identity residual", res.residual, cfg.tol("identity"));
            rep.check_le(tag + ": |R_used - R(sigma_x)|", std::fabs(res.R_used - gaussian::R_of_sigma(sigma)),
                         cfg.tol("R"));
            const double o_add = phasespace::grid_metrics(phasespace::renormalize(pair.added)).origin_value;
            const double o_sub = phasespace::grid_metrics(phasespace::renormalize(pair.subtracted)).origin_value;
            rep.check_le(tag + ": |W_+(0,0) + 1/pi|", std::fabs(o_add + 1.0 / kPi), cfg.tol("origin"));
            rep.check_le(tag + ": |W_-(0,0) + 1/pi|", std::fabs(o_sub + 1.0 / kPi), cfg.tol("origin"));
        }
}

inline void impure_difference(const SuiteConfig& cfg, VerificationReport& rep) {
    const double sx = 4.0, sp = 0.5;
    const ClosedFormState state = GaussianWignerSpec::single(sx, sp);
    const WignerGrid w = phasespace::rasterize(state, cfg.geometry(state));
    const auto pair = phasespace::ladder_terms(w, cfg.stencil_order);
    const WignerGrid plus = phasespace::renormalize(pair.added);
    const WignerGrid minus = phasespace::renormalize(pair.subtracted);
    rep.check_ge("grid max|W_+ - W_-|", phasespace::max_abs_difference(plus, minus), cfg.tol("fig1_diff"));
    rep.check_ge("identity residual (R auto)",
                 phasespace::identity_residual(w, std::nullopt, cfg.stencil_order).residual, cfg.tol("impure_floor"));
    rep.check_le("grid W_+ vs f_+ W closed form", detail::outcome_deviation(plus, state, Photon::Added),
                 cfg.tol("cross"));
    rep.check_le("grid W_- vs f_- W closed form", detail::outcome_deviation(minus, state, Photon::Subtracted),
                 cfg.tol("cross"));
    const auto f0 = gaussian::f_factors(0.0, 0.0, sx, sp);
    rep.check_ge("|f_+(0,0) - f_-(0,0)|", std::fabs(f0.plus - f0.minus), cfg.tol("violation"));
}

inline void fock_ratio(const SuiteConfig& cfg, VerificationReport& rep) {
    for (double z : cfg.z_list) {
        const auto psi = fock::squeezed_vacuum(z, cfg.trunc_for(z));
        const auto out = fock::outcome_ratio(psi);
        const std::string tag = "z=" + detail::num(z);
        rep.check_le(tag + ": |ratio + tanh z|", std::abs(out.ratio + std::tanh(z)), cfg.tol("ratio"));
        rep.check_le(tag + ": relative residual", out.residual, cfg.tol("fock_residual"));
        const double r = std::fabs(gaussian::r_of_sigma(std::exp(-z)));
        rep.check_le(tag + ": | 1/|ratio| - |r(sigma_x)| | / |r|", std::fabs(1.0 / std::abs(out.ratio) - r) / r,
                     cfg.tol("ratio_consistency"));
        rep.check_le(tag + ": | ratio^-2 - R(sigma_x) | / R",
                     std::fabs(1.0 / std::norm(out.ratio) - gaussian::R_of_sigma(std::exp(-z))) /
                         gaussian::R_of_sigma(std::exp(-z)),
                     cfg.tol("ratio_consistency"));
    }

    // Cross-representation agreement at sigma_x = 2, i.e. z = -ln 2.
    const double sigma = 2.0;
    const double z = gaussian::z_of_sigma(sigma);
    const auto psi = fock::squeezed_vacuum(z, cfg.trunc_for(z));
    const ClosedFormState state = GaussianWignerSpec::pure(sigma);
    const GridGeometry geom = cfg.geometry(state);
    const auto up = fock::DensityMatrix::pure(fock::raise(psi).normalized());
    const auto down = fock::DensityMatrix::pure(fock::lower(psi).normalized());
    const WignerGrid w_up = phasespace::wigner_from_density(up, geom);
    const WignerGrid w_down = phasespace::wigner_from_density(down, geom);
    rep.check_le("sigma_x=2: Wigner(raised Fock) vs f_+ W", detail::outcome_deviation(w_up, state, Photon::Added),
                 cfg.tol("cross"));
    rep.check_le("sigma_x=2: Wigner(lowered Fock) vs f_- W",
                 detail::outcome_deviation(w_down, state, Photon::Subtracted), cfg.tol("cross"));

    const auto pair = phasespace::ladder_terms(phasespace::rasterize(state, geom), cfg.stencil_order);
    rep.check_le("sigma_x=2: grid add_photon vs Wigner(raised Fock)",
                 phasespace::max_abs_difference(phasespace::renormalize(pair.added), w_up), cfg.tol("cross"));
    rep.check_le("sigma_x=2: grid sub_photon vs Wigner(lowered Fock)",
                 phasespace::max_abs_difference(phasespace::renormalize(pair.subtracted), w_down), cfg.tol("cross"));
}

/// Inputs for the commutator check: closed forms and Fock-built grids.
inline std::vector<std::pair<std::string, WignerGrid>> commutator_inputs(const SuiteConfig& cfg) {
    std::vector<std::pair<std::string, ClosedFormState>> closed = {
        {"vacuum", GaussianWignerSpec::pure(1.0)},
        {"pure sigma_x=0.5", GaussianWignerSpec::pure(0.5)},
        {"pure sigma_x=2 theta=pi/4", GaussianWignerSpec::pure(2.0, kPi / 4)},
        {"pure sigma_x=2.2 theta=pi/8", GaussianWignerSpec::pure(2.2, kPi / 8)},
        {"pure sigma_x=4", GaussianWignerSpec::pure(4.0)},
        {"impure sigma_x=4 sigma_p=0.5", GaussianWignerSpec::single(4.0, 0.5)},
        {"impure sigma_x=1.5 sigma_p=1.2 theta=0.3", GaussianWignerSpec::single(1.5, 1.2, 0.3)},
        {"W_II P=0.5 theta=(0,pi/4) sigma_x=2.2", GaussianWignerSpec::two_angle_mixture(0.5, 0.0, kPi / 4, 2.2)},
        {"W_[2pi] sigma_x=2.2", AngularAverage(2.2)},
        {"mixture sigma_x=2 and 3",
         GaussianWignerSpec({GaussianComponent::pure(2.0, 0.0, 0.5), GaussianComponent::pure(3.0, 0.0, 0.5)})},
        {"coherent alpha=1", coherent_spec({1.0, 0.0})},
        {"displaced squeezed sigma_x=2 centre=(1,-0.5)",
         GaussianWignerSpec({GaussianComponent(1.0, 0.0, 2.0, 0.5, 1.0, -0.5)})},
    };
    std::vector<std::pair<std::string, WignerGrid>> out;
    for (const auto& [label, state] : closed) out.emplace_back(label, phasespace::rasterize(state, cfg.geometry(state)));
    for (std::size_t n : {1u, 2u}) {
        const auto rho = fock::DensityMatrix::pure(fock::FockVector::number_state(n, 16));
        out.emplace_back("Fock |" + std::to_string(n) + ">",
                         phasespace::wigner_from_density(rho, cfg.geometry(phasespace::auto_geometry(rho))));
    }
    return out;
}

inline void commutator(const SuiteConfig& cfg, VerificationReport& rep) {
    for (const auto& [label, w] : commutator_inputs(cfg)) {
        const auto pair = phasespace::ladder_terms(w, cfg.stencil_order);
        const double diff = grid::integrate(pair.added) - grid::integrate(pair.subtracted);
        rep.check_le(label + ": |int add - int sub - 1|", std::fabs(diff - 1.0), cfg.tol("commutator"));
    }
    for (double z : cfg.z_list) {
        const auto psi = fock::squeezed_vacuum(z, cfg.trunc_for(z));
        const double diff = fock::raise(psi).norm_squared() - fock::lower(psi).norm_squared();
        rep.check_le("Fock squeezed z=" + detail::num(z) + ": | ||a^dag psi||^2 - ||a psi||^2 - 1 |",
                     std::fabs(diff - 1.0), cfg.tol("commutator"));
    }
}

inline void mixtures(const SuiteConfig& cfg, VerificationReport& rep) {
    const std::vector<std::pair<std::string, GaussianWignerSpec>> good = {
        {"W_II P=0.5 theta=(0,pi/4) sigma_x=2.2", GaussianWignerSpec::two_angle_mixture(0.5, 0.0, kPi / 4, 2.2)},
        {"W_II P=0.3 theta=(0.2,1.3) sigma_x=2", GaussianWignerSpec::two_angle_mixture(0.3, 0.2, 1.3, 2.0)},
        {"W_II P=0.8 theta=(0,pi/2) sigma_x=0.5", GaussianWignerSpec::two_angle_mixture(0.8, 0.0, kPi / 2, 0.5)},
        {"three angles sigma_x=3",
         GaussianWignerSpec({GaussianComponent::pure(3.0, 0.0, 0.25), GaussianComponent::pure(3.0, kPi / 3, 0.25),
                             GaussianComponent::pure(3.0, 2 * kPi / 3, 0.5)})},
        {"sigma_x=2 with sigma_x=1/2 (same squeezing, quarter turn)",
         GaussianWignerSpec({GaussianComponent::pure(2.0, 0.0, 0.6), GaussianComponent::pure(0.5, 0.0, 0.4)})},
    };
    for (const auto& [label, spec] : good) {
        const ClosedFormState state = spec;
        const WignerGrid w = phasespace::rasterize(state, cfg.geometry(state));
        const auto res = phasespace::identity_residual(w, std::nullopt, cfg.stencil_order);
        rep.check_le(label + ": identity residual", res.residual, cfg.tol("identity"));
        const double o = phasespace::grid_metrics(phasespace::renormalize(phasespace::add_photon(w, cfg.stencil_order)))
                             .origin_value;
        rep.check_le(label + ": |W_+(0,0) + 1/pi|", std::fabs(o + 1.0 / kPi), cfg.tol("origin"));
    }
    const ClosedFormState unequal =
        GaussianWignerSpec({GaussianComponent::pure(2.0, 0.0, 0.5), GaussianComponent::pure(3.0, 0.0, 0.5)});
    const WignerGrid w = phasespace::rasterize(unequal, cfg.geometry(unequal));
    rep.check_ge("mixture sigma_x=2 and 3: identity residual",
                 phasespace::identity_residual(w, std::nullopt, cfg.stencil_order).residual, cfg.tol("violation"));
}

inline void angular_average(const SuiteConfig& cfg, VerificationReport& rep) {
    const double sigma = 2.2;
    const ClosedFormState state = AngularAverage(sigma);
    const WignerGrid w = phasespace::rasterize(state, cfg.geometry(state));
    const auto pair = phasespace::ladder_terms(w, cfg.stencil_order);
    rep.check_le("W_[2pi] sigma_x=2.2: identity residual",
                 phasespace::identity_residual(w, std::nullopt, cfg.stencil_order).residual, cfg.tol("identity"));
    rep.check_le("W_[2pi] sigma_x=2.2: |W_+(0,0) + 1/pi|",
                 std::fabs(phasespace::grid_metrics(phasespace::renormalize(pair.added)).origin_value + 1.0 / kPi),
                 cfg.tol("origin"));
    rep.check_le("W_[2pi] sigma_x=2.2: |W_-(0,0) + 1/pi|",
                 std::fabs(phasespace::grid_metrics(phasespace::renormalize(pair.subtracted)).origin_value + 1.0 / kPi),
                 cfg.tol("origin"));

    // Elliptic-argument convention probe.
    const double grid_purity = phasespace::grid_metrics(w).purity;
    const double dev_m = std::fabs(gaussian::angular_average_purity(sigma) - grid_purity);
    const double dev_k = std::fabs(gaussian::angular_average_purity_modulus_convention(sigma) - grid_purity);
    rep.check_le("sigma_x=2.2: closed-form purity (K parameter m) vs grid", dev_m, cfg.tol("purity"));
    rep.notes.push_back("elliptic convention: parameter m = k^2 deviates " + detail::num(dev_m) +
                        ", modulus k deviates " + detail::num(dev_k) + "; matched " +
                        (dev_m <= dev_k ? "parameter (m)" : "modulus (k)") + " convention");

    double worst = 0.0;
    std::size_t non_decreasing = 0;
    double prev = 2.0;
    for (int k = 0; k <= 40; ++k) {
        const double s = 1.0 + 0.1 * k;
        const double closed = gaussian::angular_average_purity(s);
        worst = std::max(worst, std::fabs(closed - angular_average_grid_purity(s)));
        if (closed >= prev) ++non_decreasing;
        prev = closed;
    }
    rep.check_le("purity closed form vs grid, sigma_x in [1,5]", worst, cfg.tol("purity"));
    rep.check_le("purity non-decreasing steps on [1,5]", static_cast<double>(non_decreasing), 0.0);
    rep.check_le("|P(1) - 1|", std::fabs(gaussian::angular_average_purity(1.0) - 1.0), cfg.tol("purity_unity"));
    rep.check_ge("radial profile deviation from gaussian fit, r >= 3", angular_average_profile(sigma).max_deviation,
                 cfg.tol("profile_deviation"));
}

inline void bogoliubov(const SuiteConfig& cfg, VerificationReport& rep) {
    for (double z : cfg.z_list) {
        const std::size_t n = cfg.trunc_for(z);
        const std::string tag = "z=" + detail::num(z);
        // a cosh z - a^dag sinh z = S^dag(z) a S(z) annihilates S^dag(z)|0> = squeezed_vacuum(-z).
        const auto vac = fock::squeezed_vacuum(-z, n);
        rep.check_le(tag + ": ||a_z S^dag(z)|0>|| / ||psi||", fock::bogoliubov_lower(z, vac).norm() / vac.norm(),
                     cfg.tol("bogoliubov"));
        const auto psi = fock::squeezed_vacuum(z, n);
        const double r = gaussian::r_of_sigma(std::exp(-z));
        rep.check_le(tag + ": ||(a^dag - r a) psi|| / ||a psi||",
                     fock::sigma_lower(r, psi).norm() / fock::lower(psi).norm(), cfg.tol("bogoliubov"));

        const auto s = fock::squeeze_operator(fock::SqueezeParams(z), n);
        const auto applied = fock::apply(s, fock::FockVector::number_state(0, n));
        rep.check_le(tag + ": 1 - |<squeezed_vacuum|S(z)|0>|^2",
                     1.0 - std::norm(psi.amps().dot(applied.amps())), cfg.tol("squeeze_fidelity"));
        const auto x = fock::position_matrix(n);
        const auto p = fock::momentum_matrix(n);
        const double var_x = (x * applied.amps()).squaredNorm();
        const double var_p = (p * applied.amps()).squaredNorm();
        rep.check_le(tag + ": Var x of S(z)|0> vs e^{-2z}/2 (relative)",
                     std::fabs(var_x / (0.5 * std::exp(-2 * z)) - 1.0), cfg.tol("bogoliubov"));
        rep.check_le(tag + ": Var p of S(z)|0> vs e^{2z}/2 (relative)",
                     std::fabs(var_p / (0.5 * std::exp(2 * z)) - 1.0), cfg.tol("bogoliubov"));
    }
}

inline void negative_cases(const SuiteConfig& cfg, VerificationReport& rep) {
    const ClosedFormState vac = GaussianWignerSpec::pure(1.0);
    const WignerGrid w_vac = phasespace::rasterize(vac, cfg.geometry(vac));
    rep.check_le("vacuum grid: identity_residual raises degenerate error (0 = raised)",
                 detail::raises_degenerate([&] { phasespace::identity_residual(w_vac); }) ? 0.0 : 1.0, 0.0);
    rep.check_le("vacuum Fock: outcome_ratio raises degenerate error (0 = raised)",
                 detail::raises_degenerate([&] { fock::outcome_ratio(fock::FockVector::number_state(0, 8)); }) ? 0.0
                                                                                                             : 1.0,
                 0.0);
    rep.check_le("r_of_sigma(1) raises degenerate error (0 = raised)",
                 detail::raises_degenerate([&] { gaussian::r_of_sigma(1.0); }) ? 0.0 : 1.0, 0.0);

    const ClosedFormState coh = coherent_spec({1.0, 0.0});
    rep.check_ge("coherent alpha=1 grid: identity residual",
                 phasespace::identity_residual(phasespace::rasterize(coh, cfg.geometry(coh)), std::nullopt,
                                               cfg.stencil_order)
                     .residual,
                 cfg.tol("displaced_floor"));
    const auto coherent =
        fock::apply(fock::displacement_operator({1.0, 0.0}, 48), fock::FockVector::number_state(0, 48));
    rep.check_ge("coherent alpha=1 Fock: relative residual", fock::outcome_ratio(coherent).residual,
                 cfg.tol("displaced_floor"));

    const ClosedFormState impure = GaussianWignerSpec::single(4.0, 0.5);
    rep.check_ge("impure sigma_x=4 sigma_p=0.5: identity residual",
                 phasespace::identity_residual(phasespace::rasterize(impure, cfg.geometry(impure)), std::nullopt,
                                               cfg.stencil_order)
                     .residual,
                 cfg.tol("impure_floor"));

    const ClosedFormState unequal =
        GaussianWignerSpec({GaussianComponent::pure(2.0, 0.0, 0.5), GaussianComponent::pure(3.0, 0.0, 0.5)});
    rep.check_ge("mixture sigma_x=2 and 3: identity residual",
                 phasespace::identity_residual(phasespace::rasterize(unequal, cfg.geometry(unequal)), std::nullopt,
                                               cfg.stencil_order)
                     .residual,
                 cfg.tol("violation"));

    const ClosedFormState pure = GaussianWignerSpec::pure(2.0);
    const WignerGrid w = phasespace::rasterize(pure, cfg.geometry(pure));
    const WignerGrid once = phasespace::renormalize(phasespace::add_photon(w, cfg.stencil_order));
    rep.check_ge("second round (photon-added sigma_x=2): identity residual",
                 phasespace::identity_residual(once, std::nullopt, cfg.stencil_order).residual, cfg.tol("violation"));
    const auto psi = fock::squeezed_vacuum(gaussian::z_of_sigma(2.0), 96);
    rep.check_ge("second round Fock (raised squeezed vacuum): relative residual",
                 fock::outcome_ratio(fock::raise(psi).normalized()).residual, cfg.tol("violation"));
}

} // namespace suites

/// Runs one named suite; unknown names raise ConfigError.
inline VerificationReport run_suite(const std::string& name, const SuiteConfig& cfg = {}) {
    cfg.validate();
    static const std::map<std::string, std::function<void(const SuiteConfig&, VerificationReport&)>> table = {
        {"pure-identity", suites::pure_identity},   {"impure-difference", suites::impure_difference},
        {"fock-ratio", suites::fock_ratio},         {"commutator", suites::commutator},
        {"mixtures", suites::mixtures},             {"angular-average", suites::angular_average},
        {"bogoliubov", suites::bogoliubov},         {"negative-cases", suites::negative_cases},
    };
    const auto it = table.find(name);
    if (it == table.end()) throw ConfigError("run_suite: unknown suite '" + name + "'");
    VerificationReport rep;
    rep.suite = name;
    it->second(cfg, rep);
    return rep;
}

// ---------------------------------------------------------------------------
// Figure data

namespace detail {
inline void write_two_column(const std::filesystem::path& path, const std::string& a, const std::string& b,
                             const std::vector<double>& xs, const std::vector<double>& ys) {
    grid::write_atomically(path, [&](std::ostream& os) {
        os << a << ',' << b << '\n';
        for (std::size_t k = 0; k < xs.size(); ++k) os << grid::detail::fmt17(xs[k]) << ',' << grid::detail::fmt17(ys[k]) << '\n';
    });
}
} // namespace detail

/// Writes the data behind one figure into `out_dir`; returns the files written.
///   fig1: renormalized W_+, W_- and their difference for sigma_x = 4, sigma_p = 1/2
///   fig2: renormalized outcomes of W_II (P = 0.5, theta = 0, pi/4, sigma_x = 2.2) and W_[2pi](2.2)
///   fig3: radial log10 profile of W_[2pi](2.2), its gaussian fit, and purity over sigma_x in [1, 5]
inline std::vector<std::filesystem::path> figure_data(const std::string& which, const SuiteConfig& cfg,
                                                      const std::filesystem::path& out_dir) {
    cfg.validate();
    std::vector<std::filesystem::path> files;
    auto emit_grid = [&](const std::string& name, const WignerGrid& g) {
        const auto path = out_dir / name;
        grid::write_grid_csv(path, g);
        files.push_back(path);
    };
    if (which == "fig1") {
        const ClosedFormState state = GaussianWignerSpec::single(4.0, 0.5);
        const auto pair = phasespace::ladder_terms(phasespace::rasterize(state, cfg.geometry(state)), cfg.stencil_order);
        const WignerGrid plus = phasespace::renormalize(pair.added);
        const WignerGrid minus = phasespace::renormalize(pair.subtracted);
        emit_grid("fig1_w_plus.csv", plus);
        emit_grid("fig1_w_minus.csv", minus);
        emit_grid("fig1_delta_w.csv", phasespace::difference(plus, minus));
    } else if (which == "fig2") {
        const std::array<std::pair<std::string, ClosedFormState>, 2> states = {
            std::pair<std::string, ClosedFormState>{"wii", GaussianWignerSpec::two_angle_mixture(0.5, 0.0, kPi / 4, 2.2)},
            std::pair<std::string, ClosedFormState>{"w2pi", AngularAverage(2.2)}};
        for (const auto& [tag, state] : states) {
            const auto pair =
                phasespace::ladder_terms(phasespace::rasterize(state, cfg.geometry(state)), cfg.stencil_order);
            emit_grid("fig2_" + tag + "_added.csv", phasespace::renormalize(pair.added));
            emit_grid("fig2_" + tag + "_subtracted.csv", phasespace::renormalize(pair.subtracted));
        }
    } else if (which == "fig3") {
        const RadialFit fit = angular_average_profile(2.2);
        detail::write_two_column(out_dir / "fig3_radial_profile.csv", "x", "log10_w", fit.r, fit.log10_w);
        detail::write_two_column(out_dir / "fig3_gaussian_reference.csv", "x", "log10_w_fit", fit.r, fit.log10_fit);
        std::vector<double> sig, pur;
        for (int k = 0; k <= 40; ++k) {
            sig.push_back(1.0 + 0.1 * k);
            pur.push_back(gaussian::angular_average_purity(sig.back()));
        }
        detail::write_two_column(out_dir / "fig3_purity.csv", "sigma_x", "purity", sig, pur);
        files = {out_dir / "fig3_radial_profile.csv", out_dir / "fig3_gaussian_reference.csv",
                 out_dir / "fig3_purity.csv"};
    } else {
        throw ConfigError("figure_data: unknown figure '" + which + "' (expected fig1, fig2 or fig3)");
    }
    return files;
}

} // namespace pasq::verify
