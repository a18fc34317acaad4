// Closed-form gaussian Wigner families and the scalar identities attached to them.
// Convention: hbar = 1, a = (x + ip)/sqrt(2), vacuum W = e^{-x^2-p^2}/pi.
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pasq/error.hpp"
#include "pasq/special.hpp"

namespace pasq::gaussian {

inline constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Scalar identities for the pure squeezed vacuum psi(x) ~ exp(-x^2/(2 sigma_x^2))

namespace detail {
inline void require_not_vacuum(double sigma_x, const char* who) {
    if (!(sigma_x > 0.0)) throw ConfigError(std::string(who) + ": sigma_x must be positive");
    if (std::fabs(sigma_x * sigma_x - 1.0) < 1e-14)
        throw DegenerateError(std::string(who) +
                              ": sigma_x = 1 is the vacuum, excluded since a|0> = 0 and the ratio diverges");
}
} // namespace detail

/// Signed ratio r in a^dagger psi = r a psi: (sigma_x^2+1)/(sigma_x^2-1).
inline double r_of_sigma(double sigma_x) {
    detail::require_not_vacuum(sigma_x, "r_of_sigma");
    const double s2 = sigma_x * sigma_x;
    return (s2 + 1.0) / (s2 - 1.0);
}

/// Phase-space norm ratio R = r^2 = (sigma_x^2+1)^2/(sigma_x^2-1)^2.
inline double R_of_sigma(double sigma_x) {
    const double r = r_of_sigma(sigma_x);
    return r * r;
}

/// z = ln(1/sigma_x); tanh z = (1 - sigma_x^2)/(1 + sigma_x^2).
inline double z_of_sigma(double sigma_x) {
    if (!(sigma_x > 0.0)) throw ConfigError("z_of_sigma: sigma_x must be positive");
    return -std::log(sigma_x);
}

/// Normalized position wavefunction of the pure squeezed vacuum.
inline double psi_pure(double x, double sigma_x) {
    return std::exp(-x * x / (2.0 * sigma_x * sigma_x)) / std::sqrt(sigma_x * std::sqrt(kPi));
}

/// d/dx psi_pure
inline double psi_pure_derivative(double x, double sigma_x) {
    return -x / (sigma_x * sigma_x) * psi_pure(x, sigma_x);
}

// ---------------------------------------------------------------------------
// Gaussian Wigner components

/// One weighted gaussian exp(-x'^2/sigma_x^2 - p'^2/sigma_p^2)/(pi sigma_x sigma_p) in
/// coordinates rotated by theta, optionally centred at (mean_x, mean_p).
class GaussianComponent {
public:
    GaussianComponent(double weight, double theta, double sigma_x, double sigma_p,
                      double mean_x = 0.0, double mean_p = 0.0)
        : weight_(weight), theta_(std::fmod(theta, kPi)), sigma_x_(sigma_x), sigma_p_(sigma_p),
          mean_x_(mean_x), mean_p_(mean_p) {
        if (!(weight > 0.0 && weight <= 1.0)) throw ConfigError("GaussianComponent: weight must lie in (0, 1]");
        if (!(sigma_x > 0.0 && sigma_p > 0.0)) throw ConfigError("GaussianComponent: widths must be positive");
        if (!std::isfinite(theta) || !std::isfinite(mean_x) || !std::isfinite(mean_p))
            throw ConfigError("GaussianComponent: non-finite parameter");
        if (theta_ < 0.0) theta_ += kPi;
        // sigma_x * (1/sigma_x) may round just below one
        if (sigma_x * sigma_p < 1.0 - 1e-12)
            throw ConfigError("GaussianComponent: sigma_x * sigma_p < 1 violates the uncertainty bound");
    }

    /// Pure squeezed vacuum (sigma_p = 1/sigma_x) rotated by theta.
    static GaussianComponent pure(double sigma_x, double theta = 0.0, double weight = 1.0) {
        return GaussianComponent(weight, theta, sigma_x, 1.0 / sigma_x);
    }

    double weight() const { return weight_; }
    double theta() const { return theta_; }
    double sigma_x() const { return sigma_x_; }
    double sigma_p() const { return sigma_p_; }
    double mean_x() const { return mean_x_; }
    double mean_p() const { return mean_p_; }
    bool centered() const { return mean_x_ == 0.0 && mean_p_ == 0.0; }
    bool is_pure(double tol = 1e-12) const { return std::fabs(sigma_x_ * sigma_p_ - 1.0) <= tol; }

    /// (x', p') = (x cos theta + p sin theta, p cos theta - x sin theta) about the centre.
    std::pair<double, double> rotated(double x, double p) const {
        const double c = std::cos(theta_);
        const double s = std::sin(theta_);
        const double dx = x - mean_x_;
        const double dp = p - mean_p_;
        return {dx * c + dp * s, dp * c - dx * s};
    }

    /// Unit-weight density at (x, p).
    double density(double x, double p) const {
        const auto [xr, pr] = rotated(x, p);
        return std::exp(-xr * xr / (sigma_x_ * sigma_x_) - pr * pr / (sigma_p_ * sigma_p_)) /
               (kPi * sigma_x_ * sigma_p_);
    }

    /// <a^dagger a> of this component alone.
    double mean_photon() const {
        const double d2 = mean_x_ * mean_x_ + mean_p_ * mean_p_;
        return 0.25 * (sigma_x_ * sigma_x_ + sigma_p_ * sigma_p_) + 0.5 * d2 - 0.5;
    }

private:
    double weight_;
    double theta_;
    double sigma_x_;
    double sigma_p_;
    double mean_x_;
    double mean_p_;
};

/// Incoherent sum of gaussian components; weights sum to one.
class GaussianWignerSpec {
public:
    explicit GaussianWignerSpec(std::vector<GaussianComponent> components)
        : components_(std::move(components)) {
        if (components_.empty()) throw ConfigError("GaussianWignerSpec: no components");
        double total = 0.0;
        for (const auto& c : components_) total += c.weight();
        if (std::fabs(total - 1.0) > 1e-12)
            throw ConfigError("GaussianWignerSpec: weights sum to " + std::to_string(total) + ", not 1");
    }

    static GaussianWignerSpec pure(double sigma_x, double theta = 0.0) {
        return GaussianWignerSpec({GaussianComponent::pure(sigma_x, theta)});
    }

    static GaussianWignerSpec single(double sigma_x, double sigma_p, double theta = 0.0) {
        return GaussianWignerSpec({GaussianComponent(1.0, theta, sigma_x, sigma_p)});
    }

    /// W_II = P W(theta1, sigma_x) + (1-P) W(theta2, sigma_x), 0 <= P <= 1.
    static GaussianWignerSpec two_angle_mixture(double prob, double theta1, double theta2, double sigma_x) {
        if (!(prob >= 0.0 && prob <= 1.0)) throw ConfigError("two_angle_mixture: P must lie in [0, 1]");
        std::vector<GaussianComponent> comps;
        if (prob > 0.0) comps.push_back(GaussianComponent::pure(sigma_x, theta1, prob));
        if (prob < 1.0) comps.push_back(GaussianComponent::pure(sigma_x, theta2, 1.0 - prob));
        return GaussianWignerSpec(std::move(comps));
    }

    const std::vector<GaussianComponent>& components() const { return components_; }

    double mean_photon() const {
        double n = 0.0;
        for (const auto& c : components_) n += c.weight() * c.mean_photon();
        return n;
    }

private:
    std::vector<GaussianComponent> components_;
};

/// Maximally mixed angular average W_[2pi] of pure squeezed vacua with width sigma_x.
struct AngularAverage {
    double sigma_x;

    explicit AngularAverage(double s) : sigma_x(s) {
        if (!(s > 0.0)) throw ConfigError("AngularAverage: sigma_x must be positive");
    }
};

/// Any closed-form phase-space state the library can rasterize.
using ClosedFormState = std::variant<GaussianWignerSpec, AngularAverage>;

/// sum_k w_k W_k(x, p)
inline double wigner_eval(const GaussianWignerSpec& spec, double x, double p) {
    double w = 0.0;
    for (const auto& c : spec.components()) w += c.weight() * c.density(x, p);
    return w;
}

// ---------------------------------------------------------------------------
// Photon-added / photon-subtracted outcomes of a centred gaussian

struct FFactors {
    double plus;
    double minus;
};

/// Polynomial prefactors f_+, f_- with W_+- = f_+- W for the normalized outcomes of the
/// centred gaussian exp(-x^2/sigma_x^2 - p^2/sigma_p^2)/(pi sigma_x sigma_p).
inline FFactors f_factors(double x, double p, double sigma_x, double sigma_p) {
    const double sx2 = sigma_x * sigma_x;
    const double sp2 = sigma_p * sigma_p;
    const double sum_plus = sp2 + sx2 + 2.0;
    const double sum_minus = sp2 + sx2 - 2.0;
    if (std::fabs(sum_minus) < 1e-12)
        throw DegenerateError("f_factors: sigma_x^2 + sigma_p^2 = 2 is the vacuum, photon subtraction vanishes");

    const double plus = 2.0 * p * p * (sp2 + 1.0) * (sp2 + 1.0) / (sp2 * sp2 * sum_plus) -
                        (sp2 * (2.0 * sx2 + 1.0) + sx2) / (sp2 * sx2 * sum_plus) +
                        2.0 * (sx2 + 1.0) * (sx2 + 1.0) * x * x / (sx2 * sx2 * sum_plus);
    const double minus = 2.0 * p * p * (sp2 - 1.0) * (sp2 - 1.0) / (sp2 * sp2 * sum_minus) +
                         (sp2 * (2.0 * sx2 - 1.0) - sx2) / (sp2 * sx2 * sum_minus) +
                         2.0 * (sx2 - 1.0) * (sx2 - 1.0) * x * x / (sx2 * sx2 * sum_minus);
    return {plus, minus};
}

enum class Photon { Added, Subtracted };

/// Normalized outcome Wigner function of a centred gaussian mixture after one photon is
/// added or subtracted. Each component enters with weight w_k <a a^dagger>_k (or
/// <a^dagger a>_k), so mixtures with unequal photon numbers are handled exactly.
inline double outcome_eval(const GaussianWignerSpec& spec, Photon which, double x, double p) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& c : spec.components()) {
        if (!c.centered()) throw ConfigError("outcome_eval: closed form requires centred components");
        const double n = c.mean_photon();
        const double norm = which == Photon::Added ? n + 1.0 : n;
        const auto [xr, pr] = c.rotated(x, p);
        const FFactors f = f_factors(xr, pr, c.sigma_x(), c.sigma_p());
        num += c.weight() * norm * (which == Photon::Added ? f.plus : f.minus) * c.density(x, p);
        den += c.weight() * norm;
    }
    if (!(den > 0.0)) throw DegenerateError("outcome_eval: outcome has zero norm");
    return num / den;
}

// ---------------------------------------------------------------------------
// Angular average W_[2pi]

/// (1/pi) exp[-s(sigma^4+1)/(2 sigma^2)] I0(s(sigma^4-1)/(2 sigma^2)), s = x^2 + p^2.
inline double angular_average_eval(double sigma_x, double x, double p) {
    const double s = x * x + p * p;
    const double s2 = sigma_x * sigma_x;
    const double s4 = s2 * s2;
    const double a = s * (s4 + 1.0) / (2.0 * s2);
    const double b = s * (s4 - 1.0) / (2.0 * s2);
    // e^{-a} I0(b) = e^{|b|-a} (e^{-|b|} I0(b)), exponent <= 0
    return std::exp(std::fabs(b) - a) * special::bessel_i0_scaled(b) / kPi;
}

/// Elliptic argument m = ((1 - sigma^4)/(1 + sigma^4))^2 of the purity formula.
inline double angular_average_elliptic_parameter(double sigma_x) {
    const double s4 = std::pow(sigma_x, 4);
    const double q = (1.0 - s4) / (1.0 + s4);
    return q * q;
}

/// Purity 2 pi int W_[2pi]^2 = 4 sigma^2 K(m) / (pi (1 + sigma^4)).
inline double angular_average_purity(double sigma_x) {
    if (!(sigma_x > 0.0)) throw ConfigError("angular_average_purity: sigma_x must be positive");
    const double s2 = sigma_x * sigma_x;
    return 4.0 * s2 * special::elliptic_k(angular_average_elliptic_parameter(sigma_x)) / (kPi * (1.0 + s2 * s2));
}

/// Same expression with K evaluated at the modulus convention K(k = m). Kept only for
/// the convention probe.
inline double angular_average_purity_modulus_convention(double sigma_x) {
    const double s2 = sigma_x * sigma_x;
    const double m = angular_average_elliptic_parameter(sigma_x);
    return 4.0 * s2 * special::elliptic_k(m * m) / (kPi * (1.0 + s2 * s2));
}

/// Closed-form evaluation for either state kind.
inline double closed_form_eval(const ClosedFormState& state, double x, double p) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianWignerSpec>)
                return wigner_eval(s, x, p);
            else
                return angular_average_eval(s.sigma_x, x, p);
        },
        state);
}

/// Normalized outcome of either kind. The angular average is a uniform mixture of
/// equal-photon-number pure components, so its outcome is the average of theirs; the
/// theta integral is evaluated with a periodic trapezoid rule.
inline double closed_form_outcome(const ClosedFormState& state, Photon which, double x, double p,
                                  int angle_samples = 256) {
    if (const auto* spec = std::get_if<GaussianWignerSpec>(&state)) return outcome_eval(*spec, which, x, p);
    const double sigma = std::get<AngularAverage>(state).sigma_x;
    double acc = 0.0;
    for (int k = 0; k < angle_samples; ++k) {
        const double theta = kPi * k / angle_samples;
        acc += outcome_eval(GaussianWignerSpec::pure(sigma, theta), which, x, p);
    }
    return acc / angle_samples;
}

// ---------------------------------------------------------------------------
// gauss-v1 files

inline nlohmann::json to_json(const GaussianWignerSpec& spec) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : spec.components()) {
        nlohmann::json j = {{"weight", c.weight()},
                            {"theta", c.theta()},
                            {"sigma_x", c.sigma_x()},
                            {"sigma_p", c.sigma_p()}};
        if (!c.centered()) {
            j["mean_x"] = c.mean_x();
            j["mean_p"] = c.mean_p();
        }
        comps.push_back(std::move(j));
    }
    return {{"format", "gauss-v1"}, {"components", std::move(comps)}};
}

inline nlohmann::json to_json(const AngularAverage& avg) {
    return {{"format", "gauss-v1"}, {"kind", "angular-average"}, {"sigma_x", avg.sigma_x}};
}

inline nlohmann::json to_json(const ClosedFormState& state) {
    return std::visit([](const auto& s) { return to_json(s); }, state);
}

inline ClosedFormState closed_form_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "gauss-v1")
            throw FormatError("gaussian state: expected format gauss-v1");
        const std::string kind = j.value("kind", std::string("components"));
        if (kind == "angular-average") return AngularAverage(j.at("sigma_x").get<double>());
        if (kind != "components") throw FormatError("gaussian state: unknown kind '" + kind + "'");
        std::vector<GaussianComponent> comps;
        for (const auto& c : j.at("components"))
            comps.emplace_back(c.at("weight").get<double>(), c.at("theta").get<double>(),
                               c.at("sigma_x").get<double>(), c.at("sigma_p").get<double>(),
                               c.value("mean_x", 0.0), c.value("mean_p", 0.0));
        return GaussianWignerSpec(std::move(comps));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("gaussian state: ") + e.what());
    }
}

} // namespace pasq::gaussian
