// Truncated single-mode Fock space: number-basis state vectors, density
// matrices, ladder operators and the squeeze / displacement / Bogoliubov
// operators built from them. This representation is exact up to truncation
// and serves as the brute-force reference for the phase-space engine.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "pasq/error.hpp"

namespace pasq::fock {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Default bound on the weight an operation may push past the truncation edge.
inline constexpr double kTruncationBudget = 1e-10;

/// Amplitudes <n|psi> for n = 0..N-1.
class FockVector {
public:
    explicit FockVector(Vector amps) : amps_(std::move(amps)) {
        if (amps_.size() < 2) throw ConfigError("FockVector: truncation dimension must be >= 2");
    }

    static FockVector zero(std::size_t trunc) {
        return FockVector(Vector::Zero(static_cast<Eigen::Index>(trunc)));
    }

    static FockVector number_state(std::size_t n, std::size_t trunc) {
        if (n >= trunc) throw ConfigError("number_state: n must be below the truncation");
        FockVector v = zero(trunc);
        v.amps_[static_cast<Eigen::Index>(n)] = 1.0;
        return v;
    }

    std::size_t trunc() const { return static_cast<std::size_t>(amps_.size()); }
    const Vector& amps() const { return amps_; }
    Complex operator[](std::size_t n) const { return amps_[static_cast<Eigen::Index>(n)]; }

    double norm_squared() const { return amps_.squaredNorm(); }
    double norm() const { return amps_.norm(); }
    bool is_normalized(double tol = 1e-12) const { return std::fabs(norm_squared() - 1.0) <= tol; }

    FockVector normalized() const {
        const double n = norm();
        if (!(n > 0.0)) throw DegenerateError("FockVector: cannot normalize the zero vector");
        return FockVector(amps_ / n);
    }

private:
    Vector amps_;
};

/// Hermitian density operator in the truncated number basis.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix elems) : elems_(std::move(elems)) {
        if (elems_.rows() != elems_.cols())
            throw ConfigError("DensityMatrix: matrix must be square");
        if (elems_.rows() < 2) throw ConfigError("DensityMatrix: truncation dimension must be >= 2");
        const double scale = std::max(1.0, elems_.cwiseAbs().maxCoeff());
        if ((elems_ - elems_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw ConfigError("DensityMatrix: matrix is not Hermitian");
    }

    static DensityMatrix pure(const FockVector& psi) {
        return DensityMatrix(psi.amps() * psi.amps().adjoint());
    }

    /// Incoherent sum sum_k w_k |psi_k><psi_k| of states with equal truncation.
    static DensityMatrix mixture(const std::vector<std::pair<double, FockVector>>& terms) {
        if (terms.empty()) throw ConfigError("DensityMatrix::mixture: no terms");
        const auto n = static_cast<Eigen::Index>(terms.front().second.trunc());
        Matrix rho = Matrix::Zero(n, n);
        for (const auto& [w, psi] : terms) {
            if (static_cast<Eigen::Index>(psi.trunc()) != n)
                throw ConfigError("DensityMatrix::mixture: truncation mismatch");
            rho += w * psi.amps() * psi.amps().adjoint();
        }
        return DensityMatrix(std::move(rho));
    }

    std::size_t trunc() const { return static_cast<std::size_t>(elems_.rows()); }
    const Matrix& elems() const { return elems_; }
    double trace() const { return elems_.trace().real(); }

    /// Unit trace and positive semidefinite within tolerance.
    bool is_normalized(double trace_tol = 1e-10, double eig_tol = 1e-10) const {
        if (std::fabs(trace() - 1.0) > trace_tol) return false;
        Eigen::SelfAdjointEigenSolver<Matrix> solver(elems_, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff() >= -eig_tol;
    }

private:
    Matrix elems_;
};

/// Squeezing parameter zeta = z e^{i phi}, z >= 0.
struct SqueezeParams {
    double z = 0.0;
    double phi = 0.0;

    SqueezeParams() = default;
    SqueezeParams(double z_, double phi_ = 0.0) : z(z_), phi(phi_) {
        if (!(z >= 0.0)) throw ConfigError("SqueezeParams: magnitude z must be >= 0");
    }

    Complex zeta() const { return std::polar(z, phi); }
};

// ---------------------------------------------------------------------------
// Ladder operators

/// a|psi>: out[n] = sqrt(n+1) in[n+1], out[N-1] = 0.
inline FockVector lower(const FockVector& state) {
    const auto n = static_cast<Eigen::Index>(state.trunc());
    Vector out = Vector::Zero(n);
    for (Eigen::Index k = 0; k + 1 < n; ++k)
        out[k] = std::sqrt(static_cast<double>(k + 1)) * state.amps()[k + 1];
    return FockVector(std::move(out));
}

/// a^dagger|psi>: out[n] = sqrt(n) in[n-1], out[0] = 0. The component pushed past
/// the edge is dropped, so the top amplitude must carry at most `budget` of the weight.
inline FockVector raise(const FockVector& state, double budget = kTruncationBudget) {
    const auto n = static_cast<Eigen::Index>(state.trunc());
    const double total = state.norm_squared();
    const double edge = std::norm(state.amps()[n - 1]);
    if (total > 0.0 && edge > budget * total)
        throw TruncationError("raise: top Fock level carries relative weight " +
                                  std::to_string(edge / total) + "; increase the truncation",
                              edge / total);
    Vector out = Vector::Zero(n);
    for (Eigen::Index k = 1; k < n; ++k)
        out[k] = std::sqrt(static_cast<double>(k)) * state.amps()[k - 1];
    return FockVector(std::move(out));
}

/// Truncation that keeps the squeezed-vacuum tail far below the default budget.
inline std::size_t suggested_trunc(double z) {
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(32.0 * std::cosh(2.0 * z))));
}

/// Squeezed vacuum S(z)|0>, amplitudes (-tanh z)^m sqrt((2m)!)/(2^m m!)/sqrt(cosh z) on |2m>.
/// Negative z gives the state squeezed in momentum (sigma_x = e^{-z} > 1).
/// Renormalized after truncation; throws if the discarded tail exceeds `budget`.
inline FockVector squeezed_vacuum(double z, std::size_t trunc, double budget = kTruncationBudget) {
    if (trunc < 2) throw ConfigError("squeezed_vacuum: truncation must be >= 2");
    const double t = std::tanh(z);
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(trunc));
    double c = 1.0 / std::sqrt(std::cosh(z));
    double kept = 0.0;
    for (std::size_t m = 0; 2 * m < trunc; ++m) {
        amps[static_cast<Eigen::Index>(2 * m)] = c;
        kept += c * c;
        const double dm = static_cast<double>(m);
        c *= -t * std::sqrt((2.0 * dm + 1.0) * (2.0 * dm + 2.0)) / (2.0 * (dm + 1.0));
    }
    const double tail = std::max(0.0, 1.0 - kept);
    if (tail > budget)
        throw TruncationError("squeezed_vacuum: tail weight " + std::to_string(tail) +
                                  " beyond truncation " + std::to_string(trunc) +
                                  "; use N >= " + std::to_string(suggested_trunc(z)),
                              tail);
    return FockVector(amps / std::sqrt(kept));
}

// ---------------------------------------------------------------------------
// Operator matrices

/// Truncated annihilation operator, a[n][n+1] = sqrt(n+1).
inline Matrix annihilation_matrix(std::size_t trunc) {
    const auto n = static_cast<Eigen::Index>(trunc);
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) a(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
    return a;
}

inline Matrix creation_matrix(std::size_t trunc) { return annihilation_matrix(trunc).adjoint(); }

/// x = (a + a^dagger)/sqrt(2)
inline Matrix position_matrix(std::size_t trunc) {
    const Matrix a = annihilation_matrix(trunc);
    return (a + a.adjoint()) / std::sqrt(2.0);
}

/// p = i (a^dagger - a)/sqrt(2)
inline Matrix momentum_matrix(std::size_t trunc) {
    const Matrix a = annihilation_matrix(trunc);
    return Complex(0.0, 1.0) * (a.adjoint() - a) / std::sqrt(2.0);
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
inline Matrix expm(const Matrix& g) {
    const double norm1 = g.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.25)));
    const Matrix a = g / std::ldexp(1.0, squarings);

    const auto n = g.rows();
    Matrix sum = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k < 60; ++k) {
        term = (term * a) / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18 * sum.cwiseAbs().maxCoeff()) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

/// S(zeta) = exp[(zeta a^2 - zeta^* a^dagger^2)/2] on the truncated space.
inline Matrix squeeze_operator(const SqueezeParams& params, std::size_t trunc) {
    const Matrix a = annihilation_matrix(trunc);
    const Matrix a2 = a * a;
    const Complex zeta = params.zeta();
    return expm(0.5 * (zeta * a2 - std::conj(zeta) * a2.adjoint()));
}

/// D(alpha) = exp(alpha a^dagger - alpha^* a) on the truncated space.
inline Matrix displacement_operator(Complex alpha, std::size_t trunc) {
    const Matrix a = annihilation_matrix(trunc);
    return expm(alpha * a.adjoint() - std::conj(alpha) * a);
}

inline FockVector apply(const Matrix& op, const FockVector& state) {
    if (op.cols() != static_cast<Eigen::Index>(state.trunc()))
        throw ConfigError("apply: operator/state dimension mismatch");
    return FockVector(op * state.amps());
}

/// a_z = a cosh z - a^dagger sinh z, the Bogoliubov image S^dagger(z) a S(z).
/// Its vacuum is S^dagger(z)|0> = squeezed_vacuum(-z).
inline FockVector bogoliubov_lower(double z, const FockVector& state,
                                   double budget = kTruncationBudget) {
    const FockVector up = raise(state, budget);
    const FockVector down = lower(state);
    return FockVector(std::cosh(z) * down.amps() - std::sinh(z) * up.amps());
}

/// a_sigma = a^dagger - r a, which annihilates the pure gaussian whose ratio is r.
inline FockVector sigma_lower(double r, const FockVector& state, double budget = kTruncationBudget) {
    const FockVector up = raise(state, budget);
    const FockVector down = lower(state);
    return FockVector(up.amps() - r * down.amps());
}

struct OutcomeRatio {
    Complex ratio;   ///< least-squares c in a|psi> ~ c a^dagger|psi>
    double residual; ///< ||a psi - c a^dagger psi|| / ||a psi||
};

/// Compares photon-subtracted and photon-added outcomes. For pure squeezed vacua
/// the two are parallel with ratio -tanh z and the residual vanishes.
inline OutcomeRatio outcome_ratio(const FockVector& state, double budget = kTruncationBudget) {
    const FockVector down = lower(state);
    const FockVector up = raise(state, budget);
    const double down_norm = down.norm();
    if (!(down_norm > 1e-12 * std::max(1.0, state.norm())))
        throw DegenerateError(
            "outcome_ratio: a|psi> vanishes (vacuum input); the add/subtract ratio diverges");
    const double up_sq = up.norm_squared();
    const Complex c = up.amps().dot(down.amps()) / up_sq;  // <up|down>/||up||^2
    const double residual = (down.amps() - c * up.amps()).norm() / down_norm;
    return {c, residual};
}

struct StateMetrics {
    double norm;
    double mean_photon;
    double purity;
};

/// tr rho, tr(n rho), tr(rho^2).
inline StateMetrics state_metrics(const DensityMatrix& rho) {
    const Matrix& m = rho.elems();
    double mean = 0.0;
    for (Eigen::Index k = 0; k < m.rows(); ++k) mean += static_cast<double>(k) * m(k, k).real();
    const double purity = (m * m).trace().real();
    return {rho.trace(), mean, purity};
}

// ---------------------------------------------------------------------------
// fock-v1 state files: {"format":"fock-v1","trunc":N,"amps":[[re,im],...]}

inline nlohmann::json to_json(const FockVector& state) {
    nlohmann::json amps = nlohmann::json::array();
    for (std::size_t n = 0; n < state.trunc(); ++n) amps.push_back({state[n].real(), state[n].imag()});
    return {{"format", "fock-v1"}, {"trunc", state.trunc()}, {"amps", std::move(amps)}};
}

inline FockVector fock_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "fock-v1")
            throw FormatError("fock state: expected format fock-v1");
        const auto trunc = j.at("trunc").get<std::size_t>();
        const auto& amps = j.at("amps");
        if (!amps.is_array() || amps.size() != trunc)
            throw FormatError("fock state: amps length does not match trunc");
        Vector v(static_cast<Eigen::Index>(trunc));
        for (std::size_t n = 0; n < trunc; ++n) {
            const auto& pair = amps[n];
            if (!pair.is_array() || pair.size() != 2)
                throw FormatError("fock state: each amplitude must be [re, im]");
            v[static_cast<Eigen::Index>(n)] = Complex(pair[0].get<double>(), pair[1].get<double>());
        }
        return FockVector(std::move(v));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("fock state: ") + e.what());
    }
}

} // namespace pasq::fock
