// metrology.hpp
// Static estimation of the width a: quantum Fisher information, Fisher
// information of position and energy measurements, the SLD in the truncated
// energy basis, and the closed-form QSNR results for the probe families.

#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qwell/probe_states.hpp"
#include "qwell/quadrature.hpp"
#include "qwell/well.hpp"

namespace qwell {

struct MetrologyReport {
    double qfi = 0.0;          // H(a), units 1/length^2
    double fi_position = 0.0;
    double fi_energy = 0.0;
    double qsnr = 0.0;         // a^2 H(a)
    int truncation = 0;
    double residual_estimate = 0.0;
};

namespace detail {

inline QuadratureOptions static_quadrature() {
    QuadratureOptions opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = 1e-12;
    return opts;
}

struct QfiParts {
    double value;
    double error;
};

inline QfiParts qfi_static_parts(const ProbeState& state, const WellConfig& cfg) {
    if (state.is<states::Custom>()) {
        // Exact for a finite amplitude vector: 4 f^T D f, and f^T P f = 0 by antisymmetry.
        const auto& c = state.as<states::Custom>().coefficients;
        const int k = static_cast<int>(c.size());
        double sum = 0.0;
        for (int m = 1; m <= k; ++m) {
            if (c[m - 1] == 0.0) continue;
            for (int n = 1; n <= k; ++n) {
                if (c[n - 1] == 0.0) continue;
                sum += c[m - 1] * c[n - 1] * overlap_dpsi_dpsi(m, n, cfg);
            }
        }
        return {4.0 * sum, 0.0};
    }
    const auto opts = static_quadrature();
    auto dd = integrate(
        [&](double x) {
            const double df = d_wavefunction(state, cfg, x);
            return df * df;
        },
        0.0, cfg.width, opts);
    auto fd = integrate([&](double x) { return wavefunction(state, cfg, x) * d_wavefunction(state, cfg, x); },
                        0.0, cfg.width, opts);
    return {4.0 * (dd.value - fd.value * fd.value), 4.0 * (dd.error + 2.0 * std::abs(fd.value) * fd.error)};
}

// d f_n / da for the first N_max amplitudes. Only the polynomial family is
// computed from its position representation; every other family has constant
// amplitudes by construction.
inline std::vector<double> amplitude_derivatives(const ProbeState& state, const WellConfig& cfg) {
    std::vector<double> out(cfg.truncation, 0.0);
    if (!state.is<states::Polynomial>()) return out;
    QuadratureOptions opts;
    opts.abs_tol = 1e-13;
    for (int n = 1; n <= cfg.truncation; n += 2) {
        out[n - 1] = integrate(
                         [&](double x) {
                             return d_eigen_wavefunction(n, cfg, x) * wavefunction(state, cfg, x) +
                                    eigen_wavefunction(n, cfg, x) * d_wavefunction(state, cfg, x);
                         },
                         0.0, cfg.width, opts)
                         .value;
    }
    return out;
}

}  // namespace detail

// H(a) = 4 [<df|df> - |<f|df>|^2] for a static real state. Closed-form families
// are integrated in position space; custom amplitude vectors use the overlaps.
inline double qfi_static(const ProbeState& state, const WellConfig& cfg) {
    return detail::qfi_static_parts(state, cfg).value;
}

// Fisher information of a position measurement, integral of (dp)^2 / p with
// p(x|a) = f(x)^2. Points where p vanishes contribute nothing.
inline double fi_position(const ProbeState& state, const WellConfig& cfg) {
    auto r = integrate(
        [&](double x) {
            const double f = wavefunction(state, cfg, x);
            const double p = f * f;
            if (p == 0.0) return 0.0;
            const double dp = 2.0 * f * d_wavefunction(state, cfg, x);
            return dp * dp / p;
        },
        0.0, cfg.width, detail::static_quadrature());
    return r.value;
}

// Fisher information of an energy measurement, 4 sum_n (d|f_n|)^2 over the
// outcomes with nonzero probability.
inline double fi_energy(const ProbeState& state, const WellConfig& cfg) {
    const auto amp = amplitudes(state, cfg);
    const auto damp = detail::amplitude_derivatives(state, cfg);
    double sum = 0.0;
    for (int n = 1; n <= cfg.truncation; ++n) {
        const double fn = amp(n);
        if (fn == 0.0) continue;
        const double dabs = std::copysign(1.0, fn) * damp[n - 1];
        sum += dabs * dabs;
    }
    return 4.0 * sum;
}

struct SldMatrix {
    Eigen::MatrixXd L;           // 2(|f><df| + |df><f|), truncated energy basis
    Eigen::VectorXd state;       // f_n
    Eigen::VectorXd derivative;  // <psi_m|df>
    double tail_loss = 0.0;      // 1 - ||df_truncated||^2 / <df|df>
    bool warning = false;
};

inline SldMatrix sld_matrix(const ProbeState& state, const WellConfig& cfg) {
    const int n_max = cfg.truncation;
    const auto amp = amplitudes(state, cfg);
    const auto damp = detail::amplitude_derivatives(state, cfg);

    SldMatrix out;
    out.state = Eigen::Map<const Eigen::VectorXd>(amp.coefficients.data(), n_max);
    out.derivative = Eigen::Map<const Eigen::VectorXd>(damp.data(), n_max);

    // Custom vectors may reach past N_max; their overlaps still feed <psi_m|df>.
    std::vector<double> full = amp.coefficients;
    if (state.is<states::Custom>()) {
        const auto& c = state.as<states::Custom>().coefficients;
        if (c.size() > full.size()) full = c;
    }
    for (int m = 1; m <= n_max; ++m) {
        double s = 0.0;
        for (int n = 1; n <= static_cast<int>(full.size()); ++n) {
            if (full[n - 1] != 0.0) s += overlap_psi_dpsi(m, n, cfg) * full[n - 1];
        }
        out.derivative(m - 1) += s;
    }

    const Eigen::MatrixXd outer = out.state * out.derivative.transpose();
    out.L = 2.0 * (outer + outer.transpose());

    // Exact <df|df> from the unsplit QFI: for real normalized states H = 4<df|df>.
    const double exact = qfi_static(state, cfg) / 4.0;
    const double kept = out.derivative.squaredNorm();
    out.tail_loss = exact > 0.0 ? std::max(0.0, (exact - kept) / exact) : 0.0;
    out.warning = out.tail_loss > 1e-6;
    return out;
}

// ---- closed forms -----------------------------------------------------------

// Q_n = 1 + (4/3) n^2 pi^2, independent of a.
inline double qsnr_eigen(EigenIndex n) {
    const double k = n.value();
    return 1.0 + 4.0 * k * k * kPi * kPi / 3.0;
}

// Q for cos(alpha)|n> + sin(alpha)|m>: the cross term is
// 4 a^2 sin(2 alpha) <d psi_n|d psi_m>, whose a^2 cancels the overlap's 1/a^2.
inline double qsnr_superposition(EigenIndex n, EigenIndex m, double alpha, const WellConfig& cfg) {
    if (n.value() == m.value()) throw std::invalid_argument("superposition needs n != m");
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    const double a2 = cfg.width * cfg.width;
    return c * c * qsnr_eigen(n) + s * s * qsnr_eigen(m) +
           4.0 * a2 * std::sin(2.0 * alpha) * overlap_dpsi_dpsi(n, m, cfg);
}

// Slope g_nd of Q_{n,n+d}(alpha) / Q_n at alpha = 0, up to the sign (-1)^d.
inline double superposition_gain_coefficient(EigenIndex n, int d) {
    if (d < 1) throw std::invalid_argument("level spacing d must be >= 1");
    const double k = n.value();
    const double dd = d;
    return 96.0 * k * (k + dd) * (dd * dd + 2.0 * k * dd + 2.0 * k * k) /
           (dd * dd * (dd + 2.0 * k) * (dd + 2.0 * k) * (3.0 + 4.0 * k * k * kPi * kPi));
}

// First-order model of gamma_nd(alpha) = Q_{n,n+d}(alpha) / Q_[[nbar]] for small alpha.
// Valid only while nbar rounds to n; callers own that check.
inline double gamma_superposition_smallalpha(EigenIndex n, int d, double alpha) {
    const double sign = (d % 2 == 0) ? 1.0 : -1.0;
    return 1.0 + sign * superposition_gain_coefficient(n, d) * alpha;
}

// Exact ratio against the eigenstate closest in energy.
inline double gamma_superposition(EigenIndex n, int d, double alpha) {
    const WellConfig unit(1.0);
    const auto level = nbar(n, d, alpha);
    return qsnr_superposition(n, n.value() + d, alpha, unit) / qsnr_eigen(level.rounded);
}

// Q_p = (1 + 4p)(1 + 8p) / (4p - 1)
inline double qsnr_polynomial(int p) {
    if (p < 1) throw std::invalid_argument("polynomial order must be >= 1");
    const double q = p;
    return (1.0 + 4.0 * q) * (1.0 + 8.0 * q) / (4.0 * q - 1.0);
}

// Real level n* with E_{n*} equal to the mean energy of f_p (a = 1 units).
inline double equal_energy_level(int p) {
    const double q = p;
    const double e = (1.0 + 6.0 * q + 8.0 * q * q) / (4.0 * q - 1.0);
    return std::sqrt(2.0 * e) / kPi;
}

inline MetrologyReport report(const ProbeState& state, const WellConfig& cfg) {
    MetrologyReport r;
    const auto parts = detail::qfi_static_parts(state, cfg);
    r.qfi = parts.value;
    r.fi_position = fi_position(state, cfg);
    r.fi_energy = fi_energy(state, cfg);
    r.qsnr = cfg.width * cfg.width * r.qfi;
    r.truncation = cfg.truncation;
    r.residual_estimate = parts.error / std::max(std::abs(parts.value), 1e-300);
    return r;
}

}  // namespace qwell
