// dynamics.hpp
// Free evolution inside the well and the time-dependent QFI of the evolved
// probe. Amplitudes f_n are real and fixed by the preparation (no width
// dependence); all width dependence enters through E_n and psi_n.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include <fmt/core.h>

#include "qwell/probe_states.hpp"
#include "qwell/summation.hpp"
#include "qwell/well.hpp"

namespace qwell {

struct EvolvedState {
    ProbeState base;
    double time;
    WellConfig cfg;

    EvolvedState(ProbeState state, double t, WellConfig c) : base(std::move(state)), time(t), cfg(c) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw std::invalid_argument(fmt::format("evolution time must be finite and >= 0, got {}", t));
        }
    }
};

// f_n exp(-i E_n t), n = 1..N_max.
inline std::vector<std::complex<double>> evolved_amplitudes(const EvolvedState& ev) {
    const auto amp = amplitudes(ev.base, ev.cfg);
    std::vector<std::complex<double>> out(amp.coefficients.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double phase = -eigen_energy(static_cast<int>(k) + 1, ev.cfg) * ev.time;
        out[k] = amp.coefficients[k] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return out;
}

struct TimeQfi {
    double value = 0.0;     // H(a, t)
    double residual = 0.0;  // relative change against the 4/5-truncated series
    bool warning = false;   // residual above 1e-5
};

namespace detail {

// Real form of the time-dependent QFI for real amplitudes f (f[k] belongs to
// psi_{k+1}). Off-diagonal pairs are visited once and doubled; the sums are
// correctly rounded so this agrees bit for bit with the full n, m loop.
inline double qfi_time_series(const std::vector<double>& f, const OverlapTable& table, double t) {
    const int n_max = std::min<int>(static_cast<int>(f.size()), table.size());
    const WellConfig cfg(table.width(), std::max(1, table.size()));

    std::vector<double> energy(n_max), denergy(n_max);
    for (int n = 1; n <= n_max; ++n) {
        energy[n - 1] = eigen_energy(n, cfg);
        denergy[n - 1] = d_eigen_energy(n, cfg);
    }

    ExactSum s_de2, s_de, s_sin, s_rest;
    for (int n = 1; n <= n_max; ++n) {
        const double fn = f[n - 1];
        if (fn == 0.0) continue;
        s_de2 += fn * fn * denergy[n - 1] * denergy[n - 1];
        s_de += fn * fn * denergy[n - 1];
        s_rest += fn * fn * table.dpsi_dpsi(n, n);  // cos(0) = 1, sin(0) = 0
        for (int m = n + 1; m <= n_max; ++m) {
            const double fm = f[m - 1];
            if (fm == 0.0) continue;
            const double delta = energy[n - 1] - energy[m - 1];
            const double sn = std::sin(delta * t);
            const double cs = std::cos(delta * t);
            const double ff = fn * fm;
            const double p_mn = table.psi_dpsi(m, n);
            s_sin += 2.0 * (sn * ff * p_mn);
            s_rest += 2.0 * (cs * ff * table.dpsi_dpsi(m, n));
            s_rest += 2.0 * (ff * t * sn * (denergy[m - 1] + denergy[n - 1]) * p_mn);
        }
    }
    const double imag = t * s_de.value() + s_sin.value();
    return 4.0 * (t * t * s_de2.value() - imag * imag + s_rest.value());
}

}  // namespace detail

// H(a, t) for a real, width-independent preparation evolved for time t, with
// the series cut at N_max. Pass a prebuilt table to share it across sweeps.
inline TimeQfi qfi_time(const EvolvedState& ev, std::shared_ptr<const OverlapTable> table = nullptr) {
    const int n_max = ev.cfg.truncation;
    if (!table) table = OverlapTable::shared(ev.cfg);
    if (table->width() != ev.cfg.width || table->size() < n_max) {
        throw std::invalid_argument("overlap table does not match the well configuration");
    }
    const auto amp = amplitudes(ev.base, ev.cfg);

    TimeQfi out;
    out.value = detail::qfi_time_series(amp.coefficients, *table, ev.time);

    const int coarse = std::max(1, (4 * n_max) / 5);
    std::vector<double> head(amp.coefficients.begin(), amp.coefficients.begin() + coarse);
    const double h_coarse = detail::qfi_time_series(head, *table, ev.time);
    out.residual = out.value != 0.0 ? std::abs(out.value - h_coarse) / std::abs(out.value) : 0.0;
    out.warning = out.residual > 1e-5;
    return out;
}

// How the single-index sums of the parabolic series are evaluated.
enum class SingleSums {
    closed_form,  // exact infinite sums: 120 t^2/a^6, -10 t/a^3 and 43/(12 a^2)
    truncated,    // summed over the same odd n <= N_max as the double sums
};

// H(a, t) of the parabolic preparation f(x) = sqrt(30/a^5) x (a - x), whose
// amplitudes are 8 sqrt(15)/(n pi)^3 on odd n and zero on even n.
inline double qfi_parabolic_time(const WellConfig& cfg, double t, SingleSums mode = SingleSums::closed_form) {
    if (!(t >= 0.0)) throw std::invalid_argument("evolution time must be >= 0");
    const double a = cfg.width;
    const double a2 = a * a;
    const double pi2 = kPi * kPi;
    const double pi4 = pi2 * pi2;
    const double pi6 = pi4 * pi2;
    const int n_max = cfg.truncation;

    double quad_term;  // t^2 sum f_n^2 (dE_n)^2
    double lin_term;   // t sum f_n^2 dE_n
    double diag_term;  // sum f_n^2 <d psi_n|d psi_n>
    if (mode == SingleSums::closed_form) {
        quad_term = 120.0 * t * t / (a2 * a2 * a2);
        lin_term = -10.0 * t / (a2 * a);
        diag_term = 43.0 / (12.0 * a2);
    } else {
        ExactSum inv2, inv4, inv6;
        for (int n = 1; n <= n_max; n += 2) {
            const double k2 = static_cast<double>(n) * n;
            inv2 += 1.0 / k2;
            inv4 += 1.0 / (k2 * k2);
            inv6 += 1.0 / (k2 * k2 * k2);
        }
        quad_term = 960.0 * t * t / (pi2 * a2 * a2 * a2) * inv2.value();
        lin_term = -960.0 * t / (pi4 * a2 * a) * inv4.value();
        diag_term = 960.0 / (pi6 * a2) * (pi2 / 3.0 * inv4.value() + 0.25 * inv6.value());
    }

    ExactSum cos_sum, tsin_sum, sin_sum;
    for (int n = 1; n <= n_max; n += 2) {
        const double n2 = static_cast<double>(n) * n;
        for (int m = n + 2; m <= n_max; m += 2) {
            const double m2 = static_cast<double>(m) * m;
            const double diff = m2 - n2;
            const double arg = -diff * pi2 / (2.0 * a2) * t;  // (E_n - E_m) t
            const double sn = std::sin(arg);
            const double cs = std::cos(arg);
            const double weight = (m2 + n2) / (n2 * m2);
            // Each unordered pair stands for (n, m) and (m, n).
            cos_sum += 2.0 * (3840.0 * weight * cs / (a2 * pi6 * diff * diff));
            tsin_sum += 2.0 * (-1920.0 * t * weight * sn / (a2 * a2 * pi4 * diff));
            sin_sum += 2.0 * (1920.0 * sn / (a * pi6 * n2 * m2 * diff));
        }
    }
    const double imag = lin_term + sin_sum.value();
    return 4.0 * (quad_term + diag_term + cos_sum.value() + tsin_sum.value() - imag * imag);
}

// |Q_{N2}(a,t) - Q_{N1}(a,t)| / Q_{N2}(a,t) for the parabolic series.
inline double truncation_residual(const WellConfig& cfg, double t, int n1, int n2) {
    if (n2 < n1) throw std::invalid_argument("truncation_residual needs N2 >= N1");
    if (n1 == n2) return 0.0;
    const double q1 = qfi_parabolic_time(cfg.with_truncation(n1), t);
    const double q2 = qfi_parabolic_time(cfg.with_truncation(n2), t);
    return std::abs(q2 - q1) / std::abs(q2);
}

struct ShortTimeFit {
    double coefficient = 0.0;        // C in Q(a,t) - Q(a,0) ~ C t^2 / a^4
    double exponent = 0.0;           // log-log slope of |Q(a,t) - Q(a,0)|
    double relative_residual = 0.0;  // rms misfit of the C t^2/a^4 model
    bool acceptable = false;         // misfit within 1%
};

// Least-squares fit of the parabolic QSNR excess over t in [t_lo, t_hi]
// (log-spaced samples).
inline ShortTimeFit short_time_coefficient(const WellConfig& cfg, double t_lo = 1e-3, double t_hi = 1e-2,
                                           int samples = 10) {
    if (!(t_lo > 0.0 && t_hi > t_lo) || samples < 2) {
        throw std::invalid_argument("short-time window needs 0 < t_lo < t_hi and >= 2 samples");
    }
    const double a = cfg.width;
    const double a2 = a * a;
    const double q0 = a2 * qfi_parabolic_time(cfg, 0.0);

    std::vector<double> ts(samples), excess(samples);
    for (int k = 0; k < samples; ++k) {
        ts[k] = t_lo * std::pow(t_hi / t_lo, static_cast<double>(k) / (samples - 1));
        excess[k] = a2 * qfi_parabolic_time(cfg, ts[k]) - q0;
    }

    double sxy = 0.0, sxx = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double s = ts[k] * ts[k] / (a2 * a2);
        sxy += s * excess[k];
        sxx += s * s;
    }
    ShortTimeFit fit;
    fit.coefficient = sxy / sxx;

    double miss = 0.0, norm = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double model = fit.coefficient * ts[k] * ts[k] / (a2 * a2);
        miss += (excess[k] - model) * (excess[k] - model);
        norm += excess[k] * excess[k];
    }
    fit.relative_residual = norm > 0.0 ? std::sqrt(miss / norm) : 0.0;

    double mx = 0.0, my = 0.0;
    for (int k = 0; k < samples; ++k) {
        mx += std::log(ts[k]);
        my += std::log(std::abs(excess[k]));
    }
    mx /= samples;
    my /= samples;
    double cov = 0.0, var = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double dx = std::log(ts[k]) - mx;
        cov += dx * (std::log(std::abs(excess[k])) - my);
        var += dx * dx;
    }
    fit.exponent = cov / var;
    fit.acceptable = fit.relative_residual <= 0.01;
    return fit;
}

// K in Q(a,t) ~ K t^2 / a^4 at late times: 4 a^6 Var_f(dE). Equals 80 for the
// parabolic state when the amplitudes are not truncated.
inline double late_time_coefficient(const AmplitudeVector& amp, const WellConfig& cfg) {
    ExactSum m1, m2;
    for (int n = 1; n <= static_cast<int>(amp.coefficients.size()); ++n) {
        const double w = amp(n) * amp(n);
        const double de = d_eigen_energy(n, cfg);
        m1 += w * de;
        m2 += w * de * de;
    }
    const double a6 = std::pow(cfg.width, 6);
    return 4.0 * a6 * (m2.value() - m1.value() * m1.value());
}

}  // namespace qwell
