// probe_states.hpp
// Single-particle preparations used as probes: eigenstates, two-level
// superpositions, the flat polynomial family f_p, the parabolic state, and
// explicit (truncated) amplitude vectors in the energy basis.

#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <fmt/core.h>

#include "qwell/quadrature.hpp"
#include "qwell/well.hpp"

namespace qwell {

namespace states {

struct Eigen {
    EigenIndex n;
};

// cos(alpha)|psi_n> + sin(alpha)|psi_m>; alpha is fixed by the preparation and
// carries no width dependence.
struct Superposition {
    EigenIndex n;
    EigenIndex m;
    double alpha;
};

// f_p(x) = N [a^{2p} - (2x - a)^{2p}]
struct Polynomial {
    int p;
};

// f(x) = sqrt(30/a^5) x (a - x); the same function as Polynomial{1}.
struct Parabolic {};

// Real energy-basis amplitudes; coefficients[k] multiplies psi_{k+1}.
struct Custom {
    std::vector<double> coefficients;
};

}  // namespace states

class ProbeState {
public:
    using Variant = std::variant<states::Eigen, states::Superposition, states::Polynomial,
                                 states::Parabolic, states::Custom>;

    static ProbeState eigen(int n) { return ProbeState(states::Eigen{n}); }

    static ProbeState superposition(int n, int m, double alpha) {
        if (n == m) {
            throw std::invalid_argument(fmt::format("superposition needs n != m, got n = m = {}", n));
        }
        if (!std::isfinite(alpha)) throw std::invalid_argument("superposition angle must be finite");
        return ProbeState(states::Superposition{n, m, alpha});
    }

    static ProbeState polynomial(int p) {
        if (p < 1) throw std::invalid_argument(fmt::format("polynomial order must be >= 1, got {}", p));
        return ProbeState(states::Polynomial{p});
    }

    static ProbeState parabolic() { return ProbeState(states::Parabolic{}); }

    static ProbeState custom(std::vector<double> coefficients) {
        if (coefficients.empty()) throw std::invalid_argument("custom state needs at least one amplitude");
        double norm2 = 0.0;
        for (double c : coefficients) {
            if (!std::isfinite(c)) throw std::invalid_argument("custom amplitudes must be finite");
            norm2 += c * c;
        }
        if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10) {
            throw std::invalid_argument(
                fmt::format("custom amplitudes must have unit norm, got {:.12g}", std::sqrt(norm2)));
        }
        return ProbeState(states::Custom{std::move(coefficients)});
    }

    [[nodiscard]] const Variant& variant() const { return v_; }

    template <class T>
    [[nodiscard]] bool is() const { return std::holds_alternative<T>(v_); }

    template <class T>
    [[nodiscard]] const T& as() const { return std::get<T>(v_); }

    // Short descriptor in the CLI grammar (custom states print their size).
    [[nodiscard]] std::string label() const {
        return std::visit(
            [](const auto& s) -> std::string {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, states::Eigen>) {
                    return fmt::format("eigen:{}", s.n.value());
                } else if constexpr (std::is_same_v<T, states::Superposition>) {
                    return fmt::format("super:{}:{}:{}", s.n.value(), s.m.value(), s.alpha);
                } else if constexpr (std::is_same_v<T, states::Polynomial>) {
                    return fmt::format("poly:{}", s.p);
                } else if constexpr (std::is_same_v<T, states::Parabolic>) {
                    return "parabolic";
                } else {
                    return fmt::format("custom[{}]", s.coefficients.size());
                }
            },
            v_);
    }

private:
    explicit ProbeState(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

struct AmplitudeVector {
    std::vector<double> coefficients;  // f_n for n = 1..N_max
    int truncation = 0;
    double truncation_loss = 0.0;      // 1 - sum f_n^2
    bool warning = false;              // loss above 1e-6

    [[nodiscard]] double operator()(int n) const { return coefficients[n - 1]; }
};

namespace detail {

inline constexpr double kTruncationWarning = 1e-6;

inline double poly_norm(int p) {
    const double pp = p;
    return std::sqrt((1.0 + 6.0 * pp + 8.0 * pp * pp) / (8.0 * pp * pp));
}

inline double ipow(double x, int k) {
    double r = 1.0;
    while (k > 0) {
        if (k & 1) r *= x;
        x *= x;
        k >>= 1;
    }
    return r;
}

// f_p written through the scaling f_p(x; a) = a^{-1/2} f_p(x/a; 1) with
// u = 2x/a - 1, which keeps large p well conditioned.
inline double poly_value(int p, double a, double x) {
    const double u = 2.0 * x / a - 1.0;
    return poly_norm(p) / std::sqrt(a) * (1.0 - ipow(u, 2 * p));
}

inline double poly_dwidth(int p, double a, double x) {
    const double u = 2.0 * x / a - 1.0;
    const double up = ipow(u, 2 * p - 1);
    return poly_norm(p) / std::sqrt(a) * (-(1.0 - up * u) / (2.0 * a) + 4.0 * p * x * up / (a * a));
}

inline double parabolic_amplitude(int n) {
    if (n % 2 == 0) return 0.0;
    const double k = n;
    return 8.0 * std::sqrt(15.0) / (k * k * k * kPi * kPi * kPi);
}

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace detail

inline double wavefunction(const ProbeState& state, const WellConfig& cfg, double x) {
    const double a = cfg.width;
    detail::check_inside(x, a);
    return std::visit(
        detail::Overloaded{
            [&](const states::Eigen& s) { return eigen_wavefunction(s.n, cfg, x); },
            [&](const states::Superposition& s) {
                return std::cos(s.alpha) * eigen_wavefunction(s.n, cfg, x) +
                       std::sin(s.alpha) * eigen_wavefunction(s.m, cfg, x);
            },
            [&](const states::Polynomial& s) { return detail::poly_value(s.p, a, x); },
            [&](const states::Parabolic&) { return std::sqrt(30.0 / std::pow(a, 5)) * x * (a - x); },
            [&](const states::Custom& s) {
                double sum = 0.0;
                for (std::size_t k = 0; k < s.coefficients.size(); ++k) {
                    if (s.coefficients[k] != 0.0) {
                        sum += s.coefficients[k] * eigen_wavefunction(static_cast<int>(k) + 1, cfg, x);
                    }
                }
                return sum;
            },
        },
        state.variant());
}

// Partial derivative of the position amplitude with respect to a at fixed x.
inline double d_wavefunction(const ProbeState& state, const WellConfig& cfg, double x) {
    const double a = cfg.width;
    detail::check_inside(x, a);
    return std::visit(
        detail::Overloaded{
            [&](const states::Eigen& s) { return d_eigen_wavefunction(s.n, cfg, x); },
            [&](const states::Superposition& s) {
                return std::cos(s.alpha) * d_eigen_wavefunction(s.n, cfg, x) +
                       std::sin(s.alpha) * d_eigen_wavefunction(s.m, cfg, x);
            },
            [&](const states::Polynomial& s) { return detail::poly_dwidth(s.p, a, x); },
            [&](const states::Parabolic&) {
                // d/da [sqrt(30) x (a - x) a^{-5/2}]
                return std::sqrt(30.0) * x * (1.0 / std::pow(a, 2.5) - 2.5 * (a - x) / std::pow(a, 3.5));
            },
            [&](const states::Custom& s) {
                double sum = 0.0;
                for (std::size_t k = 0; k < s.coefficients.size(); ++k) {
                    if (s.coefficients[k] != 0.0) {
                        sum += s.coefficients[k] * d_eigen_wavefunction(static_cast<int>(k) + 1, cfg, x);
                    }
                }
                return sum;
            },
        },
        state.variant());
}

// f_n = <psi_n|f> for n <= N_max. Polynomial coefficients come from quadrature.
inline AmplitudeVector amplitudes(const ProbeState& state, const WellConfig& cfg) {
    const int n_max = cfg.truncation;
    AmplitudeVector out;
    out.truncation = n_max;
    out.coefficients.assign(n_max, 0.0);
    auto& c = out.coefficients;

    std::visit(
        detail::Overloaded{
            [&](const states::Eigen& s) {
                if (s.n.value() <= n_max) c[s.n.value() - 1] = 1.0;
            },
            [&](const states::Superposition& s) {
                if (s.n.value() <= n_max) c[s.n.value() - 1] = std::cos(s.alpha);
                if (s.m.value() <= n_max) c[s.m.value() - 1] = std::sin(s.alpha);
            },
            [&](const states::Polynomial& s) {
                QuadratureOptions opts;
                opts.abs_tol = 1e-13;
                for (int n = 1; n <= n_max; ++n) {
                    // f_p is symmetric about a/2, so odd-parity sines integrate to zero.
                    if (n % 2 == 0) continue;
                    c[n - 1] = integrate(
                                   [&](double x) {
                                       return eigen_wavefunction(n, cfg, x) * detail::poly_value(s.p, cfg.width, x);
                                   },
                                   0.0, cfg.width, opts)
                                   .value;
                }
            },
            [&](const states::Parabolic&) {
                for (int n = 1; n <= n_max; ++n) c[n - 1] = detail::parabolic_amplitude(n);
            },
            [&](const states::Custom& s) {
                const auto count = std::min<std::size_t>(s.coefficients.size(), n_max);
                std::copy_n(s.coefficients.begin(), count, c.begin());
            },
        },
        state.variant());

    const double kept = std::inner_product(c.begin(), c.end(), c.begin(), 0.0);
    out.truncation_loss = std::max(0.0, 1.0 - kept);
    out.warning = out.truncation_loss > detail::kTruncationWarning;
    return out;
}

inline double mean_energy(const ProbeState& state, const WellConfig& cfg) {
    const double a2 = cfg.width * cfg.width;
    return std::visit(
        detail::Overloaded{
            [&](const states::Eigen& s) { return eigen_energy(s.n, cfg); },
            [&](const states::Superposition& s) {
                const double c = std::cos(s.alpha);
                const double sn = std::sin(s.alpha);
                return c * c * eigen_energy(s.n, cfg) + sn * sn * eigen_energy(s.m, cfg);
            },
            [&](const states::Polynomial& s) {
                const double p = s.p;
                return (1.0 + 6.0 * p + 8.0 * p * p) / ((4.0 * p - 1.0) * a2);
            },
            [&](const states::Parabolic&) { return 5.0 / a2; },
            [&](const states::Custom& s) {
                double e = 0.0;
                for (std::size_t k = 0; k < s.coefficients.size(); ++k) {
                    e += s.coefficients[k] * s.coefficients[k] * eigen_energy(static_cast<int>(k) + 1, cfg);
                }
                return e;
            },
        },
        state.variant());
}

struct EffectiveLevel {
    double value;   // sqrt(n^2 cos^2 alpha + (n + d)^2 sin^2 alpha)
    int rounded;    // closest integer, ties away from zero
};

// Level whose energy equals the mean energy of cos(alpha)|n> + sin(alpha)|n + d>.
inline EffectiveLevel nbar(EigenIndex n, int d, double alpha) {
    if (d < 1) throw std::invalid_argument(fmt::format("level spacing d must be >= 1, got {}", d));
    const double lo = n.value();
    const double hi = n.value() + d;
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    const double v = std::sqrt(lo * lo * c * c + hi * hi * s * s);
    return {v, static_cast<int>(std::lround(v))};
}

}  // namespace qwell
