// well.hpp
// Infinite square well on [0, a] in natural units (hbar = m = 1): eigenpairs,
// their derivatives with respect to the width a, and the two overlap families
// <psi_m|d psi_n> and <d psi_m|d psi_n> everything else is assembled from.

#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/core.h>

namespace qwell {

inline constexpr double kPi = std::numbers::pi;

struct WellConfig {
    double width = 1.0;
    int truncation = 50;

    WellConfig() = default;
    WellConfig(double a, int n_max = 50) : width(a), truncation(n_max) {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw std::invalid_argument(fmt::format("well width must be positive, got {}", a));
        }
        if (n_max < 1) {
            throw std::invalid_argument(fmt::format("truncation must be >= 1, got {}", n_max));
        }
    }

    [[nodiscard]] WellConfig with_width(double a) const { return {a, truncation}; }
    [[nodiscard]] WellConfig with_truncation(int n) const { return {width, n}; }
};

// Quantum number of a bound state; n = 0 is not a state (psi_0 vanishes).
class EigenIndex {
public:
    EigenIndex(int n) : n_(n) {  // NOLINT: implicit on purpose
        if (n < 1) throw std::invalid_argument(fmt::format("eigen index must be >= 1, got {}", n));
    }
    [[nodiscard]] constexpr int value() const { return n_; }
    constexpr operator int() const { return n_; }  // NOLINT

private:
    int n_;
};

namespace detail {

inline void check_inside(double x, double a) {
    if (!(x >= 0.0 && x <= a)) {
        throw std::domain_error(fmt::format("position {} outside the well [0, {}]", x, a));
    }
}

inline double parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace detail

inline double eigen_energy(EigenIndex n, const WellConfig& cfg) {
    const double k = n.value();
    return k * k * kPi * kPi / (2.0 * cfg.width * cfg.width);
}

inline double eigen_wavefunction(EigenIndex n, const WellConfig& cfg, double x) {
    const double a = cfg.width;
    detail::check_inside(x, a);
    return std::sqrt(2.0 / a) * std::sin(n.value() * kPi * x / a);
}

// dE_n/da = -n^2 pi^2 / a^3
inline double d_eigen_energy(EigenIndex n, const WellConfig& cfg) {
    const double k = n.value();
    const double a = cfg.width;
    return -k * k * kPi * kPi / (a * a * a);
}

// d psi_n / da at fixed x.
inline double d_eigen_wavefunction(EigenIndex n, const WellConfig& cfg, double x) {
    const double a = cfg.width;
    detail::check_inside(x, a);
    const double phase = n.value() * kPi * x / a;
    return -0.5 * std::sqrt(2.0 / (a * a * a)) * (std::sin(phase) + 2.0 * phase * std::cos(phase));
}

// <psi_m | d psi_n> = (2/a) (-1)^{m+n} m n / (m^2 - n^2), antisymmetric with zero diagonal.
inline double overlap_psi_dpsi(EigenIndex m, EigenIndex n, const WellConfig& cfg) {
    const int mi = m.value();
    const int ni = n.value();
    if (mi == ni) return 0.0;
    const double mm = mi;
    const double nn = ni;
    // Integer parts are exact, so swapping m and n flips only the sign bit.
    return (2.0 / cfg.width) * detail::parity(mi + ni) * ((mm * nn) / (mm * mm - nn * nn));
}

// <d psi_m | d psi_n>, symmetric.
inline double overlap_dpsi_dpsi(EigenIndex m, EigenIndex n, const WellConfig& cfg) {
    const double a2 = cfg.width * cfg.width;
    const int mi = m.value();
    const int ni = n.value();
    const double nn = ni;
    if (mi == ni) return (nn * nn * kPi * kPi / 3.0 + 0.25) / a2;
    const double mm = mi;
    const double diff = mm * mm - nn * nn;
    return detail::parity(mi + ni) * ((4.0 * nn * mm * (mm * mm + nn * nn)) / (diff * diff)) / a2;
}

// Both overlap families for 1 <= m, n <= N_max at one width. Immutable once
// built; share it across sweeps through OverlapTable::shared.
class OverlapTable {
public:
    explicit OverlapTable(const WellConfig& cfg)
        : width_(cfg.width),
          psi_dpsi_(cfg.truncation, cfg.truncation),
          dpsi_dpsi_(cfg.truncation, cfg.truncation) {
        const int n_max = cfg.truncation;
        for (int m = 1; m <= n_max; ++m) {
            for (int n = 1; n <= n_max; ++n) {
                psi_dpsi_(m - 1, n - 1) = overlap_psi_dpsi(m, n, cfg);
                dpsi_dpsi_(m - 1, n - 1) = overlap_dpsi_dpsi(m, n, cfg);
            }
        }
    }

    static std::shared_ptr<const OverlapTable> shared(const WellConfig& cfg) {
        return std::make_shared<const OverlapTable>(cfg);
    }

    [[nodiscard]] double width() const { return width_; }
    [[nodiscard]] int size() const { return static_cast<int>(psi_dpsi_.rows()); }

    // 1-based accessors matching quantum numbers.
    [[nodiscard]] double psi_dpsi(int m, int n) const { return psi_dpsi_(m - 1, n - 1); }
    [[nodiscard]] double dpsi_dpsi(int m, int n) const { return dpsi_dpsi_(m - 1, n - 1); }

    // Row m-1, column n-1 holds the (m, n) overlap.
    [[nodiscard]] const Eigen::MatrixXd& psi_dpsi_matrix() const { return psi_dpsi_; }
    [[nodiscard]] const Eigen::MatrixXd& dpsi_dpsi_matrix() const { return dpsi_dpsi_; }

private:
    double width_;
    Eigen::MatrixXd psi_dpsi_;
    Eigen::MatrixXd dpsi_dpsi_;
};

}  // namespace qwell
