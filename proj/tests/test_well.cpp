// Eigenpairs of the well, their width derivatives and the overlap tables.

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qwell/well.hpp"

using namespace qwell;

TEST(Well, EnergiesInNaturalUnits) {
    const WellConfig cfg(2.0);
    EXPECT_DOUBLE_EQ(eigen_energy(1, WellConfig(1.0)), M_PI * M_PI / 2.0);
    EXPECT_DOUBLE_EQ(eigen_energy(3, cfg), 9.0 * M_PI * M_PI / 8.0);
    EXPECT_DOUBLE_EQ(eigen_energy(4, cfg) / eigen_energy(1, cfg), 16.0);
}

TEST(Well, EigenfunctionsAreOrthonormal) {
    const WellConfig cfg(1.7);
    for (int m = 1; m <= 6; ++m) {
        for (int n = 1; n <= 6; ++n) {
            const double ip = oracle::integral(
                [&](double x) { return eigen_wavefunction(m, cfg, x) * eigen_wavefunction(n, cfg, x); }, 0.0, 1.7);
            EXPECT_NEAR(ip, m == n ? 1.0 : 0.0, 1e-12) << m << "," << n;
        }
    }
}

TEST(Well, EigenfunctionsVanishAtWalls) {
    const WellConfig cfg(2.3);
    for (int n = 1; n <= 10; ++n) {
        EXPECT_NEAR(eigen_wavefunction(n, cfg, 0.0), 0.0, 1e-15);
        EXPECT_NEAR(eigen_wavefunction(n, cfg, 2.3), 0.0, 1e-14);
    }
}

TEST(Well, WidthDerivativesMatchFiniteDifferences) {
    for (int n : {1, 2, 7}) {
        for (double a : {0.8, 1.0, 2.5}) {
            auto energy = [n](double w) { return eigen_energy(n, WellConfig(w)); };
            EXPECT_NEAR(d_eigen_energy(n, WellConfig(a)), oracle::derivative(energy, a), 1e-8 * n * n / (a * a * a));
            for (double frac : {0.1, 0.33, 0.5, 0.9}) {
                const double x = frac * 0.75;  // inside every perturbed well
                auto psi = [n, x](double w) { return eigen_wavefunction(n, WellConfig(w), x); };
                EXPECT_NEAR(d_eigen_wavefunction(n, WellConfig(a), x), oracle::derivative(psi, a, 1e-4), 1e-7);
            }
        }
    }
}

TEST(Well, OverlapsAgainstQuadrature) {
    for (double a : {0.5, 1.3}) {
        const WellConfig cfg(a);
        for (int m = 1; m <= 6; ++m) {
            for (int n = 1; n <= 6; ++n) {
                const double p = oracle::integral(
                    [&](double x) { return eigen_wavefunction(m, cfg, x) * d_eigen_wavefunction(n, cfg, x); }, 0.0, a);
                const double d = oracle::integral(
                    [&](double x) { return d_eigen_wavefunction(m, cfg, x) * d_eigen_wavefunction(n, cfg, x); }, 0.0,
                    a);
                EXPECT_NEAR(overlap_psi_dpsi(m, n, cfg), p, 1e-10);
                EXPECT_NEAR(overlap_dpsi_dpsi(m, n, cfg), d, 1e-10);
            }
        }
    }
}

TEST(Well, OverlapSymmetriesAreExact) {
    const WellConfig cfg(1.37);
    for (int m = 1; m <= 30; ++m) {
        EXPECT_EQ(overlap_psi_dpsi(m, m, cfg), 0.0);
        for (int n = 1; n <= 30; ++n) {
            EXPECT_EQ(overlap_psi_dpsi(m, n, cfg), -overlap_psi_dpsi(n, m, cfg));
            EXPECT_EQ(overlap_dpsi_dpsi(m, n, cfg), overlap_dpsi_dpsi(n, m, cfg));
        }
    }
}

TEST(Well, OverlapsScaleWithWidth) {
    // <psi|d psi> ~ 1/a and <d psi|d psi> ~ 1/a^2.
    for (int m = 1; m <= 5; ++m) {
        for (int n = 1; n <= 5; ++n) {
            EXPECT_NEAR(overlap_psi_dpsi(m, n, WellConfig(2.0)), overlap_psi_dpsi(m, n, WellConfig(1.0)) / 2.0, 1e-15);
            EXPECT_NEAR(overlap_dpsi_dpsi(m, n, WellConfig(2.0)), overlap_dpsi_dpsi(m, n, WellConfig(1.0)) / 4.0,
                        1e-13);
        }
    }
}

TEST(Well, TableMatchesPointwiseOverlaps) {
    const WellConfig cfg(0.9, 12);
    const auto table = OverlapTable::shared(cfg);
    EXPECT_EQ(table->size(), 12);
    EXPECT_EQ(table->width(), 0.9);
    for (int m = 1; m <= 12; ++m) {
        for (int n = 1; n <= 12; ++n) {
            EXPECT_EQ(table->psi_dpsi(m, n), overlap_psi_dpsi(m, n, cfg));
            EXPECT_EQ(table->dpsi_dpsi(m, n), overlap_dpsi_dpsi(m, n, cfg));
        }
    }
    EXPECT_EQ(table->psi_dpsi_matrix()(2, 4), overlap_psi_dpsi(3, 5, cfg));
}

TEST(Well, InvalidInputsThrow) {
    EXPECT_THROW(WellConfig(0.0), std::invalid_argument);
    EXPECT_THROW(WellConfig(-1.0), std::invalid_argument);
    EXPECT_THROW(WellConfig(NAN), std::invalid_argument);
    EXPECT_THROW(WellConfig(1.0, 0), std::invalid_argument);
    EXPECT_THROW(EigenIndex(0), std::invalid_argument);
    EXPECT_THROW(eigen_wavefunction(1, WellConfig(1.0), 1.5), std::domain_error);
    EXPECT_THROW(d_eigen_wavefunction(1, WellConfig(1.0), -0.1), std::domain_error);
}

TEST(Well, ConfigHelpersKeepTheOtherField) {
    const WellConfig cfg(2.0, 30);
    EXPECT_EQ(cfg.with_width(3.0).truncation, 30);
    EXPECT_EQ(cfg.with_truncation(80).width, 2.0);
}
