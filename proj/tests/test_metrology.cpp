// Static QFI, classical Fisher information, the SLD, and the closed forms.

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qwell/metrology.hpp"

using namespace qwell;

namespace {

// Bures route: 8 (1 - |<f(a)|f(a - d)>|) / d^2 = H + c1 d + c2 d^2 + ...,
// where the odd term comes from the strip [a - d, a] the shrunken state
// leaves empty. Two Richardson levels remove c1 and c2.
double qfi_by_fidelity(const ProbeState& s, double a) {
    auto estimate = [&](double d) {
        const double ov = oracle::integral(
            [&](double x) { return wavefunction(s, WellConfig(a), x) * wavefunction(s, WellConfig(a - d), x); }, 0.0,
            a - d, 1e-15);
        return 8.0 * (1.0 - std::abs(ov)) / (d * d);
    };
    const double h = 1e-3;
    const double e1 = 2.0 * estimate(h / 2.0) - estimate(h);
    const double e2 = 2.0 * estimate(h / 4.0) - estimate(h / 2.0);
    return (4.0 * e2 - e1) / 3.0;
}

}  // namespace

TEST(Metrology, StaticQfiAgainstFidelityOracle) {
    for (const auto& s : {ProbeState::eigen(2), ProbeState::superposition(1, 2, 0.7), ProbeState::polynomial(3)}) {
        const double a = 1.6;
        EXPECT_NEAR(qfi_static(s, WellConfig(a)) / qfi_by_fidelity(s, a), 1.0, 1e-5) << s.label();
    }
}

TEST(Metrology, EigenQsnrClosedForm) {
    for (int n = 1; n <= 6; ++n) {
        const WellConfig cfg(0.8);
        EXPECT_NEAR(0.64 * qfi_static(ProbeState::eigen(n), cfg) / qsnr_eigen(n), 1.0, 1e-10);
    }
    EXPECT_NEAR(qsnr_eigen(1), 14.1594725348, 1e-9);
}

TEST(Metrology, SuperpositionClosedFormAgainstQuadrature) {
    for (auto [n, m, alpha] : {std::tuple{1, 3, 0.1}, {2, 5, -0.4}, {1, 2, 1.1}, {3, 4, 0.02}}) {
        const WellConfig cfg(1.9);
        const double quad = 1.9 * 1.9 * qfi_static(ProbeState::superposition(n, m, alpha), cfg);
        EXPECT_NEAR(qsnr_superposition(n, m, alpha, cfg) / quad, 1.0, 1e-10) << n << "," << m << "," << alpha;
    }
    EXPECT_NEAR(qsnr_superposition(1, 3, 0.1, WellConfig(1.0)), 16.6987458014, 1e-8);
}

TEST(Metrology, GainCoefficientIsTheSlopeAtZero) {
    // d/dalpha of Q_{n,n+d}(alpha)/Q_n at alpha = 0 equals (-1)^d g_nd.
    for (auto [n, d] : {std::pair{1, 1}, {1, 2}, {2, 2}, {3, 4}, {5, 3}}) {
        auto ratio = [n = n, d = d](double alpha) {
            return qsnr_superposition(n, n + d, alpha, WellConfig(1.0)) / qsnr_eigen(n);
        };
        const double sign = (d % 2 == 0) ? 1.0 : -1.0;
        EXPECT_NEAR(oracle::derivative(ratio, 0.0, 1e-4), sign * superposition_gain_coefficient(n, d), 1e-9)
            << n << "," << d;
    }
}

TEST(Metrology, SmallAngleModelIsFirstOrder) {
    const double err_big = gamma_superposition(2, 2, 0.04) - gamma_superposition_smallalpha(2, 2, 0.04);
    const double err_small = gamma_superposition(2, 2, 0.02) - gamma_superposition_smallalpha(2, 2, 0.02);
    EXPECT_NEAR(err_big / err_small, 4.0, 0.1);
}

TEST(Metrology, PolynomialQsnrClosedForm) {
    EXPECT_EQ(qsnr_polynomial(1), 15.0);
    for (int p : {1, 2, 4, 7}) {
        const double q = qfi_static(ProbeState::polynomial(p), WellConfig(1.0));
        EXPECT_NEAR(q / qsnr_polynomial(p), 1.0, 1e-9) << p;
    }
    EXPECT_NEAR(qsnr_polynomial(1000) / 8000.0, 1.0, 2e-3);
}

TEST(Metrology, QsnrDoesNotDependOnWidth) {
    for (const auto& s : {ProbeState::eigen(3), ProbeState::parabolic(), ProbeState::superposition(2, 3, 0.5)}) {
        const double q1 = report(s, WellConfig(1.0)).qsnr;
        for (double a : {0.3, 4.0}) EXPECT_NEAR(report(s, WellConfig(a)).qsnr / q1, 1.0, 1e-10) << s.label();
    }
}

TEST(Metrology, PositionMeasurementIsOptimal) {
    for (const auto& s : {ProbeState::eigen(3), ProbeState::polynomial(2), ProbeState::superposition(1, 2, 0.2)}) {
        const WellConfig cfg(1.3);
        EXPECT_NEAR(fi_position(s, cfg) / qfi_static(s, cfg), 1.0, 1e-8) << s.label();
    }
}

TEST(Metrology, EnergyMeasurementCarriesNoInformation) {
    EXPECT_EQ(fi_energy(ProbeState::eigen(2), WellConfig(1.0)), 0.0);
    EXPECT_EQ(fi_energy(ProbeState::parabolic(), WellConfig(1.0)), 0.0);
    // The polynomial amplitudes are a-independent too; only quadrature noise remains.
    EXPECT_LT(fi_energy(ProbeState::polynomial(3), WellConfig(1.0, 20)), 1e-20);
}

TEST(Metrology, CustomVectorUsesOverlaps) {
    const double c = std::cos(0.3);
    const double s = std::sin(0.3);
    const auto custom = ProbeState::custom({c, 0.0, s});
    const WellConfig cfg(1.0);
    EXPECT_NEAR(qfi_static(custom, cfg), qfi_static(ProbeState::superposition(1, 3, 0.3), cfg), 1e-9);
}

TEST(Metrology, SldReproducesTruncatedQfi) {
    // For a real normalized state L f = 2 df, so <f|L^2|f> = 4 ||df||^2 in the kept basis.
    for (const auto& state : {ProbeState::eigen(1), ProbeState::polynomial(1)}) {
        const WellConfig cfg(1.0, 50);
        const auto sld = sld_matrix(state, cfg);
        const double l2 = (sld.L * sld.state).squaredNorm();
        const double h = qfi_static(state, cfg);
        EXPECT_NEAR(sld.state.dot(sld.L * sld.state), 0.0, 1e-12);
        EXPECT_NEAR((h - l2) / h, sld.tail_loss, 1e-9) << state.label();
        EXPECT_TRUE(sld.warning);
    }
}

TEST(Metrology, SldDerivativeVectorAgainstQuadrature) {
    // derivative(m) = <psi_m|df>, integrated directly in position space.
    for (const auto& state : {ProbeState::eigen(2), ProbeState::superposition(1, 4, 0.3)}) {
        const WellConfig cfg(1.4, 12);
        const auto sld = sld_matrix(state, cfg);
        for (int m = 1; m <= 12; ++m) {
            const double ref = oracle::integral(
                [&](double x) { return eigen_wavefunction(m, cfg, x) * d_wavefunction(state, cfg, x); }, 0.0, 1.4);
            EXPECT_NEAR(sld.derivative(m - 1), ref, 1e-10) << state.label() << " m=" << m;
        }
    }
}

TEST(Metrology, SldTailDecaysLikeInverseTruncation) {
    const auto state = ProbeState::eigen(1);
    const double t50 = sld_matrix(state, WellConfig(1.0, 50)).tail_loss;
    const double t200 = sld_matrix(state, WellConfig(1.0, 200)).tail_loss;
    EXPECT_NEAR(t50 / t200, 4.0, 0.15);
    EXPECT_LT(t50, 0.03);
}

TEST(Metrology, EqualEnergyLevel) {
    // E_{n*} = <H>_p at a = 1.
    for (int p : {1, 3, 10}) {
        const double n = equal_energy_level(p);
        EXPECT_NEAR(n * n * M_PI * M_PI / 2.0, mean_energy(ProbeState::polynomial(p), WellConfig(1.0)), 1e-12);
    }
}

TEST(Metrology, ReportFields) {
    const auto r = report(ProbeState::eigen(1), WellConfig(2.0, 30));
    EXPECT_EQ(r.truncation, 30);
    EXPECT_NEAR(r.qsnr, 4.0 * r.qfi, 1e-12);
    EXPECT_LT(r.residual_estimate, 1e-10);
}
