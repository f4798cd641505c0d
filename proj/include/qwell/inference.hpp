// inference.hpp
// Monte Carlo check of the Cramer-Rao chain: draw position outcomes from
// |f(x; a)|^2, estimate a by maximum likelihood, and compare the replica
// variance of the estimate to 1/(M F).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <fmt/core.h>

#include "qwell/metrology.hpp"
#include "qwell/probe_states.hpp"
#include "qwell/quadrature.hpp"
#include "qwell/well.hpp"

namespace qwell {

struct SampleBatch {
    std::vector<double> outcomes;
    double true_width = 1.0;
    ProbeState state;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream per (seed, replica), so replica order does not matter.
inline std::mt19937_64 replica_engine(std::uint64_t seed, std::uint64_t replica) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ replica));
}

// Uniform on the open interval (0, 1) from the top 53 bits; never 0 or 1.
inline double open_unit(std::mt19937_64& engine) {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

// Inverse-CDF sampler for p(x) = |f(x; a)|^2. The cumulative is tabulated on a
// uniform grid and interpolated by monotone cubic Hermite pieces whose slopes
// are the density itself.
class PositionSampler {
public:
    static constexpr int kGridPoints = 4096;

    PositionSampler(const ProbeState& state, const WellConfig& cfg)
        : width_(cfg.width), x_(kGridPoints), cdf_(kGridPoints), slope_(kGridPoints) {
        const double h = width_ / (kGridPoints - 1);
        auto density = [&](double x) {
            const double f = wavefunction(state, cfg, x);
            return f * f;
        };
        for (int i = 0; i < kGridPoints; ++i) {
            x_[i] = (i == kGridPoints - 1) ? width_ : i * h;
            slope_[i] = density(x_[i]);
        }
        cdf_[0] = 0.0;
        for (int i = 1; i < kGridPoints; ++i) {
            cdf_[i] = cdf_[i - 1] + detail::gauss_kronrod15(density, x_[i - 1], x_[i]).value;
        }
        for (int i = 1; i < kGridPoints; ++i) {
            if (!(cdf_[i] >= cdf_[i - 1])) {
                throw std::logic_error(fmt::format("cumulative table not monotone at x = {}", x_[i]));
            }
        }
        if (!(cdf_.back() > 0.0)) throw std::logic_error("cumulative table has zero mass");

        // Fritsch-Carlson limiter keeps every cubic piece monotone.
        for (int i = 0; i + 1 < kGridPoints; ++i) {
            const double secant = (cdf_[i + 1] - cdf_[i]) / (x_[i + 1] - x_[i]);
            if (secant == 0.0) {
                slope_[i] = 0.0;
                slope_[i + 1] = 0.0;
                continue;
            }
            const double alpha = slope_[i] / secant;
            const double beta = slope_[i + 1] / secant;
            const double r2 = alpha * alpha + beta * beta;
            if (r2 > 9.0) {
                const double tau = 3.0 / std::sqrt(r2);
                slope_[i] = tau * alpha * secant;
                slope_[i + 1] = tau * beta * secant;
            }
        }
    }

    [[nodiscard]] double width() const { return width_; }
    [[nodiscard]] double total_mass() const { return cdf_.back(); }

    // Position whose interpolated cumulative equals u * total mass, u in [0, 1].
    [[nodiscard]] double quantile(double u) const {
        const double target = std::clamp(u, 0.0, 1.0) * cdf_.back();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
        int i = static_cast<int>(it - cdf_.begin()) - 1;
        i = std::clamp(i, 0, kGridPoints - 2);
        while (i > 0 && cdf_[i + 1] == cdf_[i]) --i;

        const double h = x_[i + 1] - x_[i];
        const double f0 = cdf_[i];
        const double f1 = cdf_[i + 1];
        const double d0 = slope_[i] * h;
        const double d1 = slope_[i + 1] * h;
        if (f1 == f0) return x_[i];

        auto hermite = [&](double s) {
            const double s2 = s * s;
            const double s3 = s2 * s;
            return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * d1;
        };
        auto hermite_ds = [&](double s) {
            const double s2 = s * s;
            return (6 * s2 - 6 * s) * f0 + (3 * s2 - 4 * s + 1) * d0 + (-6 * s2 + 6 * s) * f1 + (3 * s2 - 2 * s) * d1;
        };

        // Safeguarded Newton on the monotone piece.
        double lo = 0.0, hi = 1.0;
        double s = (target - f0) / (f1 - f0);
        for (int iter = 0; iter < 100; ++iter) {
            const double g = hermite(s) - target;
            if (g > 0.0) hi = s; else lo = s;
            const double dg = hermite_ds(s);
            double next = (dg > 0.0) ? s - g / dg : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - s) <= 1e-15 || hi - lo <= 1e-15) {
                s = next;
                break;
            }
            s = next;
        }
        return std::clamp(x_[i] + s * h, 0.0, width_);
    }

    [[nodiscard]] std::vector<double> draw(int count, std::mt19937_64& engine) const {
        std::vector<double> out(count);
        for (auto& x : out) x = quantile(detail::open_unit(engine));
        return out;
    }

private:
    double width_;
    std::vector<double> x_;
    std::vector<double> cdf_;
    std::vector<double> slope_;
};

// M independent position outcomes from the state prepared in a well of width
// cfg.width. Deterministic in seed.
inline SampleBatch sample_positions(const ProbeState& state, const WellConfig& cfg, int count,
                                    std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument(fmt::format("sample size must be >= 1, got {}", count));
    const PositionSampler sampler(state, cfg);
    auto engine = detail::replica_engine(seed, 0);
    return {sampler.draw(count, engine), cfg.width, state, seed};
}

// sum_k log |f(x_k; candidate)|^2, or -inf when an outcome lies outside the
// candidate well.
inline double log_likelihood(const SampleBatch& batch, double candidate_width) {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    if (!(candidate_width > 0.0)) return kNegInf;
    const WellConfig cfg(candidate_width, 1);
    double sum = 0.0;
    for (double x : batch.outcomes) {
        if (x > candidate_width || x < 0.0) return kNegInf;
        const double f = wavefunction(batch.state, cfg, x);
        sum += std::log(f * f);
    }
    return sum;
}

struct MleResult {
    double estimate = 0.0;
    double log_likelihood = 0.0;
    bool at_boundary = false;  // best grid candidate sat at search_hi
};

// argmax of the log-likelihood over [max(outcomes), search_hi]: a coarse scan
// locates the peak, golden-section search refines it to 1e-8 relative.
inline MleResult mle_estimate(const SampleBatch& batch, double search_lo, double search_hi) {
    if (batch.outcomes.empty()) throw std::invalid_argument("cannot estimate from an empty batch");
    const double x_max = *std::max_element(batch.outcomes.begin(), batch.outcomes.end());
    const double lo = std::max(search_lo, x_max);
    if (!(search_hi > lo)) {
        throw std::invalid_argument(
            fmt::format("search interval [{}, {}] lies below the largest outcome {}", search_lo, search_hi, x_max));
    }

    constexpr int kScan = 128;
    std::vector<double> grid(kScan + 1), ll(kScan + 1);
    int best = -1;
    for (int k = 0; k <= kScan; ++k) {
        grid[k] = lo + (search_hi - lo) * k / kScan;
        ll[k] = log_likelihood(batch, grid[k]);
        if (std::isfinite(ll[k]) && (best < 0 || ll[k] > ll[best])) best = k;
    }
    if (best < 0) throw std::runtime_error("likelihood is -inf over the whole search interval");

    double left = grid[std::max(best - 1, 0)];
    double right = grid[std::min(best + 1, kScan)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double tol = 1e-8 * grid[best];
    double c = right - inv_phi * (right - left);
    double d = left + inv_phi * (right - left);
    double fc = log_likelihood(batch, c);
    double fd = log_likelihood(batch, d);
    while (right - left > tol) {
        if (fc >= fd) {
            right = d;
            d = c;
            fd = fc;
            c = right - inv_phi * (right - left);
            fc = log_likelihood(batch, c);
        } else {
            left = c;
            c = d;
            fc = fd;
            d = left + inv_phi * (right - left);
            fd = log_likelihood(batch, d);
        }
    }

    MleResult out;
    out.estimate = 0.5 * (left + right);
    out.log_likelihood = log_likelihood(batch, out.estimate);
    if (ll[best] > out.log_likelihood) {
        out.estimate = grid[best];
        out.log_likelihood = ll[best];
    }
    out.at_boundary = (best == kScan);
    return out;
}

struct EstimationResult {
    std::vector<double> estimates;  // one per replica
    double mean = 0.0;
    double variance = 0.0;          // unbiased replica variance
    double variance_stderr = 0.0;   // Var * sqrt(2 / (R - 1))
    double fisher = 0.0;            // F(a) of the position measurement
    double qfi = 0.0;               // H(a)
    double crlb_ratio = 0.0;        // M Var F
    double qfi_ratio = 0.0;         // M Var H
    int boundary_hits = 0;
};

// Runs `replicas` independent sample-then-estimate cycles at the true width
// cfg.width. Replica r draws from its own (seed, r) stream.
inline EstimationResult crlb_experiment(const ProbeState& state, const WellConfig& cfg, int count, int replicas,
                                        std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample size must be >= 1");
    if (replicas < 2) throw std::invalid_argument("need at least two replicas for a variance");
    const PositionSampler sampler(state, cfg);
    const double a = cfg.width;

    EstimationResult out;
    out.estimates.resize(replicas);
    for (int r = 0; r < replicas; ++r) {
        auto engine = detail::replica_engine(seed, static_cast<std::uint64_t>(r));
        SampleBatch batch{sampler.draw(count, engine), a, state, seed};
        const auto mle = mle_estimate(batch, 0.0, 1.5 * a);
        out.estimates[r] = mle.estimate;
        if (mle.at_boundary) ++out.boundary_hits;
    }

    double sum = 0.0;
    for (double e : out.estimates) sum += e;
    out.mean = sum / replicas;
    double ss = 0.0;
    for (double e : out.estimates) ss += (e - out.mean) * (e - out.mean);
    out.variance = ss / (replicas - 1);
    out.variance_stderr = out.variance * std::sqrt(2.0 / (replicas - 1));

    out.fisher = fi_position(state, cfg);
    out.qfi = qfi_static(state, cfg);
    out.crlb_ratio = count * out.variance * out.fisher;
    out.qfi_ratio = count * out.variance * out.qfi;
    return out;
}

}  // namespace qwell
