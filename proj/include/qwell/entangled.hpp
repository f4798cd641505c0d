// entangled.hpp
// QSNR of multi-particle probes (distinguishable, non-interacting particles):
// symmetrized two-particle eigenstate and polynomial states, the three-particle
// W state, and N-particle GHZ states built from a permutation of eigenindices.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <fmt/core.h>

#include "qwell/metrology.hpp"
#include "qwell/well.hpp"

namespace qwell {

enum class PairFamily { eigen, polynomial };

// Two particles in (phi_i(x1) phi_j(x2) + phi_i(x2) phi_j(x1)) / sqrt(2).
struct SymmetrizedPair {
    PairFamily family;
    int first;
    int second;

    SymmetrizedPair(PairFamily fam, int i, int j) : family(fam), first(i), second(j) {
        if (i < 1 || j < 1) throw std::invalid_argument("pair indices must be >= 1");
        if (i == j) {
            throw std::invalid_argument(fmt::format("symmetrized pair needs distinct indices, got {} twice", i));
        }
    }
};

// 32 n1^2 n2^2 / (n1^2 - n2^2)^2
inline double pair_bonus_eigen(EigenIndex n1, EigenIndex n2) {
    if (n1.value() == n2.value()) throw std::invalid_argument("entangled eigen pair needs n1 != n2");
    const double a = n1.value();
    const double b = n2.value();
    const double diff = a * a - b * b;
    return 32.0 * a * a * b * b / (diff * diff);
}

inline double pair_bonus_polynomial(int p1, int p2) {
    if (p1 < 1 || p2 < 1) throw std::invalid_argument("polynomial orders must be >= 1");
    if (p1 == p2) throw std::invalid_argument("entangled polynomial pair needs p1 != p2");
    const double a = p1;
    const double b = p2;
    return (1.0 + 4.0 * a) * (1.0 + 4.0 * b) * (1.0 + 4.0 * a + 4.0 * b) /
           (2.0 * (4.0 * a * a + 4.0 * b * b + 8.0 * a * b - 1.0));
}

inline double qsnr_two_eigen(EigenIndex n1, EigenIndex n2) {
    return qsnr_eigen(n1) + qsnr_eigen(n2) + pair_bonus_eigen(n1, n2);
}

inline double qsnr_two_polynomial(int p1, int p2) {
    return qsnr_polynomial(p1) + qsnr_polynomial(p2) + pair_bonus_polynomial(p1, p2);
}

inline double qsnr_two(const SymmetrizedPair& pair) {
    return pair.family == PairFamily::eigen ? qsnr_two_eigen(pair.first, pair.second)
                                            : qsnr_two_polynomial(pair.first, pair.second);
}

// Single-particle sum the pair is compared against.
inline double qsnr_separate(const SymmetrizedPair& pair) {
    return pair.family == PairFamily::eigen ? qsnr_eigen(pair.first) + qsnr_eigen(pair.second)
                                            : qsnr_polynomial(pair.first) + qsnr_polynomial(pair.second);
}

// W-like state over (n1, n1, n2): 2 Q_n1 + Q_n2 + 64 n1^2 n2^2 / (n1^2 - n2^2)^2.
inline double qsnr_w3(EigenIndex n1, EigenIndex n2) {
    return 2.0 * qsnr_eigen(n1) + qsnr_eigen(n2) + 2.0 * pair_bonus_eigen(n1, n2);
}

// (prod psi_{n_i}(x_i) + prod psi_{m_i}(x_i)) / sqrt(2) with m a permutation of
// n. Entries of n must be distinct so the two branches are orthogonal unless
// m == n, in which case the state is the plain product.
class GhzSpec {
public:
    GhzSpec(std::vector<int> n, std::vector<int> m) : n_(std::move(n)), m_(std::move(m)) {
        if (n_.size() < 2) throw std::invalid_argument("GHZ state needs at least two particles");
        if (n_.size() != m_.size()) throw std::invalid_argument("GHZ branches must have the same length");
        for (int k : n_) {
            if (k < 1) throw std::invalid_argument("GHZ eigenindices must be >= 1");
        }
        auto sn = n_;
        auto sm = m_;
        std::sort(sn.begin(), sn.end());
        std::sort(sm.begin(), sm.end());
        if (std::adjacent_find(sn.begin(), sn.end()) != sn.end()) {
            throw std::invalid_argument("GHZ eigenindices must be distinct");
        }
        if (sn != sm) throw std::invalid_argument("second GHZ branch must be a permutation of the first");
    }

    [[nodiscard]] const std::vector<int>& n() const { return n_; }
    [[nodiscard]] const std::vector<int>& m() const { return m_; }
    [[nodiscard]] std::size_t size() const { return n_.size(); }

private:
    std::vector<int> n_;
    std::vector<int> m_;
};

// Entanglement bonus of a GHZ state:
// 16 sum_{k != j} d(m_k, n_j) d(m_j, n_k) (n_k n_j / (n_k^2 - n_j^2))^2 prod_{l != k,j} d(n_l, m_l).
// Only a single transposition of the branches leaves a nonzero term.
inline double ghz_bonus(const GhzSpec& spec) {
    const auto& n = spec.n();
    const auto& m = spec.m();
    const std::size_t count = spec.size();
    double bonus = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t j = 0; j < count; ++j) {
            if (k == j || n[k] == n[j]) continue;
            if (m[k] != n[j] || m[j] != n[k]) continue;
            bool rest_fixed = true;
            for (std::size_t l = 0; l < count && rest_fixed; ++l) {
                if (l != k && l != j && n[l] != m[l]) rest_fixed = false;
            }
            if (!rest_fixed) continue;
            const double a = n[k];
            const double b = n[j];
            const double r = a * b / (a * a - b * b);
            bonus += 16.0 * r * r;
        }
    }
    return bonus;
}

inline double qsnr_ghz(const GhzSpec& spec) {
    double sum = 0.0;
    for (int k : spec.n()) sum += qsnr_eigen(k);
    return sum + ghz_bonus(spec);
}

// gamma_{ij} = Q^(2)_{ij} / (Q_i + Q_j) over lo..hi; the diagonal is NaN.
struct GainGrid {
    PairFamily family;
    int lo;
    int hi;
    Eigen::MatrixXd gamma;

    [[nodiscard]] double operator()(int i, int j) const { return gamma(i - lo, j - lo); }
};

inline GainGrid entanglement_gain_grid(PairFamily family, int lo, int hi) {
    if (lo < 1 || hi <= lo) throw std::invalid_argument("gain grid needs 1 <= lo < hi");
    const int size = hi - lo + 1;
    GainGrid grid{family, lo, hi, Eigen::MatrixXd::Constant(size, size, std::numeric_limits<double>::quiet_NaN())};
    for (int i = lo; i <= hi; ++i) {
        for (int j = lo; j <= hi; ++j) {
            if (i == j) continue;
            const SymmetrizedPair pair(family, i, j);
            grid.gamma(i - lo, j - lo) = qsnr_two(pair) / qsnr_separate(pair);
        }
    }
    return grid;
}

}  // namespace qwell
