// quadrature.hpp
// Adaptive Gauss-Kronrod (7/15) integration on finite intervals, plus a nested
// tensor-product rule for rectangles. Used as the validation oracle for every
// closed form in the library and as the workhorse for the static QFI integrals.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/core.h>

namespace qwell {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_subdivisions = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;      // estimated absolute error
    int intervals = 0;
};

// Thrown when the subdivision budget runs out; carries the best estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(double best, double err, int intervals)
        : std::runtime_error(fmt::format(
              "quadrature did not converge after {} intervals (estimate {:.12g}, error {:.3g})",
              intervals, best, err)),
          best_estimate(best), error_estimate(err) {}

    double best_estimate;
    double error_estimate;
};

namespace detail {

// Kronrod abscissae (positive half, descending) and weights; Gauss weights sit on
// the odd-indexed abscissae.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo, hi, value, error, absvalue;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod15(F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double absval = std::abs(fc) * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        absval += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    kronrod *= half;
    gauss *= half;
    absval *= std::abs(half);
    if (!std::isfinite(kronrod)) {
        throw std::domain_error(
            fmt::format("non-finite integrand on [{:.6g}, {:.6g}]", lo, hi));
    }
    return {lo, hi, kronrod, std::abs(kronrod - gauss), absval};
}

}  // namespace detail

// Integrates f over [lo, hi]. Converged when the summed |K15 - G7| estimates fall
// below max(abs_tol, rel_tol*|I|), or below the floating-point floor
// 50*eps*integral(|f|) when the requested tolerance is finer than double
// precision can resolve.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureOptions& opts = {}) {
    if (!(opts.abs_tol > 0.0) && !(opts.rel_tol > 0.0)) {
        throw std::invalid_argument("quadrature tolerance must be positive");
    }
    if (lo == hi) return {0.0, 0.0, 0};

    std::priority_queue<detail::Segment> heap;
    auto first = detail::gauss_kronrod15(f, lo, hi);
    double total = first.value;
    double total_err = first.error;
    double total_abs = first.absvalue;
    heap.push(first);
    int intervals = 1;

    auto target = [&] {
        constexpr double eps = std::numeric_limits<double>::epsilon();
        return std::max({opts.abs_tol, opts.rel_tol * std::abs(total), 50.0 * eps * total_abs});
    };

    while (total_err > target()) {
        if (intervals >= opts.max_subdivisions) {
            throw QuadratureError(total, total_err, intervals);
        }
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        auto left = detail::gauss_kronrod15(f, worst.lo, mid);
        auto right = detail::gauss_kronrod15(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_abs += left.absvalue + right.absvalue - worst.absvalue;
        heap.push(left);
        heap.push(right);
        ++intervals;

        if (total_err <= target()) {
            // Re-add from scratch so running-sum drift cannot fake convergence.
            total = total_err = total_abs = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                total_abs += copy.top().absvalue;
                copy.pop();
            }
        }
    }
    return {total, total_err, intervals};
}

// Tensor-product rule on [xlo,xhi] x [ylo,yhi]: adaptive outer integral of an
// adaptive inner integral. f is called as f(x, y).
template <class F>
QuadratureResult integrate_2d(F&& f, double xlo, double xhi, double ylo, double yhi,
                              const QuadratureOptions& opts = {}) {
    QuadratureOptions inner = opts;
    inner.abs_tol = opts.abs_tol / (10.0 * std::max(1.0, std::abs(xhi - xlo)));
    inner.rel_tol = opts.rel_tol / 10.0;
    double inner_err = 0.0;
    auto slice = [&](double x) {
        auto r = integrate([&](double y) { return f(x, y); }, ylo, yhi, inner);
        inner_err = std::max(inner_err, r.error);
        return r.value;
    };
    auto outer = integrate(slice, xlo, xhi, opts);
    outer.error += inner_err * std::abs(xhi - xlo);
    return outer;
}

}  // namespace qwell
