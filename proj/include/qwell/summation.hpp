// summation.hpp
// Correctly rounded floating-point summation (Shewchuk partials, as in Python's
// math.fsum). The result depends only on the multiset of addends, never on the
// order they arrive in, so grouped and naive double loops agree bit for bit.

#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace qwell {

class ExactSum {
public:
    ExactSum& operator+=(double x) {
        std::size_t i = 0;
        for (double y : partials_) {
            if (std::abs(x) < std::abs(y)) std::swap(x, y);
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0) partials_[i++] = lo;
            x = hi;
        }
        partials_.resize(i);
        partials_.push_back(x);
        return *this;
    }

    [[nodiscard]] double value() const {
        std::size_t n = partials_.size();
        if (n == 0) return 0.0;
        double hi = partials_[--n];
        double lo = 0.0;
        while (n > 0) {
            const double x = hi;
            const double y = partials_[--n];
            hi = x + y;
            lo = y - (hi - x);
            if (lo != 0.0) break;
        }
        // Round-half-even correction when the remaining partials push past a tie.
        if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
            const double y = lo * 2.0;
            const double x = hi + y;
            if (y == x - hi) hi = x;
        }
        return hi;
    }

private:
    std::vector<double> partials_;
};

}  // namespace qwell
