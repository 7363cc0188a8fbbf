#pragma once

#include <cmath>

namespace zl {

// Neumaier-compensated accumulator. Long checkpoint prefix sums must not lose
// the low bits that the inversion tolerance depends on.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

} // namespace zl
