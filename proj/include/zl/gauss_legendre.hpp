#pragma once

#include <vector>

namespace zl {

// Nodes/weights on [-1, 1], symmetric, ascending nodes.
struct GaussLegendre {
    std::vector<double> node;
    std::vector<double> weight;
};

// Cached rule for the given order (4 <= n <= 64). Fetch before entering
// parallel regions; the returned reference is immutable.
const GaussLegendre& gl_rule(int n);

// Fixed-order quadrature of f over [a, b], nodes visited in ascending order.
template <typename F>
double gl_integrate(const GaussLegendre& rule, double a, double b, F&& f) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (size_t i = 0; i < rule.node.size(); ++i) {
        acc += rule.weight[i] * f(mid + half * rule.node[i]);
    }
    return acc * half;
}

} // namespace zl
