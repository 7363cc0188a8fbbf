#include "zl/gauss_legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "zl/constants.hpp"
#include "zl/errors.hpp"

namespace zl {

namespace {

GaussLegendre make_rule(int n) {
    GaussLegendre rule;
    rule.node.assign(n, 0.0);
    rule.weight.assign(n, 0.0);

    // Newton on P_n from the Chebyshev-angle initial guess; roots found for
    // the upper half and mirrored so the rule is exactly symmetric.
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 64; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        // One polishing pass so weights use the final derivative.
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.node[n - 1 - i] = x;
        rule.node[i] = -x;
        rule.weight[n - 1 - i] = w;
        rule.weight[i] = w;
    }
    if (n & 1) rule.node[n / 2] = 0.0;
    return rule;
}

} // namespace

const GaussLegendre& gl_rule(int n) {
    if (n < 4 || n > 64) throw DomainError("Gauss-Legendre order must be in [4, 64]");
    static std::mutex mu;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

} // namespace zl
