#include "zl/primes.hpp"

#include <algorithm>
#include <cmath>

#include "zl/constants.hpp"
#include "zl/errors.hpp"

namespace zl {

void SieveTable::validate() const {
    if (limit < 2) throw DomainError("sieve limit must be >= 2");
    if (composite.size() != limit + 1) throw DomainError("sieve bitmap size mismatch");
    for (size_t b = 1; b < cum.size(); ++b) {
        if (cum[b] < cum[b - 1]) throw DomainError("sieve cumulative counts decreasing");
    }
}

SieveTable build_sieve(uint64_t limit, bool parallel) {
    if (limit < 2) throw DomainError("build_sieve: limit must be >= 2");
    if (limit > (uint64_t(1) << 33)) {
        throw ResourceError("build_sieve: limit above supported cap 2^33");
    }

    SieveTable sieve;
    sieve.limit = limit;
    sieve.composite.assign(limit + 1, 0);
    sieve.composite[0] = 1;
    sieve.composite[1] = 1;

    // Base primes up to sqrt(limit), found serially.
    const uint64_t root = uint64_t(std::sqrt(double(limit))) + 1;
    std::vector<uint64_t> base;
    {
        std::vector<uint8_t> small(root + 1, 0);
        for (uint64_t p = 2; p <= root; ++p) {
            if (small[p]) continue;
            base.push_back(p);
            for (uint64_t q = p * p; q <= root; q += p) small[q] = 1;
        }
    }

    const uint64_t stride = SieveTable::kStride;
    const uint64_t blocks = limit / stride + 1;
#pragma omp parallel for schedule(static) if (parallel)
    for (long long b = 0; b < (long long)blocks; ++b) {
        const uint64_t lo = uint64_t(b) * stride;
        const uint64_t hi = std::min(lo + stride - 1, limit);
        for (uint64_t p : base) {
            if (p * p > hi) break;
            uint64_t start = ((lo + p - 1) / p) * p;
            if (start < p * p) start = p * p;
            for (uint64_t q = start; q <= hi; q += p) sieve.composite[q] = 1;
        }
    }

    sieve.cum.assign(blocks + 1, 0);
    for (uint64_t b = 0; b < blocks; ++b) {
        const uint64_t lo = uint64_t(b) * stride;
        const uint64_t hi = std::min(lo + stride - 1, limit);
        uint64_t count = 0;
        for (uint64_t n = std::max<uint64_t>(lo, 2); n <= hi; ++n) {
            count += sieve.composite[n] == 0;
        }
        sieve.cum[b + 1] = sieve.cum[b] + count;
    }
    sieve.validate();
    return sieve;
}

uint64_t pi_count(const SieveTable& sieve, double t) {
    if (!(t >= 2.0) || !(t <= double(sieve.limit))) {
        throw RangeError("pi_count: t outside [2, sieve limit]");
    }
    const uint64_t n = uint64_t(std::floor(t));
    const uint64_t b = n / SieveTable::kStride;
    uint64_t count = sieve.cum[b];
    for (uint64_t k = std::max<uint64_t>(b * SieveTable::kStride, 2); k <= n; ++k) {
        count += sieve.composite[k] == 0;
    }
    return count;
}

double check_A_ratio(const LadderTable& table, const SieveTable& sieve, double t) {
    const double gap = t - phi1(table, t);
    const double denom = kOneMinusGamma * double(pi_count(sieve, t));
    return gap / denom;
}

bool check_B(const LadderTable& table, double two_l, long long K) {
    if (!(two_l > 0.0) || K < 1) throw DomainError("check_B: need two_l > 0 and K >= 1");
    const double reverse_start = invert_ladder(table, two_l * double(K));
    return reverse_start > two_l * double(K + 1);
}

CheckCResult check_C(const LadderTable& table, const SieveTable& sieve, double two_l,
                     long long K) {
    if (!(two_l > 0.0) || K < 1) throw DomainError("check_C: need two_l > 0 and K >= 1");
    const double t_block = two_l * double(K);
    const double reverse_start = invert_ladder(table, t_block);
    CheckCResult result;
    result.rho = reverse_start - two_l * double(K + 1);
    result.ratio = result.rho / (kOneMinusGamma * double(pi_count(sieve, t_block)));
    return result;
}

} // namespace zl
