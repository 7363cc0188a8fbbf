#pragma once

#include <cstdint>
#include <vector>

#include "zl/ladder.hpp"

namespace zl {

// Segmented sieve of Eratosthenes with cumulative counts every 2^16 integers.
struct SieveTable {
    static constexpr uint64_t kStride = uint64_t(1) << 16;

    uint64_t limit = 0;
    std::vector<uint8_t> composite; // index 0..limit
    std::vector<uint64_t> cum;      // cum[b] = #primes < b * kStride

    void validate() const;
};

SieveTable build_sieve(uint64_t limit, bool parallel = true);

// Exact number of primes <= floor(t); requires 2 <= t <= limit.
uint64_t pi_count(const SieveTable& sieve, double t);

// (t - phi1(t)) / ((1 - gamma) * pi(t)); near 1 under the calibrated weight.
double check_A_ratio(const LadderTable& table, const SieveTable& sieve, double t);

// Whether the block [2lK, 2l(K+1)] lies strictly below its own reverse start.
bool check_B(const LadderTable& table, double two_l, long long K);

struct CheckCResult {
    double rho = 0.0;   // gap between the block and its reverse image
    double ratio = 0.0; // rho / ((1 - gamma) * pi(2lK))
};

CheckCResult check_C(const LadderTable& table, const SieveTable& sieve, double two_l,
                     long long K);

} // namespace zl
