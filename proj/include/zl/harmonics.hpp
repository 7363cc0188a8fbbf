#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zl/ladder.hpp"
#include "zl/segment.hpp"

namespace zl {

struct GramSpec {
    double two_l = 20.0;
    long long K = 1;
    int n_max = 8;
    WeightMode mode;

    void validate() const; // throws DomainError
};

// Inner products of {1, cos(pi m phi1/l), sin(pi m phi1/l)} under the Z~^2
// weight against their Kronecker targets (2l for the constant diagonal, l for
// trig diagonals, 0 elsewhere). Row/column order: 1, cos1, sin1, cos2, ...
struct GramReport {
    int n_max = 0;
    double two_l = 0.0;
    std::vector<double> entries; // dim() x dim(), row-major, symmetric
    std::vector<double> target;
    double max_abs_deviation = 0.0;

    size_t dim() const { return size_t(2 * n_max + 1); }
    double entry(size_t i, size_t j) const { return entries[i * dim() + j]; }
    double target_at(size_t i, size_t j) const { return target[i * dim() + j]; }
    static std::string basis_label(size_t i);
};

GramReport gram_matrix(const LadderTable& table, const GramSpec& spec, bool strict = false);

// (integral of cos^2, integral of sin^2) for harmonic m over the same block;
// each should equal l, their sum 2l.
std::pair<double, double> parseval_halves(const LadderTable& table, const GramSpec& spec,
                                          int m, bool strict = false);

// Partition points {(2l(K+r-1))-reverse, r = 1..count+1} dividing the solid of
// revolution of Z~ into equal slabs; slab_integrals[r] is the Z~^2 mass of
// slab r (target 2l, volume pi * integral).
struct QuantizeResult {
    double two_l = 0.0;
    long long K = 0;
    std::vector<double> points;         // count+1, strictly increasing
    std::vector<double> slab_integrals; // count
};

QuantizeResult quantize(const LadderTable& table, double two_l, long long K, int count);

// Point xi inside the open reverse segment where Z~^2 attains the mean level
// |J| / |J-reverse|.
struct MeanValueResult {
    double xi = 0.0;
    double residual = 0.0;
    Segment seg;
    Segment seg_reverse;
};

MeanValueResult mean_value(const LadderTable& table, Segment seg);

// lhs = 1/sqrt(|J-reverse(T',1)|), rhs = |Z(xi)|/sqrt(ln xi).
struct OscillationResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double xi = 0.0;
};

OscillationResult oscillation_check(const LadderTable& table, double t_prime);

// Clone system {|Z~| trig((pi/l) n (phi1 - T))} on [T-reverse, (T+2l)-reverse]
// under the unweighted integral; the |Z~| factors contribute the Z~^2 weight,
// so targets match gram_matrix.
GramReport clone_gram(const LadderTable& table, double T, double two_l, int n_max,
                      bool strict = false);

} // namespace zl
