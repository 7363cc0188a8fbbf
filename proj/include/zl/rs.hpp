#pragma once

#include "zl/weight.hpp"

namespace zl {

// Riemann-Siegel evaluation parameters.
//   t_min            smallest t the asymptotic expansions are trusted at
//   correction_order number of correction terms past the main sum (0..2);
//                    order k leaves an absolute error O(t^{-(2k+3)/4})
struct RSConfig {
    double t_min = 200.0;
    int correction_order = 1;

    void validate() const; // throws DomainError
};

// theta(t) = (t/2) ln(t/2pi) - t/2 - pi/8 + 1/(48t) + 7/(5760 t^3).
// Absolute error < 1e-10 for t >= 200 (next omitted term is 31/(80640 t^5)).
double theta(double t, const RSConfig& cfg = {});

// Hardy Z-function by the Riemann-Siegel formula: main sum over n <= sqrt(t/2pi)
// plus cfg.correction_order correction terms.
double z(double t, const RSConfig& cfg = {});

// w(t) for the given mode, gated at cfg.t_min.
double weight(double t, const WeightMode& mode, const RSConfig& cfg = {});

// Z~^2(t) = Z(t)^2 / w(t). Nonnegative.
double z_tilde_sq(double t, const WeightMode& mode, const RSConfig& cfg = {});

namespace rs_detail {

// cos with in-house 2pi / pi/2 reduction; |x| up to ~2^40 with phase error
// on the order of ulp(x). Vector-friendly, deterministic.
double fast_cos(double x);

// Psi(p) = cos(2pi(p^2 - p - 1/16)) / cos(2pi p) and d^k Psi/dp^k for k <= 6.
// The quotient's singular points p = 1/4, 3/4 are removable; handled by a
// series expansion around them.
void psi_derivatives(double p, double out[7]);

// Correction coefficients C0(p), C1(p), C2(p) (Chebyshev-cached).
void correction_coeffs(double p, double c[3]);

} // namespace rs_detail

} // namespace zl
