#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "zl/rs.hpp"
#include "zl/segment.hpp"
#include "zl/weight.hpp"

namespace zl {

struct QuadratureConfig {
    double panel_width = 0.25;
    int gl_order = 8;
    int checkpoint_stride = 64;

    void validate() const; // throws DomainError
};

// Checkpointed antiderivative of Z~^2:
//   phi1(t) = anchor_phi + integral_{anchor_t}^{t} Z~^2(u) du.
// Panels are the fixed grid anchor_t + i*panel_width (last one clipped to
// t_max); checkpoints sit every checkpoint_stride panels plus at t_max.
// Immutable after construction; concurrent readers are safe.
struct LadderTable {
    double anchor_t = 0.0;
    double anchor_phi = 0.0;
    double t_max = 0.0;
    WeightMode mode;
    RSConfig rs;
    QuadratureConfig quad;
    std::vector<double> cp_t;   // cp_t.front() == anchor_t, cp_t.back() == t_max
    std::vector<double> cp_phi; // nondecreasing, cp_phi.front() == anchor_phi

    double phi_min() const { return cp_phi.front(); }
    double phi_max() const { return cp_phi.back(); }
    size_t panel_count() const;
    double panel_left(size_t i) const;
    double panel_right(size_t i) const;
    size_t panel_index(double t) const;

    void validate() const; // structural invariants; throws DomainError
};

LadderTable build_ladder(double anchor_t, double anchor_phi, double t_max,
                         const WeightMode& mode, const QuadratureConfig& quad = {},
                         const RSConfig& rs = {}, bool parallel = true);

// Checkpoint lookup plus in-panel Gauss-Legendre completion.
double phi1(const LadderTable& table, double t);

// T with phi1(T) = x, to within ~8 ulp of x (the contract only promises
// 1e-9 * max(1,|x|)). Bracketing bisection over checkpoints, then safeguarded
// Newton with derivative Z~^2; pure bisection wherever the derivative is
// below 1e-12 (flat spots at zeta zeros).
double invert_ladder(const LadderTable& table, double x);

// Tighter inverse used by the mean-value machinery: after the standard solve,
// walks to the representable T minimizing |phi1(T) - x| (the best of the two
// lattice points straddling the root). The floor is Z~^2(T) * ulp(T) / 2.
double invert_ladder_tight(const LadderTable& table, double x, double target = 1e-11,
                           int max_steps = 256);

// [invert(a), invert(b)]. With strict=true a violated length constraint
// throws ConstraintError; otherwise the caller may warn.
Segment reverse_segment(const LadderTable& table, Segment seg, bool strict = false);

// Quadrature node data for integrals of f(phi1(t)) * Z~^2(t) dt over a
// reverse segment: per-node abscissa, combined weight, phi1, and Z~^2.
// Node count = panels * quad.gl_order.
//
// phi_freq_hint: upper bound on the angular frequency of f in phi units
// (e.g. pi*m/l for cos(pi m x / l)). f(phi1(t)) oscillates at
// phi_freq_hint * Z~^2(t) in t, so panels are subdivided where Z~^2 runs
// large; 0 means f varies on the scale of Z~^2 itself or slower.
struct TransportMesh {
    std::vector<double> t, w, phi, zt2;
    size_t panels = 0;
    int order = 0;
};

TransportMesh build_transport_mesh(const LadderTable& table, Segment seg_reverse,
                                   double phi_freq_hint = 0.0, bool parallel = true);

// Sum of w * f(phi) * zt2 with per-panel partials combined in order.
double mesh_integrate(const TransportMesh& mesh, const std::function<double(double)>& f);

// integral over seg_reverse of f(phi1(t)) Z~^2(t) dt.
double transport_integral(const LadderTable& table, Segment seg_reverse,
                          const std::function<double(double)>& f,
                          double phi_freq_hint = 0.0);

// Recompute every checkpoint increment and compare against the stored one.
struct IntegrityReport {
    bool ok = true;
    double max_abs_deviation = 0.0;
    size_t worst_interval = 0;
};

IntegrityReport verify_table_integrity(const LadderTable& table, double tol = 1e-12,
                                       bool parallel = true);

} // namespace zl
