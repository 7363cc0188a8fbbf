#include "zl/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zl/constants.hpp"
#include "zl/errors.hpp"
#include "zl/gauss_legendre.hpp"
#include "zl/kahan.hpp"

namespace zl {

namespace {

constexpr size_t kMaxPanels = size_t(1) << 26;

double integrate_zt2(const GaussLegendre& rule, double a, double b,
                     const WeightMode& mode, const RSConfig& rs) {
    return gl_integrate(rule, a, b, [&](double t) { return z_tilde_sq(t, mode, rs); });
}

} // namespace

void QuadratureConfig::validate() const {
    if (!(panel_width > 0.0 && panel_width <= 0.5)) {
        throw DomainError("panel_width must lie in (0, 0.5]");
    }
    if (gl_order < 4 || gl_order > 64) throw DomainError("gl_order must lie in [4, 64]");
    if (checkpoint_stride < 1) throw DomainError("checkpoint_stride must be >= 1");
}

size_t LadderTable::panel_count() const {
    const double span = t_max - anchor_t;
    size_t full = size_t(std::floor(span / quad.panel_width));
    if (anchor_t + double(full) * quad.panel_width < t_max) ++full;
    return full;
}

double LadderTable::panel_left(size_t i) const {
    return anchor_t + double(i) * quad.panel_width;
}

double LadderTable::panel_right(size_t i) const {
    const size_t count = panel_count();
    if (i + 1 >= count) return t_max;
    return anchor_t + double(i + 1) * quad.panel_width;
}

size_t LadderTable::panel_index(double t) const {
    const size_t count = panel_count();
    double raw = (t - anchor_t) / quad.panel_width;
    size_t i = raw <= 0.0 ? 0 : std::min(count - 1, size_t(raw));
    while (i + 1 < count && panel_left(i + 1) <= t) ++i;
    while (i > 0 && panel_left(i) > t) --i;
    return i;
}

void LadderTable::validate() const {
    rs.validate();
    quad.validate();
    if (!(anchor_t >= rs.t_min)) throw DomainError("ladder anchor_t below t_min");
    if (!(t_max > anchor_t)) throw DomainError("ladder t_max must exceed anchor_t");
    if (cp_t.size() < 2 || cp_t.size() != cp_phi.size()) {
        throw DomainError("ladder table needs at least two checkpoints");
    }
    if (cp_t.front() != anchor_t || cp_phi.front() != anchor_phi || cp_t.back() != t_max) {
        throw DomainError("ladder checkpoints inconsistent with anchors");
    }
    for (size_t i = 1; i < cp_t.size(); ++i) {
        if (!(cp_t[i] > cp_t[i - 1])) throw DomainError("checkpoint t not increasing");
        if (cp_phi[i] < cp_phi[i - 1]) throw DomainError("checkpoint phi decreasing");
    }
}

LadderTable build_ladder(double anchor_t, double anchor_phi, double t_max,
                         const WeightMode& mode, const QuadratureConfig& quad,
                         const RSConfig& rs, bool parallel) {
    rs.validate();
    quad.validate();
    if (!(anchor_t >= rs.t_min)) throw DomainError("build_ladder: anchor_t below t_min");
    if (!(t_max > anchor_t + 1.0)) throw DomainError("build_ladder: need t_max > anchor_t + 1");

    LadderTable table;
    table.anchor_t = anchor_t;
    table.anchor_phi = anchor_phi;
    table.t_max = t_max;
    table.mode = mode;
    table.rs = rs;
    table.quad = quad;

    const size_t panels = table.panel_count();
    if (panels > kMaxPanels) {
        throw ResourceError("build_ladder: panel count " + std::to_string(panels) +
                            " exceeds cap " + std::to_string(kMaxPanels));
    }

    const GaussLegendre& rule = gl_rule(quad.gl_order);
    std::vector<double> panel_integral(panels);
#pragma omp parallel for schedule(static) if (parallel)
    for (long long i = 0; i < (long long)panels; ++i) {
        panel_integral[i] =
            integrate_zt2(rule, table.panel_left(i), table.panel_right(i), mode, rs);
    }

    table.cp_t.push_back(anchor_t);
    table.cp_phi.push_back(anchor_phi);
    KahanSum acc;
    const size_t stride = size_t(quad.checkpoint_stride);
    for (size_t i = 0; i < panels; ++i) {
        acc.add(panel_integral[i]);
        if ((i + 1) % stride == 0 && i + 1 < panels) {
            table.cp_t.push_back(table.panel_left(i + 1));
            table.cp_phi.push_back(anchor_phi + acc.value());
        }
    }
    table.cp_t.push_back(t_max);
    table.cp_phi.push_back(anchor_phi + acc.value());
    table.validate();
    return table;
}

namespace {

// phi1(t) - cp_phi[j] for t inside the checkpoint interval starting at cp_t[j],
// accumulated over full panels then a partial Gauss-Legendre tail.
double phi_from_checkpoint(const LadderTable& table, size_t j, double t,
                           const GaussLegendre& rule) {
    const size_t panels = table.panel_count();
    KahanSum acc;
    size_t i = table.panel_index(table.cp_t[j]);
    while (i < panels && table.panel_right(i) <= t) {
        acc.add(integrate_zt2(rule, table.panel_left(i), table.panel_right(i), table.mode,
                              table.rs));
        ++i;
    }
    if (i < panels && table.panel_left(i) < t) {
        acc.add(integrate_zt2(rule, table.panel_left(i), t, table.mode, table.rs));
    }
    return acc.value();
}

size_t checkpoint_below(const std::vector<double>& v, double x) {
    auto it = std::upper_bound(v.begin(), v.end(), x);
    size_t j = size_t(it - v.begin());
    return j == 0 ? 0 : j - 1;
}

} // namespace

double phi1(const LadderTable& table, double t) {
    if (!(t >= table.anchor_t && t <= table.t_max)) {
        throw DomainError("phi1: t outside [anchor_t, t_max]");
    }
    const GaussLegendre& rule = gl_rule(table.quad.gl_order);
    // Clamp to the last interval: the final checkpoint is t_max itself, which
    // sits mid-grid rather than on a panel-left boundary.
    const size_t j = std::min(checkpoint_below(table.cp_t, t), table.cp_t.size() - 2);
    return table.cp_phi[j] + phi_from_checkpoint(table, j, t, rule);
}

namespace {

// phi1 restricted to one checkpoint interval, with the interval's panels
// prefix-summed once so every later evaluation costs a single partial panel.
struct LocalPhi {
    const LadderTable& table;
    const GaussLegendre& rule;
    size_t j, i0, i1;
    std::vector<double> prefix;

    LocalPhi(const LadderTable& tbl, size_t interval) : table(tbl), rule(gl_rule(tbl.quad.gl_order)), j(interval) {
        i0 = table.panel_index(table.cp_t[j]);
        const double hi_t = table.cp_t[j + 1];
        i1 = table.panel_index(hi_t == table.t_max ? table.t_max
                                                   : std::nextafter(hi_t, table.anchor_t));
        prefix.assign(i1 - i0 + 1, 0.0);
        KahanSum acc;
        for (size_t i = i0; i < i1; ++i) {
            acc.add(integrate_zt2(rule, table.panel_left(i), table.panel_right(i),
                                  table.mode, table.rs));
            prefix[i - i0 + 1] = acc.value();
        }
    }

    double lo_t() const { return table.cp_t[j]; }
    double hi_t() const { return table.cp_t[j + 1]; }

    double operator()(double t) const {
        size_t i = table.panel_index(t);
        i = std::min(std::max(i, i0), i1);
        return table.cp_phi[j] + prefix[i - i0] +
               integrate_zt2(rule, table.panel_left(i), t, table.mode, table.rs);
    }
};

size_t bracket_interval(const LadderTable& table, double x) {
    size_t j = checkpoint_below(table.cp_phi, x);
    if (j + 1 == table.cp_t.size()) --j;
    return j;
}

double invert_in_interval(const LadderTable& table, const LocalPhi& lp, double x) {
    const double contract_tol = 1e-9 * std::max(1.0, std::fabs(x));
    const double tol = std::max(32.0 * std::numeric_limits<double>::epsilon() *
                                    std::max(1.0, std::fabs(x)),
                                1e-13);

    double lo = lp.lo_t(), hi = lp.hi_t();
    const double phi_lo = table.cp_phi[lp.j], phi_hi = table.cp_phi[lp.j + 1];
    double t = (phi_hi > phi_lo)
                   ? lo + (hi - lo) * ((x - phi_lo) / (phi_hi - phi_lo))
                   : 0.5 * (lo + hi);
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);

    double f = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        f = lp(t) - x;
        if (std::fabs(f) <= tol) return t;
        if (f < 0.0) lo = t; else hi = t;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(t))) {
            break;
        }
        const double deriv = z_tilde_sq(t, table.mode, table.rs);
        double next = (deriv > 1e-12) ? t - f / deriv : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        t = next;
    }
    if (std::fabs(f) <= contract_tol) return t;
    throw ConvergenceError("invert_ladder: tolerance unmet after 200 iterations");
}

} // namespace

double invert_ladder(const LadderTable& table, double x) {
    if (!(x >= table.phi_min() && x <= table.phi_max())) {
        throw RangeError("invert_ladder: x outside the table image");
    }
    const size_t j = bracket_interval(table, x);
    LocalPhi lp(table, j);
    return invert_in_interval(table, lp, x);
}

double invert_ladder_tight(const LadderTable& table, double x, double target, int max_steps) {
    if (!(x >= table.phi_min() && x <= table.phi_max())) {
        throw RangeError("invert_ladder_tight: x outside the table image");
    }
    const size_t j = bracket_interval(table, x);
    LocalPhi lp(table, j);
    double best_t = invert_in_interval(table, lp, x);
    double best_f = lp(best_t) - x;

    // phi1 - x is monotone in t, so the representable minimizer is one of the
    // two lattice points straddling the root; walk toward the sign change.
    double t = best_t, f = best_f;
    for (int k = 0; k < max_steps && std::fabs(best_f) > target; ++k) {
        const double next =
            std::nextafter(t, f > 0.0 ? table.anchor_t : table.t_max);
        if (next <= lp.lo_t() || next >= lp.hi_t()) break;
        const double fn = lp(next) - x;
        if (std::fabs(fn) < std::fabs(best_f)) {
            best_f = fn;
            best_t = next;
        }
        if ((fn > 0.0) != (f > 0.0)) break; // bracketed the root
        t = next;
        f = fn;
    }
    return best_t;
}

Segment reverse_segment(const LadderTable& table, Segment seg, bool strict) {
    if (!(seg.a >= table.phi_min() && seg.b <= table.phi_max())) {
        throw RangeError("reverse_segment: segment outside the table image");
    }
    if (strict && !segment_constraint_ok(seg)) {
        throw ConstraintError("reverse_segment: U exceeds T/ln T");
    }
    return Segment(invert_ladder(table, seg.a), invert_ladder(table, seg.b));
}

TransportMesh build_transport_mesh(const LadderTable& table, Segment seg,
                                   double phi_freq_hint, bool parallel) {
    if (!(seg.a >= table.anchor_t && seg.b <= table.t_max)) {
        throw DomainError("transport mesh: segment outside [anchor_t, t_max]");
    }
    const GaussLegendre& rule = gl_rule(table.quad.gl_order);
    const int order = table.quad.gl_order;

    const size_t i0 = table.panel_index(seg.a);
    size_t i1 = table.panel_index(seg.b);
    if (i1 > i0 && table.panel_left(i1) >= seg.b) --i1;
    const size_t base_panels = i1 - i0 + 1;

    auto base_lo = [&](size_t k) { return std::max(table.panel_left(i0 + k), seg.a); };
    auto base_hi = [&](size_t k) { return std::min(table.panel_right(i0 + k), seg.b); };

    // Refinement per base panel: f(phi1(t)) oscillates at phi_freq_hint * Z~^2,
    // so keep (local frequency) * (piece width) <= 2 with a 3x margin on the
    // probed Z~^2 maximum.
    std::vector<int> refine(base_panels, 1);
    if (phi_freq_hint > 0.0) {
#pragma omp parallel for schedule(static) if (parallel)
        for (long long k = 0; k < (long long)base_panels; ++k) {
            const double a = base_lo(k), b = base_hi(k);
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            double zmax = 0.0;
            for (int q = 0; q < order; ++q) {
                zmax = std::max(zmax,
                                z_tilde_sq(mid + half * rule.node[q], table.mode, table.rs));
            }
            const double pieces = (b - a) * phi_freq_hint * (3.0 * zmax + 0.5) / 2.0;
            refine[k] = std::min(4096, std::max(1, int(std::ceil(pieces))));
        }
    }

    std::vector<size_t> piece_offset(base_panels + 1, 0);
    for (size_t k = 0; k < base_panels; ++k) {
        piece_offset[k + 1] = piece_offset[k] + size_t(refine[k]);
    }
    const size_t panels = piece_offset[base_panels];

    TransportMesh mesh;
    mesh.panels = panels;
    mesh.order = order;
    mesh.t.resize(panels * order);
    mesh.w.resize(panels * order);
    mesh.phi.resize(panels * order);
    mesh.zt2.resize(panels * order);

    auto piece_bounds = [&](size_t k, int r, double& a, double& b) {
        const double lo = base_lo(k), hi = base_hi(k);
        const double width = (hi - lo) / double(refine[k]);
        a = (r == 0) ? lo : lo + width * double(r);
        b = (r == refine[k] - 1) ? hi : lo + width * double(r + 1);
    };

    std::vector<double> piece_integral(panels);
#pragma omp parallel for schedule(static) if (parallel)
    for (long long k = 0; k < (long long)base_panels; ++k) {
        for (int r = 0; r < refine[k]; ++r) {
            double a, b;
            piece_bounds(k, r, a, b);
            piece_integral[piece_offset[k] + r] =
                integrate_zt2(rule, a, b, table.mode, table.rs);
        }
    }

    std::vector<double> bound_phi(panels + 1);
    bound_phi[0] = phi1(table, seg.a);
    {
        KahanSum acc;
        for (size_t p = 0; p < panels; ++p) {
            acc.add(piece_integral[p]);
            bound_phi[p + 1] = bound_phi[0] + acc.value();
        }
    }

#pragma omp parallel for schedule(static) if (parallel)
    for (long long k = 0; k < (long long)base_panels; ++k) {
        for (int r = 0; r < refine[k]; ++r) {
            double a, b;
            piece_bounds(k, r, a, b);
            const size_t p = piece_offset[k] + r;
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (int q = 0; q < order; ++q) {
                const size_t idx = p * order + q;
                const double xq = mid + half * rule.node[q];
                mesh.t[idx] = xq;
                mesh.w[idx] = rule.weight[q] * half;
                mesh.zt2[idx] = z_tilde_sq(xq, table.mode, table.rs);
                mesh.phi[idx] =
                    bound_phi[p] + integrate_zt2(rule, a, xq, table.mode, table.rs);
            }
        }
    }
    return mesh;
}

double mesh_integrate(const TransportMesh& mesh, const std::function<double(double)>& f) {
    std::vector<double> partial(mesh.panels, 0.0);
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < (long long)mesh.panels; ++k) {
        double acc = 0.0;
        for (int q = 0; q < mesh.order; ++q) {
            const size_t idx = size_t(k) * mesh.order + q;
            acc += mesh.w[idx] * f(mesh.phi[idx]) * mesh.zt2[idx];
        }
        partial[k] = acc;
    }
    KahanSum acc;
    for (size_t k = 0; k < mesh.panels; ++k) acc.add(partial[k]);
    return acc.value();
}

double transport_integral(const LadderTable& table, Segment seg_reverse,
                          const std::function<double(double)>& f, double phi_freq_hint) {
    TransportMesh mesh = build_transport_mesh(table, seg_reverse, phi_freq_hint);
    return mesh_integrate(mesh, f);
}

IntegrityReport verify_table_integrity(const LadderTable& table, double tol, bool parallel) {
    table.validate();
    const GaussLegendre& rule = gl_rule(table.quad.gl_order);
    const size_t panels = table.panel_count();
    std::vector<double> panel_integral(panels);
#pragma omp parallel for schedule(static) if (parallel)
    for (long long i = 0; i < (long long)panels; ++i) {
        panel_integral[i] = integrate_zt2(rule, table.panel_left(i), table.panel_right(i),
                                          table.mode, table.rs);
    }

    IntegrityReport report;
    KahanSum acc;
    const size_t stride = size_t(table.quad.checkpoint_stride);
    size_t next_cp = 1;
    auto check = [&](double t_expected, double phi_replayed) {
        if (next_cp >= table.cp_t.size()) return;
        if (table.cp_t[next_cp] != t_expected) return;
        const double dev = std::fabs(table.cp_phi[next_cp] - phi_replayed);
        if (dev > report.max_abs_deviation) {
            report.max_abs_deviation = dev;
            report.worst_interval = next_cp;
        }
        ++next_cp;
    };
    for (size_t i = 0; i < panels; ++i) {
        acc.add(panel_integral[i]);
        if ((i + 1) % stride == 0 && i + 1 < panels) {
            check(table.panel_left(i + 1), table.anchor_phi + acc.value());
        }
    }
    check(table.t_max, table.anchor_phi + acc.value());
    report.ok = report.max_abs_deviation <= tol && next_cp == table.cp_t.size();
    return report;
}

} // namespace zl
