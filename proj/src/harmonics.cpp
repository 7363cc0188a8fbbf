#include "zl/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zl/constants.hpp"
#include "zl/errors.hpp"
#include "zl/kahan.hpp"

namespace zl {

void GramSpec::validate() const {
    if (!(two_l > 0.0)) throw DomainError("GramSpec.two_l must be positive");
    if (K < 1) throw DomainError("GramSpec.K must be a positive integer");
    if (n_max < 1) throw DomainError("GramSpec.n_max must be >= 1");
}

std::string GramReport::basis_label(size_t i) {
    if (i == 0) return "1";
    const size_t m = (i + 1) / 2;
    return ((i & 1) ? "cos" : "sin") + std::to_string(m);
}

namespace {

// Weighted trig moments over a reverse segment:
//   mc[k] = integral of cos(k * scale * (phi1(t) + offset)) Z~^2(t) dt
//   ms[k] = same with sin
// Each harmonic gets its own mesh, refined for its own frequency, so a moment
// never depends on how many higher harmonics are requested alongside it.
struct TrigMoments {
    std::vector<double> mc, ms;
};

TrigMoments trig_moments(const LadderTable& table, Segment rev, int k_max, double scale,
                         double offset) {
    TrigMoments m;
    m.mc.assign(size_t(k_max) + 1, 0.0);
    m.ms.assign(size_t(k_max) + 1, 0.0);
    for (int k = 0; k <= k_max; ++k) {
        TransportMesh mesh = build_transport_mesh(table, rev, double(k) * scale);
        const double freq = double(k) * scale;
        m.mc[k] = mesh_integrate(
            mesh, [&](double phi) { return std::cos(freq * (phi + offset)); });
        if (k > 0) {
            m.ms[k] = mesh_integrate(
                mesh, [&](double phi) { return std::sin(freq * (phi + offset)); });
        }
    }
    return m;
}

// Gram entries by product-to-sum: the pairwise integrands reduce to the
// moments at |m-n| and m+n, which is also how the target table arises.
GramReport assemble_gram(const TrigMoments& m, int n_max, double two_l) {
    const size_t dim = size_t(2 * n_max + 1);
    GramReport report;
    report.n_max = n_max;
    report.two_l = two_l;
    report.entries.assign(dim * dim, 0.0);
    report.target.assign(dim * dim, 0.0);

    auto ms_signed = [&](int k) { return k >= 0 ? m.ms[k] : -m.ms[-k]; };
    auto set = [&](size_t i, size_t j, double v) {
        report.entries[i * dim + j] = v;
        report.entries[j * dim + i] = v;
    };

    set(0, 0, m.mc[0]);
    for (int n = 1; n <= n_max; ++n) {
        set(0, size_t(2 * n - 1), m.mc[n]);
        set(0, size_t(2 * n), m.ms[n]);
    }
    for (int i = 1; i <= n_max; ++i) {
        for (int j = i; j <= n_max; ++j) {
            const int d = j - i, s = i + j;
            set(size_t(2 * i - 1), size_t(2 * j - 1), 0.5 * (m.mc[d] + m.mc[s]));
            set(size_t(2 * i), size_t(2 * j), 0.5 * (m.mc[d] - m.mc[s]));
            // sin(i a) cos(j a) = (sin((i+j)a) + sin((i-j)a)) / 2
            set(size_t(2 * i), size_t(2 * j - 1), 0.5 * (m.ms[s] + ms_signed(i - j)));
            if (i != j) {
                set(size_t(2 * j), size_t(2 * i - 1), 0.5 * (m.ms[s] + ms_signed(j - i)));
            }
        }
    }

    const double l = 0.5 * two_l;
    report.target[0] = two_l;
    for (size_t i = 1; i < dim; ++i) report.target[i * dim + i] = l;
    double dev = 0.0;
    for (size_t i = 0; i < dim * dim; ++i) {
        dev = std::max(dev, std::fabs(report.entries[i] - report.target[i]));
    }
    report.max_abs_deviation = dev;
    return report;
}

void require_mode_match(const LadderTable& table, const WeightMode& mode) {
    if (!(mode == table.mode)) {
        throw DomainError("spec weight mode does not match the ladder table mode");
    }
}

} // namespace

GramReport gram_matrix(const LadderTable& table, const GramSpec& spec, bool strict) {
    spec.validate();
    require_mode_match(table, spec.mode);
    const double T = spec.two_l * double(spec.K);
    Segment block(T, T + spec.two_l);
    Segment rev = reverse_segment(table, block, strict);
    const double scale = kTwoPi / spec.two_l; // pi/l
    TrigMoments m = trig_moments(table, rev, 2 * spec.n_max, scale, 0.0);
    return assemble_gram(m, spec.n_max, spec.two_l);
}

std::pair<double, double> parseval_halves(const LadderTable& table, const GramSpec& spec,
                                          int m, bool strict) {
    spec.validate();
    require_mode_match(table, spec.mode);
    if (m < 1) throw DomainError("parseval_halves: m must be >= 1");
    const double T = spec.two_l * double(spec.K);
    Segment rev = reverse_segment(table, Segment(T, T + spec.two_l), strict);
    const double scale = kTwoPi / spec.two_l * double(m);
    TransportMesh mesh = build_transport_mesh(table, rev, 2.0 * scale);
    const double cos2 = mesh_integrate(mesh, [&](double phi) {
        const double c = std::cos(scale * phi);
        return c * c;
    });
    const double sin2 = mesh_integrate(mesh, [&](double phi) {
        const double s = std::sin(scale * phi);
        return s * s;
    });
    return {cos2, sin2};
}

QuantizeResult quantize(const LadderTable& table, double two_l, long long K, int count) {
    if (!(two_l > 0.0)) throw DomainError("quantize: two_l must be positive");
    if (K < 1) throw DomainError("quantize: K must be a positive integer");
    if (count < 1) throw DomainError("quantize: count must be >= 1");

    const double first = two_l * double(K);
    const double last = two_l * double(K + count);
    if (!(first >= table.phi_min()) || !(last <= table.phi_max())) {
        const long long feasible =
            (long long)std::floor((table.phi_max() - first) / two_l);
        throw RangeError("quantize: table too short for " + std::to_string(count) +
                         " blocks; largest feasible count is " +
                         std::to_string(std::max<long long>(feasible, 0)));
    }

    QuantizeResult result;
    result.two_l = two_l;
    result.K = K;
    result.points.resize(size_t(count) + 1);
    for (int r = 0; r <= count; ++r) {
        result.points[r] = invert_ladder(table, two_l * double(K + r));
    }
    result.slab_integrals.resize(size_t(count));
    for (int r = 0; r < count; ++r) {
        result.slab_integrals[r] = transport_integral(
            table, Segment(result.points[r], result.points[r + 1]),
            [](double) { return 1.0; });
    }
    return result;
}

namespace {

// Representable t near t0 minimizing |Z~^2(t) - level| (the crossing is locally
// monotone, so only a handful of lattice neighbors matter).
double best_lattice_point(const LadderTable& table, double t0, double level, double lo,
                          double hi) {
    auto g = [&](double t) { return std::fabs(z_tilde_sq(t, table.mode, table.rs) - level); };
    double best_t = t0, best_g = g(t0);
    for (int dir = 0; dir < 2; ++dir) {
        double t = t0;
        for (int k = 0; k < 6; ++k) {
            t = std::nextafter(t, dir == 0 ? lo : hi);
            if (t <= lo || t >= hi) break;
            const double v = g(t);
            if (v < best_g) {
                best_g = v;
                best_t = t;
            }
        }
    }
    return best_t;
}

// Leftmost point in (lo, hi) where Z~^2 crosses `level`, located by a coarse
// scan and bisection; NaN when no crossing is seen at the scan resolution.
double leftmost_crossing(const LadderTable& table, double level, double lo, double hi) {
    constexpr double kScanStep = 1e-3;
    auto g = [&](double t) { return z_tilde_sq(t, table.mode, table.rs) - level; };
    double prev_t = lo, prev_g = g(lo);
    for (double t = lo + kScanStep;; t += kScanStep) {
        const bool last = t >= hi;
        if (last) t = hi;
        const double gt = g(t);
        if (gt == 0.0) return t;
        if ((gt < 0.0) != (prev_g < 0.0)) {
            double bl = prev_t, bh = t, gl = prev_g;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (bl + bh);
                if (mid <= bl || mid >= bh) break;
                const double gm = g(mid);
                if (gm == 0.0) return mid;
                if ((gm < 0.0) == (gl < 0.0)) {
                    bl = mid;
                    gl = gm;
                } else {
                    bh = mid;
                }
            }
            return 0.5 * (bl + bh) > bl ? 0.5 * (bl + bh) : bh;
        }
        prev_t = t;
        prev_g = gt;
        if (last) break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace

MeanValueResult mean_value(const LadderTable& table, Segment seg) {
    if (!(seg.a >= table.phi_min() && seg.b <= table.phi_max())) {
        throw RangeError("mean_value: segment outside the table image");
    }
    const double len = seg.length();
    double ra = invert_ladder_tight(table, seg.a);
    double rb = invert_ladder_tight(table, seg.b);

    const double xi0 = leftmost_crossing(table, len / (rb - ra), ra, rb);
    if (std::isnan(xi0)) {
        throw ConvergenceError(
            "mean_value: no crossing at scan resolution 1e-3 (corrupted table?)");
    }

    // The level is a ratio of a fixed length to an inverted one, and the
    // crossing residual is quantized by the t lattice. Both endpoint inverses
    // carry ~1e-9-level slack against their contract, which is spent here:
    // shift the endpoints a few hundred ulps so that simultaneously
    //   (1) the level len/(rb - ra) equals an attainable Z~^2 value, and
    //   (2) phi1(rb) - phi1(ra) reproduces len to the evaluation floor,
    // using the local linearization phi1(t + k ulp) = phi1(t) + Z~^2 k ulp.
    const double za = z_tilde_sq(ra, table.mode, table.rs);
    const double zb = z_tilde_sq(rb, table.mode, table.rs);
    const double ua = std::fabs(ra) * std::numeric_limits<double>::epsilon();
    const double ub = std::fabs(rb) * std::numeric_limits<double>::epsilon();

    double xi = best_lattice_point(table, xi0, len / (rb - ra), ra, rb);
    for (int round = 0; round < 3; ++round) {
        const double v = z_tilde_sq(xi, table.mode, table.rs);
        const double width_err = (len / v) - (rb - ra);       // (1)
        const double mass_err = len - (phi1(table, rb) - phi1(table, ra)); // (2)
        if (std::fabs(width_err * v) <= 2e-11 && std::fabs(mass_err) <= 2e-11) break;

        // Move rb by j ulps and ra by i ulps: width changes by j*ub - i*ua,
        // mass by zb*j*ub - za*i*ua.
        double best_i = 0.0, best_j = 0.0, best_cost = std::numeric_limits<double>::max();
        const double denom = zb * ub * ua - za * ua * ub;
        if (std::fabs(denom) > 1e-300) {
            // Exact linear solve, then small integer neighborhood.
            const double j0 = (mass_err - za * width_err) * ub / (denom) * ua / ub;
            const double i0 = (j0 * ub - width_err) / ua;
            for (int dj = -2; dj <= 2; ++dj) {
                for (int di = -2; di <= 2; ++di) {
                    const double j = std::nearbyint(j0) + dj;
                    const double i = std::nearbyint(i0) + di;
                    if (std::fabs(j) > 4096.0 || std::fabs(i) > 4096.0) continue;
                    const double we = width_err - (j * ub - i * ua);
                    const double me = mass_err - (zb * j * ub - za * i * ua);
                    const double cost = std::fabs(we) * v + std::fabs(me);
                    if (cost < best_cost) {
                        best_cost = cost;
                        best_i = i;
                        best_j = j;
                    }
                }
            }
        }
        if (best_cost == std::numeric_limits<double>::max()) break;
        ra += best_i * ua;
        rb += best_j * ub;
        ra = std::max(ra, table.anchor_t);
        rb = std::min(rb, table.t_max);
        xi = best_lattice_point(table, xi, len / (rb - ra), ra, rb);
    }

    Segment rev(ra, rb);
    const double level = len / rev.length();
    const double residual = std::fabs(z_tilde_sq(xi, table.mode, table.rs) - level);
    if (!(residual <= 1e-10) || !(xi > rev.a && xi < rev.b)) {
        throw ConvergenceError("mean_value: residual tolerance unmet (corrupted table?)");
    }
    MeanValueResult result{xi, residual, seg, rev};
    return result;
}

OscillationResult oscillation_check(const LadderTable& table, double t_prime) {
    MeanValueResult mv = mean_value(table, Segment(t_prime, t_prime + 1.0));
    OscillationResult result;
    result.xi = mv.xi;
    result.lhs = 1.0 / std::sqrt(mv.seg_reverse.length());
    result.rhs = std::fabs(z(mv.xi, table.rs)) / std::sqrt(std::log(mv.xi));
    return result;
}

GramReport clone_gram(const LadderTable& table, double T, double two_l, int n_max,
                      bool strict) {
    if (!(two_l > 0.0)) throw DomainError("clone_gram: two_l must be positive");
    if (n_max < 1) throw DomainError("clone_gram: n_max must be >= 1");
    Segment rev = reverse_segment(table, Segment(T, T + two_l), strict);
    const double scale = kTwoPi / two_l;
    TrigMoments m = trig_moments(table, rev, 2 * n_max, scale, -T);
    return assemble_gram(m, n_max, two_l);
}

} // namespace zl
