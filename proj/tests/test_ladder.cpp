#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "zl/constants.hpp"
#include "zl/csv.hpp"
#include "zl/errors.hpp"
#include "zl/ladder.hpp"

using zl::LadderTable;
using zl::QuadratureConfig;
using zl::RSConfig;
using zl::Segment;
using zl::WeightMode;

namespace {

double uniform(std::mt19937_64& rng, double a, double b) {
    const double u = double(rng() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
}

const RSConfig kRs{200.0, 1};

// Shared table over [1e5, 1.1e5], Moser weight, anchored per the default
// convention (anchor_phi = anchor_t - (1-gamma) * pi(anchor_t), pi(1e5) = 9592).
const LadderTable& moser_table() {
    static const LadderTable table = [] {
        const double anchor_t = 1e5;
        const double anchor_phi = anchor_t - zl::kOneMinusGamma * 9592.0;
        return build_ladder(anchor_t, anchor_phi, 1.1e5, WeightMode::moser(), {}, kRs);
    }();
    return table;
}

double zt2(double t) { return zl::z_tilde_sq(t, moser_table().mode, kRs); }

} // namespace

TEST_CASE("build validation and resource cap") {
    QuadratureConfig bad = {};
    bad.panel_width = 0.75;
    CHECK_THROWS_AS(bad.validate(), zl::DomainError);
    bad = {};
    bad.gl_order = 2;
    CHECK_THROWS_AS(bad.validate(), zl::DomainError);
    bad = {};
    bad.checkpoint_stride = 0;
    CHECK_THROWS_AS(bad.validate(), zl::DomainError);

    CHECK_THROWS_AS(build_ladder(100.0, 100.0, 200.0, WeightMode::moser(), {}, kRs),
                    zl::DomainError); // anchor below t_min
    CHECK_THROWS_AS(build_ladder(1e5, 1e5, 1e5 + 0.5, WeightMode::moser(), {}, kRs),
                    zl::DomainError); // t_max too close

    QuadratureConfig tiny = {};
    tiny.panel_width = 1e-4;
    CHECK_THROWS_AS(build_ladder(1e5, 1e5, 1e5 + 7000.0, WeightMode::moser(), tiny, kRs),
                    zl::ResourceError);
}

TEST_CASE("anchor evaluates exactly and phi1 is monotone") {
    const LadderTable& table = moser_table();
    CHECK(phi1(table, table.anchor_t) == table.anchor_phi);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 60; ++i) {
        const double t1 = uniform(rng, table.anchor_t, table.t_max);
        const double t2 = uniform(rng, t1, table.t_max);
        CHECK(phi1(table, t2) >= phi1(table, t1));
    }
    CHECK_THROWS_AS(phi1(table, table.anchor_t - 1.0), zl::DomainError);
    CHECK_THROWS_AS(phi1(table, table.t_max + 1.0), zl::DomainError);
}

TEST_CASE("total rise matches the smoothed second-moment oracle") {
    const LadderTable& table = moser_table();
    const double rise = phi1(table, table.t_max) - table.anchor_phi;
    const double expected =
        oracle::hl_mean_ztilde_sq(table.anchor_t, table.t_max, table.mode) *
        (table.t_max - table.anchor_t);
    // Fluctuations of the second moment contribute well under 1% here.
    CHECK(std::fabs(rise - expected) < 0.01 * expected);
}

TEST_CASE("halving the panel width leaves the rise unchanged to 1e-8") {
    const double a = 1e5, b = 1e5 + 200.0;
    QuadratureConfig coarse = {};
    QuadratureConfig fine = {};
    fine.panel_width = 0.125;
    const LadderTable t1 = build_ladder(a, 0.0, b, WeightMode::moser(), coarse, kRs);
    const LadderTable t2 = build_ladder(a, 0.0, b, WeightMode::moser(), fine, kRs);
    const double r1 = phi1(t1, b), r2 = phi1(t2, b);
    CHECK(std::fabs(r1 - r2) <= 1e-8 * std::fabs(r2));
}

TEST_CASE("phi1 agrees with a fine trapezoid integration") {
    const LadderTable& table = moser_table();
    std::mt19937_64 rng(17);
    std::vector<double> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(uniform(rng, table.anchor_t, table.anchor_t + 500.0));
    std::sort(pts.begin(), pts.end());

    // One cumulative trapezoid pass at step 1e-3 from the anchor, compared at
    // each sample point on the way.
    const double h = 1e-3;
    double sum = 0.0, comp = 0.0, prev = zt2(table.anchor_t);
    double t = table.anchor_t;
    size_t next = 0;
    while (next < pts.size()) {
        const double t2 = t + h;
        const double cur = zt2(t2);
        const double inc = 0.5 * (prev + cur) * h;
        const double s = sum + inc;
        comp += (std::fabs(sum) >= std::fabs(inc)) ? (sum - s) + inc : (inc - s) + sum;
        sum = s;
        prev = cur;
        t = t2;
        while (next < pts.size() && pts[next] <= t) {
            const double tail = (pts[next] - t) * cur; // |tail| <= h * zt2
            const double reference = table.anchor_phi + sum + comp + tail;
            const double got = phi1(table, pts[next]);
            CHECK(std::fabs(got - reference) <= 1e-8 * std::fabs(got));
            ++next;
        }
    }
}

TEST_CASE("deterministic construction, serial equals parallel") {
    const double a = 1e5, phi0 = 12.5, b = 1e5 + 64.0;
    const LadderTable t1 = build_ladder(a, phi0, b, WeightMode::moser(), {}, kRs, true);
    const LadderTable t2 = build_ladder(a, phi0, b, WeightMode::moser(), {}, kRs, true);
    const LadderTable t3 = build_ladder(a, phi0, b, WeightMode::moser(), {}, kRs, false);
    REQUIRE(t1.cp_t.size() == t2.cp_t.size());
    REQUIRE(t1.cp_t.size() == t3.cp_t.size());
    for (size_t i = 0; i < t1.cp_t.size(); ++i) {
        CHECK(t1.cp_t[i] == t2.cp_t[i]);
        CHECK(t1.cp_phi[i] == t2.cp_phi[i]);
        CHECK(t1.cp_t[i] == t3.cp_t[i]);
        CHECK(t1.cp_phi[i] == t3.cp_phi[i]);
    }
}

TEST_CASE("inversion round trips") {
    const LadderTable& table = moser_table();
    std::mt19937_64 rng(23);

    // t -> phi -> t away from flat spots.
    for (int i = 0; i < 40; ++i) {
        const double t = uniform(rng, table.anchor_t + 1.0, table.t_max - 1.0);
        if (zt2(t) <= 1e-3) continue;
        const double back = invert_ladder(table, phi1(table, t));
        CHECK(std::fabs(back - t) < 1e-6);
    }

    // phi -> t -> phi everywhere, including preimages near zeta zeros.
    for (int i = 0; i < 60; ++i) {
        const double x = uniform(rng, table.phi_min(), table.phi_max());
        const double t = invert_ladder(table, x);
        CHECK(std::fabs(phi1(table, t) - x) <= 1e-9 * std::max(1.0, std::fabs(x)));
    }

    CHECK_THROWS_AS(invert_ladder(table, table.phi_min() - 1.0), zl::RangeError);
    CHECK_THROWS_AS(invert_ladder(table, table.phi_max() + 1.0), zl::RangeError);
}

TEST_CASE("tight inversion pushes the residual below one ulp of phi") {
    const LadderTable& table = moser_table();
    std::mt19937_64 rng(29);
    for (int i = 0; i < 8; ++i) {
        const double x = uniform(rng, table.phi_min() + 1.0, table.phi_max() - 1.0);
        const double t = invert_ladder_tight(table, x);
        CHECK(std::fabs(phi1(table, t) - x) <= 2e-10);
    }
}

TEST_CASE("reverse segment round trip, dilation, and constraint") {
    const LadderTable& table = moser_table();
    const Segment seg(96000.0, 96020.0);
    const Segment rev = reverse_segment(table, seg);

    CHECK(std::fabs(phi1(table, rev.a) - seg.a) <= 1e-9 * seg.a);
    CHECK(std::fabs(phi1(table, rev.b) - seg.b) <= 1e-9 * seg.b);

    // Mean slope below one in this mode, so the preimage of a segment long
    // enough for the mean to dominate the local fluctuations is longer.
    const Segment wide(96000.0, 98000.0);
    const Segment wide_rev = reverse_segment(table, wide);
    CHECK(wide_rev.length() > wide.length());

    const Segment too_long(96000.0, 96000.0 + 9000.0); // above T/ln T ~ 8400
    CHECK_NOTHROW(reverse_segment(table, too_long));
    CHECK_THROWS_AS(reverse_segment(table, too_long, true), zl::ConstraintError);
    CHECK_THROWS_AS(reverse_segment(table, Segment(1.0, 2.0)), zl::RangeError);
}

TEST_CASE("transport of f == 1 returns the segment length") {
    const LadderTable& table = moser_table();
    std::mt19937_64 rng(31);
    for (int i = 0; i < 6; ++i) {
        const double a = uniform(rng, table.phi_min() + 5.0, table.phi_max() - 600.0);
        const double u = uniform(rng, 0.5, 500.0);
        const Segment rev = reverse_segment(table, Segment(a, a + u));
        const double got = transport_integral(table, rev, [](double) { return 1.0; });
        CHECK(std::fabs(got - u) <= 1e-6 * u);
    }
}

TEST_CASE("transport of trig over a full block vanishes") {
    const LadderTable& table = moser_table();
    const double two_l = 20.0, l = 10.0;
    const long long K = 4800; // 2lK = 96000, inside the image
    const Segment rev = reverse_segment(table, Segment(two_l * K, two_l * (K + 1)));
    for (int m : {1, 3, 7}) {
        const double got = transport_integral(
            table, rev, [&](double x) { return std::cos(zl::kPi * m * x / l); },
            zl::kPi * m / l);
        CHECK(std::fabs(got) <= 1e-6 * l);
    }
}

TEST_CASE("transport of x matches the closed form") {
    const LadderTable& table = moser_table();
    const double a = 97000.0, b = 97400.0;
    const Segment rev = reverse_segment(table, Segment(a, b));
    const double got = transport_integral(table, rev, [](double x) { return x; });
    const double want = 0.5 * (b * b - a * a);
    CHECK(std::fabs(got - want) <= 1e-8 * want);
}

TEST_CASE("transport is additive across partitions") {
    const LadderTable& table = moser_table();
    const Segment rev = reverse_segment(table, Segment(98000.0, 98150.0));
    auto f = [](double x) { return std::sin(x * 1e-3) + 2.0; };
    const double whole = transport_integral(table, rev, f);
    const double cut1 = rev.a + 0.37 * rev.length();
    const double cut2 = rev.a + 0.71 * rev.length();
    const double sum = transport_integral(table, Segment(rev.a, cut1), f) +
                       transport_integral(table, Segment(cut1, cut2), f) +
                       transport_integral(table, Segment(cut2, rev.b), f);
    CHECK(std::fabs(whole - sum) <= 1e-10 * std::fabs(whole));
}

TEST_CASE("transport matches closed forms for polynomials up to degree 6") {
    const LadderTable& table = moser_table();
    std::mt19937_64 rng(37);
    for (int i = 0; i < 6; ++i) {
        const double a = uniform(rng, table.phi_min() + 5.0, table.phi_max() - 300.0);
        const double b = a + uniform(rng, 5.0, 250.0);
        const Segment rev = reverse_segment(table, Segment(a, b));
        zl::TransportMesh mesh = build_transport_mesh(table, rev);
        for (int deg = 0; deg <= 6; ++deg) {
            const double got = mesh_integrate(
                mesh, [&](double x) { return std::pow(x / 1e5, deg); });
            const double want = 1e5 *
                (std::pow(b / 1e5, deg + 1) - std::pow(a / 1e5, deg + 1)) / (deg + 1);
            CHECK(std::fabs(got - want) <= 5e-8 * std::fabs(want));
        }
    }
}

TEST_CASE("table integrity accepts the genuine table and flags tampering") {
    const LadderTable& table = moser_table();
    const zl::IntegrityReport ok = verify_table_integrity(table);
    CHECK(ok.ok);
    CHECK(ok.max_abs_deviation <= 1e-12);

    LadderTable tampered = table;
    tampered.cp_phi[tampered.cp_phi.size() / 2] += 1e-6;
    const zl::IntegrityReport bad = verify_table_integrity(tampered);
    CHECK_FALSE(bad.ok);
    CHECK(bad.max_abs_deviation > 1e-7);
}

TEST_CASE("checkpoint csv round trips exactly") {
    const LadderTable t1 =
        build_ladder(1e5, 95944.646, 1e5 + 64.0, WeightMode::moser(), {}, kRs);
    const std::string path = "ladder_roundtrip_test.csv";
    write_ladder_csv(path, t1);
    const LadderTable t2 = zl::load_ladder_csv(path);

    CHECK(t2.anchor_t == t1.anchor_t);
    CHECK(t2.anchor_phi == t1.anchor_phi);
    CHECK(t2.t_max == t1.t_max);
    CHECK(t2.mode == t1.mode);
    CHECK(t2.quad.panel_width == t1.quad.panel_width);
    CHECK(t2.quad.gl_order == t1.quad.gl_order);
    CHECK(t2.quad.checkpoint_stride == t1.quad.checkpoint_stride);
    CHECK(t2.rs.t_min == t1.rs.t_min);
    CHECK(t2.rs.correction_order == t1.rs.correction_order);
    REQUIRE(t2.cp_t.size() == t1.cp_t.size());
    for (size_t i = 0; i < t1.cp_t.size(); ++i) {
        CHECK(t2.cp_t[i] == t1.cp_t[i]);
        CHECK(t2.cp_phi[i] == t1.cp_phi[i]);
    }

    // Rewriting the loaded table reproduces the file byte for byte.
    const std::string path2 = "ladder_roundtrip_test2.csv";
    write_ladder_csv(path2, t2);
    std::ifstream f1(path), f2(path2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(!s1.str().empty());
    std::remove(path.c_str());
    std::remove(path2.c_str());
}
