#include "zl/rs.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "zl/constants.hpp"
#include "zl/errors.hpp"

namespace zl {

void RSConfig::validate() const {
    if (!(t_min > kTwoPi)) {
        throw DomainError("RSConfig.t_min must exceed 2*pi so the main sum is nonempty");
    }
    if (correction_order < 0 || correction_order > 2) {
        throw DomainError("RSConfig.correction_order must be in {0,1,2}");
    }
}

namespace rs_detail {

double fast_cos(double x) {
    constexpr double kInv2Pi = 0.15915494309189535;
    constexpr double k2PiHi = 6.283185307179586;
    constexpr double k2PiLo = 2.4492935982947064e-16;
    constexpr double kTwoOverPi = 0.6366197723675814;
    constexpr double kPiO2Hi = 1.5707963267948966;
    constexpr double kPiO2Lo = 6.123233995736766e-17;

    double n = std::nearbyint(x * kInv2Pi);
    double r = x - n * k2PiHi;
    r -= n * k2PiLo;
    double q = std::nearbyint(r * kTwoOverPi);
    double u = r - q * kPiO2Hi;
    u -= q * kPiO2Lo;

    double zz = u * u;
    double c = 4.779477332387385e-14;
    c = c * zz - 1.1470745597729725e-11;
    c = c * zz + 2.08767569878681e-9;
    c = c * zz - 2.755731922398589e-7;
    c = c * zz + 2.48015873015873e-5;
    c = c * zz - 1.388888888888889e-3;
    c = c * zz + 4.1666666666666664e-2;
    c = c * zz - 0.5;
    c = c * zz + 1.0;

    double s = 2.8114572543455206e-15;
    s = s * zz - 7.647163731819816e-13;
    s = s * zz + 1.605904383682161e-10;
    s = s * zz - 2.505210838544172e-8;
    s = s * zz + 2.7557319223985893e-6;
    s = s * zz - 1.984126984126984e-4;
    s = s * zz + 8.333333333333333e-3;
    s = s * zz - 0.16666666666666666;
    s = s * zz + 1.0;
    s *= u;

    switch (static_cast<int>(q) & 3) {
        case 0: return c;
        case 1: return -s;
        case 2: return -c;
        default: return s;
    }
}

namespace {

// Truncated power series (jets) used to evaluate Psi and its derivatives,
// including across the removable singularities of the defining quotient.
using Series = std::vector<double>;

Series series_mul(const Series& a, const Series& b) {
    const size_t n = a.size();
    Series out(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        if (a[i] == 0.0) continue;
        for (size_t j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

// sin and cos of a series with zero constant term.
void series_sin_cos(const Series& g, Series& sin_out, Series& cos_out) {
    const size_t n = g.size();
    Series g2 = series_mul(g, g);
    sin_out.assign(n, 0.0);
    cos_out.assign(n, 0.0);
    cos_out[0] = 1.0;

    Series term = g; // g^(2k+1) / (2k+1)! with sign
    for (size_t i = 0; i < n; ++i) sin_out[i] += term[i];
    for (unsigned k = 1; 2 * k + 1 < n + 2; ++k) {
        term = series_mul(term, g2);
        double f = -1.0 / (double(2 * k) * double(2 * k + 1));
        bool any = false;
        for (size_t i = 0; i < n; ++i) {
            term[i] *= f;
            if (term[i] != 0.0) any = true;
            sin_out[i] += term[i];
        }
        if (!any) break;
    }

    term.assign(n, 0.0);
    term[0] = 1.0;
    for (unsigned k = 1; 2 * k < n + 1; ++k) {
        term = series_mul(term, g2);
        double f = -1.0 / (double(2 * k - 1) * double(2 * k));
        bool any = false;
        for (size_t i = 0; i < n; ++i) {
            term[i] *= f;
            if (term[i] != 0.0) any = true;
            cos_out[i] += term[i];
        }
        if (!any) break;
    }
}

Series series_div(const Series& num, const Series& den) {
    const size_t n = num.size();
    Series q(n, 0.0);
    for (size_t k = 0; k < n; ++k) {
        double acc = num[k];
        for (size_t j = 1; j <= k; ++j) acc -= den[j] * q[k - j];
        q[k] = acc / den[0];
    }
    return q;
}

// Value of d^k/dx^k of the polynomial with coefficients q, at x.
double series_eval_deriv(const Series& q, int k, double x) {
    double acc = 0.0;
    for (size_t j = q.size(); j-- > size_t(k);) {
        double ff = 1.0;
        for (int m = 0; m < k; ++m) ff *= double(j - m);
        acc = acc * x + q[j] * ff;
    }
    return acc;
}

} // namespace

void psi_derivatives(double p, double out[7]) {
    const double d25 = p - 0.25;
    const double d75 = p - 0.75;
    const double p0 = (std::fabs(d25) <= std::fabs(d75)) ? 0.25 : 0.75;
    const double delta = p - p0;

    if (std::fabs(delta) < 0.1) {
        // Around p0 both numerator and denominator vanish linearly:
        //   num = sin(b d + c d^2), b = 2pi(2 p0 - 1), c = 2pi
        //   den = sgn * sin(2pi d),  sgn = -1 at p0=1/4, +1 at p0=3/4
        constexpr size_t L = 44;
        const double b = kTwoPi * (2.0 * p0 - 1.0);
        const double sgn = (p0 == 0.25) ? -1.0 : 1.0;

        Series B(L, 0.0);
        B[1] = b;
        B[2] = kTwoPi;
        Series num, num_cos;
        series_sin_cos(B, num, num_cos);

        Series den(L, 0.0);
        {
            double c = sgn * kTwoPi; // sgn * (2pi)^(2m+1) (-1)^m / (2m+1)!
            for (size_t k = 1; k < L; k += 2) {
                den[k] = c;
                c *= -kTwoPi * kTwoPi / (double(k + 1) * double(k + 2));
            }
        }

        Series numl(L - 1), denl(L - 1);
        for (size_t i = 0; i + 1 < L; ++i) {
            numl[i] = num[i + 1];
            denl[i] = den[i + 1];
        }
        Series q = series_div(numl, denl);
        for (int k = 0; k <= 6; ++k) out[k] = series_eval_deriv(q, k, delta);
        return;
    }

    constexpr size_t L = 7;
    const double a0 = kTwoPi * (p * p - p - 0.0625);
    Series g(L, 0.0);
    g[1] = kTwoPi * (2.0 * p - 1.0);
    g[2] = kTwoPi;
    Series sg, cg;
    series_sin_cos(g, sg, cg);
    Series num(L);
    const double ca = std::cos(a0), sa = std::sin(a0);
    for (size_t i = 0; i < L; ++i) num[i] = ca * cg[i] - sa * sg[i];

    Series h(L, 0.0);
    h[1] = kTwoPi;
    Series sh, ch;
    series_sin_cos(h, sh, ch);
    Series den(L);
    const double cb = std::cos(kTwoPi * p), sb = std::sin(kTwoPi * p);
    for (size_t i = 0; i < L; ++i) den[i] = cb * ch[i] - sb * sh[i];

    Series q = series_div(num, den);
    double fact = 1.0;
    for (int k = 0; k <= 6; ++k) {
        if (k > 0) fact *= double(k);
        out[k] = q[k] * fact;
    }
}

namespace {

// Chebyshev interpolants of C0, C1, C2 over p in [0,1]; all three are entire,
// so the coefficients decay geometrically and ~40 terms reach 1e-16.
struct CorrectionCache {
    std::array<std::vector<double>, 3> coef;
};

CorrectionCache build_correction_cache() {
    constexpr int M = 128;
    std::array<std::vector<double>, 3> vals;
    for (auto& v : vals) v.resize(M);
    for (int j = 0; j < M; ++j) {
        const double xj = std::cos(kPi * (j + 0.5) / M);
        const double pj = 0.5 * (xj + 1.0);
        double d[7];
        psi_derivatives(pj, d);
        vals[0][j] = d[0];
        vals[1][j] = -d[3] / (96.0 * kPi * kPi);
        vals[2][j] = d[2] / (64.0 * kPi * kPi) +
                     d[6] / (18432.0 * kPi * kPi * kPi * kPi);
    }
    CorrectionCache cache;
    for (int c = 0; c < 3; ++c) {
        std::vector<double> a(M, 0.0);
        double amax = 0.0;
        for (int k = 0; k < M; ++k) {
            double acc = 0.0;
            for (int j = 0; j < M; ++j) acc += vals[c][j] * std::cos(kPi * k * (j + 0.5) / M);
            a[k] = 2.0 * acc / M;
            amax = std::max(amax, std::fabs(a[k]));
        }
        int keep = M;
        while (keep > 2 && std::fabs(a[keep - 1]) < 1e-17 * amax &&
               std::fabs(a[keep - 2]) < 1e-17 * amax) {
            --keep;
        }
        a.resize(keep);
        cache.coef[c] = std::move(a);
    }
    return cache;
}

double clenshaw(const std::vector<double>& a, double x) {
    double b1 = 0.0, b2 = 0.0;
    for (size_t k = a.size(); k-- > 1;) {
        double b0 = 2.0 * x * b1 - b2 + a[k];
        b2 = b1;
        b1 = b0;
    }
    return 0.5 * a[0] + x * b1 - b2;
}

} // namespace

void correction_coeffs(double p, double c[3]) {
    static const CorrectionCache cache = build_correction_cache();
    const double x = 2.0 * p - 1.0;
    for (int i = 0; i < 3; ++i) c[i] = clenshaw(cache.coef[i], x);
}

} // namespace rs_detail

namespace {

double theta_raw(double t) {
    const double lg = std::log(t) - kLn2Pi;
    const double half = 0.5 * t;
    return half * lg - half - kPi / 8.0 + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t * t * t);
}

struct MainSumTables {
    static constexpr uint32_t kMaxN = 4096; // covers t up to ~1e8
    std::vector<double> ln_n, rsqrt_n;

    MainSumTables() : ln_n(kMaxN + 1, 0.0), rsqrt_n(kMaxN + 1, 0.0) {
        for (uint32_t n = 1; n <= kMaxN; ++n) {
            ln_n[n] = std::log(double(n));
            rsqrt_n[n] = 1.0 / std::sqrt(double(n));
        }
    }
};

const MainSumTables& tables() {
    static const MainSumTables t;
    return t;
}

void require_domain(double t, const RSConfig& cfg, const char* op) {
    cfg.validate();
    if (!(t >= cfg.t_min)) {
        throw DomainError(std::string(op) + ": t below configured t_min");
    }
}

} // namespace

double theta(double t, const RSConfig& cfg) {
    require_domain(t, cfg, "theta");
    return theta_raw(t);
}

double z(double t, const RSConfig& cfg) {
    require_domain(t, cfg, "z");

    const double tau = t / kTwoPi;
    const double a = std::sqrt(tau);
    const uint64_t n_terms = static_cast<uint64_t>(a);
    const double p = a - double(n_terms);
    const double th = theta_raw(t);

    double s = 0.0;
    const MainSumTables& tb = tables();
    if (n_terms <= MainSumTables::kMaxN) {
        for (uint64_t n = 1; n <= n_terms; ++n) {
            s += tb.rsqrt_n[n] * rs_detail::fast_cos(th - t * tb.ln_n[n]);
        }
    } else {
        for (uint64_t n = 1; n <= n_terms; ++n) {
            s += rs_detail::fast_cos(th - t * std::log(double(n))) / std::sqrt(double(n));
        }
    }
    s *= 2.0;

    double c[3];
    rs_detail::correction_coeffs(p, c);
    const double x = 1.0 / std::sqrt(tau); // tau^{-1/2}
    double r = c[0];
    if (cfg.correction_order >= 1) r += c[1] * x;
    if (cfg.correction_order >= 2) r += c[2] * x * x;
    const double sign = (n_terms & 1) ? 1.0 : -1.0; // (-1)^(N-1)
    s += sign * std::sqrt(x) * r;
    return s;
}

double weight(double t, const WeightMode& mode, const RSConfig& cfg) {
    require_domain(t, cfg, "weight");
    return weight_value(t, mode);
}

double z_tilde_sq(double t, const WeightMode& mode, const RSConfig& cfg) {
    const double zt = z(t, cfg);
    return zt * zt / weight_value(t, mode);
}

} // namespace zl
