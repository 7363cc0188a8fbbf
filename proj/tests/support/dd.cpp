#include "support/dd.hpp"

#include <cstdlib>

namespace ddx {

namespace {

// hi/lo split of the leading constants (hi = nearest double, lo = remainder).
constexpr double kPiHi = 0x1.921fb54442d18p+1;
constexpr double kPiLo = 0x1.1a62633145c07p-53;
constexpr double kLn2Hi = 0x1.62e42fefa39efp-1;
constexpr double kLn2Lo = 0x1.abc9e3b39803fp-56;

} // namespace

const Dd& pi() {
    static const Dd v{kPiHi, kPiLo};
    return v;
}

const Dd& two_pi() {
    static const Dd v{2.0 * kPiHi, 2.0 * kPiLo};
    return v;
}

const Dd& half_pi() {
    static const Dd v{0.5 * kPiHi, 0.5 * kPiLo};
    return v;
}

const Dd& ln2() {
    static const Dd v{kLn2Hi, kLn2Lo};
    return v;
}

const Dd& ln_pi() {
    static const Dd v = log(pi());
    return v;
}

Dd sqrt(const Dd& a) {
    if (a.hi == 0.0) return from(0.0);
    const double r0 = std::sqrt(a.hi);
    Dd r = from(r0);
    // One dd Newton step doubles the 53-bit seed.
    Dd err = sub(a, mul(r, r));
    return add(r, div(err, from(2.0 * r0)));
}

Dd exp(const Dd& a) {
    const double k = std::nearbyint(a.hi / kLn2Hi);
    Dd r = sub(a, mul(ln2(), k));
    Dd term = from(1.0);
    Dd acc = from(1.0);
    for (int n = 1; n < 40; ++n) {
        term = div(mul(term, r), double(n));
        acc = add(acc, term);
        if (std::fabs(term.hi) < 1e-36 * std::fabs(acc.hi)) break;
    }
    const int ki = int(k);
    return {std::ldexp(acc.hi, ki), std::ldexp(acc.lo, ki)};
}

Dd log(const Dd& a) {
    Dd y = from(std::log(a.hi));
    // Newton on exp(y) = a.
    y = add(y, sub(mul(a, exp(neg(y))), 1.0));
    return y;
}

namespace {

// sin/cos Taylor for |u| <= pi/4.
void sincos_kernel(const Dd& u, Dd& s, Dd& c) {
    const Dd u2 = mul(u, u);
    Dd term = u;
    s = u;
    for (int k = 1; k < 16; ++k) {
        term = mul(term, u2);
        term = div(term, -double(2 * k) * double(2 * k + 1));
        s = add(s, term);
        if (std::fabs(term.hi) < 1e-38) break;
    }
    term = from(1.0);
    c = from(1.0);
    for (int k = 1; k < 16; ++k) {
        term = mul(term, u2);
        term = div(term, -double(2 * k - 1) * double(2 * k));
        c = add(c, term);
        if (std::fabs(term.hi) < 1e-38) break;
    }
}

} // namespace

void sincos(const Dd& x, Dd& s, Dd& c) {
    const double n = std::nearbyint(to_double(x) / (2.0 * kPiHi));
    Dd r = sub(x, mul(two_pi(), n));
    const double q = std::nearbyint(r.hi / (0.5 * kPiHi));
    Dd u = sub(r, mul(half_pi(), q));
    Dd su, cu;
    sincos_kernel(u, su, cu);
    switch (int(q) & 3) {
        case 0: s = su; c = cu; break;
        case 1: s = cu; c = neg(su); break;
        case 2: s = neg(su); c = neg(cu); break;
        default: s = neg(cu); c = su; break;
    }
}

Dd atan(const Dd& v) {
    if (v.hi < 0.0) return neg(atan(neg(v)));
    if (v.hi > 1.0) return sub(half_pi(), atan(inv(v)));
    // Halve three times so the Taylor series converges fast.
    Dd w = v;
    for (int i = 0; i < 3; ++i) {
        Dd den = add(sqrt(add(mul(w, w), 1.0)), 1.0);
        w = div(w, den);
    }
    const Dd w2 = mul(w, w);
    Dd term = w;
    Dd acc = w;
    for (int k = 1; k < 40; ++k) {
        term = mul(term, w2);
        term = neg(term);
        acc = add(acc, div(term, double(2 * k + 1)));
        if (std::fabs(term.hi) < 1e-37 * std::fabs(acc.hi)) break;
    }
    return mul(acc, 8.0);
}

Dd carg_right_halfplane(const Cdd& z) {
    if (!(z.re.hi > 0.0)) std::abort(); // oracle misuse
    return atan(div(z.im, z.re));
}

} // namespace ddx
