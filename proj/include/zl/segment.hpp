#pragma once

#include <cmath>

#include "zl/errors.hpp"

namespace zl {

// Closed interval [a, b], b > a.
struct Segment {
    double a;
    double b;

    Segment(double a_, double b_) : a(a_), b(b_) {
        if (!(b > a)) throw DomainError("Segment requires b > a");
    }

    double length() const { return b - a; }
};

// The theorems assume the segment length stays within a/ln(a).
inline bool segment_constraint_ok(const Segment& seg) {
    return seg.length() <= seg.a / std::log(seg.a);
}

} // namespace zl
