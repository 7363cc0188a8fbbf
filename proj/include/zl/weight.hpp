#pragma once

#include <cmath>
#include <string>

#include "zl/constants.hpp"

namespace zl {

// The weight w(t) dividing Z^2(t). Every mode is of the form w(t) = ln t + s0;
// they differ only in the constant shift s0.
//
//   LeadingLog       s0 = 0                  transport identities exact, no drift
//   MoserCalibrated  s0 = 1 + gamma - ln 2pi calibrated so t - phi1(t) grows like
//                                            (1 - gamma) * li(t)
//   CustomShift(s)   s0 = s
struct WeightMode {
    enum class Kind { LeadingLog, MoserCalibrated, CustomShift };

    Kind kind = Kind::LeadingLog;
    double custom = 0.0; // used by CustomShift only

    static WeightMode leading_log() { return {Kind::LeadingLog, 0.0}; }
    static WeightMode moser() { return {Kind::MoserCalibrated, 0.0}; }
    static WeightMode custom_shift(double s) { return {Kind::CustomShift, s}; }

    double shift() const {
        switch (kind) {
            case Kind::LeadingLog: return 0.0;
            case Kind::MoserCalibrated: return 1.0 + kEulerGamma - kLn2Pi;
            case Kind::CustomShift: return custom;
        }
        return 0.0;
    }

    bool operator==(const WeightMode& o) const {
        return kind == o.kind && (kind != Kind::CustomShift || custom == o.custom);
    }
};

// Pure value, no domain gate; unit tests may probe it below any configured t_min.
inline double weight_value(double t, const WeightMode& mode) {
    return std::log(t) + mode.shift();
}

std::string to_string(const WeightMode& mode);
WeightMode parse_weight_mode(const std::string& text); // throws DomainError

} // namespace zl
