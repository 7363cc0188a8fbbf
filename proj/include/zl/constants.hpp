#pragma once

#include <numbers>

namespace zl {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;
// ln(2*pi), nearest double
inline constexpr double kLn2Pi = 1.8378770664093456;
inline constexpr double kOneMinusGamma = 1.0 - std::numbers::egamma;

} // namespace zl
