#include "zl/weight.hpp"

#include <charconv>
#include <cstdio>

#include "zl/errors.hpp"

namespace zl {

std::string to_string(const WeightMode& mode) {
    switch (mode.kind) {
        case WeightMode::Kind::LeadingLog: return "leading-log";
        case WeightMode::Kind::MoserCalibrated: return "moser";
        case WeightMode::Kind::CustomShift: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "custom-shift:%.17g", mode.custom);
            return buf;
        }
    }
    return "leading-log";
}

WeightMode parse_weight_mode(const std::string& text) {
    if (text == "leading-log" || text == "log") return WeightMode::leading_log();
    if (text == "moser") return WeightMode::moser();
    const std::string prefix = "custom-shift:";
    if (text.rfind(prefix, 0) == 0) {
        const char* first = text.data() + prefix.size();
        const char* last = text.data() + text.size();
        double s = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, s);
        if (ec == std::errc() && ptr == last) return WeightMode::custom_shift(s);
    }
    throw DomainError("unknown weight mode '" + text +
                      "' (expected leading-log, moser, or custom-shift:<s>)");
}

} // namespace zl
