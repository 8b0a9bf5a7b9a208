#include "core/types.hpp"

#include <cstdio>

namespace areaflow {

namespace {
constexpr std::array<const char*, kPeriodCount> kPeriodNames = {
    "overnight", "morning", "midday", "afternoon", "night",
};
}

const char* to_string(Period p) { return kPeriodNames[static_cast<int>(p)]; }

std::optional<Period> period_from_string(std::string_view s) {
    for (int i = 0; i < kPeriodCount; ++i) {
        if (s == kPeriodNames[i]) return static_cast<Period>(i);
    }
    return std::nullopt;
}

std::optional<std::size_t> category_index(std::string_view label) {
    for (std::size_t i = 0; i < kCategories.size(); ++i) {
        if (label == kCategories[i]) return i;
    }
    return std::nullopt;
}

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

}  // namespace areaflow
