#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace areaflow {

// Intra-day time buckets. Order is fixed; indices are used for seed
// derivation and file naming.
enum class Period : int { overnight = 0, morning = 1, midday = 2, afternoon = 3, night = 4 };

inline constexpr int kPeriodCount = 5;

const char* to_string(Period p);
std::optional<Period> period_from_string(std::string_view s);

// The closed set of top-level venue categories, in fixed alphabetical order.
inline constexpr std::array<std::string_view, 10> kCategories = {
    "Arts & Entertainment", "College & University",       "Event",     "Food",
    "Nightlife Spot",       "Outdoors & Recreation",      "Professional & Other Places",
    "Residence",            "Shop & Service",             "Travel & Transport",
};

inline constexpr std::size_t kCategoryCount = kCategories.size();

std::optional<std::size_t> category_index(std::string_view label);

struct YearMonth {
    int year = 0;
    int month = 0;  // 1..12

    auto operator<=>(const YearMonth&) const = default;
    std::string str() const;  // "YYYY-MM"
};

struct VenueRecord {
    std::string venue_id;
    std::string name;
    double lat = 0.0;
    double lon = 0.0;
    std::string category;
    std::optional<std::string> zip;  // set by zip resolution
};

// One venue-to-venue movement tuple.
struct TransitionRecord {
    std::string start_venue;
    std::string end_venue;
    YearMonth year_month;
    Period period = Period::overnight;
    std::uint64_t checkins = 0;
};

// Movement tuple aggregated to zip level.
struct ZipTransition {
    std::string start_zip;
    std::string end_zip;
    YearMonth year_month;
    Period period = Period::overnight;
    std::uint64_t checkins = 0;
};

// A node-aligned set of real vectors: embeddings and category matrices share
// this shape. `labels` optionally names the dimensions (category columns).
struct VectorSet {
    std::vector<std::string> nodes;
    std::size_t dim = 0;
    std::vector<double> values;  // nodes.size() * dim, row-major
    std::vector<std::string> labels;

    std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
    std::span<double> row(std::size_t i) { return {values.data() + i * dim, dim}; }
};

}  // namespace areaflow
