#pragma once

#include <array>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "core/types.hpp"

namespace areaflow::areavec {

enum class Kind { venue, checkin };

// How a transition's check-in count is credited to venues. `both` credits the
// start and the end venue (a trip implies presence at both ends).
enum class Attribution { both, start, end };

// Fraction of the zip's venues per category; sums to 1.
std::array<double, kCategoryCount> venue_category_vector(std::span<const VenueRecord> venues,
                                                         std::string_view zip);

// Fraction of the zip's check-in mass per category, where each venue's mass
// is the sum of check-ins of transitions it participates in (per attribution).
std::array<double, kCategoryCount> checkin_category_vector(std::span<const VenueRecord> venues,
                                                           std::span<const TransitionRecord> transitions,
                                                           std::string_view zip,
                                                           Attribution attribution = Attribution::both);

// One vector per kept zip, lexicographic order; labels carry the category names.
VectorSet category_matrix(std::span<const VenueRecord> venues, std::span<const TransitionRecord> transitions,
                          const std::set<std::string>& kept, Kind kind,
                          Attribution attribution = Attribution::both);

// CSV: header `zip,<labels...>`, one row per node.
void save_category_csv(std::ostream& out, const VectorSet& matrix, const std::string* meta = nullptr);
VectorSet load_category_csv(std::istream& in, const std::string& source);

}  // namespace areaflow::areavec
