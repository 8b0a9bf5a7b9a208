#include "core/areavec.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/meta.hpp"

namespace areaflow::areavec {

std::array<double, kCategoryCount> venue_category_vector(std::span<const VenueRecord> venues,
                                                         std::string_view zip) {
    std::array<std::uint64_t, kCategoryCount> counts{};
    std::uint64_t total = 0;
    for (const auto& v : venues) {
        if (!v.zip || *v.zip != zip) continue;
        ++counts[*category_index(v.category)];
        ++total;
    }
    if (total == 0) {
        throw_analysis("empty area: zip '" + std::string(zip) + "' has no venues");
    }
    std::array<double, kCategoryCount> out{};
    for (std::size_t k = 0; k < kCategoryCount; ++k) {
        out[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
    }
    return out;
}

std::array<double, kCategoryCount> checkin_category_vector(std::span<const VenueRecord> venues,
                                                           std::span<const TransitionRecord> transitions,
                                                           std::string_view zip, Attribution attribution) {
    // venues in this zip, keyed by id -> category index
    std::unordered_map<std::string_view, std::size_t> local;
    for (const auto& v : venues) {
        if (!v.zip || *v.zip != zip) continue;
        local.emplace(v.venue_id, *category_index(v.category));
    }
    if (local.empty()) {
        throw_analysis("empty area: zip '" + std::string(zip) + "' has no venues");
    }

    std::array<std::uint64_t, kCategoryCount> mass{};
    std::uint64_t total = 0;
    const bool use_start = attribution != Attribution::end;
    const bool use_end = attribution != Attribution::start;
    for (const auto& t : transitions) {
        if (use_start) {
            if (auto it = local.find(t.start_venue); it != local.end()) {
                mass[it->second] += t.checkins;
                total += t.checkins;
            }
        }
        if (use_end) {
            if (auto it = local.find(t.end_venue); it != local.end()) {
                mass[it->second] += t.checkins;
                total += t.checkins;
            }
        }
    }
    if (total == 0) {
        throw_analysis("no checkin mass in zip '" + std::string(zip) + "'");
    }
    std::array<double, kCategoryCount> out{};
    for (std::size_t k = 0; k < kCategoryCount; ++k) {
        out[k] = static_cast<double>(mass[k]) / static_cast<double>(total);
    }
    return out;
}

VectorSet category_matrix(std::span<const VenueRecord> venues, std::span<const TransitionRecord> transitions,
                          const std::set<std::string>& kept, Kind kind, Attribution attribution) {
    if (kept.empty()) throw_invalid("category_matrix: kept zip set is empty");
    VectorSet vs;
    vs.dim = kCategoryCount;
    vs.labels.assign(kCategories.begin(), kCategories.end());
    vs.nodes.assign(kept.begin(), kept.end());
    vs.values.reserve(kept.size() * kCategoryCount);
    for (const auto& zip : vs.nodes) {
        std::array<double, kCategoryCount> row{};
        try {
            row = kind == Kind::venue ? venue_category_vector(venues, zip)
                                      : checkin_category_vector(venues, transitions, zip, attribution);
        } catch (const error& e) {
            throw error(e.kind(), std::string(e.what()) + " (while building the category matrix)");
        }
        vs.values.insert(vs.values.end(), row.begin(), row.end());
    }
    return vs;
}

void save_category_csv(std::ostream& out, const VectorSet& matrix, const std::string* meta) {
    if (meta) out << "# meta: " << *meta << '\n';
    std::vector<std::string> row;
    row.emplace_back("zip");
    if (!matrix.labels.empty()) {
        row.insert(row.end(), matrix.labels.begin(), matrix.labels.end());
    } else {
        for (std::size_t k = 0; k < matrix.dim; ++k) row.push_back("v" + std::to_string(k + 1));
    }
    csv::write_row(out, row);
    for (std::size_t i = 0; i < matrix.nodes.size(); ++i) {
        row.clear();
        row.push_back(matrix.nodes[i]);
        for (const double x : matrix.row(i)) row.push_back(format_double(x));
        csv::write_row(out, row);
    }
}

VectorSet load_category_csv(std::istream& in, const std::string& source) {
    csv::Reader r(in, source);
    std::vector<std::string> f;
    if (!r.next(f)) throw_parse(source, 1, "empty file, expected header");
    if (f.size() < 2 || f[0] != "zip") {
        throw_parse(source, r.record_line(), "bad header, expected 'zip,<columns...>'");
    }
    VectorSet vs;
    vs.dim = f.size() - 1;
    vs.labels.assign(f.begin() + 1, f.end());
    while (r.next(f)) {
        if (f.size() != vs.dim + 1) {
            throw_parse(source, r.record_line(),
                        "expected " + std::to_string(vs.dim + 1) + " fields, got " + std::to_string(f.size()));
        }
        vs.nodes.push_back(f[0]);
        for (std::size_t k = 1; k < f.size(); ++k) {
            double x = 0.0;
            auto [p, ec] = std::from_chars(f[k].data(), f[k].data() + f[k].size(), x);
            if (ec != std::errc() || p != f[k].data() + f[k].size()) {
                throw_parse(source, r.record_line(), "bad value '" + f[k] + "'");
            }
            vs.values.push_back(x);
        }
    }
    return vs;
}

}  // namespace areaflow::areavec
