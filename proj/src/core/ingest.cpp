#include "core/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <tuple>
#include <unordered_set>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/meta.hpp"

namespace areaflow::ingest {

namespace {

double parse_double_field(const csv::Reader& r, const std::string& s, const char* field) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw_parse(r.source(), r.record_line(), std::string("bad ") + field + " value '" + s + "'");
    }
    return v;
}

std::uint64_t parse_count_field(const csv::Reader& r, const std::string& s, const char* field) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw_parse(r.source(), r.record_line(), std::string("bad ") + field + " value '" + s + "'");
    }
    return v;
}

YearMonth parse_year_month(const csv::Reader& r, const std::string& s) {
    YearMonth ym;
    if (s.size() != 7 || s[4] != '-') {
        throw_parse(r.source(), r.record_line(), "bad year_month '" + s + "' (expected YYYY-MM)");
    }
    auto [p1, e1] = std::from_chars(s.data(), s.data() + 4, ym.year);
    auto [p2, e2] = std::from_chars(s.data() + 5, s.data() + 7, ym.month);
    if (e1 != std::errc() || e2 != std::errc() || p1 != s.data() + 4 || p2 != s.data() + 7 ||
        ym.month < 1 || ym.month > 12) {
        throw_parse(r.source(), r.record_line(), "bad year_month '" + s + "' (expected YYYY-MM)");
    }
    return ym;
}

void expect_header(csv::Reader& r, std::initializer_list<const char*> expected) {
    std::vector<std::string> fields;
    if (!r.next(fields)) {
        throw_parse(r.source(), 1, "empty file, expected header");
    }
    if (fields.size() != expected.size() || !std::equal(fields.begin(), fields.end(), expected.begin())) {
        std::string want;
        for (const char* f : expected) {
            if (!want.empty()) want += ',';
            want += f;
        }
        throw_parse(r.source(), r.record_line(), "bad header, expected '" + want + "'");
    }
}

void expect_field_count(const csv::Reader& r, const std::vector<std::string>& fields, std::size_t n) {
    if (fields.size() != n) {
        throw_parse(r.source(), r.record_line(),
                    "expected " + std::to_string(n) + " fields, got " + std::to_string(fields.size()));
    }
}

std::string all_category_labels() {
    std::string s;
    for (auto c : kCategories) {
        if (!s.empty()) s += "; ";
        s += c;
    }
    return s;
}

void write_meta_line(std::ostream& out, const std::string* meta) {
    if (meta) out << "# meta: " << *meta << '\n';
}

}  // namespace

Period classify_period(int hour) {
    if (hour < 0 || hour > 23) {
        throw_invalid("hour out of range: " + std::to_string(hour));
    }
    if (hour <= 5) return Period::overnight;
    if (hour <= 9) return Period::morning;
    if (hour <= 14) return Period::midday;
    if (hour <= 18) return Period::afternoon;
    return Period::night;
}

std::vector<VenueRecord> parse_venues(std::istream& in, const std::string& source) {
    csv::Reader r(in, source);
    expect_header(r, {"venue_id", "name", "lat", "lon", "category"});
    std::vector<VenueRecord> out;
    std::unordered_set<std::string> seen;
    std::vector<std::string> f;
    while (r.next(f)) {
        expect_field_count(r, f, 5);
        VenueRecord v;
        v.venue_id = f[0];
        v.name = f[1];
        v.lat = parse_double_field(r, f[2], "lat");
        v.lon = parse_double_field(r, f[3], "lon");
        v.category = f[4];
        if (v.venue_id.empty()) throw_parse(source, r.record_line(), "empty venue_id");
        if (v.lat < -90.0 || v.lat > 90.0) {
            throw_parse(source, r.record_line(), "lat out of range: " + f[2]);
        }
        if (v.lon < -180.0 || v.lon > 180.0) {
            throw_parse(source, r.record_line(), "lon out of range: " + f[3]);
        }
        if (!category_index(v.category)) {
            throw_parse(source, r.record_line(),
                        "unknown top-level category '" + v.category + "' (valid: " + all_category_labels() + ")");
        }
        if (!seen.insert(v.venue_id).second) {
            throw_parse(source, r.record_line(), "duplicate venue_id '" + v.venue_id + "'");
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<TransitionRecord> parse_transitions(std::istream& in, const std::string& source) {
    csv::Reader r(in, source);
    expect_header(r, {"start_venue", "end_venue", "year_month", "period", "checkins"});
    std::vector<TransitionRecord> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        expect_field_count(r, f, 5);
        TransitionRecord t;
        t.start_venue = f[0];
        t.end_venue = f[1];
        if (t.start_venue.empty() || t.end_venue.empty()) {
            throw_parse(source, r.record_line(), "empty venue id");
        }
        t.year_month = parse_year_month(r, f[2]);
        auto p = period_from_string(f[3]);
        if (!p) {
            throw_parse(source, r.record_line(),
                        "bad period '" + f[3] + "' (expected overnight|morning|midday|afternoon|night)");
        }
        t.period = *p;
        t.checkins = parse_count_field(r, f[4], "checkins");
        if (t.checkins < 1) {
            throw_parse(source, r.record_line(), "checkins must be >= 1");
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::unordered_map<std::string, std::string> parse_zipmap(std::istream& in, const std::string& source) {
    csv::Reader r(in, source);
    expect_header(r, {"venue_id", "zip"});
    std::unordered_map<std::string, std::string> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        expect_field_count(r, f, 2);
        if (f[0].empty() || f[1].empty()) {
            throw_parse(source, r.record_line(), "empty venue_id or zip");
        }
        auto [it, inserted] = out.emplace(f[0], f[1]);
        if (!inserted && it->second != f[1]) {
            throw_parse(source, r.record_line(), "conflicting zip for venue '" + f[0] + "'");
        }
    }
    return out;
}

std::vector<ZipTransition> parse_zip_transitions(std::istream& in, const std::string& source) {
    csv::Reader r(in, source);
    expect_header(r, {"start_zip", "end_zip", "year_month", "period", "checkins"});
    std::vector<ZipTransition> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        expect_field_count(r, f, 5);
        ZipTransition t;
        t.start_zip = f[0];
        t.end_zip = f[1];
        if (t.start_zip.empty() || t.end_zip.empty()) {
            throw_parse(source, r.record_line(), "empty zip");
        }
        t.year_month = parse_year_month(r, f[2]);
        auto p = period_from_string(f[3]);
        if (!p) {
            throw_parse(source, r.record_line(), "bad period '" + f[3] + "'");
        }
        t.period = *p;
        t.checkins = parse_count_field(r, f[4], "checkins");
        if (t.checkins < 1) {
            throw_parse(source, r.record_line(), "checkins must be >= 1");
        }
        out.push_back(std::move(t));
    }
    return out;
}

void write_venues(std::ostream& out, std::span<const VenueRecord> venues, const std::string* meta) {
    write_meta_line(out, meta);
    out << "venue_id,name,lat,lon,category\n";
    char num[40];
    for (const auto& v : venues) {
        std::snprintf(num, sizeof(num), "%.6f", v.lat);
        std::string lat = num;
        std::snprintf(num, sizeof(num), "%.6f", v.lon);
        std::string lon = num;
        const std::string row[] = {v.venue_id, v.name, lat, lon, v.category};
        csv::write_row(out, row);
    }
}

void write_transitions(std::ostream& out, std::span<const TransitionRecord> transitions, const std::string* meta) {
    write_meta_line(out, meta);
    out << "start_venue,end_venue,year_month,period,checkins\n";
    for (const auto& t : transitions) {
        const std::string row[] = {t.start_venue, t.end_venue, t.year_month.str(), to_string(t.period),
                                   std::to_string(t.checkins)};
        csv::write_row(out, row);
    }
}

void write_zipmap(std::ostream& out, std::span<const VenueRecord> venues, const std::string* meta) {
    write_meta_line(out, meta);
    out << "venue_id,zip\n";
    for (const auto& v : venues) {
        if (!v.zip) continue;
        const std::string row[] = {v.venue_id, *v.zip};
        csv::write_row(out, row);
    }
}

void write_zip_transitions(std::ostream& out, std::span<const ZipTransition> transitions, const std::string* meta) {
    write_meta_line(out, meta);
    out << "start_zip,end_zip,year_month,period,checkins\n";
    for (const auto& t : transitions) {
        const std::string row[] = {t.start_zip, t.end_zip, t.year_month.str(), to_string(t.period),
                                   std::to_string(t.checkins)};
        csv::write_row(out, row);
    }
}

ResolveResult resolve_zips(std::vector<VenueRecord> venues,
                           const std::unordered_map<std::string, std::string>& zipmap, ResolvePolicy policy) {
    ResolveResult res;
    for (auto& v : venues) {
        auto it = zipmap.find(v.venue_id);
        if (it == zipmap.end()) {
            res.unresolved_ids.push_back(v.venue_id);
            continue;
        }
        v.zip = it->second;
        res.venues.push_back(std::move(v));
    }
    if (policy == ResolvePolicy::strict && !res.unresolved_ids.empty()) {
        std::string ids;
        for (const auto& id : res.unresolved_ids) {
            if (!ids.empty()) ids += ", ";
            ids += id;
        }
        throw_invalid("unresolved venues under strict policy: " + ids);
    }
    return res;
}

std::set<std::string> filter_sparse_zips(std::span<const VenueRecord> resolved, std::uint32_t min_venues) {
    if (min_venues < 1) {
        throw_invalid("min_venues must be >= 1");
    }
    std::map<std::string, std::uint32_t> counts;
    for (const auto& v : resolved) {
        if (!v.zip) throw error(errc::state, "filter_sparse_zips requires resolved venues");
        ++counts[*v.zip];
    }
    std::set<std::string> kept;
    for (const auto& [zip, n] : counts) {
        if (n >= min_venues) kept.insert(zip);
    }
    return kept;
}

AggregateResult aggregate_to_zip(std::span<const TransitionRecord> transitions,
                                 std::span<const VenueRecord> resolved,
                                 std::span<const std::string> unresolved_ids, const std::set<std::string>& kept,
                                 const AggregateOptions& options) {
    // venue -> kept zip; venues without a kept zip map to "drop"
    std::unordered_map<std::string, const std::string*> zip_of;
    zip_of.reserve(resolved.size() + unresolved_ids.size());
    for (const auto& v : resolved) {
        const std::string* z = (v.zip && kept.count(*v.zip)) ? &*v.zip : nullptr;
        zip_of.emplace(v.venue_id, z);
    }
    for (const auto& id : unresolved_ids) zip_of.emplace(id, nullptr);

    using Key = std::tuple<std::string, std::string, YearMonth, int>;
    std::map<Key, std::uint64_t> sums;
    AggregateResult res;
    for (const auto& t : transitions) {
        auto s = zip_of.find(t.start_venue);
        if (s == zip_of.end()) {
            throw_invalid("transition references unknown venue_id '" + t.start_venue + "'");
        }
        auto e = zip_of.find(t.end_venue);
        if (e == zip_of.end()) {
            throw_invalid("transition references unknown venue_id '" + t.end_venue + "'");
        }
        const bool self_loop_dropped =
            options.drop_self_loops && s->second && e->second && *s->second == *e->second;
        if (!s->second || !e->second || self_loop_dropped) {
            ++res.dropped_transitions;
            res.dropped_checkins += t.checkins;
            continue;
        }
        sums[Key{*s->second, *e->second, t.year_month, static_cast<int>(t.period)}] += t.checkins;
    }
    res.transitions.reserve(sums.size());
    for (const auto& [key, checkins] : sums) {
        res.transitions.push_back(ZipTransition{std::get<0>(key), std::get<1>(key), std::get<2>(key),
                                                static_cast<Period>(std::get<3>(key)), checkins});
    }
    return res;
}

City run_ingest(const std::string& venues_path, const std::string& transitions_path,
                const std::string& zipmap_path, const IngestOptions& options) {
    auto open = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw_io("cannot open input file: " + path);
        return in;
    };

    City city;
    {
        auto in = open(venues_path);
        auto venues = parse_venues(in, venues_path);
        city.report.venues_read = venues.size();
        auto zin = open(zipmap_path);
        auto zipmap = parse_zipmap(zin, zipmap_path);
        auto resolved = resolve_zips(std::move(venues), zipmap, options.policy);
        city.venues = std::move(resolved.venues);
        city.unresolved_ids = std::move(resolved.unresolved_ids);
        city.report.venues_unresolved = city.unresolved_ids.size();
    }
    {
        std::set<std::string> all_zips;
        for (const auto& v : city.venues) all_zips.insert(*v.zip);
        city.report.zips_total = all_zips.size();
        city.kept_zips = filter_sparse_zips(city.venues, options.min_venues);
        city.report.zips_kept = city.kept_zips.size();
    }
    {
        auto in = open(transitions_path);
        city.raw_transitions = parse_transitions(in, transitions_path);
        city.report.transitions_read = city.raw_transitions.size();
        for (const auto& t : city.raw_transitions) city.report.checkins_total += t.checkins;
        auto agg = aggregate_to_zip(city.raw_transitions, city.venues, city.unresolved_ids, city.kept_zips,
                                    AggregateOptions{options.drop_self_loops});
        city.zip_transitions = std::move(agg.transitions);
        city.report.checkins_dropped = agg.dropped_checkins;
    }
    return city;
}

}  // namespace areaflow::ingest
