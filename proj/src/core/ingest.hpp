#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/types.hpp"

namespace areaflow::ingest {

// Maps an hour of day (0..23) to its intra-day bucket:
//   overnight 00-05, morning 06-09, midday 10-14, afternoon 15-18, night 19-23.
Period classify_period(int hour);

// --- file parsing -----------------------------------------------------------
// All parsers take the stream plus a source name used in error messages.

// venues file: header `venue_id,name,lat,lon,category`
std::vector<VenueRecord> parse_venues(std::istream& in, const std::string& source);

// transitions file: header `start_venue,end_venue,year_month,period,checkins`
std::vector<TransitionRecord> parse_transitions(std::istream& in, const std::string& source);

// zipmap file: header `venue_id,zip`
std::unordered_map<std::string, std::string> parse_zipmap(std::istream& in, const std::string& source);

// zip transitions file: header `start_zip,end_zip,year_month,period,checkins`
std::vector<ZipTransition> parse_zip_transitions(std::istream& in, const std::string& source);

// Writers emit exactly the formats the parsers accept; `meta` (when non-null)
// is embedded as a leading `# meta: ...` comment line.
void write_venues(std::ostream& out, std::span<const VenueRecord> venues, const std::string* meta = nullptr);
void write_transitions(std::ostream& out, std::span<const TransitionRecord> transitions,
                       const std::string* meta = nullptr);
void write_zipmap(std::ostream& out, std::span<const VenueRecord> venues, const std::string* meta = nullptr);
void write_zip_transitions(std::ostream& out, std::span<const ZipTransition> transitions,
                           const std::string* meta = nullptr);

// --- pipeline steps ----------------------------------------------------------

enum class ResolvePolicy { drop, strict };

struct ResolveResult {
    std::vector<VenueRecord> venues;         // every record has zip set
    std::vector<std::string> unresolved_ids; // venues dropped for lack of a mapping
};

// Attaches zip codes from the mapping. Unresolved venues are dropped with a
// warning count (default) or rejected outright (strict).
ResolveResult resolve_zips(std::vector<VenueRecord> venues,
                           const std::unordered_map<std::string, std::string>& zipmap,
                           ResolvePolicy policy = ResolvePolicy::drop);

// Keeps zips hosting at least `min_venues` venues.
std::set<std::string> filter_sparse_zips(std::span<const VenueRecord> resolved, std::uint32_t min_venues = 10);

struct AggregateOptions {
    bool drop_self_loops = false;  // drop zip-level self transitions
};

struct AggregateResult {
    std::vector<ZipTransition> transitions;  // sorted by (start, end, year_month, period)
    std::uint64_t dropped_transitions = 0;
    std::uint64_t dropped_checkins = 0;
};

// Sums venue transitions into zip transitions keyed by
// (start_zip, end_zip, year_month, period). Transitions touching a venue
// without a kept zip are discarded and counted. A venue id that appears in no
// venue record at all is a data integrity error.
AggregateResult aggregate_to_zip(std::span<const TransitionRecord> transitions,
                                 std::span<const VenueRecord> resolved,
                                 std::span<const std::string> unresolved_ids,
                                 const std::set<std::string>& kept,
                                 const AggregateOptions& options = {});

// --- composed pipeline --------------------------------------------------------

struct IngestReport {
    std::uint64_t venues_read = 0;
    std::uint64_t venues_unresolved = 0;
    std::uint64_t zips_total = 0;
    std::uint64_t zips_kept = 0;
    std::uint64_t transitions_read = 0;
    std::uint64_t checkins_total = 0;
    std::uint64_t checkins_dropped = 0;
};

struct IngestOptions {
    std::uint32_t min_venues = 10;
    ResolvePolicy policy = ResolvePolicy::drop;
    bool drop_self_loops = false;
};

// Everything downstream modules need about one city.
struct City {
    std::vector<VenueRecord> venues;          // resolved (zip set on every record)
    std::vector<std::string> unresolved_ids;
    std::set<std::string> kept_zips;
    std::vector<TransitionRecord> raw_transitions;
    std::vector<ZipTransition> zip_transitions;
    IngestReport report;
};

City run_ingest(const std::string& venues_path, const std::string& transitions_path,
                const std::string& zipmap_path, const IngestOptions& options = {});

}  // namespace areaflow::ingest
