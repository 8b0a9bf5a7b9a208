#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace areaflow::csv {

// Streaming CSV reader, RFC-4180 style: quoted fields, "" escapes, embedded
// newlines, CRLF tolerated. Lines starting with "# " outside a record are
// treated as comments and skipped (used for metadata headers).
class Reader {
public:
    Reader(std::istream& in, std::string source_name);

    // Reads the next record into `fields`. Returns false at end of input.
    // Throws errc::parse on malformed quoting, with the record's line number.
    bool next(std::vector<std::string>& fields);

    // 1-based line number at which the last record returned by next() started.
    std::size_t record_line() const { return record_line_; }

    const std::string& source() const { return source_; }

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_ = 0;         // lines consumed so far
    std::size_t record_line_ = 0;  // line of last record
};

// Quotes a field if it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

void write_row(std::ostream& out, std::span<const std::string> fields);

}  // namespace areaflow::csv
