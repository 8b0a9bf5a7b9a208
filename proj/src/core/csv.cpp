#include "core/csv.hpp"

#include <istream>
#include <ostream>

#include "core/error.hpp"

namespace areaflow::csv {

Reader::Reader(std::istream& in, std::string source_name) : in_(in), source_(std::move(source_name)) {}

bool Reader::next(std::vector<std::string>& fields) {
    fields.clear();
    std::string raw;
    // skip comment lines and blank lines between records
    for (;;) {
        if (!std::getline(in_, raw)) return false;
        ++line_;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        if (raw.rfind("# ", 0) == 0 || raw == "#") continue;
        break;
    }
    record_line_ = line_;

    std::string field;
    bool in_quotes = false;
    std::size_t i = 0;
    for (;;) {
        if (i >= raw.size()) {
            if (!in_quotes) break;
            // quoted field with an embedded newline: pull the next physical line
            std::string more;
            if (!std::getline(in_, more)) {
                throw_parse(source_, record_line_, "unterminated quoted field");
            }
            ++line_;
            if (!more.empty() && more.back() == '\r') more.pop_back();
            field += '\n';
            raw = std::move(more);
            i = 0;
            continue;
        }
        const char c = raw[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < raw.size() && raw[i + 1] == '"') {
                    field += '"';
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                field += c;
                ++i;
            }
        } else if (c == '"') {
            if (!field.empty()) {
                throw_parse(source_, record_line_, "quote inside unquoted field");
            }
            in_quotes = true;
            ++i;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            ++i;
        } else {
            field += c;
            ++i;
        }
    }
    fields.push_back(std::move(field));
    return true;
}

std::string escape(std::string_view field) {
    const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

}  // namespace areaflow::csv
