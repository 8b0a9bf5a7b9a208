#include "core/meta.hpp"

#include <cstdio>

namespace areaflow {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string make_meta(std::uint64_t seed, std::string_view config_text) {
    std::string out = "version=";
    out += kVersion;
    out += " seed=" + std::to_string(seed);
    out += " config=" + hex64(fnv1a64(config_text));
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace areaflow
