#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace areaflow {

inline constexpr const char* kVersion = "0.1.0";

// FNV-1a 64-bit; used to fingerprint effective run configurations.
std::uint64_t fnv1a64(std::string_view data);

std::string hex64(std::uint64_t v);

// "version=<v> seed=<seed> config=<hash>" — embedded as a leading comment
// line in text outputs and as a "meta" object in JSON outputs.
std::string make_meta(std::uint64_t seed, std::string_view config_text);

// Shortest decimal form that round-trips a double exactly (17 significant digits).
std::string format_double(double v);

}  // namespace areaflow
