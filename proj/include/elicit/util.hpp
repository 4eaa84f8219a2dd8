#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace elicit::util {

// -- strings -----------------------------------------------------------------

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
// Collapses every run of whitespace (spaces, tabs, newlines) to a single
// space and trims the ends.
std::string collapse_whitespace(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
int word_count(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);
bool contains(std::string_view s, std::string_view needle);

// Lowercase hyphenated filesystem-safe identifier, [a-z0-9-]+, at most 80
// chars, never empty ("topic" if nothing survives).
std::string slugify(std::string_view text);

// -- hashing / rng -----------------------------------------------------------

uint64_t fnv1a64(std::string_view bytes, uint64_t basis = 14695981039346656037ULL);
uint64_t mix64(uint64_t x);  // splitmix64 finalizer
std::string to_hex(uint64_t v);

// Tiny deterministic generator for mock sampling (splitmix64 stream).
class SplitMix {
public:
    explicit SplitMix(uint64_t seed) : state_(seed) {}
    uint64_t next();
    // Uniform in [0, 1).
    double next_double();
    // Uniform integer in [0, n).
    uint64_t next_below(uint64_t n);

private:
    uint64_t state_;
};

// -- time / files ------------------------------------------------------------

std::string utc_now_iso8601();
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
// "fnv1a64:<16 hex>" digest of the file bytes.
std::string file_checksum(const std::string& path);

void log_warn(const std::string& msg);

}  // namespace elicit::util
