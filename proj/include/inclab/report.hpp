#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace inclab {

using json = nlohmann::json;

// Fixed-width double formatting so reports are byte-stable across runs and
// thread counts.
std::string format_double(double v);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);
void write_json(const std::string& path, const json& j);

// RFC-style CSV with a header row; cells holding commas or quotes are quoted.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// FNV-1a over the raw bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string file_digest(const std::string& path);

struct Manifest {
    std::string subcommand;
    json params;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    double wall_ms = 0; // informational; excluded from reproducibility checks
};

void write_manifest(const std::string& path, const Manifest& m);

} // namespace inclab
