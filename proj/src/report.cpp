#include "inclab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "inclab/errors.hpp"

namespace inclab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << content;
}

void write_json(const std::string& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < header.size(); ++i)
        ss << (i ? "," : "") << csv_cell(header[i]);
    ss << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            ss << (i ? "," : "") << csv_cell(row[i]);
        ss << '\n';
    }
    write_text(path, ss.str());
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_digest(const std::string& path) { return fnv1a_hex(read_text(path)); }

void write_manifest(const std::string& path, const Manifest& m) {
    json j;
    j["subcommand"] = m.subcommand;
    j["params"] = m.params;
    j["seed"] = m.seed;
    j["version"] = m.version;
    json ins = json::array();
    for (const auto& f : m.inputs) ins.push_back({{"path", f}, {"digest", file_digest(f)}});
    json outs = json::array();
    for (const auto& f : m.outputs) outs.push_back({{"path", f}, {"digest", file_digest(f)}});
    j["inputs"] = ins;
    j["outputs"] = outs;
    j["wall_ms"] = m.wall_ms;
    write_json(path, j);
}

} // namespace inclab
