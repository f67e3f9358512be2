#pragma once

// Result-table container and deterministic CSV/JSON emission. Both formats
// carry the same column data and the same config echo, and both render
// values rounded to 12 significant digits so reruns compare byte for byte.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "deh/smallmat.hpp"

namespace deh {

struct Table {
    std::vector<std::pair<std::string, std::string>> config;  // echoed into headers
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline void validate(const Table& t) {
    for (const auto& r : t.rows)
        if (r.size() != t.columns.size())
            throw config_error("table row width does not match its column count");
}

// 12 significant digits, scientific notation
inline std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

inline std::string emit_csv(const Table& t) {
    validate(t);
    std::string out;
    for (const auto& [key, value] : t.config) out += "# " + key + " = " + value + "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_value(row[c]);
        }
        out += '\n';
    }
    return out;
}

inline std::string emit_json(const Table& t) {
    validate(t);
    nlohmann::ordered_json j;
    auto& cfg = j["config"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : t.config) cfg[key] = value;
    j["columns"] = t.columns;
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        auto& out = rows.emplace_back(nlohmann::ordered_json::array());
        // round through the CSV rendering so both formats carry identical values
        for (double v : row) out.push_back(std::strtod(format_value(v).c_str(), nullptr));
    }
    return j.dump(2) + "\n";
}

// Writes through a sibling temporary file and renames it into place, so a
// failure never leaves a partial output behind.
inline void write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.empty()) throw config_error("output path is empty");
    const fs::path target(path);
    fs::path tmp(target);
    tmp += ".tmp";

    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    const bool wrote = static_cast<bool>(f);
    f.close();
    if (!wrote) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw io_error("failed while writing " + tmp.string());
    }

    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw io_error("cannot move output into place at " + path + ": " + ec.message());
    }
}

}  // namespace deh
