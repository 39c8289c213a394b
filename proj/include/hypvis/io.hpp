#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypvis/sampler.hpp"

// File interfaces: the JSON schema of process samples and the CSV/JSON table
// format shared by the estimator outputs. Every artifact embeds the effective
// configuration so a run can be reproduced from the file alone.

namespace hypvis {

inline void to_json(nlohmann::json& j, const SimConfig& config) {
    j = nlohmann::json{{"d", config.d},
                       {"lambda", config.lambda},
                       {"gamma", config.gamma},
                       {"s_cutoff", config.s_cutoff},
                       {"n_max", config.n_max},
                       {"seed", config.seed}};
}

inline void from_json(const nlohmann::json& j, SimConfig& config) {
    j.at("d").get_to(config.d);
    j.at("lambda").get_to(config.lambda);
    j.at("gamma").get_to(config.gamma);
    j.at("s_cutoff").get_to(config.s_cutoff);
    j.at("n_max").get_to(config.n_max);
    j.at("seed").get_to(config.seed);
}

inline void to_json(nlohmann::json& j, const ProcessSample& sample) {
    nlohmann::json dirs = nlohmann::json::array();
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto u = sample.direction(i);
        dirs.push_back(std::vector<double>(u.begin(), u.end()));
    }
    j = nlohmann::json{
        {"config", sample.config},
        {"radii", sample.radii},
        {"dirs", std::move(dirs)},
        {"truncated_by",
         sample.truncated_by == Truncation::radius_cutoff ? "radius_cutoff" : "count_cap"}};
}

inline void from_json(const nlohmann::json& j, ProcessSample& sample) {
    j.at("config").get_to(sample.config);
    j.at("radii").get_to(sample.radii);
    sample.dirs.clear();
    for (const auto& row : j.at("dirs")) {
        if (static_cast<int>(row.size()) != sample.config.d) {
            throw std::invalid_argument("ProcessSample: direction arity does not match d");
        }
        for (const auto& v : row) sample.dirs.push_back(v.get<double>());
    }
    const std::string trunc = j.at("truncated_by").get<std::string>();
    if (trunc == "radius_cutoff") {
        sample.truncated_by = Truncation::radius_cutoff;
    } else if (trunc == "count_cap") {
        sample.truncated_by = Truncation::count_cap;
    } else {
        throw std::invalid_argument("ProcessSample: unknown truncation tag '" + trunc + "'");
    }
    if (sample.radii.size() * sample.config.d != sample.dirs.size()) {
        throw std::invalid_argument("ProcessSample: radii/direction length mismatch");
    }
}

/// Full-precision decimal form of a double (round-trips exactly).
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Tabular output carrying its own configuration echo. CSV puts the echo on
/// a leading '#' comment line; the JSON mirror nests it as an object.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json config_echo;
};

inline std::string table_to_csv(const Table& table) {
    std::string out = "# config " + table.config_echo.dump() + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i > 0) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

inline nlohmann::json table_to_json(const Table& table) {
    return nlohmann::json{
        {"config", table.config_echo}, {"columns", table.columns}, {"rows", table.rows}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace hypvis
