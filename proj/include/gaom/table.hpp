#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaom/errors.hpp"

namespace gaom {

/// Format a value with 12 significant digits in scientific notation
/// ('.' decimal separator, platform independent).
inline std::string format_number(double v) {
    if (v == 0.0) v = 0.0; // normalize -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

/// Rectangular text table: the common currency of every CLI emitter.
/// Cells are preformatted strings so that CSV and JSON renderings are
/// byte-deterministic.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells) {
        rows.push_back(std::move(cells));
    }
};

inline void write_csv(const Table& t, std::ostream& os) {
    for (std::size_t j = 0; j < t.columns.size(); ++j)
        os << (j ? "," : "") << t.columns[j];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j)
            os << (j ? "," : "") << row[j];
        os << '\n';
    }
}

inline void write_json(const Table& t, std::ostream& os) {
    nlohmann::json j;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    os << j.dump(2) << '\n';
}

inline std::string to_string(const Table& t, bool as_json) {
    std::ostringstream ss;
    if (as_json)
        write_json(t, ss);
    else
        write_csv(t, ss);
    return ss.str();
}

/// Parse a table previously produced by write_csv or write_json (detected
/// from the leading byte).
inline Table read_table_text(const std::string& text) {
    Table t;
    std::size_t start = text.find_first_not_of(" \t\r\n");
    if (start == std::string::npos)
        throw config_error("table: empty input");

    if (text[start] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
            t.columns = j.at("columns").get<std::vector<std::string>>();
            t.rows =
                j.at("rows").get<std::vector<std::vector<std::string>>>();
        } catch (const nlohmann::json::exception& e) {
            throw config_error(std::string("table: ") + e.what());
        }
        return t;
    }

    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (header) {
            t.columns = std::move(cells);
            header = false;
        } else {
            if (cells.size() != t.columns.size())
                throw config_error("table: row width differs from header");
            t.rows.push_back(std::move(cells));
        }
    }
    if (t.columns.empty()) throw config_error("table: missing header row");
    return t;
}

inline Table read_table_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("table: cannot open file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_table_text(ss.str());
}

/// Index of a named column, if present.
inline std::optional<std::size_t> find_column(const Table& t,
                                              const std::string& name) {
    for (std::size_t j = 0; j < t.columns.size(); ++j)
        if (t.columns[j] == name) return j;
    return std::nullopt;
}

} // namespace gaom
