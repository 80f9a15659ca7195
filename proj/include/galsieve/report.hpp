#pragma once

// Tabular experiment output: CSV (header row, ',' separator, shortest
// round-trip doubles) and JSON {"config": ..., "rows": [...], "summary": ...}.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace galsieve {

using Cell = std::variant<std::int64_t, double, std::string>;

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

inline std::string format_cell(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
    if (const auto* d = std::get_if<double>(&c)) {
        // JSON has no infinities; keep them as strings.
        if (!std::isfinite(*d)) return format_double(*d);
        return *d;
    }
    return std::get<std::string>(c);
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> summary;

    void add_row(std::vector<Cell> row) {
        GALSIEVE_ASSERT(row.size() == columns.size(), "row width matches header");
        rows.push_back(std::move(row));
    }
    void add_summary(std::string key, Cell value) { summary.emplace_back(std::move(key), std::move(value)); }

    const Cell* find_summary(const std::string& key) const {
        for (const auto& [k, v] : summary)
            if (k == key) return &v;
        return nullptr;
    }
};

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
        os << '\n';
    }
}

/// Summary lines as "key,value", for a side channel next to the CSV body.
inline void write_summary_lines(std::ostream& os, const Table& t) {
    for (const auto& [k, v] : t.summary) os << k << ',' << format_cell(v) << '\n';
}

inline nlohmann::ordered_json to_json(const Table& t, const nlohmann::ordered_json& config) {
    nlohmann::ordered_json j;
    j["config"] = config;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r;
        for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
        j["rows"].push_back(std::move(r));
    }
    nlohmann::ordered_json s = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.summary) s[k] = cell_json(v);
    j["summary"] = std::move(s);
    return j;
}

inline void write_json(std::ostream& os, const Table& t, const nlohmann::ordered_json& config) {
    os << to_json(t, config).dump(2) << '\n';
}

inline std::string to_csv_string(const Table& t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

}  // namespace galsieve
