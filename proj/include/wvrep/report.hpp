#pragma once

// Tabular output. CSV: header always present, RFC 4180 quoting, doubles in
// scientific notation with 15 significant digits. JSON: array of row objects,
// doubles with 17 significant digits, non-finite values as null.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace wvrep {

using Cell = std::variant<std::monostate, std::string, long long, double>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw std::logic_error("Table::add: row width mismatch");
        rows.push_back(std::move(row));
    }
};

enum class Format { csv, json };

namespace report_detail {

inline std::string format_double(double v, int significant) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", significant - 1, v);
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

}  // namespace report_detail

inline void write_csv(std::ostream& os, const Table& t) {
    using namespace report_detail;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_quote(t.columns[i]);
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, std::string>) os << csv_quote(v);
                    else if constexpr (std::is_same_v<V, long long>) os << v;
                    else if constexpr (std::is_same_v<V, double>) os << format_double(v, 15);
                },
                row[i]);
        }
        os << "\n";
    }
}

inline void write_json(std::ostream& os, const Table& t) {
    using namespace report_detail;
    os << "[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        os << (r ? ",\n  {" : "\n  {");
        const auto& row = t.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? ", " : "") << nlohmann::json(t.columns[i]).dump() << ": ";
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, std::monostate>) os << "null";
                    else if constexpr (std::is_same_v<V, std::string>) os << nlohmann::json(v).dump();
                    else if constexpr (std::is_same_v<V, long long>) os << v;
                    else os << (std::isfinite(v) ? format_double(v, 17) : "null");
                },
                row[i]);
        }
        os << "}";
    }
    os << (t.rows.empty() ? "]\n" : "\n]\n");
}

inline void write_table(std::ostream& os, const Table& t, Format f) {
    if (f == Format::csv) write_csv(os, t);
    else write_json(os, t);
}

}  // namespace wvrep
