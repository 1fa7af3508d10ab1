#pragma once

// Relation JSON and matrix CSV formats.
//
//   relation: {"facets": n, "vertices": m, "incident": [[i, j], ...]}, 1-based
//   matrix:   one row per line, comma separated, 17 significant digits on write

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "polyreal/linalg.hpp"
#include "polyreal/relation.hpp"

namespace polyreal {

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw Error(ErrorCode::ParseError, "cannot write " + path);
}

inline IncidenceRelation parse_relation_json(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("relation JSON: ") + e.what());
    }
    auto count = [&](const char* key) -> std::size_t {
        if (!doc.is_object() || !doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 0)
            throw Error(ErrorCode::ParseError, std::string("relation JSON needs a nonnegative integer \"") + key + "\"");
        return doc[key].get<std::size_t>();
    };
    const auto n = count("facets");
    const auto m = count("vertices");
    if (!doc.contains("incident") || !doc["incident"].is_array())
        throw Error(ErrorCode::ParseError, "relation JSON needs an \"incident\" array");
    std::vector<IndexPair> pairs;
    for (const auto& p : doc["incident"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
            throw Error(ErrorCode::ParseError, "incident entries must be [facet, vertex] integer pairs");
        const auto i = p[0].get<long long>(), j = p[1].get<long long>();
        if (i < 1 || j < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(j) > m)
            throw Error(ErrorCode::InvalidRelation, "pair [" + std::to_string(i) + ", " + std::to_string(j)
                                                        + "] out of bounds");
        pairs.emplace_back(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
    }
    return IncidenceRelation(n, m, std::move(pairs));
}

/// Canonical form: keys in the order facets, vertices, incident; pairs sorted.
inline std::string relation_to_json(const IncidenceRelation& rel)
{
    nlohmann::ordered_json doc;
    doc["facets"] = rel.n_facets();
    doc["vertices"] = rel.n_vertices();
    doc["incident"] = nlohmann::ordered_json::array();
    for (auto [i, j] : rel.pairs())
        doc["incident"].push_back({i + 1, j + 1});
    return doc.dump() + "\n";
}

inline IncidenceRelation read_relation(const std::string& path) { return parse_relation_json(read_text_file(path)); }

inline Matrix parse_matrix_csv(std::string_view text)
{
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto end = text.find('\n');
        auto line = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos)
            continue;
        std::vector<double> row;
        std::size_t pos = 0;
        for (;;) {
            auto comma = line.find(',', pos);
            auto field = line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            auto first = field.find_first_not_of(" \t");
            auto last = field.find_last_not_of(" \t");
            if (first == std::string_view::npos)
                throw Error(ErrorCode::ParseError, "empty field on line " + std::to_string(line_no));
            field = field.substr(first, last - first + 1);
            if (!field.empty() && field.front() == '+')
                field.remove_prefix(1);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v))
                throw Error(ErrorCode::ParseError, "bad number '" + std::string(field) + "' on line "
                                                       + std::to_string(line_no));
            row.push_back(v);
            if (comma == std::string_view::npos)
                break;
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw Error(ErrorCode::ParseError, "ragged row on line " + std::to_string(line_no));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw Error(ErrorCode::ParseError, "matrix file has no rows");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    return m;
}

inline std::string format_number(double v)
{
    if (v == 0.0)
        v = 0.0;  // drop the sign of negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string matrix_to_csv(const Matrix& m)
{
    require_finite(m, "matrix");
    std::string out;
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            if (c)
                out += ',';
            out += format_number(m(r, c));
        }
        out += '\n';
    }
    return out;
}

inline Matrix read_matrix(const std::string& path) { return parse_matrix_csv(read_text_file(path)); }

inline void write_matrix(const std::string& path, const Matrix& m) { write_text_file(path, matrix_to_csv(m)); }

} // namespace polyreal
