#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "polyreal/polyreal.hpp"

#ifndef POLYREAL_TEST_DATA
#define POLYREAL_TEST_DATA "tests/data"
#endif

namespace testing_support {

using namespace polyreal;

inline std::string data_path(const std::string& name) { return std::string(POLYREAL_TEST_DATA) + "/" + name; }

inline oracle::BoolMatrix to_bool_matrix(const IncidenceRelation& rel)
{
    oracle::BoolMatrix r(rel.n_facets(), std::vector<bool>(rel.n_vertices()));
    for (std::size_t i = 0; i < rel.n_facets(); ++i)
        for (std::size_t j = 0; j < rel.n_vertices(); ++j)
            r[i][j] = rel.incident(i, j);
    return r;
}

inline Matrix pyramid_matrix()
{
    Matrix m(5, 5);
    m << 1, 1, -3, -3, 1,
        -3, 1, 1, -3, 1,
        -3, -3, 1, 1, 1,
        1, -3, -3, 1, 1,
        1, 1, 1, 1, -1;
    return m;
}

inline Matrix square_matrix()
{
    Matrix m(4, 4);
    m << 1, 1, -1, -1,
        -1, 1, 1, -1,
        -1, -1, 1, 1,
        1, -1, -1, 1;
    return m;
}

inline IncidenceRelation octant() { return families::simplex(2); }

struct NamedRelation {
    std::string name;
    IncidenceRelation rel;
    Index d;
};

/// Polytopes whose completion is exercised end to end.
inline std::vector<NamedRelation> recovery_suite()
{
    std::vector<NamedRelation> out;
    for (std::size_t d = 1; d <= 4; ++d)
        out.push_back({"simplex-" + std::to_string(d), families::simplex(d), static_cast<Index>(d)});
    for (std::size_t d = 1; d <= 3; ++d)
        out.push_back({"cube-" + std::to_string(d), families::cube(d), static_cast<Index>(d)});
    for (std::size_t d = 2; d <= 3; ++d)
        out.push_back({"cross-" + std::to_string(d), families::cross_polytope(d), static_cast<Index>(d)});
    for (std::size_t n = 3; n <= 10; ++n)
        out.push_back({"polygon-" + std::to_string(n), families::polygon(n), 2});
    out.push_back({"square-pyramid", families::pyramid(4), 3});
    return out;
}

/// Graded diamond lattices of polytopes used for structural comparisons.
inline std::vector<NamedRelation> polytope_corpus()
{
    std::vector<NamedRelation> out;
    for (std::size_t d = 1; d <= 4; ++d)
        out.push_back({"simplex-" + std::to_string(d), families::simplex(d), static_cast<Index>(d)});
    for (std::size_t d = 2; d <= 3; ++d)
        out.push_back({"cube-" + std::to_string(d), families::cube(d), static_cast<Index>(d)});
    out.push_back({"octahedron", families::cross_polytope(3), 3});
    for (std::size_t n = 3; n <= 10; ++n)
        out.push_back({"polygon-" + std::to_string(n), families::polygon(n), 2});
    for (std::size_t n = 3; n <= 5; ++n)
        out.push_back({"pyramid-" + std::to_string(n), families::pyramid(n), 3});
    for (std::size_t n = 3; n <= 5; ++n)
        out.push_back({"prism-" + std::to_string(n), families::prism(n), 3});
    return out;
}

inline IncidenceRelation random_relation(std::mt19937_64& gen, std::size_t n, std::size_t m, double density)
{
    std::bernoulli_distribution coin(density);
    std::vector<IndexPair> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (coin(gen))
                pairs.emplace_back(i, j);
    return IncidenceRelation(n, m, std::move(pairs));
}

inline Matrix random_matrix(std::mt19937_64& gen, Index rows, Index cols)
{
    std::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r)
            m(r, c) = normal(gen);
    return m;
}

} // namespace testing_support
