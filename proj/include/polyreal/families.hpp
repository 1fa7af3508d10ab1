#pragma once

// Facet-vertex relations of standard polytopes, used by tests and the CLI.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "polyreal/relation.hpp"

namespace polyreal::families {

/// d-simplex: facet i misses vertex i only.
inline IncidenceRelation simplex(std::size_t d)
{
    std::vector<std::vector<std::size_t>> rows(d + 1);
    for (std::size_t i = 0; i <= d; ++i)
        for (std::size_t j = 0; j <= d; ++j)
            if (i != j)
                rows[i].push_back(j);
    return IncidenceRelation::from_rows(d + 1, rows);
}

/// n-gon: edge k joins vertices k and k+1 (mod n).
inline IncidenceRelation polygon(std::size_t n)
{
    std::vector<std::vector<std::size_t>> rows(n);
    for (std::size_t k = 0; k < n; ++k)
        rows[k] = {k, (k + 1) % n};
    return IncidenceRelation::from_rows(n, rows);
}

/// d-cube: vertices are bit patterns of length d; facet 2k+b is {x : x_k = b}.
inline IncidenceRelation cube(std::size_t d)
{
    const std::size_t m = std::size_t{1} << d;
    std::vector<std::vector<std::size_t>> rows(2 * d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t v = 0; v < m; ++v)
            rows[2 * k + ((v >> k) & 1U)].push_back(v);
    return IncidenceRelation::from_rows(m, rows);
}

/// d-cross-polytope: vertex 2k+b is (-1)^b e_k; facet s (a sign pattern) holds
/// the vertex of each axis whose sign it picks.
inline IncidenceRelation cross_polytope(std::size_t d)
{
    const std::size_t n = std::size_t{1} << d;
    std::vector<std::vector<std::size_t>> rows(n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t k = 0; k < d; ++k)
            rows[s].push_back(2 * k + ((s >> k) & 1U));
    return IncidenceRelation::from_rows(2 * d, rows);
}

/// Pyramid over an n-gon: side k holds base vertices k, k+1 and the apex
/// (vertex n); the base is the last facet.
inline IncidenceRelation pyramid(std::size_t n)
{
    std::vector<std::vector<std::size_t>> rows(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
        rows[k] = {k, (k + 1) % n, n};
        rows[n].push_back(k);
    }
    for (auto& r : rows)
        std::sort(r.begin(), r.end());
    return IncidenceRelation::from_rows(n + 1, rows);
}

/// Prism over an n-gon: vertices k (bottom) and n+k (top); sides first, then
/// bottom and top.
inline IncidenceRelation prism(std::size_t n)
{
    std::vector<std::vector<std::size_t>> rows(n + 2);
    for (std::size_t k = 0; k < n; ++k) {
        auto k1 = (k + 1) % n;
        rows[k] = {k, k1, n + k, n + k1};
        std::sort(rows[k].begin(), rows[k].end());
        rows[n].push_back(k);
        rows[n + 1].push_back(n + k);
    }
    return IncidenceRelation::from_rows(2 * n, rows);
}

} // namespace polyreal::families
