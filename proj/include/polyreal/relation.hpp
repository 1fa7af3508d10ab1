#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "polyreal/error.hpp"

namespace polyreal {

using Bits = boost::dynamic_bitset<>;
using IndexPair = std::pair<std::size_t, std::size_t>;

inline std::vector<std::size_t> to_indices(const Bits& bits)
{
    std::vector<std::size_t> out;
    out.reserve(bits.count());
    for (auto k = bits.find_first(); k != Bits::npos; k = bits.find_next(k))
        out.push_back(k);
    return out;
}

inline Bits to_bits(std::size_t size, const std::vector<std::size_t>& indices)
{
    Bits bits(size);
    for (auto k : indices)
        bits.set(k);
    return bits;
}

/// Boolean facet-vertex incidence between rows I = [0, n_facets) and columns
/// J = [0, n_vertices). Indices are zero-based; the JSON format is one-based.
class IncidenceRelation {
public:
    IncidenceRelation() = default;

    IncidenceRelation(std::size_t n_facets, std::size_t n_vertices, std::vector<IndexPair> pairs)
        : rows_(n_facets, Bits(n_vertices)), cols_(n_vertices, Bits(n_facets))
    {
        for (auto [i, j] : pairs) {
            if (i >= n_facets || j >= n_vertices)
                throw Error(ErrorCode::InvalidRelation, "pair (" + std::to_string(i) + ", " + std::to_string(j)
                                                            + ") out of bounds");
            if (rows_[i].test(j))
                throw Error(ErrorCode::InvalidRelation, "duplicate pair (" + std::to_string(i) + ", "
                                                            + std::to_string(j) + ")");
            rows_[i].set(j);
            cols_[j].set(i);
        }
    }

    /// Facet i is incident to the vertices listed in rows[i].
    static IncidenceRelation from_rows(std::size_t n_vertices, const std::vector<std::vector<std::size_t>>& rows)
    {
        std::vector<IndexPair> pairs;
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (auto j : rows[i])
                pairs.emplace_back(i, j);
        return IncidenceRelation(rows.size(), n_vertices, std::move(pairs));
    }

    std::size_t n_facets() const noexcept { return rows_.size(); }
    std::size_t n_vertices() const noexcept { return cols_.size(); }

    bool incident(std::size_t i, std::size_t j) const { return rows_.at(i).test(j); }

    /// Vertices on facet i.
    const Bits& facet_row(std::size_t i) const { return rows_.at(i); }
    /// Facets through vertex j.
    const Bits& vertex_column(std::size_t j) const { return cols_.at(j); }

    std::size_t size() const
    {
        std::size_t total = 0;
        for (const auto& row : rows_)
            total += row.count();
        return total;
    }

    /// Lexicographically sorted pair list.
    std::vector<IndexPair> pairs() const
    {
        std::vector<IndexPair> out;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (auto j : to_indices(rows_[i]))
                out.emplace_back(i, j);
        return out;
    }

    IncidenceRelation transpose() const
    {
        IncidenceRelation t;
        t.rows_ = cols_;
        t.cols_ = rows_;
        return t;
    }

    IncidenceRelation without(std::size_t i, std::size_t j) const
    {
        IncidenceRelation r = *this;
        r.rows_.at(i).reset(j);
        r.cols_.at(j).reset(i);
        return r;
    }

    /// Vertices common to every facet in `facets` (all vertices for the empty set).
    Bits common_vertices(const Bits& facets) const
    {
        Bits out(n_vertices());
        out.set();
        for (auto i = facets.find_first(); i != Bits::npos; i = facets.find_next(i))
            out &= rows_[i];
        return out;
    }

    /// Facets containing every vertex in `vertices` (all facets for the empty set).
    Bits common_facets(const Bits& vertices) const
    {
        Bits out(n_facets());
        out.set();
        for (auto j = vertices.find_first(); j != Bits::npos; j = vertices.find_next(j))
            out &= cols_[j];
        return out;
    }

    /// Galois closure on the vertex side.
    Bits closure(const Bits& vertices) const { return common_vertices(common_facets(vertices)); }

    friend bool operator==(const IncidenceRelation& a, const IncidenceRelation& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_;
    }

private:
    std::vector<Bits> rows_;
    std::vector<Bits> cols_;
};

/// Block-diagonal union: facets and vertices of `b` are appended after those of `a`.
inline IncidenceRelation disjoint_union(const IncidenceRelation& a, const IncidenceRelation& b)
{
    auto pairs = a.pairs();
    for (auto [i, j] : b.pairs())
        pairs.emplace_back(i + a.n_facets(), j + a.n_vertices());
    return IncidenceRelation(a.n_facets() + b.n_facets(), a.n_vertices() + b.n_vertices(), std::move(pairs));
}

enum class Degeneracy {
    Empty,        // no facets, no vertices, or no incident pairs
    Singleton,    // exactly one incident pair
    FullFacet,    // some facet contains every vertex
    FullVertex,   // some vertex lies on every facet
};

inline std::string_view to_string(Degeneracy d)
{
    switch (d) {
    case Degeneracy::Empty: return "empty";
    case Degeneracy::Singleton: return "singleton";
    case Degeneracy::FullFacet: return "facet-contains-all-vertices";
    case Degeneracy::FullVertex: return "vertex-on-all-facets";
    }
    return "unknown";
}

/// Inputs rejected before any lattice analysis. Returns nullopt for usable relations.
inline std::optional<Degeneracy> degeneracy(const IncidenceRelation& rel)
{
    if (rel.n_facets() == 0 || rel.n_vertices() == 0)
        return Degeneracy::Empty;
    auto count = rel.size();
    if (count == 0)
        return Degeneracy::Empty;
    if (count == 1)
        return Degeneracy::Singleton;
    for (std::size_t i = 0; i < rel.n_facets(); ++i)
        if (rel.facet_row(i).all())
            return Degeneracy::FullFacet;
    for (std::size_t j = 0; j < rel.n_vertices(); ++j)
        if (rel.vertex_column(j).all())
            return Degeneracy::FullVertex;
    return std::nullopt;
}

} // namespace polyreal
