#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "polyreal/error.hpp"
#include "polyreal/relation.hpp"

namespace polyreal {

/// A maximal induced biclique (I0, J0) of a relation; both parts sorted.
struct Maxbiclique {
    std::vector<std::size_t> facets;
    std::vector<std::size_t> vertices;

    friend bool operator==(const Maxbiclique&, const Maxbiclique&) = default;
};

/// Dedekind-MacNeille completion of a relation: all maxbicliques ordered by
/// containment of their vertex sets. Elements are stored in lexicographic
/// order of their sorted vertex sets, so the bottom (empty vertex set in a
/// nondegenerate relation) comes first but the top need not be last.
class MaxbicliqueLattice {
public:
    MaxbicliqueLattice(IncidenceRelation rel, std::vector<Bits> vertex_sets) : rel_(std::move(rel))
    {
        std::sort(vertex_sets.begin(), vertex_sets.end(), [](const Bits& a, const Bits& b) {
            return to_indices(a) < to_indices(b);
        });
        const auto k = vertex_sets.size();
        vbits_ = std::move(vertex_sets);
        fbits_.reserve(k);
        elements_.reserve(k);
        for (std::size_t a = 0; a < k; ++a) {
            fbits_.push_back(rel_.common_facets(vbits_[a]));
            elements_.push_back({to_indices(fbits_[a]), to_indices(vbits_[a])});
            index_.emplace(vbits_[a], a);
        }
        bottom_ = index_.at(rel_.closure(Bits(rel_.n_vertices())));
        Bits full(rel_.n_vertices());
        full.set();
        top_ = index_.at(full);
        build_covers();
        build_ranks();
    }

    const IncidenceRelation& relation() const noexcept { return rel_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const std::vector<Maxbiclique>& elements() const noexcept { return elements_; }
    const Maxbiclique& element(std::size_t a) const { return elements_.at(a); }
    const Bits& vertex_bits(std::size_t a) const { return vbits_.at(a); }
    const Bits& facet_bits(std::size_t a) const { return fbits_.at(a); }

    std::size_t bottom() const noexcept { return bottom_; }
    std::size_t top() const noexcept { return top_; }

    bool leq(std::size_t a, std::size_t b) const { return vbits_.at(a).is_subset_of(vbits_.at(b)); }
    bool less(std::size_t a, std::size_t b) const { return vbits_.at(a).is_proper_subset_of(vbits_.at(b)); }

    std::size_t meet(std::size_t a, std::size_t b) const { return index_.at(vbits_.at(a) & vbits_.at(b)); }
    std::size_t join(std::size_t a, std::size_t b) const
    {
        return index_.at(rel_.common_vertices(fbits_.at(a) & fbits_.at(b)));
    }

    /// Element whose vertex set is exactly `vertices`, if that set is closed.
    std::optional<std::size_t> index_of(const Bits& vertices) const
    {
        auto it = index_.find(vertices);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    /// Element generated by facet i (vertex set = vertices on facet i).
    std::size_t facet_element(std::size_t i) const { return index_.at(rel_.facet_row(i)); }
    /// Element generated by vertex j (closure of {j}).
    std::size_t vertex_element(std::size_t j) const
    {
        Bits v(rel_.n_vertices());
        v.set(j);
        return index_.at(rel_.closure(v));
    }

    const std::vector<std::size_t>& upper_covers(std::size_t a) const { return upper_.at(a); }
    const std::vector<std::size_t>& lower_covers(std::size_t a) const { return lower_.at(a); }

    bool graded() const noexcept { return graded_; }
    /// Rank of an element (number of elements below it in a flag); nullopt when not graded.
    std::optional<std::size_t> rank_of(std::size_t a) const
    {
        if (!graded_)
            return std::nullopt;
        return rank_.at(a);
    }
    std::optional<std::size_t> rank() const { return rank_of(top_); }

    /// Number of elements of each rank, bottom first. Empty when not graded.
    std::vector<std::size_t> rank_profile() const
    {
        if (!graded_)
            return {};
        std::vector<std::size_t> counts(rank_[top_] + 1, 0);
        for (auto r : rank_)
            ++counts[r];
        return counts;
    }

private:
    void build_covers()
    {
        const auto k = size();
        std::vector<std::size_t> by_size(k);
        std::iota(by_size.begin(), by_size.end(), 0);
        std::stable_sort(by_size.begin(), by_size.end(),
                         [&](std::size_t a, std::size_t b) { return vbits_[a].count() < vbits_[b].count(); });
        order_ = by_size;
        upper_.assign(k, {});
        lower_.assign(k, {});
        for (std::size_t a = 0; a < k; ++a) {
            std::vector<std::size_t> covers;
            for (auto b : by_size) {
                if (!vbits_[a].is_proper_subset_of(vbits_[b]))
                    continue;
                bool blocked = std::any_of(covers.begin(), covers.end(),
                                           [&](std::size_t c) { return vbits_[c].is_proper_subset_of(vbits_[b]); });
                if (!blocked)
                    covers.push_back(b);
            }
            std::sort(covers.begin(), covers.end());
            for (auto b : covers)
                lower_[b].push_back(a);
            upper_[a] = std::move(covers);
        }
        for (auto& l : lower_)
            std::sort(l.begin(), l.end());
    }

    void build_ranks()
    {
        const auto k = size();
        constexpr auto unset = static_cast<std::size_t>(-1);
        std::vector<std::size_t> lo(k, unset), hi(k, 0);
        lo[bottom_] = 0;
        for (auto a : order_) {
            if (lo[a] == unset)
                continue;
            for (auto b : upper_[a]) {
                lo[b] = std::min(lo[b], lo[a] + 1);
                hi[b] = std::max(hi[b], hi[a] + 1);
            }
        }
        graded_ = true;
        for (std::size_t a = 0; a < k; ++a)
            if (lo[a] != hi[a])
                graded_ = false;
        rank_ = std::move(lo);
    }

    IncidenceRelation rel_;
    std::vector<Maxbiclique> elements_;
    std::vector<Bits> vbits_;
    std::vector<Bits> fbits_;
    std::map<Bits, std::size_t> index_;
    std::vector<std::vector<std::size_t>> upper_, lower_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> rank_;
    std::size_t bottom_ = 0, top_ = 0;
    bool graded_ = false;
};

/// Enumerates all closed vertex sets with Ganter's NextClosure and wraps them
/// in a lattice. Works for any relation with at least one facet and vertex,
/// including degenerate ones.
inline MaxbicliqueLattice build_maxbiclique_lattice(const IncidenceRelation& rel)
{
    if (rel.n_facets() == 0 || rel.n_vertices() == 0)
        throw Error(ErrorCode::EmptyRelation, "relation needs at least one facet and one vertex");
    const auto m = rel.n_vertices();
    std::vector<Bits> closed;
    Bits current = rel.closure(Bits(m));
    closed.push_back(current);
    while (current.count() < m) {
        for (std::size_t step = 0; step < m; ++step) {
            const auto i = m - 1 - step;
            if (current.test(i)) {
                current.reset(i);
                continue;
            }
            Bits candidate = current;
            candidate.set(i);
            candidate = rel.closure(candidate);
            Bits added = candidate - current;
            if (added.find_first() >= i) {
                current = std::move(candidate);
                closed.push_back(current);
                break;
            }
        }
    }
    return MaxbicliqueLattice(rel, std::move(closed));
}

/// Lattice rank (rank of the top) or nullopt when the lattice is not graded.
inline std::optional<std::size_t> lattice_rank(const MaxbicliqueLattice& lat) { return lat.rank(); }

inline void require_graded(const MaxbicliqueLattice& lat)
{
    if (!lat.graded())
        throw Error(ErrorCode::NotGraded, "maxbiclique lattice is not graded");
}

/// Every interval [a, b] spanning two ranks has exactly four elements.
inline bool check_diamond(const MaxbicliqueLattice& lat)
{
    require_graded(lat);
    for (std::size_t a = 0; a < lat.size(); ++a) {
        const auto ra = *lat.rank_of(a);
        for (std::size_t b = 0; b < lat.size(); ++b) {
            if (*lat.rank_of(b) != ra + 2 || !lat.leq(a, b))
                continue;
            std::size_t middle = 0;
            for (auto c : lat.upper_covers(a))
                if (lat.leq(c, b))
                    ++middle;
            if (middle != 2)
                return false;
        }
    }
    return true;
}

/// Local flag connectivity: for every element of rank k >= 2, the elements it
/// covers, joined whenever their meet has rank k - 2, form a connected graph.
/// Returns the first element where the graph splits through `failed_at`.
inline bool check_flag_connected_local(const MaxbicliqueLattice& lat, std::size_t* failed_at = nullptr)
{
    require_graded(lat);
    if (!check_diamond(lat))
        throw Error(ErrorCode::NotDiamond, "maxbiclique lattice fails the diamond condition");
    for (std::size_t a = 0; a < lat.size(); ++a) {
        const auto k = *lat.rank_of(a);
        if (k < 2)
            continue;
        const auto& below = lat.lower_covers(a);
        std::vector<bool> seen(below.size(), false);
        std::deque<std::size_t> queue{0};
        seen[0] = true;
        std::size_t reached = 1;
        while (!queue.empty()) {
            auto u = queue.front();
            queue.pop_front();
            for (std::size_t v = 0; v < below.size(); ++v) {
                if (seen[v] || *lat.rank_of(lat.meet(below[u], below[v])) != k - 2)
                    continue;
                seen[v] = true;
                ++reached;
                queue.push_back(v);
            }
        }
        if (reached != below.size()) {
            if (failed_at)
                *failed_at = a;
            return false;
        }
    }
    return true;
}

/// Maximal chain of lattice elements from bottom to top.
struct Flag {
    std::vector<std::size_t> chain;

    friend bool operator==(const Flag&, const Flag&) = default;
    friend auto operator<=>(const Flag&, const Flag&) = default;
};

inline constexpr std::size_t kDefaultFlagCap = 1'000'000;

/// All flags in lexicographic order of their element-index chains.
inline std::vector<Flag> enumerate_flags(const MaxbicliqueLattice& lat, std::size_t cap = kDefaultFlagCap)
{
    std::vector<Flag> flags;
    std::vector<std::size_t> chain{lat.bottom()};
    auto visit = [&](auto&& self, std::size_t a) -> void {
        if (a == lat.top()) {
            if (flags.size() >= cap)
                throw Error(ErrorCode::FlagCapExceeded, "more than " + std::to_string(cap) + " flags");
            flags.push_back({chain});
            return;
        }
        for (auto b : lat.upper_covers(a)) {
            chain.push_back(b);
            self(self, b);
            chain.pop_back();
        }
    };
    visit(visit, lat.bottom());
    return flags;
}

/// Adjacency lists of the flag graph: flags are neighbors when they differ in
/// exactly one element. Flags must all have the same length.
inline std::vector<std::vector<std::size_t>> flag_graph(const std::vector<Flag>& flags)
{
    std::vector<std::vector<std::size_t>> adj(flags.size());
    if (flags.empty())
        return adj;
    const auto len = flags.front().chain.size();
    constexpr auto hole = static_cast<std::size_t>(-1);
    for (std::size_t p = 1; p + 1 < len; ++p) {
        std::map<std::vector<std::size_t>, std::vector<std::size_t>> buckets;
        for (std::size_t f = 0; f < flags.size(); ++f) {
            auto key = flags[f].chain;
            key[p] = hole;
            buckets[std::move(key)].push_back(f);
        }
        for (const auto& [key, members] : buckets)
            for (auto u : members)
                for (auto v : members)
                    if (u != v)
                        adj[u].push_back(v);
    }
    for (auto& a : adj)
        std::sort(a.begin(), a.end());
    return adj;
}

struct FlagBipartition {
    std::vector<Flag> flags;
    std::vector<int> color;  // 0 or 1, parallel to flags
    std::size_t components = 0;

    std::optional<int> class_of(const Flag& f) const
    {
        auto it = std::lower_bound(flags.begin(), flags.end(), f);
        if (it == flags.end() || !(*it == f))
            return std::nullopt;
        return color[static_cast<std::size_t>(it - flags.begin())];
    }
};

/// Two-coloring of the flag graph. Each connected component is colored from
/// its lexicographically first flag, which gets class 0.
inline FlagBipartition flag_graph_bipartition(const MaxbicliqueLattice& lat, std::size_t cap = kDefaultFlagCap)
{
    require_graded(lat);
    FlagBipartition out;
    out.flags = enumerate_flags(lat, cap);
    const auto adj = flag_graph(out.flags);
    out.color.assign(out.flags.size(), -1);
    for (std::size_t s = 0; s < out.flags.size(); ++s) {
        if (out.color[s] >= 0)
            continue;
        ++out.components;
        out.color[s] = 0;
        std::deque<std::size_t> queue{s};
        while (!queue.empty()) {
            auto u = queue.front();
            queue.pop_front();
            for (auto v : adj[u]) {
                if (out.color[v] < 0) {
                    out.color[v] = 1 - out.color[u];
                    queue.push_back(v);
                } else if (out.color[v] == out.color[u]) {
                    throw Error(ErrorCode::NotBipartite, "flag graph has an odd cycle");
                }
            }
        }
    }
    return out;
}

/// Flag induced by a sequence of facets: bottom, the successive meets
/// F1, F1^F2, ... listed upwards, top. Returns nullopt unless the
/// successive meets drop exactly one rank each time.
inline std::optional<Flag> induced_flag(const MaxbicliqueLattice& lat, const std::vector<std::size_t>& facets)
{
    if (!lat.graded() || facets.empty())
        return std::nullopt;
    std::vector<std::size_t> descending;
    auto current = lat.facet_element(facets.front());
    if (*lat.rank_of(current) + 1 != *lat.rank())
        return std::nullopt;
    descending.push_back(current);
    for (std::size_t k = 1; k < facets.size(); ++k) {
        auto next = lat.meet(current, lat.facet_element(facets[k]));
        if (*lat.rank_of(next) + 1 != *lat.rank_of(current))
            return std::nullopt;
        current = next;
        descending.push_back(current);
    }
    Flag flag;
    flag.chain.push_back(lat.bottom());
    flag.chain.insert(flag.chain.end(), descending.rbegin(), descending.rend());
    flag.chain.push_back(lat.top());
    return flag;
}

/// All cycles through vertex j: sequences of rank-1 facets (d = lattice rank - 1
/// of them) whose successive meets form a flag ending at the vertex. Listed in
/// lexicographic order.
inline std::vector<std::vector<std::size_t>> enumerate_cycles(const MaxbicliqueLattice& lat, std::size_t vertex)
{
    require_graded(lat);
    const auto& rel = lat.relation();
    const auto full_rank = *lat.rank();
    std::vector<std::vector<std::size_t>> cycles;
    if (full_rank < 2)
        return cycles;
    const auto d = full_rank - 1;
    const auto target = lat.vertex_element(vertex);
    const auto through = to_indices(rel.vertex_column(vertex));
    std::vector<std::size_t> seq;
    auto extend = [&](auto&& self, std::size_t current) -> void {
        if (seq.size() == d) {
            if (current == target)
                cycles.push_back(seq);
            return;
        }
        for (auto i : through) {
            auto next = seq.empty() ? lat.facet_element(i) : lat.meet(current, lat.facet_element(i));
            auto expected = seq.empty() ? d : *lat.rank_of(current) - 1;
            if (*lat.rank_of(next) != expected)
                continue;
            seq.push_back(i);
            self(self, next);
            seq.pop_back();
        }
    };
    extend(extend, lat.top());
    return cycles;
}

/// d facets meeting in a vertex plus one facet missing that vertex.
struct SuperCycle {
    std::size_t vertex = 0;
    std::vector<std::size_t> facet_sequence;  // d + 1 facets, the extra one last
    Flag induced_flag;
    int orientation = 0;

    std::vector<std::size_t> cycle() const
    {
        return {facet_sequence.begin(), facet_sequence.end() - 1};
    }
};

/// Every super cycle of the lattice (each cycle extended by each facet missing
/// its vertex), with orientation taken from `bip`.
inline std::vector<SuperCycle> enumerate_super_cycles(const MaxbicliqueLattice& lat, const FlagBipartition& bip)
{
    std::vector<SuperCycle> out;
    const auto& rel = lat.relation();
    for (std::size_t j = 0; j < rel.n_vertices(); ++j) {
        for (auto& cycle : enumerate_cycles(lat, j)) {
            auto flag = *induced_flag(lat, cycle);
            auto cls = bip.class_of(flag);
            for (std::size_t i = 0; i < rel.n_facets(); ++i) {
                if (rel.incident(i, j))
                    continue;
                SuperCycle sc{j, cycle, flag, cls.value_or(0)};
                sc.facet_sequence.push_back(i);
                out.push_back(std::move(sc));
            }
        }
    }
    return out;
}

/// One super cycle per vertex, all of the same orientation. For each vertex the
/// lexicographically smallest cycle of that orientation is extended by the
/// smallest facet missing the vertex. Without an explicit orientation, the
/// orientation of vertex 0's smallest cycle is used.
inline std::vector<SuperCycle> enumerate_super_cycles_per_vertex(const MaxbicliqueLattice& lat,
                                                                 const FlagBipartition& bip,
                                                                 std::optional<int> orientation = std::nullopt)
{
    require_graded(lat);
    const auto& rel = lat.relation();
    std::vector<SuperCycle> out;
    for (std::size_t j = 0; j < rel.n_vertices(); ++j) {
        std::optional<SuperCycle> chosen;
        for (auto& cycle : enumerate_cycles(lat, j)) {
            auto flag = *induced_flag(lat, cycle);
            auto cls = bip.class_of(flag);
            if (!cls)
                continue;
            if (!orientation)
                orientation = *cls;
            if (*cls != *orientation)
                continue;
            chosen = SuperCycle{j, cycle, flag, *cls};
            break;
        }
        if (!chosen)
            throw Error(ErrorCode::NoExtraFacet, "vertex " + std::to_string(j) + " has no cycle of orientation "
                                                     + std::to_string(orientation.value_or(0)));
        std::optional<std::size_t> extra;
        for (std::size_t i = 0; i < rel.n_facets() && !extra; ++i)
            if (!rel.incident(i, j))
                extra = i;
        if (!extra)
            throw Error(ErrorCode::NoExtraFacet, "vertex " + std::to_string(j) + " lies on every facet");
        chosen->facet_sequence.push_back(*extra);
        out.push_back(std::move(*chosen));
    }
    return out;
}

/// Facets must be distinct coatoms and vertices distinct atoms; otherwise the
/// lattice cannot be the face lattice with the relation's own index sets.
inline bool irreducibles_consistent(const MaxbicliqueLattice& lat, std::string* why = nullptr)
{
    if (!lat.graded())
        return false;
    const auto& rel = lat.relation();
    const auto top_rank = *lat.rank();
    std::vector<std::size_t> seen;
    for (std::size_t i = 0; i < rel.n_facets(); ++i) {
        auto e = lat.facet_element(i);
        if (*lat.rank_of(e) + 1 != top_rank || std::find(seen.begin(), seen.end(), e) != seen.end()) {
            if (why)
                *why = "facet " + std::to_string(i) + " is not a distinct coatom";
            return false;
        }
        seen.push_back(e);
    }
    seen.clear();
    for (std::size_t j = 0; j < rel.n_vertices(); ++j) {
        auto e = lat.vertex_element(j);
        if (*lat.rank_of(e) != 1 || lat.vertex_bits(e).count() != 1) {
            if (why)
                *why = "vertex " + std::to_string(j) + " is not a distinct atom";
            return false;
        }
    }
    return true;
}

} // namespace polyreal
