#pragma once

// Independent reference implementations used only by the tests. They avoid
// the library's data structures and algorithms on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using BoolMatrix = std::vector<std::vector<bool>>;  // [facet][vertex]

struct Concept {
    std::vector<std::size_t> facets;
    std::vector<std::size_t> vertices;
    friend bool operator<(const Concept& a, const Concept& b) { return a.vertices < b.vertices; }
    friend bool operator==(const Concept& a, const Concept& b)
    {
        return a.vertices == b.vertices && a.facets == b.facets;
    }
};

/// All maximal bicliques by enumerating every subset of the smaller side and
/// testing maximality directly from the definition.
inline std::vector<Concept> brute_force_maxbicliques(const BoolMatrix& r, std::size_t n, std::size_t m)
{
    std::set<Concept> out;
    const bool by_facets = n <= m;
    const std::size_t side = by_facets ? n : m;
    const std::size_t other = by_facets ? m : n;
    auto inc = [&](std::size_t s, std::size_t o) { return by_facets ? r[s][o] : r[o][s]; };
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << side); ++mask) {
        std::vector<std::size_t> a, b;
        for (std::size_t s = 0; s < side; ++s)
            if ((mask >> s) & 1U)
                a.push_back(s);
        for (std::size_t o = 0; o < other; ++o) {
            bool all = true;
            for (auto s : a)
                all = all && inc(s, o);
            if (all)
                b.push_back(o);
        }
        bool maximal = true;
        for (std::size_t s = 0; s < side && maximal; ++s) {
            if ((mask >> s) & 1U)
                continue;
            bool all = true;
            for (auto o : b)
                all = all && inc(s, o);
            if (all)
                maximal = false;
        }
        if (!maximal)
            continue;
        Concept c;
        c.facets = by_facets ? a : b;
        c.vertices = by_facets ? b : a;
        out.insert(c);
    }
    return {out.begin(), out.end()};
}

inline bool subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Poset of concepts ordered by vertex-set inclusion, with covers and maximal chains.
struct Poset {
    std::vector<Concept> elems;
    std::vector<std::vector<std::size_t>> up;  // covers
    std::size_t bottom = 0, top = 0;

    explicit Poset(std::vector<Concept> e) : elems(std::move(e)), up(elems.size())
    {
        const auto k = elems.size();
        auto lt = [&](std::size_t a, std::size_t b) {
            return a != b && subset(elems[a].vertices, elems[b].vertices) && elems[a].vertices != elems[b].vertices;
        };
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                if (!lt(a, b))
                    continue;
                bool cover = true;
                for (std::size_t c = 0; c < k && cover; ++c)
                    if (lt(a, c) && lt(c, b))
                        cover = false;
                if (cover)
                    up[a].push_back(b);
            }
        for (std::size_t a = 0; a < k; ++a) {
            bool is_bottom = true, is_top = true;
            for (std::size_t b = 0; b < k; ++b) {
                if (lt(b, a))
                    is_bottom = false;
                if (lt(a, b))
                    is_top = false;
            }
            if (is_bottom)
                bottom = a;
            if (is_top)
                top = a;
        }
    }

    std::vector<std::vector<std::size_t>> chains() const
    {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> cur{bottom};
        auto rec = [&](auto&& self, std::size_t a) -> void {
            if (a == top) {
                out.push_back(cur);
                return;
            }
            for (auto b : up[a]) {
                cur.push_back(b);
                self(self, b);
                cur.pop_back();
            }
        };
        rec(rec, bottom);
        return out;
    }
};

/// Connected components and bipartiteness of the flag graph built by comparing
/// every pair of flags position by position.
struct FlagGraphFacts {
    std::size_t flags = 0;
    std::size_t components = 0;
    bool bipartite = true;
    bool regular = true;  // every flag has len - 2 neighbors
};

inline FlagGraphFacts flag_graph_facts(const std::vector<std::vector<std::size_t>>& flags)
{
    FlagGraphFacts f;
    f.flags = flags.size();
    const auto k = flags.size();
    std::vector<std::vector<std::size_t>> adj(k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) {
            if (flags[a].size() != flags[b].size())
                continue;
            std::size_t diff = 0;
            for (std::size_t p = 0; p < flags[a].size(); ++p)
                diff += flags[a][p] != flags[b][p];
            if (diff == 1) {
                adj[a].push_back(b);
                adj[b].push_back(a);
            }
        }
    for (std::size_t a = 0; a < k; ++a)
        if (adj[a].size() + 2 != flags[a].size())
            f.regular = false;
    std::vector<int> color(k, -1);
    for (std::size_t s = 0; s < k; ++s) {
        if (color[s] >= 0)
            continue;
        ++f.components;
        color[s] = 0;
        std::deque<std::size_t> q{s};
        while (!q.empty()) {
            auto u = q.front();
            q.pop_front();
            for (auto v : adj[u]) {
                if (color[v] < 0) {
                    color[v] = 1 - color[u];
                    q.push_back(v);
                } else if (color[v] == color[u]) {
                    f.bipartite = false;
                }
            }
        }
    }
    return f;
}

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
inline std::size_t bareiss_rank(std::vector<std::vector<long long>> a)
{
    const std::size_t rows = a.size();
    if (rows == 0)
        return 0;
    const std::size_t cols = a[0].size();
    std::vector<std::vector<__int128>> m(rows, std::vector<__int128>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m[i][j] = a[i][j];
    __int128 prev = 1;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv][c] == 0)
            ++piv;
        if (piv == rows)
            continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j)
                m[i][j] = (m[i][j] * m[rank][c] - m[i][c] * m[rank][j]) / prev;
            m[i][c] = 0;
        }
        prev = m[rank][c];
        ++rank;
    }
    return rank;
}

/// Determinant by the Leibniz permutation expansion.
inline double leibniz_det(const Eigen::MatrixXd& a)
{
    const auto n = static_cast<std::size_t>(a.rows());
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    double total = 0.0;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                inversions += p[i] > p[j];
        double term = (inversions % 2) ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i)
            term *= a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p[i]));
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

/// Central finite-difference gradient of f at x.
template <class F>
Eigen::VectorXd central_difference(F&& f, const Eigen::VectorXd& x, double step)
{
    Eigen::VectorXd g(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        Eigen::VectorXd xp = x, xm = x;
        xp(k) += step;
        xm(k) -= step;
        g(k) = (f(xp) - f(xm)) / (2.0 * step);
    }
    return g;
}

} // namespace oracle
