#pragma once

// Gramian conditions for cones in a bilinear-form space, the Hodge-star cone
// construction from a Gramian, and the block Gramian of a facet-ray matrix.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "polyreal/lattice.hpp"
#include "polyreal/linalg.hpp"
#include "polyreal/realize.hpp"

namespace polyreal {

struct GramianCandidate {
    Matrix g;
    BilinearForm phi;
    IncidenceRelation relation;
    Index d = 0;
};

struct GramianOptions {
    double rank_tol = kDefaultRankTol;
    double diag_tol = 1e-9;
    double det_tol = 1e-10;       // relative to the Hadamard bound of the minor
    double det_zero_tol = 1e-8;   // "det = 0" band, relative to the same bound
    std::size_t pair_cap = 100'000;
    std::size_t sample_size = 10'000;
    std::uint64_t seed = 0;
    std::size_t flag_cap = kDefaultFlagCap;
    std::optional<int> orientation;
};

struct ConditionCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct GramianReport {
    std::vector<ConditionCheck> conditions;
    std::size_t pairs_total = 0;
    std::size_t pairs_checked = 0;
    bool sampled = false;

    bool ok() const
    {
        return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.passed; });
    }
    const ConditionCheck* find(std::string_view name) const
    {
        for (const auto& c : conditions)
            if (c.name == name)
                return &c;
        return nullptr;
    }
};

namespace detail {

    inline Matrix submatrix(const Matrix& g, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols)
    {
        Matrix s(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b)
                s(static_cast<Index>(a), static_cast<Index>(b)) = g(static_cast<Index>(rows[a]), static_cast<Index>(cols[b]));
        return s;
    }

    // Determinant together with the Hadamard bound of its rows (at least 1e-300).
    inline std::pair<double, double> scaled_det(const Matrix& s)
    {
        double bound = 1.0;
        for (Index r = 0; r < s.rows(); ++r)
            bound *= s.row(r).norm();
        return {s.determinant(), std::max(bound, 1e-300)};
    }

    inline std::string list(const std::vector<std::size_t>& v)
    {
        std::string out = "(";
        for (std::size_t k = 0; k < v.size(); ++k)
            out += (k ? "," : "") + std::to_string(v[k] + 1);
        return out + ")";
    }

    // Visits eligible unordered pairs (a <= b) exhaustively below the cap,
    // otherwise all pairs sharing a vertex plus a seeded random sample.
    template <class Eligible, class SameVertex, class Visit>
    void visit_pairs(std::size_t count, Eligible&& eligible, SameVertex&& same_vertex, Visit&& visit,
                     const GramianOptions& opts, GramianReport& rep)
    {
        std::size_t total = 0;
        for (std::size_t a = 0; a < count; ++a)
            for (std::size_t b = a; b < count; ++b)
                if (eligible(a, b))
                    ++total;
        rep.pairs_total += total;
        auto run = [&](std::size_t a, std::size_t b) {
            ++rep.pairs_checked;
            return visit(a, b);
        };
        if (total <= opts.pair_cap) {
            for (std::size_t a = 0; a < count; ++a)
                for (std::size_t b = a; b < count; ++b)
                    if (eligible(a, b) && !run(a, b))
                        return;
            return;
        }
        rep.sampled = true;
        for (std::size_t a = 0; a < count; ++a)
            for (std::size_t b = a; b < count; ++b)
                if (eligible(a, b) && same_vertex(a, b) && !run(a, b))
                    return;
        std::mt19937_64 gen(opts.seed);
        std::uniform_int_distribution<std::size_t> pick(0, count - 1);
        for (std::size_t s = 0, tries = 0; s < opts.sample_size && tries < 100 * opts.sample_size; ++tries) {
            auto a = pick(gen), b = pick(gen);
            if (a > b)
                std::swap(a, b);
            if (!eligible(a, b))
                continue;
            ++s;
            if (!run(a, b))
                return;
        }
    }

    inline ConditionCheck check_diagonal(const Matrix& g, const GramianOptions& opts, bool allow_negative)
    {
        ConditionCheck c{"diagonal", true, ""};
        for (Index i = 0; i < g.rows(); ++i) {
            const double v = g(i, i);
            const bool good = allow_negative ? std::abs(std::abs(v) - 1.0) <= opts.diag_tol
                                             : std::abs(v - 1.0) <= opts.diag_tol;
            if (!good) {
                c.passed = false;
                c.detail = "G(" + std::to_string(i + 1) + "," + std::to_string(i + 1) + ") = " + show(v);
                break;
            }
        }
        return c;
    }

    // Rank of the principal minor on the facets through each vertex; ideal
    // vertices (lightlike rays) expect one less.
    inline ConditionCheck check_vertex_rank(const Matrix& g, const IncidenceRelation& rel, Index d,
                                            const GramianOptions& opts, const std::vector<bool>& ideal = {})
    {
        ConditionCheck c{"vertex-rank", true, ""};
        for (std::size_t j = 0; j < rel.n_vertices(); ++j) {
            auto facets = to_indices(rel.vertex_column(j));
            const Index want = (j < ideal.size() && ideal[j]) ? d - 1 : d;
            const Index got = numeric_rank(submatrix(g, facets, facets), opts.rank_tol);
            if (got != want) {
                c.passed = false;
                c.detail = "vertex " + std::to_string(j + 1) + " minor on facets " + list(facets) + " has rank "
                         + std::to_string(got) + ", expected " + std::to_string(want);
                break;
            }
        }
        return c;
    }

    // det(G[I;J]) * sign > 0 over same-orientation super-cycle pairs.
    inline ConditionCheck check_super_cycles(const Matrix& g, const std::vector<SuperCycle>& cycles, double sign,
                                             const GramianOptions& opts, GramianReport& rep)
    {
        ConditionCheck c{"super-cycles", true, ""};
        visit_pairs(
            cycles.size(), [&](std::size_t a, std::size_t b) { return cycles[a].orientation == cycles[b].orientation; },
            [&](std::size_t a, std::size_t b) { return cycles[a].vertex == cycles[b].vertex; },
            [&](std::size_t a, std::size_t b) {
                auto [det, bound] = scaled_det(submatrix(g, cycles[a].facet_sequence, cycles[b].facet_sequence));
                if (det * sign > opts.det_tol * bound)
                    return true;
                c.passed = false;
                c.detail = "det G[" + list(cycles[a].facet_sequence) + ";" + list(cycles[b].facet_sequence)
                         + "] = " + show(det);
                return false;
            },
            opts, rep);
        return c;
    }

    struct LatticeContext {
        MaxbicliqueLattice lattice;
        FlagBipartition bipartition;
        std::vector<SuperCycle> super_cycles;
    };

    inline LatticeContext lattice_context(const IncidenceRelation& rel, const GramianOptions& opts)
    {
        auto lat = build_maxbiclique_lattice(rel);
        if (!check_diamond(lat))
            throw Error(ErrorCode::NotDiamond, "relation lattice violates the diamond condition");
        auto bip = flag_graph_bipartition(lat, opts.flag_cap);
        auto cycles = enumerate_super_cycles(lat, bip);
        return {std::move(lat), std::move(bip), std::move(cycles)};
    }

    inline void require_shapes(const Matrix& g, const IncidenceRelation& rel, Index dim)
    {
        if (static_cast<std::size_t>(g.rows()) != rel.n_facets() || g.rows() != g.cols())
            throw Error(ErrorCode::DimensionMismatch, "Gramian must be n x n for n facets");
        require_finite(g, "Gramian");
        require_symmetric(g, 1e-9, "Gramian");
        if (dim < 2)
            throw Error(ErrorCode::DimensionMismatch, "form dimension must be at least 2");
    }

    inline void require_lattice_rank(const MaxbicliqueLattice& lat, Index d)
    {
        if (*lat.rank() != static_cast<std::size_t>(d) + 1)
            throw Error(ErrorCode::DimensionMismatch, "lattice rank " + std::to_string(*lat.rank())
                                                          + " differs from d + 1 = " + std::to_string(d + 1));
    }

} // namespace detail

/// Signature match, diagonal +-1, per-vertex minor rank d and the
/// same-orientation super-cycle determinant condition.
inline GramianReport verify_gramian_conditions(const GramianCandidate& cand, const GramianOptions& opts = {})
{
    const auto& g = cand.g;
    const auto& rel = cand.relation;
    detail::require_shapes(g, rel, cand.phi.dim());
    if (cand.phi.dim() != cand.d + 1)
        throw Error(ErrorCode::DimensionMismatch, "form must act on R^{d+1}");
    auto ctx = detail::lattice_context(rel, opts);
    detail::require_lattice_rank(ctx.lattice, cand.d);

    GramianReport rep;
    const auto sg = relative_signature(g, opts.rank_tol);
    const auto sp = cand.phi.signature();
    ConditionCheck sig{"signature", true, ""};
    if (sg.positive != sp.positive || sg.negative != sp.negative) {
        sig.passed = false;
        sig.detail = "G has signature (" + std::to_string(sg.positive) + "," + std::to_string(sg.negative)
                   + "), form has (" + std::to_string(sp.positive) + "," + std::to_string(sp.negative) + ")";
    }
    rep.conditions.push_back(sig);
    rep.conditions.push_back(detail::check_diagonal(g, opts, true));
    rep.conditions.push_back(detail::check_vertex_rank(g, rel, cand.d, opts));
    const double sign = cand.phi.det() > 0 ? 1.0 : -1.0;
    rep.conditions.push_back(detail::check_super_cycles(g, ctx.super_cycles, sign, opts, rep));
    return rep;
}

/// Columns rescaled to |phi(h_i, h_i)| = 1; lightlike columns are rejected.
inline Matrix normalize_normals(const Matrix& h, const BilinearForm& phi, double tol = 1e-12)
{
    if (h.rows() != phi.dim())
        throw Error(ErrorCode::DimensionMismatch, "normals must live in the form's space");
    Matrix out = h;
    for (Index i = 0; i < h.cols(); ++i) {
        const double q = phi(h.col(i), h.col(i));
        if (!(std::abs(q) > tol * std::max(h.col(i).squaredNorm(), 1e-300)))
            throw Error(ErrorCode::LightlikeNormal, "normal " + std::to_string(i + 1) + " is lightlike");
        out.col(i) /= std::sqrt(std::abs(q));
    }
    return out;
}

/// G = H^T Phi H after normalizing the columns of H.
inline Matrix gramian_of_cone(const Matrix& h, const BilinearForm& phi)
{
    Matrix hn = normalize_normals(h, phi);
    return hn.transpose() * phi.matrix() * hn;
}

struct ConeRealization {
    Matrix h;  // (d+1) x n outward normals
    Matrix w;  // (d+1) x m generators
    Matrix n;  // (Phi H)^T W
    std::vector<SuperCycle> cycles;
    bool sign_flipped = false;
};

/// Factors G = H^T Phi H, sets w_j to the Hodge star of the normals along a
/// same-orientation cycle at each vertex and fixes the global sign so that N
/// is nonpositive.
inline ConeRealization realize_cone_from_gramian(const GramianCandidate& cand, const GramianOptions& opts = {},
                                                 const FillTolerances& tols = {})
{
    const auto& rel = cand.relation;
    detail::require_shapes(cand.g, rel, cand.phi.dim());
    auto lat = build_maxbiclique_lattice(rel);
    detail::require_lattice_rank(lat, cand.d);
    auto bip = flag_graph_bipartition(lat, opts.flag_cap);

    ConeRealization out;
    out.h = factor_against_form(cand.g, cand.phi, opts.rank_tol);
    out.cycles = enumerate_super_cycles_per_vertex(lat, bip, opts.orientation);
    const Index dim = cand.phi.dim();
    out.w = Matrix(dim, static_cast<Index>(rel.n_vertices()));
    for (const auto& sc : out.cycles) {
        auto cycle = sc.cycle();
        Matrix normals(dim, static_cast<Index>(cycle.size()));
        for (std::size_t k = 0; k < cycle.size(); ++k)
            normals.col(static_cast<Index>(k)) = out.h.col(static_cast<Index>(cycle[k]));
        out.w.col(static_cast<Index>(sc.vertex)) = hodge_star(normals, cand.phi);
    }
    out.n = (cand.phi.matrix() * out.h).transpose() * out.w;

    const double scale = std::max(1.0, max_abs(out.n));
    for (Index i = 0; i < out.n.rows() && !out.sign_flipped; ++i) {
        bool decided = false;
        for (Index j = 0; j < out.n.cols(); ++j) {
            if (std::abs(out.n(i, j)) > tols.eq_tol * scale) {
                if (out.n(i, j) > 0) {
                    out.w = -out.w;
                    out.n = -out.n;
                    out.sign_flipped = true;
                }
                decided = true;
                break;
            }
        }
        if (decided)
            break;
    }

    FillTolerances scaled{tols.eq_tol * scale, tols.slack_tol * scale};
    auto check = check_filled_incidence(out.n, rel, 0.0, scaled);
    if (!check.ok) {
        const auto& v = check.violations.front();
        throw Error(ErrorCode::PatternViolation, "N(" + std::to_string(v.facet + 1) + "," + std::to_string(v.vertex + 1)
                                                     + ") = " + std::to_string(v.value) + " breaks the fill-0 pattern");
    }
    if (numeric_rank(out.n, opts.rank_tol) != dim)
        throw Error(ErrorCode::PatternViolation, "N does not have rank d + 1");
    return out;
}

/// Gramian conditions for a spherical polytope (form = identity on R^{d+1}).
inline GramianReport verify_spherical_conditions(const IncidenceRelation& rel, const Matrix& g, Index d,
                                                 const GramianOptions& opts = {})
{
    detail::require_shapes(g, rel, d + 1);
    auto ctx = detail::lattice_context(rel, opts);
    detail::require_lattice_rank(ctx.lattice, d);
    GramianReport rep;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
    const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
    ConditionCheck psd{"psd", true, ""};
    if (eig.eigenvalues().minCoeff() < -opts.rank_tol * scale) {
        psd.passed = false;
        psd.detail = "smallest eigenvalue " + std::to_string(eig.eigenvalues().minCoeff());
    }
    rep.conditions.push_back(psd);
    ConditionCheck rank{"rank", true, ""};
    const auto r = numeric_rank(g, opts.rank_tol);
    if (r != d + 1) {
        rank.passed = false;
        rank.detail = "rank " + std::to_string(r) + ", expected " + std::to_string(d + 1);
    }
    rep.conditions.push_back(rank);
    rep.conditions.push_back(detail::check_diagonal(g, opts, false));
    rep.conditions.push_back(detail::check_vertex_rank(g, rel, d, opts));
    rep.conditions.push_back(detail::check_super_cycles(g, ctx.super_cycles, 1.0, opts, rep));
    return rep;
}

/// Gramian conditions for a finite-volume hyperbolic polytope with the given
/// ideal vertices, for the form diag(1, ..., 1, -1).
///   signature (d, 1); diagonal 1; per-vertex minor rank d (d - 1 at ideal
///   vertices); same-orientation super-cycle dets < 0; truncated cycles: every
///   s-subset (2 <= s <= d) of the facets through a face of lattice rank
///   d - s + 1 has det 0 if that face is an ideal vertex and det > 0 otherwise;
///   cycle pairs at different vertices with the same orientation have d x d
///   det > 0, so the generators lie in one time cone.
inline GramianReport verify_hyperbolic_conditions(const IncidenceRelation& rel, const std::vector<std::size_t>& ideal_vertices,
                                                  const Matrix& g, Index d, const GramianOptions& opts = {})
{
    detail::require_shapes(g, rel, d + 1);
    std::vector<bool> ideal(rel.n_vertices(), false);
    for (auto j : ideal_vertices) {
        if (j >= rel.n_vertices())
            throw Error(ErrorCode::DimensionMismatch, "ideal vertex " + std::to_string(j + 1) + " out of range");
        ideal[j] = true;
    }
    auto ctx = detail::lattice_context(rel, opts);
    const auto& lat = ctx.lattice;
    detail::require_lattice_rank(lat, d);
    GramianReport rep;

    const auto sg = relative_signature(g, opts.rank_tol);
    ConditionCheck sig{"signature", true, ""};
    if (sg.positive != d || sg.negative != 1) {
        sig.passed = false;
        sig.detail = "G has signature (" + std::to_string(sg.positive) + "," + std::to_string(sg.negative)
                   + "), expected (" + std::to_string(d) + ",1)";
    }
    rep.conditions.push_back(sig);
    rep.conditions.push_back(detail::check_diagonal(g, opts, false));
    rep.conditions.push_back(detail::check_vertex_rank(g, rel, d, opts, ideal));
    rep.conditions.push_back(detail::check_super_cycles(g, ctx.super_cycles, -1.0, opts, rep));

    ConditionCheck trunc{"truncated-cycles", true, ""};
    for (std::size_t a = 0; a < lat.size() && trunc.passed; ++a) {
        const auto rk = *lat.rank_of(a);
        if (rk < 1 || rk + 1 > static_cast<std::size_t>(d))
            continue;
        const auto s = static_cast<std::size_t>(d) + 1 - rk;  // 2 <= s <= d
        const auto facets = to_indices(lat.facet_bits(a));
        const auto& verts = lat.vertex_bits(a);
        const bool is_ideal = rk == 1 && verts.count() == 1 && ideal[verts.find_first()];
        if (facets.size() < s)
            continue;
        std::vector<bool> pick(facets.size(), false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(s), true);
        do {
            std::vector<std::size_t> subset;
            for (std::size_t k = 0; k < facets.size(); ++k)
                if (pick[k])
                    subset.push_back(facets[k]);
            auto [det, bound] = detail::scaled_det(detail::submatrix(g, subset, subset));
            const bool good = is_ideal ? std::abs(det) <= opts.det_zero_tol * bound : det > opts.det_zero_tol * bound;
            if (!good) {
                trunc.passed = false;
                trunc.detail = std::string(is_ideal ? "ideal" : "finite") + " face below facets " + detail::list(subset)
                             + " has det " + show(det);
                break;
            }
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    rep.conditions.push_back(trunc);

    // Distinct cycles (super cycles without their extra facet).
    struct Cycle {
        std::size_t vertex;
        std::vector<std::size_t> facets;
        int orientation;
    };
    std::vector<Cycle> cycles;
    for (const auto& sc : ctx.super_cycles) {
        Cycle c{sc.vertex, sc.cycle(), sc.orientation};
        auto same = [&](const Cycle& o) { return o.vertex == c.vertex && o.facets == c.facets; };
        if (std::none_of(cycles.begin(), cycles.end(), same))
            cycles.push_back(std::move(c));
    }
    ConditionCheck pairs{"cycle-pairs", true, ""};
    detail::visit_pairs(
        cycles.size(),
        [&](std::size_t a, std::size_t b) {
            return cycles[a].vertex != cycles[b].vertex && cycles[a].orientation == cycles[b].orientation;
        },
        [](std::size_t, std::size_t) { return false; },
        [&](std::size_t a, std::size_t b) {
            const auto& ca = cycles[a].facets;
            const auto& cb = cycles[b].facets;
            auto [det, bound] = detail::scaled_det(detail::submatrix(g, ca, cb));
            if (det > opts.det_tol * bound)
                return true;
            pairs.passed = false;
            pairs.detail = "det G[" + detail::list(ca) + ";" + detail::list(cb) + "] = " + show(det);
            return false;
        },
        opts, rep);
    rep.conditions.push_back(pairs);
    return rep;
}

/// [[sqrt(N N^T), N], [N^T, sqrt(N^T N)]].
inline Matrix block_gramian(const Matrix& n)
{
    if (n.size() == 0 || max_abs(n) == 0.0)
        throw Error(ErrorCode::ZeroMatrix, "block Gramian of a zero matrix");
    const Index rows = n.rows(), cols = n.cols();
    Matrix out(rows + cols, rows + cols);
    out.topLeftCorner(rows, rows) = sqrt_psd(n * n.transpose());
    out.topRightCorner(rows, cols) = n;
    out.bottomLeftCorner(cols, rows) = n.transpose();
    out.bottomRightCorner(cols, cols) = sqrt_psd(n.transpose() * n);
    return out;
}

} // namespace polyreal
