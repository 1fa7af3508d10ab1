#pragma once

// End-to-end realizability decision: combinatorial gate, completion search and
// certificate re-verification.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyreal/complete.hpp"
#include "polyreal/lattice.hpp"
#include "polyreal/realize.hpp"

namespace polyreal {

enum class GateCondition { Degenerate, Graded, Rank, Diamond, FlagConnected, Irreducibles };

inline std::string_view to_string(GateCondition c)
{
    switch (c) {
    case GateCondition::Degenerate: return "nondegenerate";
    case GateCondition::Graded: return "graded";
    case GateCondition::Rank: return "rank";
    case GateCondition::Diamond: return "diamond";
    case GateCondition::FlagConnected: return "flag-connected";
    case GateCondition::Irreducibles: return "irreducibles";
    }
    return "unknown";
}

/// Outcome of the lattice conditions, evaluated in order until the first failure.
struct CombinatorialReport {
    std::optional<Degeneracy> degeneracy;
    std::size_t lattice_size = 0;
    bool graded = false;
    std::optional<std::size_t> rank;
    std::vector<std::size_t> rank_profile;
    std::optional<bool> rank_matches;
    std::optional<bool> diamond;
    std::optional<bool> flag_connected;
    std::optional<bool> irreducibles;
    std::optional<GateCondition> failure;
    std::string reason;

    bool passed() const noexcept { return !failure.has_value(); }
};

/// Runs the lattice conditions. With `d` set, the lattice rank must be d + 1.
inline CombinatorialReport combinatorial_gate(const IncidenceRelation& rel, std::optional<Index> d = std::nullopt)
{
    CombinatorialReport rep;
    auto fail = [&](GateCondition c, std::string why) {
        rep.failure = c;
        rep.reason = std::move(why);
        return rep;
    };
    rep.degeneracy = degeneracy(rel);
    if (rep.degeneracy)
        return fail(GateCondition::Degenerate, "degenerate relation: " + std::string(to_string(*rep.degeneracy)));
    auto lat = build_maxbiclique_lattice(rel);
    rep.lattice_size = lat.size();
    rep.graded = lat.graded();
    if (!rep.graded)
        return fail(GateCondition::Graded, "maxbiclique lattice is not graded");
    rep.rank = lat.rank();
    rep.rank_profile = lat.rank_profile();
    if (d) {
        rep.rank_matches = *rep.rank == static_cast<std::size_t>(*d) + 1;
        if (!*rep.rank_matches)
            return fail(GateCondition::Rank, "lattice rank " + std::to_string(*rep.rank) + " differs from d + 1 = "
                                                 + std::to_string(*d + 1));
    }
    rep.diamond = check_diamond(lat);
    if (!*rep.diamond)
        return fail(GateCondition::Diamond, "some rank-2 interval does not have 4 elements");
    std::size_t failed_at = 0;
    rep.flag_connected = check_flag_connected_local(lat, &failed_at);
    if (!*rep.flag_connected)
        return fail(GateCondition::FlagConnected, "lattice is not flag connected below element "
                                                      + std::to_string(failed_at));
    std::string why;
    rep.irreducibles = irreducibles_consistent(lat, &why);
    if (!*rep.irreducibles)
        return fail(GateCondition::Irreducibles, why);
    return rep;
}

struct RealizeOptions {
    double margin = 0.1;
    std::size_t max_restarts = 32;
    std::size_t max_iters = 2000;
    std::uint64_t seed = 0;
    double rank_tol = kDefaultRankTol;
    FillTolerances tolerances{};
    std::size_t grunbaum_cap = 12;
};

enum class VerdictKind { Realized, CombinatoriallyRejected, Inconclusive };

inline std::string_view to_string(VerdictKind k)
{
    switch (k) {
    case VerdictKind::Realized: return "realized";
    case VerdictKind::CombinatoriallyRejected: return "combinatorially-rejected";
    case VerdictKind::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

struct RealizabilityVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    Index d = 0;
    CombinatorialReport combinatorics;
    std::optional<Realization> realization;  // stored factors
    Matrix m;                                // H^T W as computed when accepted
    CompletionResult completion;
    double best_residual = 0.0;
    std::int64_t realization_space_dim = 0;
};

struct CertificateReport {
    bool ok = false;
    bool rank_ok = false;
    bool product_matches = false;
    FillCheck pattern;
    bool combinatorics_ok = false;
    std::optional<bool> grunbaum;  // unset above the vertex cap
    std::string reason;
};

/// Re-verifies a certificate from the stored factors alone.
inline CertificateReport verify_certificate(const IncidenceRelation& rel, const Realization& real, const Matrix& m,
                                            const RealizeOptions& opts = {})
{
    CertificateReport rep;
    Matrix product = facet_vertex_matrix(real.h, real.w);
    rep.product_matches = product.rows() == m.rows() && product.cols() == m.cols()
                       && max_abs(product - m) <= 1e-12 * std::max(1.0, max_abs(m));
    rep.rank_ok = numeric_rank(product, opts.rank_tol) == real.dim;
    rep.pattern = check_filled_incidence(product, rel, 1.0, opts.tolerances);
    rep.combinatorics_ok = combinatorial_gate(rel, real.dim).passed();
    if (rel.n_vertices() <= opts.grunbaum_cap) {
        GrunbaumOptions g;
        g.max_vertices = opts.grunbaum_cap;
        rep.grunbaum = grunbaum_oracle(real.w, build_maxbiclique_lattice(rel), g).ok;
    }
    rep.ok = rep.product_matches && rep.rank_ok && rep.pattern.ok && rep.combinatorics_ok && rep.grunbaum.value_or(true);
    if (!rep.product_matches)
        rep.reason = "stored matrix differs from H^T W";
    else if (!rep.rank_ok)
        rep.reason = "rank differs from d";
    else if (!rep.pattern.ok)
        rep.reason = "fill pattern violated";
    else if (!rep.combinatorics_ok)
        rep.reason = "lattice conditions fail";
    else if (rep.grunbaum && !*rep.grunbaum)
        rep.reason = "face oracle disagrees with the lattice";
    return rep;
}

/// Lattice gate then completion. Without `d` it is taken as lattice rank - 1.
/// The numeric phase never rejects: failures are Inconclusive.
inline RealizabilityVerdict realizability_check(const IncidenceRelation& rel, std::optional<Index> d = std::nullopt,
                                                const RealizeOptions& opts = {})
{
    RealizabilityVerdict v;
    v.combinatorics = combinatorial_gate(rel, d);
    if (!v.combinatorics.passed()) {
        v.kind = VerdictKind::CombinatoriallyRejected;
        v.d = d.value_or(0);
        return v;
    }
    v.d = d ? *d : static_cast<Index>(*v.combinatorics.rank) - 1;
    v.realization_space_dim = realization_space_dimension(rel, v.d);

    CompletionProblem problem{rel, v.d, opts.margin, opts.max_restarts, opts.max_iters, opts.seed, opts.rank_tol};
    v.completion = complete(problem);
    v.best_residual = v.completion.best_residual;
    if (!v.completion.found) {
        v.kind = VerdictKind::Inconclusive;
        return v;
    }
    Realization real{v.d, v.completion.h, v.completion.w, RealizationKind::Polytope};
    v.m = v.completion.m;
    if (!check_filled_incidence(v.m, rel, 1.0, opts.tolerances) || numeric_rank(v.m, opts.rank_tol) != v.d) {
        v.kind = VerdictKind::Inconclusive;
        return v;
    }
    v.realization = std::move(real);
    v.kind = VerdictKind::Realized;
    return v;
}

} // namespace polyreal
