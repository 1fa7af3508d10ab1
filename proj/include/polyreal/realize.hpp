#pragma once

// Filled incidence matrices, SVD realizations and the polytope <-> cone
// conversions between fill-1 and fill-0 matrices.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "polyreal/lattice.hpp"
#include "polyreal/linalg.hpp"
#include "polyreal/lp.hpp"
#include "polyreal/relation.hpp"

namespace polyreal {

struct FillTolerances {
    double eq_tol = 1e-7;     // |M_ij - fill| on incident pairs
    double slack_tol = 1e-7;  // M_ij < fill - slack_tol off the relation
};

struct EntryViolation {
    std::size_t facet = 0;
    std::size_t vertex = 0;
    double value = 0.0;
    bool incident = false;
};

struct FillCheck {
    bool ok = false;
    std::vector<EntryViolation> violations;
    double max_eq_error = 0.0;
    double min_slack = std::numeric_limits<double>::infinity();

    explicit operator bool() const noexcept { return ok; }
};

/// Checks that M equals `fill` on the relation and lies strictly below it elsewhere.
inline FillCheck check_filled_incidence(const Matrix& m, const IncidenceRelation& rel, double fill,
                                        const FillTolerances& tols = {})
{
    if (static_cast<std::size_t>(m.rows()) != rel.n_facets() || static_cast<std::size_t>(m.cols()) != rel.n_vertices())
        throw Error(ErrorCode::DimensionMismatch, "matrix is " + std::to_string(m.rows()) + "x"
                                                      + std::to_string(m.cols()) + ", relation is "
                                                      + std::to_string(rel.n_facets()) + "x"
                                                      + std::to_string(rel.n_vertices()));
    FillCheck out;
    for (std::size_t i = 0; i < rel.n_facets(); ++i) {
        for (std::size_t j = 0; j < rel.n_vertices(); ++j) {
            const double v = m(static_cast<Index>(i), static_cast<Index>(j));
            if (rel.incident(i, j)) {
                const double err = std::abs(v - fill);
                out.max_eq_error = std::max(out.max_eq_error, err);
                if (!(err <= tols.eq_tol))
                    out.violations.push_back({i, j, v, true});
            } else {
                const double slack = fill - v;
                out.min_slack = std::min(out.min_slack, slack);
                if (!(slack > tols.slack_tol))
                    out.violations.push_back({i, j, v, false});
            }
        }
    }
    out.ok = out.violations.empty();
    return out;
}

enum class RealizationKind { Polytope, Cone };

/// Covertices/cogenerators H (columns h_i) and vertices/generators W (columns
/// w_j) with M = H^T W. `dim` is d for polytopes and d + 1 for cones.
struct Realization {
    Index dim = 0;
    Matrix h;
    Matrix w;
    RealizationKind kind = RealizationKind::Polytope;
};

/// [M]_ij = <h_i, w_j>.
inline Matrix facet_vertex_matrix(const Matrix& h, const Matrix& w)
{
    if (h.rows() != w.rows())
        throw Error(ErrorCode::DimensionMismatch, "H has " + std::to_string(h.rows()) + " rows, W has "
                                                      + std::to_string(w.rows()));
    return h.transpose() * w;
}

/// H = Sigma^{1/2} U^T and W = Sigma^{1/2} V^T from the compact SVD of a rank-d M.
inline Realization realize_from_matrix(const Matrix& m, Index d, double rank_tol = kDefaultRankTol)
{
    auto svd = compact_svd(m, rank_tol);
    if (svd.rank != d)
        throw Error(ErrorCode::RankMismatch, "numeric rank " + std::to_string(svd.rank) + " but d = "
                                                 + std::to_string(d));
    Vector root = svd.sigma.cwiseSqrt();
    return {d, root.asDiagonal() * svd.u.transpose(), root.asDiagonal() * svd.v.transpose(),
            RealizationKind::Polytope};
}

/// N = M - 1. The rank must go up by exactly one.
inline Matrix polytope_to_cone_matrix(const Matrix& m, double rank_tol = kDefaultRankTol)
{
    const auto d = numeric_rank(m, rank_tol);
    Matrix n = m.array() - 1.0;
    const auto r = numeric_rank(n, rank_tol);
    if (r != d + 1)
        throw Error(ErrorCode::RankAnomaly, "rank(M) = " + std::to_string(d) + " but rank(M - 1) = "
                                                + std::to_string(r));
    return n;
}

struct ConeToPolytopeOptions {
    double rank_tol = kDefaultRankTol;
    double margin_tol = 1e-9;
};

/// M = D1 N D2 + 1 with D1 = diag(-Ux)^{-1}, D2 = diag(Vy)^{-1} and
/// <x, Sigma^{-1} y> = 1, from the compact SVD N = U Sigma V^T. x and y are
/// found by LP so that -Ux and Vy are entrywise positive.
inline Matrix cone_to_polytope_matrix(const Matrix& n, const ConeToPolytopeOptions& opts = {})
{
    auto svd = compact_svd(n, opts.rank_tol);
    const Index r = svd.rank;

    auto positive_combination = [&](const Matrix& basis, double sign) -> Vector {
        std::vector<LinearConstraint> strict;
        strict.reserve(static_cast<std::size_t>(basis.rows()));
        for (Index k = 0; k < basis.rows(); ++k)
            strict.push_back({-sign * basis.row(k).transpose(), 0.0});
        LpOptions lp;
        lp.margin_tol = opts.margin_tol;
        auto res = lp_strict_feasibility({}, strict, r, lp);
        if (!res.feasible)
            throw Error(ErrorCode::NoPositiveScaling, "no combination with entrywise positive image");
        return res.witness;
    };
    Vector x = positive_combination(svd.u, -1.0);  // -Ux > 0
    Vector y = positive_combination(svd.v, 1.0);   // Vy > 0

    const double pairing = x.dot(svd.sigma.cwiseInverse().asDiagonal() * y);
    if (!(pairing > 0.0) || !std::isfinite(pairing))
        throw Error(ErrorCode::NoPositiveScaling, "<x, Sigma^-1 y> = " + show(pairing)
                                                      + " cannot be normalized to 1");
    x /= pairing;
    Vector d1 = (-(svd.u * x)).cwiseInverse();
    Vector d2 = (svd.v * y).cwiseInverse();
    Matrix m = d1.asDiagonal() * n * d2.asDiagonal();
    m.array() += 1.0;
    return m;
}

struct GrunbaumOptions {
    std::size_t max_vertices = 12;
    double margin_tol = 1e-7;
};

struct GrunbaumReport {
    bool ok = false;
    std::size_t subsets_checked = 0;
    std::vector<Bits> face_without_plane;   // lattice face with no supporting plane
    std::vector<Bits> plane_without_face;   // supporting plane of a non-face

    explicit operator bool() const noexcept { return ok; }
};

/// For every nonempty proper subset F of the columns of W, an h with
/// <h, w_j> = 1 on F and < 1 off F exists iff F is in `faces`.
inline GrunbaumReport grunbaum_oracle(const Matrix& w, const std::vector<Bits>& faces,
                                      const GrunbaumOptions& opts = {})
{
    const auto m = static_cast<std::size_t>(w.cols());
    if (m > opts.max_vertices || m >= 63)
        throw Error(ErrorCode::CapExceeded, std::to_string(m) + " vertices exceed the oracle cap of "
                                                + std::to_string(opts.max_vertices));
    std::vector<Bits> sorted_faces = faces;
    std::sort(sorted_faces.begin(), sorted_faces.end());
    GrunbaumReport out;
    LpOptions lp;
    lp.margin_tol = opts.margin_tol;
    const std::uint64_t full = (std::uint64_t{1} << m) - 1;
    for (std::uint64_t mask = 1; mask < full; ++mask) {
        Bits subset(m);
        std::vector<LinearConstraint> eq, strict;
        for (std::size_t j = 0; j < m; ++j) {
            LinearConstraint con{w.col(static_cast<Index>(j)), 1.0};
            if ((mask >> j) & 1U) {
                subset.set(j);
                eq.push_back(std::move(con));
            } else {
                strict.push_back(std::move(con));
            }
        }
        const bool is_face = std::binary_search(sorted_faces.begin(), sorted_faces.end(), subset);
        const bool has_plane = lp_strict_feasibility(eq, strict, w.rows(), lp).feasible;
        ++out.subsets_checked;
        if (is_face && !has_plane)
            out.face_without_plane.push_back(subset);
        else if (!is_face && has_plane)
            out.plane_without_face.push_back(subset);
    }
    out.ok = out.face_without_plane.empty() && out.plane_without_face.empty();
    return out;
}

inline GrunbaumReport grunbaum_oracle(const Matrix& w, const MaxbicliqueLattice& lat, const GrunbaumOptions& opts = {})
{
    std::vector<Bits> faces;
    for (std::size_t a = 0; a < lat.size(); ++a)
        faces.push_back(lat.vertex_bits(a));
    return grunbaum_oracle(w, faces, opts);
}

/// d(n + m) - |R|.
inline std::int64_t realization_space_dimension(const IncidenceRelation& rel, Index d)
{
    return static_cast<std::int64_t>(d) * static_cast<std::int64_t>(rel.n_facets() + rel.n_vertices())
         - static_cast<std::int64_t>(rel.size());
}

} // namespace polyreal
