#pragma once

// Gale duals of cones and polytopes and minimum-norm formal combinations.

#include <string>

#include "polyreal/linalg.hpp"

namespace polyreal {

/// Linear relations among the generators of a cone. r_j = (I - N^+ N) e_j;
/// `coordinates` expresses each r_j in the orthonormal basis of null(N) given
/// by the trailing right singular vectors, in index order.
struct GaleDual {
    Index rank = 0;
    bool trivial = false;  // null(N) = 0, e.g. a simplicial cone
    Matrix projector;      // m x m, I - N^+ N
    Matrix basis;          // m x (m - rank), orthonormal
    Matrix coordinates;    // (m - rank) x m, column j is the vector of generator j

    /// r_j as a vector of length m.
    Vector r_vector(Index j) const { return projector.col(j); }
};

namespace detail {

    inline GaleDual gale_from_null_space(const Matrix& a, double rank_tol)
    {
        if (a.size() == 0 || max_abs(a) == 0.0)
            throw Error(ErrorCode::ZeroMatrix, "Gale dual of a zero matrix");
        require_finite(a, "matrix");
        auto svd = full_svd(a, rank_tol);
        const Index m = a.cols();
        GaleDual g;
        g.rank = svd.rank;
        g.basis = svd.v.rightCols(m - svd.rank);
        g.trivial = g.basis.cols() == 0;
        g.projector = g.basis * g.basis.transpose();
        g.coordinates = g.basis.transpose();
        return g;
    }

} // namespace detail

/// Gale dual of the cone with facet-ray matrix N.
inline GaleDual gale_dual_cone(const Matrix& n, double rank_tol = kDefaultRankTol)
{
    auto g = detail::gale_from_null_space(n, rank_tol);
    // The projector is formed as I - N^+ N; it agrees with basis * basis^T.
    g.projector = Matrix::Identity(n.cols(), n.cols()) - pseudoinverse(n, rank_tol) * n;
    return g;
}

/// Gale dual of a polytope from its facet-vertex matrix: relations of the
/// columns of M that also sum to zero, i.e. null([M; 1^T]).
inline GaleDual gale_dual_polytope(const Matrix& m, double rank_tol = kDefaultRankTol)
{
    Matrix lifted(m.rows() + 1, m.cols());
    lifted.topRows(m.rows()) = m;
    lifted.row(m.rows()).setOnes();
    return detail::gale_from_null_space(lifted, rank_tol);
}

/// x = N^+ v, the minimum-norm solution of N x = v.
inline Vector canonical_combination(const Matrix& n, const Vector& v, double tol = 1e-9)
{
    if (v.size() != n.rows())
        throw Error(ErrorCode::DimensionMismatch, "vector length differs from the row count");
    Vector x = pseudoinverse(n) * v;
    const double residual = (n * x - v).norm();
    if (residual > tol * std::max(1.0, v.norm()))
        throw Error(ErrorCode::NotInRange, "range residual " + show(residual));
    return x;
}

} // namespace polyreal
