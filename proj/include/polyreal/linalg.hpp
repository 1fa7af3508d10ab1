#pragma once

// Dense linear algebra used by every numeric module: rank-revealing SVD,
// pseudoinverse, PSD square root, signature, factorization against a
// bilinear form and the metric Hodge star of d vectors in R^{d+1}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "polyreal/error.hpp"

namespace polyreal {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultRankTol = 1e-9;

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline void require_finite(const Matrix& m, const std::string& what)
{
    if (!m.allFinite())
        throw Error(ErrorCode::InvalidArgument, what + " has non-finite entries");
}

/// Compact SVD M = U diag(sigma) V^T truncated to the numeric rank.
struct Svd {
    Matrix u;
    Vector sigma;
    Matrix v;
    Index rank = 0;
};

/// Full SVD with square orthogonal U (n x n) and V (m x m).
struct FullSvd {
    Matrix u;
    Vector sigma;
    Matrix v;
    Index rank = 0;
};

inline Index rank_from_singular_values(const Vector& sigma, double rank_tol)
{
    if (sigma.size() == 0 || sigma(0) <= 0.0)
        return 0;
    const double cutoff = rank_tol * sigma(0);
    Index r = 0;
    while (r < sigma.size() && sigma(r) > cutoff)
        ++r;
    return r;
}

inline FullSvd full_svd(const Matrix& m, double rank_tol = kDefaultRankTol)
{
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    FullSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV(), 0};
    out.rank = rank_from_singular_values(out.sigma, rank_tol);
    return out;
}

/// Numeric rank: singular values above rank_tol * sigma_max. Zero for the zero matrix.
inline Index numeric_rank(const Matrix& m, double rank_tol = kDefaultRankTol)
{
    if (m.size() == 0)
        return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return rank_from_singular_values(svd.singularValues(), rank_tol);
}

inline Svd compact_svd(const Matrix& m, double rank_tol = kDefaultRankTol)
{
    if (m.size() == 0 || max_abs(m) == 0.0)
        throw Error(ErrorCode::ZeroMatrix, "compact SVD of a zero matrix");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto r = rank_from_singular_values(svd.singularValues(), rank_tol);
    return {svd.matrixU().leftCols(r), svd.singularValues().head(r), svd.matrixV().leftCols(r), r};
}

inline Matrix pseudoinverse(const Matrix& m, double rank_tol = kDefaultRankTol)
{
    if (m.size() == 0 || max_abs(m) == 0.0)
        return Matrix::Zero(m.cols(), m.rows());
    auto s = compact_svd(m, rank_tol);
    return s.v * s.sigma.cwiseInverse().asDiagonal() * s.u.transpose();
}

inline void require_symmetric(const Matrix& a, double rel_tol, const std::string& what)
{
    if (a.rows() != a.cols())
        throw Error(ErrorCode::DimensionMismatch, what + " is not square");
    const double scale = std::max(1.0, max_abs(a));
    if (max_abs(a - a.transpose()) > rel_tol * scale)
        throw Error(ErrorCode::NotSymmetric, what + " is not symmetric");
}

/// Symmetric PSD square root. Eigenvalues below -tol * |lambda|_max are
/// rejected. Eigenvalues at the eigensolver's noise floor are taken as zero:
/// their square roots would otherwise be of size sqrt(eps) * |lambda|_max^(1/2).
inline Matrix sqrt_psd(const Matrix& a, double tol = 1e-9)
{
    require_symmetric(a, 1e-9, "sqrt_psd input");
    Matrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    Vector lambda = eig.eigenvalues();
    const double scale = lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0;
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(lambda.size()) * scale;
    for (Index k = 0; k < lambda.size(); ++k) {
        if (lambda(k) < -tol * scale)
            throw Error(ErrorCode::NotPsd, "eigenvalue " + show(lambda(k)) + " is negative");
        lambda(k) = lambda(k) <= noise ? 0.0 : std::sqrt(lambda(k));
    }
    return eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
}

struct Signature {
    Index positive = 0;
    Index negative = 0;
    Index zero = 0;

    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Eigenvalue counts above tol, below -tol and inside [-tol, tol].
inline Signature signature(const Matrix& a, double tol)
{
    require_symmetric(a, 1e-9, "signature input");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
    Signature s;
    for (Index k = 0; k < eig.eigenvalues().size(); ++k) {
        const double l = eig.eigenvalues()(k);
        if (l > tol)
            ++s.positive;
        else if (l < -tol)
            ++s.negative;
        else
            ++s.zero;
    }
    return s;
}

/// Signature with the zero band scaled by the largest eigenvalue magnitude.
inline Signature relative_signature(const Matrix& a, double rel_tol)
{
    require_symmetric(a, 1e-9, "signature input");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
    const double scale = eig.eigenvalues().size() ? eig.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
    return signature(a, rel_tol * scale);
}

/// Nondegenerate symmetric bilinear form phi(x, y) = x^T Phi y.
class BilinearForm {
public:
    explicit BilinearForm(Matrix phi, double tol = 1e-12) : phi_(std::move(phi))
    {
        if (phi_.rows() != phi_.cols() || phi_.rows() == 0)
            throw Error(ErrorCode::DimensionMismatch, "bilinear form must be a nonempty square matrix");
        if (!(phi_ - phi_.transpose()).isZero(0.0))
            throw Error(ErrorCode::NotSymmetric, "bilinear form matrix is not symmetric");
        signature_ = relative_signature(phi_, tol);
        if (signature_.zero != 0)
            throw Error(ErrorCode::DegenerateForm, "bilinear form has a zero eigenvalue");
        det_ = phi_.determinant();
        inverse_ = phi_.inverse();
    }

    /// Standard inner product on R^dim, signature (dim, 0).
    static BilinearForm euclidean(Index dim) { return BilinearForm(Matrix::Identity(dim, dim)); }

    /// diag(1, ..., 1, -1) on R^dim, signature (dim - 1, 1).
    static BilinearForm lorentzian(Index dim)
    {
        Matrix phi = Matrix::Identity(dim, dim);
        phi(dim - 1, dim - 1) = -1.0;
        return BilinearForm(phi);
    }

    const Matrix& matrix() const noexcept { return phi_; }
    const Matrix& inverse() const noexcept { return inverse_; }
    Index dim() const noexcept { return phi_.rows(); }
    Signature signature() const noexcept { return signature_; }
    double det() const noexcept { return det_; }

    double operator()(const Vector& x, const Vector& y) const { return x.dot(phi_ * y); }

private:
    Matrix phi_;
    Matrix inverse_;
    Signature signature_;
    double det_ = 0.0;
};

/// Factors a symmetric n x n matrix G of the same signature as phi (plus
/// n - dim zero eigenvalues) as G = H^T Phi H with H of size dim x n.
/// Eigenvalues within tol * |lambda|_max of zero are treated as zero.
inline Matrix factor_against_form(const Matrix& g, const BilinearForm& phi, double tol = kDefaultRankTol)
{
    require_symmetric(g, 1e-9, "Gramian");
    const Index n = g.rows();
    const Index dim = phi.dim();
    Eigen::SelfAdjointEigenSolver<Matrix> eg(0.5 * (g + g.transpose()));
    const double scale = eg.eigenvalues().cwiseAbs().maxCoeff();
    Signature sg{};
    for (Index k = 0; k < n; ++k) {
        const double l = eg.eigenvalues()(k);
        if (l > tol * scale)
            ++sg.positive;
        else if (l < -tol * scale)
            ++sg.negative;
        else
            ++sg.zero;
    }
    const auto sp = phi.signature();
    if (sg.positive != sp.positive || sg.negative != sp.negative || sg.zero != n - dim)
        throw Error(ErrorCode::SignatureMismatch,
                    "Gramian signature (" + std::to_string(sg.positive) + "," + std::to_string(sg.negative)
                        + ") differs from form signature (" + std::to_string(sp.positive) + ","
                        + std::to_string(sp.negative) + ")");

    // G = B^T S B and Phi = C^T S C with S = diag(+-1); rows of B are matched to
    // rows of C by sign so that H = C^{-1} B.
    Eigen::SelfAdjointEigenSolver<Matrix> ep(phi.matrix());
    std::vector<Index> g_pos, g_neg;
    for (Index k = 0; k < n; ++k) {
        const double l = eg.eigenvalues()(k);
        if (l > tol * scale)
            g_pos.push_back(k);
        else if (l < -tol * scale)
            g_neg.push_back(k);
    }
    Matrix b(dim, n);
    std::size_t next_pos = 0, next_neg = 0;
    for (Index r = 0; r < dim; ++r) {
        const double mu = ep.eigenvalues()(r);
        const Index k = mu > 0 ? g_pos[next_pos++] : g_neg[next_neg++];
        b.row(r) = std::sqrt(std::abs(eg.eigenvalues()(k))) * eg.eigenvectors().col(k).transpose();
    }
    Matrix c_inv = ep.eigenvectors() * ep.eigenvalues().cwiseAbs().cwiseSqrt().cwiseInverse().asDiagonal();
    return c_inv * b;
}

/// Metric Hodge star of the d columns of `vectors` (a (d+1) x d matrix):
/// the unique v with phi(v, x) = star(x_1 ^ ... ^ x_d ^ x) for all x, where
/// the top-degree star is sqrt|det Phi| * det. Computed as
/// v = sqrt|det Phi| * Phi^{-1} c with c the signed cofactors of the last column.
inline Vector hodge_star(const Matrix& vectors, const BilinearForm& phi)
{
    const Index r = phi.dim();
    if (vectors.rows() != r || vectors.cols() != r - 1)
        throw Error(ErrorCode::DimensionMismatch, "hodge_star needs dim - 1 vectors of length dim");
    Vector c(r);
    Matrix minor(r - 1, r - 1);
    for (Index k = 0; k < r; ++k) {
        for (Index row = 0, out = 0; row < r; ++row) {
            if (row == k)
                continue;
            minor.row(out++) = vectors.row(row);
        }
        const double sign = ((k + r + 1) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{(k+1)+r}
        c(k) = sign * (r == 1 ? 1.0 : minor.determinant());
    }
    return std::sqrt(std::abs(phi.det())) * (phi.inverse() * c);
}

} // namespace polyreal
