#pragma once

// Heuristic search for a rank-d filled 1-incidence matrix M = H^T W of a
// relation. Restarts run in order; the first accepted matrix is returned.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "polyreal/linalg.hpp"
#include "polyreal/realize.hpp"
#include "polyreal/relation.hpp"

namespace polyreal {

struct CompletionProblem {
    IncidenceRelation relation;
    Index d = 1;
    double margin = 0.1;  // off-relation target is 1 - margin
    std::size_t max_restarts = 32;
    std::size_t max_iters = 2000;
    std::uint64_t seed = 0;
    double rank_tol = kDefaultRankTol;

    void validate() const
    {
        if (d < 1)
            throw Error(ErrorCode::InvalidArgument, "d must be at least 1");
        if (!(margin > 0.0 && margin < 1.0))
            throw Error(ErrorCode::InvalidArgument, "margin must lie in (0, 1)");
        if (relation.n_facets() == 0 || relation.n_vertices() == 0)
            throw Error(ErrorCode::EmptyRelation, "completion of an empty relation");
    }
};

struct CompletionResult {
    bool found = false;
    Matrix h;  // d x n, columns are covertices
    Matrix w;  // d x m, columns are vertices
    Matrix m;  // H^T W
    double best_residual = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    std::size_t restart = 0;
    std::size_t restarts_run = 0;
    std::vector<double> residual_history;  // best loss after each restart
};

struct Factors {
    Matrix h;
    Matrix w;
};

/// Restart 0: rank-d truncation of the +-1 sign matrix. Later restarts:
/// i.i.d. N(0, 1/d) entries from a generator seeded by (seed, restart).
inline Factors initialize_factors(const CompletionProblem& problem, std::size_t restart_index)
{
    const auto& rel = problem.relation;
    const auto n = static_cast<Index>(rel.n_facets());
    const auto m = static_cast<Index>(rel.n_vertices());
    const Index d = problem.d;
    Factors f{Matrix::Zero(d, n), Matrix::Zero(d, m)};
    if (restart_index == 0) {
        Matrix s(n, m);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < m; ++j)
                s(i, j) = rel.incident(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) ? 1.0 : -1.0;
        Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Index k = std::min<Index>(d, svd.singularValues().size());
        Vector root = svd.singularValues().head(k).cwiseSqrt();
        f.h.topRows(k) = root.asDiagonal() * svd.matrixU().leftCols(k).transpose();
        f.w.topRows(k) = root.asDiagonal() * svd.matrixV().leftCols(k).transpose();
        return f;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(problem.seed), static_cast<std::uint32_t>(problem.seed >> 32),
                      static_cast<std::uint32_t>(restart_index), static_cast<std::uint32_t>(restart_index >> 32)};
    std::mt19937_64 gen(seq);
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
    for (Index c = 0; c < n; ++c)
        for (Index r = 0; r < d; ++r)
            f.h(r, c) = normal(gen);
    for (Index c = 0; c < m; ++c)
        for (Index r = 0; r < d; ++r)
            f.w(r, c) = normal(gen);
    return f;
}

struct LossAndGradient {
    double loss = 0.0;
    Matrix grad_h;
    Matrix grad_w;
};

/// Residual E with E_ij = M_ij - 1 on the relation and max(0, M_ij - (1 - margin)) off it.
inline Matrix completion_residual(const Matrix& m, const IncidenceRelation& rel, double margin)
{
    Matrix e(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            e(i, j) = rel.incident(static_cast<std::size_t>(i), static_cast<std::size_t>(j))
                        ? v - 1.0
                        : std::max(0.0, v - (1.0 - margin));
        }
    return e;
}

inline double completion_loss(const Matrix& h, const Matrix& w, const CompletionProblem& problem)
{
    return completion_residual(h.transpose() * w, problem.relation, problem.margin).squaredNorm();
}

/// L = sum_R (h_i.w_j - 1)^2 + sum_{not R} max(0, h_i.w_j - (1 - margin))^2 and its gradients.
inline LossAndGradient loss_and_gradient(const Matrix& h, const Matrix& w, const CompletionProblem& problem)
{
    if (h.rows() != w.rows() || static_cast<std::size_t>(h.cols()) != problem.relation.n_facets()
        || static_cast<std::size_t>(w.cols()) != problem.relation.n_vertices())
        throw Error(ErrorCode::DimensionMismatch, "factor shapes do not match the relation");
    Matrix e = completion_residual(h.transpose() * w, problem.relation, problem.margin);
    return {e.squaredNorm(), 2.0 * w * e.transpose(), 2.0 * h * e};
}

namespace detail {

    // Minimizes sum_{incident} (x.a_k - 1)^2 + sum_{other} max(0, x.a_k - c)^2 over x
    // by damped semismooth Newton steps with backtracking.
    inline void solve_hinge_row(Vector& x, const Matrix& a, const Bits& incident, double c)
    {
        const Index dim = a.rows();
        auto objective = [&](const Vector& v) {
            Vector p = a.transpose() * v;
            double f = 0.0;
            for (Index k = 0; k < p.size(); ++k) {
                const double r = incident.test(static_cast<std::size_t>(k)) ? p(k) - 1.0 : std::max(0.0, p(k) - c);
                f += r * r;
            }
            return f;
        };
        double current = objective(x);
        for (int it = 0; it < 25 && current > 0.0; ++it) {
            Vector p = a.transpose() * x;
            Matrix hess = Matrix::Zero(dim, dim);
            Vector grad = Vector::Zero(dim);
            for (Index k = 0; k < p.size(); ++k) {
                double r;
                if (incident.test(static_cast<std::size_t>(k)))
                    r = p(k) - 1.0;
                else if (p(k) > c)
                    r = p(k) - c;
                else
                    continue;
                hess.noalias() += a.col(k) * a.col(k).transpose();
                grad.noalias() += r * a.col(k);
            }
            const double damping = 1e-10 * (hess.trace() + 1.0);
            hess.diagonal().array() += damping;
            Vector step = -hess.ldlt().solve(grad);
            double alpha = 1.0;
            Vector trial = x + step;
            double value = objective(trial);
            while (value > current && alpha > 1e-6) {
                alpha *= 0.5;
                trial = x + alpha * step;
                value = objective(trial);
            }
            if (value > current)
                break;
            const double gain = current - value;
            x = std::move(trial);
            current = value;
            if (gain <= 1e-16 * (1.0 + current) && alpha == 1.0)
                break;
        }
    }

    inline void als_sweep(Matrix& h, Matrix& w, const IncidenceRelation& rel, double c)
    {
        for (Index i = 0; i < h.cols(); ++i) {
            Vector x = h.col(i);
            solve_hinge_row(x, w, rel.facet_row(static_cast<std::size_t>(i)), c);
            h.col(i) = x;
        }
        for (Index j = 0; j < w.cols(); ++j) {
            Vector x = w.col(j);
            solve_hinge_row(x, h, rel.vertex_column(static_cast<std::size_t>(j)), c);
            w.col(j) = x;
        }
    }

    // Gradient descent with Armijo backtracking; returns the number of steps taken.
    inline std::size_t polish(Matrix& h, Matrix& w, const CompletionProblem& problem, std::size_t steps)
    {
        double step = 1.0;
        std::size_t taken = 0;
        auto lg = loss_and_gradient(h, w, problem);
        for (; taken < steps && lg.loss > 1e-28; ++taken) {
            const double gnorm2 = lg.grad_h.squaredNorm() + lg.grad_w.squaredNorm();
            if (gnorm2 == 0.0)
                break;
            bool accepted = false;
            while (step > 1e-14) {
                Matrix h2 = h - step * lg.grad_h;
                Matrix w2 = w - step * lg.grad_w;
                const double l2 = completion_loss(h2, w2, problem);
                if (l2 <= lg.loss - 1e-4 * step * gnorm2) {
                    h = std::move(h2);
                    w = std::move(w2);
                    accepted = true;
                    step *= 2.0;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted)
                break;
            lg = loss_and_gradient(h, w, problem);
        }
        return taken;
    }

    // Gauss-Newton minimum-norm steps on the equations h_i.w_j = 1 over the relation.
    inline void project_equalities(Matrix& h, Matrix& w, const IncidenceRelation& rel)
    {
        const Index d = h.rows();
        const Index n = h.cols();
        const auto pairs = rel.pairs();
        const auto rows = static_cast<Index>(pairs.size());
        for (int it = 0; it < 30; ++it) {
            Vector r(rows);
            Matrix jac = Matrix::Zero(rows, d * (n + w.cols()));
            for (Index k = 0; k < rows; ++k) {
                const auto i = static_cast<Index>(pairs[static_cast<std::size_t>(k)].first);
                const auto j = static_cast<Index>(pairs[static_cast<std::size_t>(k)].second);
                r(k) = h.col(i).dot(w.col(j)) - 1.0;
                jac.block(k, i * d, 1, d) = w.col(j).transpose();
                jac.block(k, (n + j) * d, 1, d) = h.col(i).transpose();
            }
            if (r.cwiseAbs().maxCoeff() < 1e-14)
                return;
            Eigen::CompleteOrthogonalDecomposition<Matrix> cod(jac);
            cod.setThreshold(1e-12);
            Vector delta = cod.solve(r);
            for (Index i = 0; i < n; ++i)
                h.col(i) -= delta.segment(i * d, d);
            for (Index j = 0; j < w.cols(); ++j)
                w.col(j) -= delta.segment((n + j) * d, d);
        }
    }

} // namespace detail

/// Alternating hinge least squares, gradient polishing and an equality
/// projection per restart. Found results pass check_filled_incidence with
/// slack at least margin / 2 and have numeric rank exactly d.
inline CompletionResult complete(const CompletionProblem& problem)
{
    problem.validate();
    const auto& rel = problem.relation;
    const double target = 1.0 - problem.margin;
    FillTolerances accept{1e-9, problem.margin / 2.0};
    CompletionResult out;

    for (std::size_t restart = 0; restart < problem.max_restarts; ++restart) {
        auto f = initialize_factors(problem, restart);
        double loss = completion_loss(f.h, f.w, problem);
        std::size_t iters = 0;
        while (iters < problem.max_iters && loss >= 1e-14) {
            detail::als_sweep(f.h, f.w, rel, target);
            ++iters;
            const double next = completion_loss(f.h, f.w, problem);
            const bool stalled = loss - next <= 1e-12 * loss;
            loss = next;
            if (stalled)
                break;
        }
        if (loss >= 1e-14 && iters < problem.max_iters) {
            iters += detail::polish(f.h, f.w, problem, problem.max_iters - iters);
            loss = completion_loss(f.h, f.w, problem);
        }

        bool accepted = false;
        if (loss < 1e-6) {
            detail::project_equalities(f.h, f.w, rel);
            Matrix m = facet_vertex_matrix(f.h, f.w);
            if (m.allFinite() && check_filled_incidence(m, rel, 1.0, accept)
                && numeric_rank(m, problem.rank_tol) == problem.d) {
                accepted = true;
                loss = completion_loss(f.h, f.w, problem);
                out.h = f.h;
                out.w = f.w;
                out.m = std::move(m);
            }
        }

        out.restarts_run = restart + 1;
        if (accepted) {
            out.found = true;
            out.residual_history.push_back(std::min(out.best_residual, loss));
            out.best_residual = loss;
            out.iterations = iters;
            out.restart = restart;
            return out;
        }
        if (loss < out.best_residual) {
            out.best_residual = loss;
            out.iterations = iters;
            out.restart = restart;
        }
        out.residual_history.push_back(out.best_residual);
    }
    return out;
}

} // namespace polyreal
