#pragma once

// Small dense linear programs: a two-phase tableau simplex with Bland's rule
// and the strict-feasibility search built on it.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "polyreal/linalg.hpp"

namespace polyreal {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct SimplexResult {
    LpStatus status = LpStatus::Infeasible;
    Vector x;
    double value = 0.0;
};

/// maximize c^T x subject to A x = b, x >= 0.
inline SimplexResult simplex_maximize(const Matrix& a, const Vector& b, const Vector& c, double tol = 1e-10)
{
    const Index rows = a.rows();
    const Index n = a.cols();
    if (b.size() != rows || c.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "simplex: inconsistent shapes");

    // Tableau columns: n structural, rows artificial, one right-hand side.
    const Index rhs = n + rows;
    Matrix t = Matrix::Zero(rows + 1, rhs + 1);
    std::vector<Index> basis(static_cast<std::size_t>(rows));
    for (Index r = 0; r < rows; ++r) {
        const double sign = b(r) < 0 ? -1.0 : 1.0;
        t.row(r).head(n) = sign * a.row(r);
        t(r, n + r) = 1.0;
        t(r, rhs) = sign * b(r);
        basis[static_cast<std::size_t>(r)] = n + r;
    }
    const Index obj = rows;
    double scale = 1.0;
    if (rows > 0)
        scale = std::max(1.0, t.col(rhs).head(rows).cwiseAbs().maxCoeff());

    auto pivot = [&](Index r, Index col) {
        t.row(r) /= t(r, col);
        for (Index k = 0; k < t.rows(); ++k)
            if (k != r && t(k, col) != 0.0)
                t.row(k) -= t(k, col) * t.row(r);
        basis[static_cast<std::size_t>(r)] = col;
    };

    // Bland's rule on objective row `z` over columns [0, allowed). Returns false when unbounded.
    auto optimize = [&](Index z, Index allowed) {
        for (;;) {
            Index enter = -1;
            for (Index j = 0; j < allowed; ++j)
                if (t(z, j) < -tol) {
                    enter = j;
                    break;
                }
            if (enter < 0)
                return true;
            Index leave = -1;
            double best = 0.0;
            for (Index r = 0; r < z; ++r) {
                if (t(r, enter) <= tol)
                    continue;
                const double ratio = t(r, rhs) / t(r, enter);
                const auto br = basis[static_cast<std::size_t>(r)];
                if (leave < 0 || ratio < best - tol
                    || (ratio <= best + tol && br < basis[static_cast<std::size_t>(leave)])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave < 0)
                return false;
            pivot(leave, enter);
        }
    };

    // Phase 1: maximize -sum(artificials).
    for (Index j = 0; j <= rhs; ++j) {
        if (j >= n && j < rhs)
            continue;
        t(obj, j) = -t.col(j).head(rows).sum();
    }
    optimize(obj, rhs);
    if (-t(obj, rhs) > tol * scale * 10.0)
        return {LpStatus::Infeasible, Vector(), 0.0};

    // Drive zero-level artificials out of the basis; drop redundant rows.
    std::vector<Index> keep;
    for (Index r = 0; r < obj; ++r) {
        if (basis[static_cast<std::size_t>(r)] < n) {
            keep.push_back(r);
            continue;
        }
        Index col = -1;
        for (Index j = 0; j < n; ++j)
            if (std::abs(t(r, j)) > 1e-9) {
                col = j;
                break;
            }
        if (col >= 0) {
            pivot(r, col);
            keep.push_back(r);
        }
    }
    if (static_cast<Index>(keep.size()) != rows) {
        Matrix reduced(static_cast<Index>(keep.size()) + 1, t.cols());
        std::vector<Index> reduced_basis;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            reduced.row(static_cast<Index>(k)) = t.row(keep[k]);
            reduced_basis.push_back(basis[static_cast<std::size_t>(keep[k])]);
        }
        t = std::move(reduced);
        basis = std::move(reduced_basis);
    }
    const Index m2 = t.rows() - 1;

    // Phase 2 objective row: reduced costs c_B B^-1 A - c.
    t.row(m2).setZero();
    for (Index j = 0; j < n; ++j) {
        double z = 0.0;
        for (Index r = 0; r < m2; ++r)
            z += c(basis[static_cast<std::size_t>(r)]) * t(r, j);
        t(m2, j) = z - c(j);
    }
    double value = 0.0;
    for (Index r = 0; r < m2; ++r)
        value += c(basis[static_cast<std::size_t>(r)]) * t(r, rhs);
    t(m2, rhs) = value;

    SimplexResult out;
    if (!optimize(m2, n)) {
        out.status = LpStatus::Unbounded;
        return out;
    }
    out.status = LpStatus::Optimal;
    out.x = Vector::Zero(n);
    for (Index r = 0; r < m2; ++r)
        out.x(basis[static_cast<std::size_t>(r)]) = t(r, rhs);
    out.value = c.dot(out.x);
    return out;
}

/// Linear constraint <a, h> (= or <) b.
struct LinearConstraint {
    Vector a;
    double b = 0.0;
};

struct LpOptions {
    double margin_tol = 1e-9;
    double cap = 1.0;  // upper bound on the margin so the LP stays bounded
};

struct LpResult {
    bool feasible = false;
    bool equalities_consistent = false;
    bool capped = false;
    Vector witness;
    double margin = -std::numeric_limits<double>::infinity();
};

/// Maximizes t subject to <a, h> = b on `equalities` and <a, h> <= b - t on
/// `strict_upper`, with t <= cap. Feasible when t > margin_tol.
inline LpResult lp_strict_feasibility(const std::vector<LinearConstraint>& equalities,
                                      const std::vector<LinearConstraint>& strict_upper, Index dim,
                                      const LpOptions& options = {})
{
    for (const auto* list : {&equalities, &strict_upper})
        for (const auto& con : *list)
            if (con.a.size() != dim)
                throw Error(ErrorCode::DimensionMismatch, "constraint of length " + std::to_string(con.a.size())
                                                              + " in an LP over R^" + std::to_string(dim));

    // Variables: h+ (dim), h- (dim), t+, t-, one slack per strict row, cap slack.
    const auto n_eq = static_cast<Index>(equalities.size());
    const auto n_st = static_cast<Index>(strict_upper.size());
    const Index tp = 2 * dim, tm = 2 * dim + 1, slack0 = 2 * dim + 2;
    const Index n_vars = slack0 + n_st + 1;
    const Index n_rows = n_eq + n_st + 1;
    Matrix a = Matrix::Zero(n_rows, n_vars);
    Vector b = Vector::Zero(n_rows);
    Index r = 0;
    for (const auto& con : equalities) {
        a.row(r).head(dim) = con.a.transpose();
        a.row(r).segment(dim, dim) = -con.a.transpose();
        b(r++) = con.b;
    }
    for (Index k = 0; k < n_st; ++k, ++r) {
        const auto& con = strict_upper[static_cast<std::size_t>(k)];
        a.row(r).head(dim) = con.a.transpose();
        a.row(r).segment(dim, dim) = -con.a.transpose();
        a(r, tp) = 1.0;
        a(r, tm) = -1.0;
        a(r, slack0 + k) = 1.0;
        b(r) = con.b;
    }
    a(r, tp) = 1.0;
    a(r, tm) = -1.0;
    a(r, slack0 + n_st) = 1.0;
    b(r) = options.cap;

    Vector c = Vector::Zero(n_vars);
    c(tp) = 1.0;
    c(tm) = -1.0;

    auto sol = simplex_maximize(a, b, c);
    LpResult out;
    if (sol.status != LpStatus::Optimal)
        return out;
    out.equalities_consistent = true;
    out.margin = sol.x(tp) - sol.x(tm);
    out.witness = sol.x.head(dim) - sol.x.segment(dim, dim);
    out.capped = out.margin >= options.cap - 1e-12;
    out.feasible = out.margin > options.margin_tol;
    return out;
}

} // namespace polyreal
