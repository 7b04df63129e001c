#pragma once

#include <cstddef>
#include <vector>

#include "bellctx/errors.hpp"

namespace bellctx::lp {

// Dense tableau simplex with Bland's rule, templated on the number type.
// Instantiated with bellctx::Rational and eps == 0 the solver is exact and
// Bland's rule guarantees termination; with double, eps absorbs roundoff
// (1e-9 is the intended setting).

enum class Status { Optimal, Unbounded };

template <class T>
struct LpSolution {
    Status status = Status::Optimal;
    T objective{};
    std::vector<T> x;     // primal solution, size n
    std::vector<T> dual;  // one multiplier per constraint row, size m
};

namespace detail {

template <class T>
class Tableau {
public:
    // columns: structural (n) then basis-seed columns (m), plus rhs held apart
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), cells_(rows * cols, T(0)), rhs_(rows, T(0)) {}

    T& at(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }
    const T& at(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }
    T& rhs(std::size_t r) { return rhs_[r]; }
    const T& rhs(std::size_t r) const { return rhs_[r]; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc, std::vector<T>& reduced, T& objective) {
        const T inv = T(1) / at(pr, pc);
        for (std::size_t c = 0; c < cols_; ++c) at(pr, c) *= inv;
        rhs_[pr] *= inv;
        at(pr, pc) = T(1);  // cancel residual roundoff on the pivot cell
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            const T factor = at(r, pc);
            if (factor == T(0)) continue;
            for (std::size_t c = 0; c < cols_; ++c) at(r, c) -= factor * at(pr, c);
            rhs_[r] -= factor * rhs_[pr];
            at(r, pc) = T(0);
        }
        const T rfactor = reduced[pc];
        if (rfactor != T(0)) {
            for (std::size_t c = 0; c < cols_; ++c) reduced[c] -= rfactor * at(pr, c);
            objective += rfactor * rhs_[pr];
            reduced[pc] = T(0);
        }
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> cells_;
    std::vector<T> rhs_;
};

// Runs Bland-rule pivoting until no reduced cost exceeds eps. Returns false
// when an improving column proves the problem unbounded.
template <class T>
bool bland_optimize(Tableau<T>& tab, std::vector<T>& reduced, std::vector<std::size_t>& basis,
                    T& objective, const T& eps) {
    const std::size_t max_pivots = 50000 + 200 * (tab.rows() + tab.cols());
    for (std::size_t iter = 0; iter < max_pivots; ++iter) {
        std::size_t entering = tab.cols();
        for (std::size_t j = 0; j < tab.cols(); ++j) {
            if (reduced[j] > eps) { entering = j; break; }
        }
        if (entering == tab.cols()) return true;  // optimal

        std::size_t leaving = tab.rows();
        T best_ratio{};
        for (std::size_t r = 0; r < tab.rows(); ++r) {
            if (!(tab.at(r, entering) > eps)) continue;
            const T ratio = tab.rhs(r) / tab.at(r, entering);
            if (leaving == tab.rows() || ratio < best_ratio ||
                (ratio == best_ratio && basis[r] < basis[leaving])) {
                leaving = r;
                best_ratio = ratio;
            }
        }
        if (leaving == tab.rows()) return false;  // unbounded

        tab.pivot(leaving, entering, reduced, objective);
        basis[leaving] = entering;
    }
    throw numerical_error("simplex: pivot limit exceeded");
}

}  // namespace detail

// maximize c.x  subject to  A x <= b, x >= 0, with b >= 0 componentwise
// (so the slack basis is feasible from the start). Returns the primal
// optimum and the dual multipliers y >= 0 with y.b == objective.
template <class T>
LpSolution<T> maximize_leq(const std::vector<std::vector<T>>& A, const std::vector<T>& b,
                           const std::vector<T>& c, const T& eps = T(0)) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    detail::Tableau<T> tab(m, n + m);
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) tab.at(r, j) = A[r][j];
        tab.at(r, n + r) = T(1);
        tab.rhs(r) = b[r];
        basis[r] = n + r;
    }
    std::vector<T> reduced(n + m, T(0));
    for (std::size_t j = 0; j < n; ++j) reduced[j] = c[j];

    LpSolution<T> sol;
    sol.objective = T(0);
    if (!detail::bland_optimize(tab, reduced, basis, sol.objective, eps)) {
        sol.status = Status::Unbounded;
        return sol;
    }
    sol.x.assign(n, T(0));
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) sol.x[basis[r]] = tab.rhs(r);
    }
    sol.dual.assign(m, T(0));
    for (std::size_t r = 0; r < m; ++r) sol.dual[r] = -reduced[n + r];
    return sol;
}

template <class T>
struct EqFeasibility {
    bool feasible = false;
    std::vector<T> x;
};

// Feasibility of  A x = b, x >= 0  with b >= 0, by phase-1: maximize the
// negated sum of artificial variables; the system is feasible iff that
// optimum reaches 0 (within eps).
template <class T>
EqFeasibility<T> equality_feasible(const std::vector<std::vector<T>>& A, const std::vector<T>& b,
                                   const T& eps = T(0)) {
    const std::size_t m = A.size();
    std::size_t n = 0;
    if (m > 0) n = A[0].size();
    detail::Tableau<T> tab(m, n + m);
    std::vector<std::size_t> basis(m);
    std::vector<T> reduced(n + m, T(0));
    T objective = T(0);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) {
            tab.at(r, j) = A[r][j];
            reduced[j] += A[r][j];  // c_j - z_j with basic artificial costs -1
        }
        tab.at(r, n + r) = T(1);
        tab.rhs(r) = b[r];
        basis[r] = n + r;
        objective -= b[r];
    }

    if (!detail::bland_optimize(tab, reduced, basis, objective, eps)) {
        throw numerical_error("simplex phase-1: unbounded (inconsistent tableau)");
    }
    EqFeasibility<T> result;
    result.feasible = !(objective < -eps) && !(objective > eps);
    if (result.feasible) {
        result.x.assign(n, T(0));
        for (std::size_t r = 0; r < m; ++r) {
            if (basis[r] < n) result.x[basis[r]] = tab.rhs(r);
        }
    }
    return result;
}

}  // namespace bellctx::lp
