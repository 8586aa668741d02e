#include "spinimage/lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "spinimage/errors.hpp"

namespace spinimage {

namespace {

constexpr double kPivotEps = 1e-11;

// Tableau: rows = constraints, plus objective row appended last.
// Columns: structural + slack + artificial + rhs.
class SimplexTableau {
  public:
    SimplexTableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
        data_.assign((rows + 1) * cols, 0.0);
        basis_.assign(rows, 0);
    }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double& obj(std::size_t c) { return data_[rows_ * cols_ + c]; }
    std::size_t rhs_col() const { return cols_ - 1; }
    std::vector<std::size_t>& basis() { return basis_; }

    void pivot(std::size_t pr, std::size_t pc) {
        double pv = at(pr, pc);
        for (std::size_t c = 0; c < cols_; ++c) at(pr, c) /= pv;
        for (std::size_t r = 0; r <= rows_; ++r) {
            if (r == pr) continue;
            double f = data_[r * cols_ + pc];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < cols_; ++c) data_[r * cols_ + c] -= f * at(pr, c);
        }
        basis_[pr] = pc;
    }

    // Bland's rule; returns false when optimal. `limit` excludes columns >= limit
    // from entering (used to keep artificials out in phase 2).
    bool iterate(std::size_t limit) {
        std::size_t entering = cols_;
        for (std::size_t c = 0; c < limit; ++c) {
            if (obj(c) < -kPivotEps) {
                entering = c;
                break;
            }
        }
        if (entering == cols_) return false;
        std::size_t leaving = rows_;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < rows_; ++r) {
            double a = at(r, entering);
            if (a > kPivotEps) {
                double ratio = at(r, rhs_col()) / a;
                if (ratio < best_ratio - kPivotEps ||
                    (ratio < best_ratio + kPivotEps &&
                     (leaving == rows_ || basis_[r] < basis_[leaving]))) {
                    best_ratio = ratio;
                    leaving = r;
                }
            }
        }
        if (leaving == rows_) throw InfeasibleError("solve_lp: unbounded objective");
        pivot(leaving, entering);
        return true;
    }

    std::size_t rows_, cols_;
    std::vector<double> data_;
    std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_lp(const std::vector<double>& c,
                  const std::vector<std::vector<double>>& a_ub, const std::vector<double>& b_ub,
                  const std::vector<std::vector<double>>& a_eq, const std::vector<double>& b_eq) {
    std::size_t n = c.size();
    std::size_t m_ub = a_ub.size();
    std::size_t m_eq = a_eq.size();
    std::size_t m = m_ub + m_eq;
    std::size_t n_slack = m_ub;
    // one artificial per row keeps the setup uniform; phase 1 prices them out
    std::size_t n_art = m;
    std::size_t cols = n + n_slack + n_art + 1;

    SimplexTableau t(m, cols);
    for (std::size_t r = 0; r < m; ++r) {
        const auto& row = r < m_ub ? a_ub[r] : a_eq[r - m_ub];
        double rhs = r < m_ub ? b_ub[r] : b_eq[r - m_ub];
        double sign = rhs < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) t.at(r, j) = sign * row[j];
        if (r < m_ub) t.at(r, n + r) = sign;
        t.at(r, n + n_slack + r) = 1.0;
        t.at(r, t.rhs_col()) = sign * rhs;
        t.basis()[r] = n + n_slack + r;
    }

    // Phase 1: minimize sum of artificials.
    for (std::size_t j = n + n_slack; j < n + n_slack + n_art; ++j) t.obj(j) = 1.0;
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j < cols; ++j) t.obj(j) -= t.at(r, j);
    while (t.iterate(n + n_slack + n_art)) {
    }
    if (-t.obj(t.rhs_col()) > 1e-8) return LpResult{false, 0.0, {}};

    // Drive any residual artificials out of the basis.
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis()[r] < n + n_slack) continue;
        std::size_t pc = cols;
        for (std::size_t j = 0; j < n + n_slack; ++j) {
            if (std::fabs(t.at(r, j)) > kPivotEps) {
                pc = j;
                break;
            }
        }
        if (pc != cols) t.pivot(r, pc);
        // else: redundant row, harmless to leave in place
    }

    // Phase 2.
    for (std::size_t j = 0; j < cols; ++j) t.obj(j) = 0.0;
    for (std::size_t j = 0; j < n; ++j) t.obj(j) = c[j];
    for (std::size_t r = 0; r < m; ++r) {
        double cb = t.basis()[r] < n ? c[t.basis()[r]] : 0.0;
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j < cols; ++j) t.obj(j) -= cb * t.at(r, j);
    }
    while (t.iterate(n + n_slack)) {
    }

    LpResult result;
    result.feasible = true;
    result.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (t.basis()[r] < n) result.x[t.basis()[r]] = t.at(r, t.rhs_col());
    result.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
    return result;
}

}  // namespace spinimage
