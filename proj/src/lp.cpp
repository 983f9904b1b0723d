#include <qcc/lp.hpp>

#include <qcc/types.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcc {
namespace {

constexpr double kRelPivotTol = 1e-12;  // pivot/ratio tolerance, times scale
constexpr double kCostTol = 1e-9;       // entering threshold on normalized costs
constexpr int kMaxIterations = 20000;

struct Tableau {
    int rows = 0;
    int cols = 0;  // structural + slack + artificial (RHS held separately)
    std::vector<std::vector<double>> a;
    std::vector<double> rhs;
    std::vector<int> basis;  // basis[row] = basic column of that row
    double tol = 0.0;

    void pivot(int prow, int pcol) {
        std::vector<double>& pr = a[prow];
        const double pv = pr[pcol];
        for (double& v : pr) v /= pv;
        rhs[prow] /= pv;
        pr[pcol] = 1.0;
        for (int r = 0; r < rows; ++r) {
            if (r == prow) continue;
            const double f = a[r][pcol];
            if (f == 0.0) continue;
            for (int c = 0; c < cols; ++c) a[r][c] -= f * pr[c];
            a[r][pcol] = 0.0;
            rhs[r] -= f * rhs[prow];
        }
        basis[prow] = pcol;
    }

    // One simplex iteration under Bland's rule: enter the lowest column with
    // negative reduced cost, leave by minimum ratio with exact ties broken
    // toward the lowest basic column.  Returns false at optimality; sets
    // *unbounded when no leaving row exists.
    bool simplex_step(std::vector<double>& cost, double& cost_value,
                      int max_enter_col, bool* unbounded) {
        int enter = -1;
        for (int c = 0; c < max_enter_col; ++c) {
            if (cost[c] < -kCostTol) {
                enter = c;
                break;
            }
        }
        if (enter < 0) return false;
        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int r = 0; r < rows; ++r) {
            if (a[r][enter] > tol) {
                const double ratio = rhs[r] / a[r][enter];
                if (ratio < best_ratio ||
                    (ratio == best_ratio && basis[r] < basis[leave])) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
        }
        if (leave < 0) {
            *unbounded = true;
            return false;
        }
        const double f = cost[enter];
        pivot(leave, enter);
        for (int c = 0; c < cols; ++c) cost[c] -= f * a[leave][c];
        cost[enter] = 0.0;
        cost_value += f * rhs[leave];
        return true;
    }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    const int n = static_cast<int>(lp.objective.size());
    const int m_in = static_cast<int>(lp.row_coeffs.size());
    if (static_cast<int>(lp.row_limits.size()) != m_in ||
        static_cast<int>(lp.lower.size()) != n ||
        static_cast<int>(lp.upper.size()) != n) {
        throw validation_error("lp: inconsistent problem dimensions");
    }
    for (const auto& row : lp.row_coeffs) {
        if (static_cast<int>(row.size()) != n) {
            throw validation_error("lp: constraint row has wrong width");
        }
    }
    LpSolution sol;
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(lp.lower[i])) {
            throw validation_error("lp: lower bounds must be finite");
        }
        if (lp.lower[i] > lp.upper[i]) {
            sol.message = "box bounds cross";
            return sol;
        }
    }

    // Shift to y = x - lower >= 0 and collect every constraint as
    // row . y <= limit, appending finite upper boxes as extra rows.
    std::vector<std::vector<double>> rows;
    std::vector<double> limits;
    rows.reserve(m_in + n);
    for (int j = 0; j < m_in; ++j) {
        double shift = 0.0;
        for (int i = 0; i < n; ++i) shift += lp.row_coeffs[j][i] * lp.lower[i];
        rows.push_back(lp.row_coeffs[j]);
        limits.push_back(lp.row_limits[j] - shift);
    }
    for (int i = 0; i < n; ++i) {
        if (std::isfinite(lp.upper[i])) {
            std::vector<double> row(n, 0.0);
            row[i] = 1.0;
            rows.push_back(std::move(row));
            limits.push_back(lp.upper[i] - lp.lower[i]);
        }
    }
    const int m = static_cast<int>(rows.size());

    // Problem scale for the pivot tolerance and feasibility check.
    double scale = 1.0;
    for (int j = 0; j < m; ++j) {
        scale = std::max(scale, std::fabs(limits[j]));
        for (double v : rows[j]) scale = std::max(scale, std::fabs(v));
    }

    // Equality form: negate rows with negative limits, give every row a slack
    // (+1, or -1 on negated rows) and negated rows an artificial variable.
    int n_art = 0;
    for (int j = 0; j < m; ++j) {
        if (limits[j] < 0.0) ++n_art;
    }
    Tableau t;
    t.rows = m;
    t.cols = n + m + n_art;
    t.tol = kRelPivotTol * scale;
    t.a.assign(m, std::vector<double>(t.cols, 0.0));
    t.rhs.assign(m, 0.0);
    t.basis.assign(m, -1);
    int art = n + m;
    for (int j = 0; j < m; ++j) {
        const double sign = limits[j] < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) t.a[j][i] = sign * rows[j][i];
        t.rhs[j] = sign * limits[j];
        t.a[j][n + j] = sign;  // slack
        if (sign < 0.0) {
            t.a[j][art] = 1.0;
            t.basis[j] = art++;
        } else {
            t.basis[j] = n + j;
        }
    }

    auto run_phase = [&](std::vector<double>& cost, double& value,
                         int max_enter_col) -> bool {
        bool unbounded = false;
        for (int it = 0; it < kMaxIterations; ++it) {
            if (!t.simplex_step(cost, value, max_enter_col, &unbounded)) {
                return !unbounded;
            }
        }
        sol.message = "iteration limit exceeded";
        return false;
    };

    if (n_art > 0) {
        // Phase 1: drive the artificial variables to zero.
        std::vector<double> cost(t.cols, 0.0);
        double value = 0.0;
        for (int c = n + m; c < t.cols; ++c) cost[c] = 1.0;
        for (int j = 0; j < m; ++j) {
            if (t.basis[j] >= n + m) {
                for (int c = 0; c < t.cols; ++c) cost[c] -= t.a[j][c];
                value += t.rhs[j];
            }
        }
        if (!run_phase(cost, value, t.cols)) {
            if (sol.message.empty()) sol.message = "phase-1 failure";
            return sol;
        }
        if (value > 1e-7 * scale) {
            sol.message = "infeasible constraint system";
            return sol;
        }
        // Swap any leftover basic artificial out where the row allows it;
        // all-zero rows are redundant and stay inert in phase 2.
        for (int j = 0; j < m; ++j) {
            if (t.basis[j] < n + m) continue;
            for (int c = 0; c < n + m; ++c) {
                if (std::fabs(t.a[j][c]) > t.tol) {
                    t.pivot(j, c);
                    break;
                }
            }
        }
    }

    // Phase 2 on the real objective, normalized by its largest coefficient so
    // pivoting is insensitive to the physical units of the costs.
    double cmax = 0.0;
    for (double v : lp.objective) cmax = std::max(cmax, std::fabs(v));
    std::vector<double> orig(n, 0.0);
    if (cmax > 0.0) {
        for (int i = 0; i < n; ++i) orig[i] = lp.objective[i] / cmax;
    }
    std::vector<double> cost(t.cols, 0.0);
    for (int i = 0; i < n; ++i) cost[i] = orig[i];
    double value = 0.0;
    for (int j = 0; j < m; ++j) {
        const double cb = t.basis[j] < n ? orig[t.basis[j]] : 0.0;
        if (cb == 0.0) continue;
        for (int c = 0; c < t.cols; ++c) cost[c] -= cb * t.a[j][c];
        value += cb * t.rhs[j];
    }
    for (int j = 0; j < m; ++j) {
        if (t.basis[j] < t.cols) cost[t.basis[j]] = 0.0;
    }
    if (!run_phase(cost, value, n + m)) {
        if (sol.message.empty()) sol.message = "objective unbounded";
        return sol;
    }

    sol.x.assign(n, 0.0);
    for (int j = 0; j < m; ++j) {
        if (t.basis[j] < n) sol.x[t.basis[j]] = t.rhs[j];
    }
    for (int i = 0; i < n; ++i) {
        sol.x[i] = std::clamp(sol.x[i] + lp.lower[i], lp.lower[i], lp.upper[i]);
    }
    sol.objective = 0.0;
    for (int i = 0; i < n; ++i) sol.objective += lp.objective[i] * sol.x[i];
    sol.feasible = true;
    return sol;
}

}  // namespace qcc
