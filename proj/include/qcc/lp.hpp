#pragma once

#include <string>
#include <vector>

namespace qcc {

// Small dense linear program:
//   minimize   objective . x
//   subject to row_coeffs[j] . x <= row_limits[j]   for every row j
//              lower[i] <= x[i] <= upper[i]         (upper may be +infinity)
//
// Maximization and >= rows are expressed by negating coefficients.
struct LinearProgram {
    std::vector<double> objective;
    std::vector<std::vector<double>> row_coeffs;
    std::vector<double> row_limits;
    std::vector<double> lower;
    std::vector<double> upper;
};

struct LpSolution {
    bool feasible = false;
    double objective = 0.0;
    std::vector<double> x;
    std::string message;
};

// Exact dense two-phase simplex with Bland's anti-cycling rule.  The
// objective is normalized internally so coefficient magnitude does not affect
// pivoting; the pivot tolerance is 1e-12 relative to the problem scale.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace qcc
