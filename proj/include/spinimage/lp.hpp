#pragma once

#include <vector>

namespace spinimage {

struct LpResult {
    bool feasible = false;
    double objective = 0.0;
    std::vector<double> x;
};

/// Dense two-phase primal simplex with Bland's rule.
/// minimize c'x  subject to  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0.
/// Problem sizes here are tiny (a handful of rows, a few hundred columns), so
/// the tableau form is plenty.
LpResult solve_lp(const std::vector<double>& c,
                  const std::vector<std::vector<double>>& a_ub, const std::vector<double>& b_ub,
                  const std::vector<std::vector<double>>& a_eq, const std::vector<double>& b_eq);

}  // namespace spinimage
