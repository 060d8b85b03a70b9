#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace mmplan {

enum class Sense { Le, Ge, Lt };

// One linear row: sum(coeffs) <sense> rhs.  Strict rows (Lt) carry a slack
// epsilon and are treated as a*x <= rhs - strict_eps; when left at zero the
// epsilon defaults to 1e-6 * max(|rhs|, 1).
struct IlpConstraint {
  std::vector<std::pair<int, double>> coeffs;  // (var index, coefficient)
  Sense sense = Sense::Le;
  double rhs = 0.0;
  double strict_eps = 0.0;
  std::string name;
};

// Binary minimization program.  `fixed` pins variables before solving.
struct IlpInstance {
  int n_vars = 0;
  std::vector<double> objective;
  std::vector<IlpConstraint> constraints;
  std::map<int, int> fixed;  // var -> 0|1
  std::vector<std::string> var_names;

  void validate() const;  // throws std::invalid_argument on malformed input

  double strict_epsilon(const IlpConstraint& c) const {
    if (c.sense != Sense::Lt) return 0.0;
    return c.strict_eps > 0.0 ? c.strict_eps : 1e-6 * std::max(std::abs(c.rhs), 1.0);
  }
};

enum class IlpStatus { Optimal, Infeasible };

struct IlpSolution {
  IlpStatus status = IlpStatus::Infeasible;
  std::vector<int> assignment;  // empty when infeasible
  double objective_value = 0.0;
  long nodes_explored = 0;
};

// Exact branch-and-bound with LP-relaxation bounding.  Deterministic:
// identical instances produce identical node counts and solutions.
IlpSolution solve_bb(const IlpInstance& instance);

struct LpResult {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

// LP relaxation over the given variable boxes (0 <= lo <= hi <= 1), solved
// with a bounded-variable primal simplex.  The value is a valid lower bound
// on any integer completion within the boxes.
LpResult lp_relax(const IlpInstance& instance, const std::vector<double>& lo,
                  const std::vector<double>& hi);

// Fixes `zero_set` variables to 0; rows are simplified by dropping the fixed
// columns.  The solution sets restricted to the free variables coincide.
IlpInstance null_variables(const IlpInstance& instance, const std::vector<int>& zero_set);

// Debug dump in LP text format (minimize / subject to / bounds / binary).
std::string to_lp_format(const IlpInstance& instance);

}  // namespace mmplan
