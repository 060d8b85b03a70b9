#include "mmplan/ilp.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace mmplan {

namespace {

constexpr double kFeasTol = 1e-9;       // feasibility tolerance on rows
constexpr double kBoundTol = 1e-9;      // bound-gap tolerance for pruning
constexpr double kIntTol = 1e-6;        // integrality detection in LP points
constexpr double kPivotTol = 1e-10;     // minimum usable pivot magnitude
constexpr double kInf = std::numeric_limits<double>::infinity();

// Normalized row: a.x <= rhs with duplicate columns merged.
struct Row {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;
};

std::vector<std::pair<int, double>> merged(const std::vector<std::pair<int, double>>& in) {
  std::vector<std::pair<int, double>> out(in);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (w > 0 && out[w - 1].first == out[i].first)
      out[w - 1].second += out[i].second;
    else
      out[w++] = out[i];
  }
  out.resize(w);
  std::erase_if(out, [](const auto& p) { return p.second == 0.0; });
  return out;
}

std::vector<Row> normalize_rows(const IlpInstance& inst) {
  std::vector<Row> rows;
  rows.reserve(inst.constraints.size());
  for (const auto& c : inst.constraints) {
    Row r;
    r.coeffs = merged(c.coeffs);
    switch (c.sense) {
      case Sense::Le:
        r.rhs = c.rhs;
        break;
      case Sense::Ge:
        for (auto& p : r.coeffs) p.second = -p.second;
        r.rhs = -c.rhs;
        break;
      case Sense::Lt:
        r.rhs = c.rhs - inst.strict_epsilon(c);
        break;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Bounded-variable primal simplex on a dense tableau.
//
// min c.x  s.t.  A x <= b,  lo <= x <= hi  (all boxes finite for structurals,
// slacks in [0, inf)).  Two phases with artificial columns; Dantzig pricing
// with a permanent switch to Bland's rule once the objective stalls, which
// guarantees termination.
// ---------------------------------------------------------------------------
class DenseSimplex {
 public:
  DenseSimplex(const std::vector<Row>& rows, const std::vector<double>& cost,
               const std::vector<double>& lo, const std::vector<double>& hi)
      : m_(static_cast<int>(rows.size())), n_(static_cast<int>(cost.size())) {
    n_total_ = n_ + m_;  // structural + slack
    cols_ = static_cast<std::size_t>(n_total_);
    lo_ = lo;
    hi_ = hi;
    lo_.resize(static_cast<std::size_t>(n_total_), 0.0);
    hi_.resize(static_cast<std::size_t>(n_total_), kInf);
    cost_.assign(static_cast<std::size_t>(n_total_), 0.0);
    for (int j = 0; j < n_; ++j) cost_[static_cast<std::size_t>(j)] = cost[static_cast<std::size_t>(j)];
    b_.resize(static_cast<std::size_t>(m_));
    dense_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(n_total_), 0.0);
    for (int i = 0; i < m_; ++i) {
      for (const auto& [j, a] : rows[static_cast<std::size_t>(i)].coeffs)
        at(i, j) = a;
      at(i, n_ + i) = 1.0;  // slack
      b_[static_cast<std::size_t>(i)] = rows[static_cast<std::size_t>(i)].rhs;
    }
  }

  // Returns false when primal infeasible.
  bool solve() {
    init_basis();
    if (needs_phase1_) {
      set_phase1_costs();
      run();
      if (phase1_value() > 1e-7) return false;
      freeze_artificials();
    }
    set_phase2_costs();
    run();
    return true;
  }

  std::vector<double> solution() const {
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) x[static_cast<std::size_t>(j)] = value_of(j);
    return x;
  }

 private:
  double& at(int i, int j) { return dense_[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)]; }
  double at(int i, int j) const { return dense_[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)]; }

  double value_of(int j) const {
    if (state_[static_cast<std::size_t>(j)] == kBasic) return xb_[static_cast<std::size_t>(row_of_[static_cast<std::size_t>(j)])];
    return state_[static_cast<std::size_t>(j)] == kAtUpper ? hi_[static_cast<std::size_t>(j)] : lo_[static_cast<std::size_t>(j)];
  }

  void init_basis() {
    // Slack basis, structurals at their lower bound.  Rows whose slack would
    // start negative get an artificial column instead.
    std::vector<double> resid(b_);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j)
        if (at(i, j) != 0.0) resid[static_cast<std::size_t>(i)] -= at(i, j) * lo_[static_cast<std::size_t>(j)];

    needs_phase1_ = false;
    int n_art = 0;
    for (int i = 0; i < m_; ++i)
      if (resid[static_cast<std::size_t>(i)] < -kFeasTol) ++n_art;
    first_art_ = n_total_;
    n_total_ += n_art;
    cols_ = static_cast<std::size_t>(n_total_);

    // Rebuild dense storage with artificial columns appended.
    std::vector<double> grown(static_cast<std::size_t>(m_) * cols_, 0.0);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < first_art_; ++j)
        grown[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)] =
            dense_[static_cast<std::size_t>(i) * static_cast<std::size_t>(first_art_) + static_cast<std::size_t>(j)];
    dense_ = std::move(grown);
    lo_.resize(static_cast<std::size_t>(n_total_), 0.0);
    hi_.resize(static_cast<std::size_t>(n_total_), kInf);
    cost_.resize(static_cast<std::size_t>(n_total_), 0.0);

    state_.assign(static_cast<std::size_t>(n_total_), kAtLower);
    row_of_.assign(static_cast<std::size_t>(n_total_), -1);
    basis_.assign(static_cast<std::size_t>(m_), -1);
    xb_.assign(static_cast<std::size_t>(m_), 0.0);

    int art = first_art_;
    for (int i = 0; i < m_; ++i) {
      double r = resid[static_cast<std::size_t>(i)];
      if (r < -kFeasTol) {
        at(i, art) = -1.0;
        basis_[static_cast<std::size_t>(i)] = art;
        xb_[static_cast<std::size_t>(i)] = -r;
        needs_phase1_ = true;
        ++art;
      } else {
        basis_[static_cast<std::size_t>(i)] = n_ + i;
        xb_[static_cast<std::size_t>(i)] = r;
      }
      state_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = kBasic;
      row_of_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = i;
    }
    // The tableau must express B^-1 A; the initial basis is not the identity
    // for artificial rows (coefficient -1), so scale those rows.
    for (int i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] >= first_art_) {
        for (int j = 0; j < n_total_; ++j) at(i, j) = -at(i, j);
        b_[static_cast<std::size_t>(i)] = -b_[static_cast<std::size_t>(i)];
      }
    }
  }

  void set_phase1_costs() {
    work_cost_.assign(static_cast<std::size_t>(n_total_), 0.0);
    for (int j = first_art_; j < n_total_; ++j) work_cost_[static_cast<std::size_t>(j)] = 1.0;
    allow_artificials_ = true;
    compute_reduced_costs();
  }

  void set_phase2_costs() {
    work_cost_ = cost_;
    allow_artificials_ = false;
    compute_reduced_costs();
  }

  double phase1_value() const {
    double v = 0.0;
    for (int j = first_art_; j < n_total_; ++j) v += value_of(j);
    return v;
  }

  void freeze_artificials() {
    // Artificials finished phase 1 at zero; pin their boxes so they can
    // neither re-enter nor move while basic.
    for (int j = first_art_; j < n_total_; ++j) {
      hi_[static_cast<std::size_t>(j)] = 0.0;
      if (state_[static_cast<std::size_t>(j)] == kAtUpper) state_[static_cast<std::size_t>(j)] = kAtLower;
    }
  }

  void compute_reduced_costs() {
    d_.assign(static_cast<std::size_t>(n_total_), 0.0);
    for (int j = 0; j < n_total_; ++j) {
      if (state_[static_cast<std::size_t>(j)] == kBasic) continue;
      double dj = work_cost_[static_cast<std::size_t>(j)];
      for (int i = 0; i < m_; ++i) {
        double a = at(i, j);
        if (a != 0.0) dj -= work_cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] * a;
      }
      d_[static_cast<std::size_t>(j)] = dj;
    }
  }

  bool eligible(int j, int& direction) const {
    if (state_[static_cast<std::size_t>(j)] == kBasic) return false;
    if (!allow_artificials_ && j >= first_art_) return false;
    if (hi_[static_cast<std::size_t>(j)] - lo_[static_cast<std::size_t>(j)] <= 0.0) return false;
    double dj = d_[static_cast<std::size_t>(j)];
    if (state_[static_cast<std::size_t>(j)] == kAtLower && dj < -kFeasTol) {
      direction = +1;
      return true;
    }
    if (state_[static_cast<std::size_t>(j)] == kAtUpper && dj > kFeasTol) {
      direction = -1;
      return true;
    }
    return false;
  }

  int pick_entering(bool bland, int& direction) const {
    int best = -1, dir = 0;
    double best_score = 0.0;
    for (int j = 0; j < n_total_; ++j) {
      int dj_dir;
      if (!eligible(j, dj_dir)) continue;
      if (bland) {
        direction = dj_dir;
        return j;
      }
      double score = std::abs(d_[static_cast<std::size_t>(j)]);
      if (score > best_score + 1e-15) {
        best_score = score;
        best = j;
        dir = dj_dir;
      }
    }
    direction = dir;
    return best;
  }

  void run() {
    const long max_iters = 2000 + 200L * (m_ + n_total_);
    bool bland = false;
    long stall = 0;
    double last_obj = current_objective();
    for (long it = 0; it < max_iters; ++it) {
      int direction = 0;
      int q = pick_entering(bland, direction);
      if (q < 0) return;  // optimal for current costs

      // Ratio test: how far can x_q move before a basic variable or its own
      // opposite bound blocks it.
      const double t_flip = hi_[static_cast<std::size_t>(q)] - lo_[static_cast<std::size_t>(q)];
      double t_row = kInf;
      int leave_row = -1;
      for (int i = 0; i < m_; ++i) {
        double w = at(i, q) * direction;
        int k = basis_[static_cast<std::size_t>(i)];
        double t;
        if (w > kPivotTol)
          t = (xb_[static_cast<std::size_t>(i)] - lo_[static_cast<std::size_t>(k)]) / w;
        else if (w < -kPivotTol && hi_[static_cast<std::size_t>(k)] < kInf)
          t = (hi_[static_cast<std::size_t>(k)] - xb_[static_cast<std::size_t>(i)]) / (-w);
        else
          continue;
        if (t < 0.0) t = 0.0;
        if (t < t_row - 1e-12) {
          t_row = t;
          leave_row = i;
        } else if (leave_row >= 0 && t <= t_row + 1e-12) {
          // Tie break: Bland wants the smallest basic index; otherwise take
          // the numerically largest pivot.
          if (bland) {
            if (k < basis_[static_cast<std::size_t>(leave_row)]) leave_row = i;
          } else if (std::abs(at(i, q)) > std::abs(at(leave_row, q)) + 1e-12) {
            leave_row = i;
          }
        }
      }

      if (leave_row < 0 && t_flip >= kInf)
        throw std::logic_error("simplex: unbounded LP on boxed instance");

      if (leave_row < 0 || t_flip < t_row - 1e-12) {
        // Bound flip: q travels to its opposite bound.
        apply_step(q, direction, t_flip);
        state_[static_cast<std::size_t>(q)] = direction > 0 ? kAtUpper : kAtLower;
      } else {
        pivot(leave_row, q, direction, std::min(t_row, t_flip));
      }

      double obj = current_objective();
      if (obj < last_obj - 1e-12) {
        stall = 0;
        last_obj = obj;
      } else if (!bland && ++stall > 3L * (m_ + 16)) {
        bland = true;  // anti-cycling from here on
      }
    }
    throw std::runtime_error("simplex: iteration limit exceeded");
  }

  double current_objective() const {
    double v = 0.0;
    for (int j = 0; j < n_total_; ++j) v += work_cost_[static_cast<std::size_t>(j)] * value_of(j);
    return v;
  }

  void apply_step(int q, int direction, double t) {
    if (t == 0.0) return;
    for (int i = 0; i < m_; ++i) {
      double w = at(i, q);
      if (w != 0.0) xb_[static_cast<std::size_t>(i)] -= direction * t * w;
    }
  }

  void pivot(int r, int q, int direction, double t) {
    apply_step(q, direction, t);
    int leaving = basis_[static_cast<std::size_t>(r)];
    // Leaving variable exits at whichever bound it hit.
    double wr = at(r, q) * direction;
    state_[static_cast<std::size_t>(leaving)] = (wr > 0.0) ? kAtLower : kAtUpper;
    row_of_[static_cast<std::size_t>(leaving)] = -1;

    double enter_val = (direction > 0 ? lo_[static_cast<std::size_t>(q)] : hi_[static_cast<std::size_t>(q)]) + direction * t;

    double piv = at(r, q);
    for (int j = 0; j < n_total_; ++j) at(r, j) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = at(i, q);
      if (f == 0.0) continue;
      for (int j = 0; j < n_total_; ++j) at(i, j) -= f * at(r, j);
    }
    double dq = d_[static_cast<std::size_t>(q)];
    if (dq != 0.0)
      for (int j = 0; j < n_total_; ++j) d_[static_cast<std::size_t>(j)] -= dq * at(r, j);
    d_[static_cast<std::size_t>(q)] = 0.0;

    basis_[static_cast<std::size_t>(r)] = q;
    state_[static_cast<std::size_t>(q)] = kBasic;
    row_of_[static_cast<std::size_t>(q)] = r;
    xb_[static_cast<std::size_t>(r)] = enter_val;

    // Reduced cost of the leaving variable: recompute directly (cheap, one
    // column) to avoid drift.
    double dj = work_cost_[static_cast<std::size_t>(leaving)];
    for (int i = 0; i < m_; ++i) {
      double a = at(i, leaving);
      if (a != 0.0) dj -= work_cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] * a;
    }
    d_[static_cast<std::size_t>(leaving)] = dj;
  }

  static constexpr std::int8_t kAtLower = 0;
  static constexpr std::int8_t kAtUpper = 1;
  static constexpr std::int8_t kBasic = 2;

  int m_ = 0, n_ = 0, n_total_ = 0, first_art_ = 0;
  std::size_t cols_ = 0;
  bool needs_phase1_ = false;
  bool allow_artificials_ = false;
  std::vector<double> dense_;
  std::vector<double> b_;
  std::vector<double> lo_, hi_;
  std::vector<double> cost_, work_cost_, d_;
  std::vector<double> xb_;
  std::vector<std::int8_t> state_;
  std::vector<int> basis_, row_of_;
};

// ---------------------------------------------------------------------------
// LP solve with substitution presolve: fixed variables fold into the rhs,
// redundant rows (satisfied at the worst box corner) drop out.
// ---------------------------------------------------------------------------
struct LpInternal {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

LpInternal solve_lp(const std::vector<Row>& rows, const std::vector<double>& objective,
                    const std::vector<double>& lo, const std::vector<double>& hi) {
  const int n = static_cast<int>(objective.size());
  std::vector<int> compact(static_cast<std::size_t>(n), -1);
  std::vector<int> free_vars;
  for (int j = 0; j < n; ++j) {
    if (hi[static_cast<std::size_t>(j)] - lo[static_cast<std::size_t>(j)] > 0.0) {
      compact[static_cast<std::size_t>(j)] = static_cast<int>(free_vars.size());
      free_vars.push_back(j);
    }
  }

  std::vector<Row> red_rows;
  for (const auto& row : rows) {
    Row r;
    r.rhs = row.rhs;
    double min_act = 0.0, max_act = 0.0;
    for (const auto& [j, a] : row.coeffs) {
      if (compact[static_cast<std::size_t>(j)] < 0) {
        r.rhs -= a * lo[static_cast<std::size_t>(j)];  // lo == hi
      } else {
        r.coeffs.emplace_back(compact[static_cast<std::size_t>(j)], a);
        min_act += a * (a > 0 ? lo[static_cast<std::size_t>(j)] : hi[static_cast<std::size_t>(j)]);
        max_act += a * (a > 0 ? hi[static_cast<std::size_t>(j)] : lo[static_cast<std::size_t>(j)]);
      }
    }
    if (r.coeffs.empty()) {
      if (0.0 > r.rhs + kFeasTol) return {};  // constant row violated
      continue;
    }
    if (min_act > r.rhs + kFeasTol) return {};  // infeasible regardless of x
    if (max_act <= r.rhs + 1e-12) continue;     // redundant inside the box
    red_rows.push_back(std::move(r));
  }

  std::vector<double> x(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];

  if (!free_vars.empty() && !red_rows.empty()) {
    std::vector<double> c_red(free_vars.size()), lo_red(free_vars.size()), hi_red(free_vars.size());
    for (std::size_t k = 0; k < free_vars.size(); ++k) {
      c_red[k] = objective[static_cast<std::size_t>(free_vars[k])];
      lo_red[k] = lo[static_cast<std::size_t>(free_vars[k])];
      hi_red[k] = hi[static_cast<std::size_t>(free_vars[k])];
    }
    DenseSimplex simplex(red_rows, c_red, lo_red, hi_red);
    if (!simplex.solve()) return {};
    std::vector<double> xr = simplex.solution();
    for (std::size_t k = 0; k < free_vars.size(); ++k)
      x[static_cast<std::size_t>(free_vars[k])] = xr[k];
  } else if (!free_vars.empty()) {
    // No binding rows: minimize each cost independently inside the box.
    for (int j : free_vars)
      x[static_cast<std::size_t>(j)] =
          objective[static_cast<std::size_t>(j)] >= 0 ? lo[static_cast<std::size_t>(j)] : hi[static_cast<std::size_t>(j)];
  }

  LpInternal out;
  out.feasible = true;
  out.x = std::move(x);
  out.value = 0.0;
  for (int j = 0; j < n; ++j) out.value += objective[static_cast<std::size_t>(j)] * out.x[static_cast<std::size_t>(j)];
  return out;
}

// ---------------------------------------------------------------------------
// Bound propagation over normalized rows with binary boxes: fixes variables
// whose opposite value would push the row's minimum activity past the rhs.
// Preserves every integer point of the node.
// ---------------------------------------------------------------------------
bool propagate(const std::vector<Row>& rows, std::vector<double>& lo, std::vector<double>& hi) {
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    for (const auto& row : rows) {
      double min_act = 0.0;
      for (const auto& [j, a] : row.coeffs)
        min_act += a * (a > 0 ? lo[static_cast<std::size_t>(j)] : hi[static_cast<std::size_t>(j)]);
      if (min_act > row.rhs + kFeasTol) return false;
      for (const auto& [j, a] : row.coeffs) {
        if (hi[static_cast<std::size_t>(j)] - lo[static_cast<std::size_t>(j)] <= 0.0) continue;
        double contrib_min = a * (a > 0 ? lo[static_cast<std::size_t>(j)] : hi[static_cast<std::size_t>(j)]);
        double other = min_act - contrib_min + a * (a > 0 ? hi[static_cast<std::size_t>(j)] : lo[static_cast<std::size_t>(j)]);
        if (other > row.rhs + kFeasTol) {
          // Forcing: j must stay at the bound that minimizes a*x.
          if (a > 0)
            hi[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
          else
            lo[static_cast<std::size_t>(j)] = hi[static_cast<std::size_t>(j)];
          changed = true;
        }
      }
    }
    if (!changed) return true;
  }
  return true;
}

}  // namespace

void IlpInstance::validate() const {
  if (n_vars < 0) throw std::invalid_argument("ilp: negative variable count");
  if (static_cast<int>(objective.size()) != n_vars)
    throw std::invalid_argument("ilp: objective length must equal n_vars");
  for (const auto& c : constraints) {
    for (const auto& [j, a] : c.coeffs) {
      if (j < 0 || j >= n_vars) throw std::invalid_argument("ilp: constraint references unknown variable");
      if (!std::isfinite(a)) throw std::invalid_argument("ilp: non-finite coefficient");
    }
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("ilp: non-finite rhs");
  }
  for (const auto& [j, v] : fixed) {
    if (j < 0 || j >= n_vars) throw std::invalid_argument("ilp: fixed map references unknown variable");
    if (v != 0 && v != 1) throw std::invalid_argument("ilp: fixed values must be binary");
  }
}

LpResult lp_relax(const IlpInstance& instance, const std::vector<double>& lo,
                  const std::vector<double>& hi) {
  instance.validate();
  if (static_cast<int>(lo.size()) != instance.n_vars ||
      static_cast<int>(hi.size()) != instance.n_vars)
    throw std::invalid_argument("lp_relax: bounds length must equal n_vars");
  std::vector<double> l(lo), h(hi);
  for (int j = 0; j < instance.n_vars; ++j) {
    if (l[static_cast<std::size_t>(j)] < 0.0 || h[static_cast<std::size_t>(j)] > 1.0 ||
        l[static_cast<std::size_t>(j)] > h[static_cast<std::size_t>(j)])
      throw std::invalid_argument("lp_relax: bounds must satisfy 0 <= lo <= hi <= 1");
  }
  for (const auto& [j, v] : instance.fixed) {
    l[static_cast<std::size_t>(j)] = v;
    h[static_cast<std::size_t>(j)] = v;
  }
  std::vector<Row> rows = normalize_rows(instance);
  LpInternal r = solve_lp(rows, instance.objective, l, h);
  LpResult out;
  out.feasible = r.feasible;
  out.value = r.value;
  out.x = std::move(r.x);
  return out;
}

namespace {

struct Node {
  long id = 0;
  double bound = 0.0;
  std::vector<double> lo, hi;
  std::vector<double> x;  // LP point for branching
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

int most_fractional(const Node& node) {
  int best = -1;
  double best_frac = -1.0;
  for (std::size_t j = 0; j < node.x.size(); ++j) {
    if (node.hi[j] - node.lo[j] <= 0.0) continue;
    double v = std::clamp(node.x[j], 0.0, 1.0);
    double f = std::min(v, 1.0 - v);
    if (f > best_frac + 1e-12) {
      best_frac = f;
      best = static_cast<int>(j);
    }
  }
  return best;
}

bool lp_point_integral(const Node& node) {
  for (std::size_t j = 0; j < node.x.size(); ++j)
    if (std::min(node.x[j], 1.0 - node.x[j]) > kIntTol) return false;
  return true;
}

}  // namespace

IlpSolution solve_bb(const IlpInstance& instance) {
  instance.validate();
  const int n = instance.n_vars;
  std::vector<Row> rows = normalize_rows(instance);

  IlpSolution best;
  best.status = IlpStatus::Infeasible;
  double best_obj = kInf;
  long nodes = 0;
  long next_id = 0;

  auto verify_and_store = [&](const std::vector<double>& x) {
    std::vector<int> xi(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) xi[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] >= 0.5 ? 1 : 0;
    // Exact re-verification against the original constraints.
    for (const auto& c : instance.constraints) {
      double act = 0.0;
      for (const auto& [j, a] : c.coeffs) act += a * xi[static_cast<std::size_t>(j)];
      switch (c.sense) {
        case Sense::Le:
          if (act > c.rhs + kFeasTol) return false;
          break;
        case Sense::Ge:
          if (act < c.rhs - kFeasTol) return false;
          break;
        case Sense::Lt:
          if (act > c.rhs - instance.strict_epsilon(c) + kFeasTol) return false;
          break;
      }
    }
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += instance.objective[static_cast<std::size_t>(j)] * xi[static_cast<std::size_t>(j)];
    if (obj < best_obj - kBoundTol) {
      best_obj = obj;
      best.assignment = std::move(xi);
      best.objective_value = obj;
      best.status = IlpStatus::Optimal;
    }
    return true;
  };

  // Evaluates a node in place: propagation then LP.  Returns false when the
  // node is infeasible or dominated by the incumbent.
  auto evaluate = [&](Node& node) {
    if (!propagate(rows, node.lo, node.hi)) return false;
    LpInternal lp = solve_lp(rows, instance.objective, node.lo, node.hi);
    ++nodes;
    if (!lp.feasible) return false;
    node.bound = lp.value;
    node.x = std::move(lp.x);
    if (node.bound >= best_obj - kBoundTol) return false;
    return true;
  };

  Node root;
  root.id = next_id++;
  root.lo.assign(static_cast<std::size_t>(n), 0.0);
  root.hi.assign(static_cast<std::size_t>(n), 1.0);
  for (const auto& [j, v] : instance.fixed) {
    root.lo[static_cast<std::size_t>(j)] = v;
    root.hi[static_cast<std::size_t>(j)] = v;
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  if (evaluate(root)) open.push(std::move(root));

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (node.bound >= best_obj - kBoundTol) continue;

    // DFS plunge from this node, queueing the sibling of each step.
    bool alive = true;
    while (alive) {
      if (lp_point_integral(node) && verify_and_store(node.x)) break;
      int q = most_fractional(node);
      if (q < 0) break;  // fully fixed yet not verifiable: exhausted

      Node one = node;
      one.id = next_id++;
      one.lo[static_cast<std::size_t>(q)] = 1.0;
      one.hi[static_cast<std::size_t>(q)] = 1.0;
      bool one_alive = evaluate(one);

      Node zero = std::move(node);
      zero.id = next_id++;
      zero.lo[static_cast<std::size_t>(q)] = 0.0;
      zero.hi[static_cast<std::size_t>(q)] = 0.0;
      bool zero_alive = evaluate(zero);

      if (one_alive && zero_alive) {
        node = std::move(one);
        open.push(std::move(zero));
      } else if (one_alive) {
        node = std::move(one);
      } else if (zero_alive) {
        node = std::move(zero);
      } else {
        alive = false;
      }
    }
  }

  best.nodes_explored = nodes;
  if (best.status == IlpStatus::Optimal) {
    // Re-derive the objective to keep reported cost independent of search
    // order round-off.
    double obj = 0.0;
    for (int j = 0; j < n; ++j)
      obj += instance.objective[static_cast<std::size_t>(j)] * best.assignment[static_cast<std::size_t>(j)];
    best.objective_value = obj;
  }
  return best;
}

IlpInstance null_variables(const IlpInstance& instance, const std::vector<int>& zero_set) {
  instance.validate();
  IlpInstance out = instance;
  std::vector<char> zero(static_cast<std::size_t>(instance.n_vars), 0);
  for (int j : zero_set) {
    if (j < 0 || j >= instance.n_vars)
      throw std::invalid_argument("null_variables: index out of range");
    zero[static_cast<std::size_t>(j)] = 1;
    out.fixed[j] = 0;
  }
  for (auto& c : out.constraints) {
    std::erase_if(c.coeffs, [&](const auto& p) { return zero[static_cast<std::size_t>(p.first)] != 0; });
  }
  // Rows that became constant and are satisfied can go; violated ones stay to
  // mark the instance infeasible.
  std::erase_if(out.constraints, [&](const IlpConstraint& c) {
    if (!c.coeffs.empty()) return false;
    switch (c.sense) {
      case Sense::Le:
        return 0.0 <= c.rhs + kFeasTol;
      case Sense::Ge:
        return 0.0 >= c.rhs - kFeasTol;
      case Sense::Lt:
        return 0.0 <= c.rhs - instance.strict_epsilon(c) + kFeasTol;
    }
    return false;
  });
  return out;
}

std::string to_lp_format(const IlpInstance& instance) {
  auto var_name = [&](int j) {
    if (j < static_cast<int>(instance.var_names.size()) && !instance.var_names[static_cast<std::size_t>(j)].empty())
      return instance.var_names[static_cast<std::size_t>(j)];
    return std::string("x") + std::to_string(j);
  };
  std::ostringstream os;
  os << "minimize\n obj:";
  for (int j = 0; j < instance.n_vars; ++j) {
    double c = instance.objective[static_cast<std::size_t>(j)];
    if (c == 0.0) continue;
    os << (c >= 0 ? " + " : " - ") << std::abs(c) << " " << var_name(j);
  }
  os << "\nsubject to\n";
  int idx = 0;
  for (const auto& c : instance.constraints) {
    os << " " << (c.name.empty() ? "c" + std::to_string(idx) : c.name) << ":";
    for (const auto& [j, a] : c.coeffs)
      os << (a >= 0 ? " + " : " - ") << std::abs(a) << " " << var_name(j);
    double rhs = c.rhs;
    if (c.sense == Sense::Ge)
      os << " >= ";
    else
      os << " <= ";
    if (c.sense == Sense::Lt) rhs -= instance.strict_epsilon(c);
    os << rhs << "\n";
    ++idx;
  }
  os << "bounds\n";
  for (int j = 0; j < instance.n_vars; ++j) {
    auto it = instance.fixed.find(j);
    if (it != instance.fixed.end())
      os << " " << var_name(j) << " = " << it->second << "\n";
    else
      os << " 0 <= " << var_name(j) << " <= 1\n";
  }
  os << "binary\n";
  for (int j = 0; j < instance.n_vars; ++j) os << " " << var_name(j) << "\n";
  os << "end\n";
  return os.str();
}

}  // namespace mmplan
