// Test-only oracles, deliberately independent of the library's solve paths.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mmplan/deploy.hpp"
#include "mmplan/ilp.hpp"
#include "mmplan/scenario_io.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Exhaustive binary enumeration of an IlpInstance (strict rows use the same
// declared epsilon the solver does).
// ---------------------------------------------------------------------------
struct EnumResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<int> argmin;
};

inline bool assignment_feasible(const mmplan::IlpInstance& inst, const std::vector<int>& x) {
  for (const auto& c : inst.constraints) {
    double act = 0.0;
    for (const auto& [j, a] : c.coeffs) act += a * x[static_cast<std::size_t>(j)];
    switch (c.sense) {
      case mmplan::Sense::Le:
        if (act > c.rhs + 1e-9) return false;
        break;
      case mmplan::Sense::Ge:
        if (act < c.rhs - 1e-9) return false;
        break;
      case mmplan::Sense::Lt:
        if (act > c.rhs - inst.strict_epsilon(c) + 1e-9) return false;
        break;
    }
  }
  for (const auto& [j, v] : inst.fixed)
    if (x[static_cast<std::size_t>(j)] != v) return false;
  return true;
}

inline EnumResult enumerate_ilp(const mmplan::IlpInstance& inst) {
  if (inst.n_vars > 24) throw std::logic_error("enumerate_ilp: too many variables");
  EnumResult best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<int> x(static_cast<std::size_t>(inst.n_vars), 0);
  const long total = 1L << inst.n_vars;
  for (long m = 0; m < total; ++m) {
    for (int j = 0; j < inst.n_vars; ++j) x[static_cast<std::size_t>(j)] = (m >> j) & 1;
    if (!assignment_feasible(inst, x)) continue;
    double obj = 0.0;
    for (int j = 0; j < inst.n_vars; ++j)
      obj += inst.objective[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    if (!best.feasible || obj < best.objective - 1e-12) {
      best.feasible = true;
      best.objective = obj;
      best.argmin = x;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Textbook standard-form tableau simplex (Bland's rule, artificial basis).
// Solves min c.x, A x <= b, 0 <= x <= 1 by adding explicit upper-bound rows.
// Only suitable for the tiny instances used in cross-checks.
// ---------------------------------------------------------------------------
struct TextbookLp {
  bool feasible = false;
  double value = 0.0;
};

inline TextbookLp textbook_lp(const std::vector<std::vector<double>>& a,
                              const std::vector<double>& b, const std::vector<double>& c) {
  // Standard form: A x + s = b with x, s >= 0; artificials where b < 0 after
  // normalization.  Full dense tableau with the objective in the last row.
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  std::vector<std::vector<double>> A(static_cast<std::size_t>(m));
  std::vector<double> rhs(b);
  for (int i = 0; i < m; ++i) {
    A[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
    A[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n + m), 0.0);
    A[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = 1.0;
    if (rhs[static_cast<std::size_t>(i)] < 0.0) {
      for (auto& v : A[static_cast<std::size_t>(i)]) v = -v;
      rhs[static_cast<std::size_t>(i)] = -rhs[static_cast<std::size_t>(i)];
    }
  }
  const int n_art = m;
  const int cols = n + m + n_art;
  for (int i = 0; i < m; ++i) {
    A[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(cols), 0.0);
    A[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + m + i)] = 1.0;
  }
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + m + i;

  auto pivot = [&](int r, int q) {
    double p = A[static_cast<std::size_t>(r)][static_cast<std::size_t>(q)];
    for (auto& v : A[static_cast<std::size_t>(r)]) v /= p;
    rhs[static_cast<std::size_t>(r)] /= p;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      double f = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j)
        A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
            f * A[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
      rhs[static_cast<std::size_t>(i)] -= f * rhs[static_cast<std::size_t>(r)];
    }
    basis[static_cast<std::size_t>(r)] = q;
  };

  auto run = [&](const std::vector<double>& cost) {
    for (long iter = 0; iter < 100000; ++iter) {
      // Reduced costs via the basis (recomputed each iteration; tiny sizes).
      std::vector<double> y(static_cast<std::size_t>(m), 0.0);
      double best = -1e-9;
      int q = -1;
      for (int j = 0; j < cols; ++j) {
        bool basic = false;
        for (int i = 0; i < m; ++i)
          if (basis[static_cast<std::size_t>(i)] == j) basic = true;
        if (basic) continue;
        double d = cost[static_cast<std::size_t>(j)];
        for (int i = 0; i < m; ++i)
          d -= cost[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] *
               A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (d < best - 1e-12) {  // Bland: smallest index among negatives
          best = d;
          q = j;
          break;
        }
      }
      if (q < 0) return true;
      int r = -1;
      double t = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        double w = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
        if (w > 1e-10) {
          double ti = rhs[static_cast<std::size_t>(i)] / w;
          if (ti < t - 1e-12 ||
              (ti <= t + 1e-12 && r >= 0 &&
               basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(r)])) {
            t = ti;
            r = i;
          }
        }
      }
      if (r < 0) return false;  // unbounded
      pivot(r, q);
    }
    throw std::runtime_error("textbook_lp: iteration limit");
  };

  std::vector<double> phase1(static_cast<std::size_t>(cols), 0.0);
  for (int j = n + m; j < cols; ++j) phase1[static_cast<std::size_t>(j)] = 1.0;
  if (!run(phase1)) return {};
  double art = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] >= n + m) art += rhs[static_cast<std::size_t>(i)];
  if (art > 1e-7) return {};

  std::vector<double> phase2(static_cast<std::size_t>(cols), 0.0);
  for (int j = 0; j < n; ++j) phase2[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
  // Large cost blocks artificials from re-entering.
  for (int j = n + m; j < cols; ++j) phase2[static_cast<std::size_t>(j)] = 1e9;
  if (!run(phase2)) return {};

  TextbookLp out;
  out.feasible = true;
  out.value = 0.0;
  for (int i = 0; i < m; ++i) {
    int j = basis[static_cast<std::size_t>(i)];
    if (j < n) out.value += c[static_cast<std::size_t>(j)] * rhs[static_cast<std::size_t>(i)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Independent evaluation of a grid's outage-constraint left side, written
// from the raw link quantities rather than the deploy module's cached model.
// ---------------------------------------------------------------------------
inline double outage_lhs_reference(const std::vector<int>& y,
                                   const mmplan::CoverageSolution& cov,
                                   const mmplan::LinkTable& lt, const mmplan::Scenario& sc,
                                   int grid_id) {
  const mmplan::RadioParams& rp = sc.radio();
  const int B = sc.num_sites();
  double interference = rp.noise;
  for (int i = 1; i <= B; ++i) {
    if (!y[static_cast<std::size_t>(i - 1)]) continue;
    const auto& e = lt.at(i, grid_id);
    if (e.p_blk >= 1.0) continue;
    double x_ig = cov.covers(i, grid_id) ? 1.0 : 0.0;
    interference += (1.0 - x_ig / rp.n_rf) * rp.p_tx * rp.g_side * e.pl;
  }
  double lhs = 0.0;
  for (int b = 1; b <= B; ++b) {
    if (!y[static_cast<std::size_t>(b - 1)] || !cov.covers(b, grid_id)) continue;
    const auto& e = lt.at(b, grid_id);
    double p_bar = rp.p_tx * rp.g_main * e.pl / rp.n_rf;
    bool sinr_bad = p_bar / interference < rp.z;
    double phat = sinr_bad ? (1.0 - e.p_blk) : 0.0;
    lhs += std::log(e.p_blk + rp.gamma * (1.0 - e.p_blk) + (1.0 - rp.gamma) * phat);
  }
  return lhs;
}

// Full-enumeration deployment oracle: minimum cost over all binary y whose
// every constrained grid satisfies the (reference) outage constraint.
struct DeployEnum {
  bool feasible = false;
  double cost = 0.0;
  std::vector<int> argmin;
};

inline DeployEnum enumerate_deployments(const mmplan::CoverageSolution& cov,
                                        const mmplan::LinkTable& lt,
                                        const mmplan::Scenario& sc) {
  const int B = sc.num_sites();
  if (B > 16) throw std::logic_error("enumerate_deployments: too many sites");
  DeployEnum best;
  best.cost = std::numeric_limits<double>::infinity();
  std::vector<int> y(static_cast<std::size_t>(B), 0);
  for (long m = 0; m < (1L << B); ++m) {
    for (int b = 0; b < B; ++b) y[static_cast<std::size_t>(b)] = (m >> b) & 1;
    bool ok = true;
    for (int g = 1; g <= sc.num_grids() && ok; ++g) {
      double zeta = sc.grid(g).outage_tolerance;
      if (zeta >= 1.0) continue;
      if (outage_lhs_reference(y, cov, lt, sc, g) > std::log(zeta) + 1e-9) ok = false;
    }
    if (!ok) continue;
    double cost = 0.0;
    for (int b = 1; b <= B; ++b)
      if (y[static_cast<std::size_t>(b - 1)]) cost += sc.site(b).cost;
    if (!best.feasible || cost < best.cost - 1e-12) {
      best.feasible = true;
      best.cost = cost;
      best.argmin = y;
    }
  }
  return best;
}

// Builds a small scenario directly from JSON text (single code path with the
// loader used in production).
inline mmplan::ScenarioBundle scenario_from_text(const std::string& text) {
  return mmplan::parse_scenario_text(text);
}

}  // namespace oracle
