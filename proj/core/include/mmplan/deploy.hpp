#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mmplan/coverage.hpp"
#include "mmplan/ilp.hpp"

namespace mmplan {

// Linearization data for the subset-selection program, one record per
// coverage pair that received an SINR auxiliary variable.
struct OutageModel {
  struct PairTerm {
    int site_id = 0, grid_id = 0;  // 1-based
    double log_blocked = 0.0;      // log(p_blk + gamma (1 - p_blk))
    double p_bar = 0.0;            // desired-power lower bound [W]
    double big_m = 0.0;            // 2 sigma^2 + sum_i i_hat(Lambda*_{i,g})
    double big_m_row = 0.0;        // big_m + p_bar / z, used in the indicator rows
    int s_var = -1;                // ILP variable index
  };
  std::vector<PairTerm> pairs;
  std::vector<double> zeta_log;             // per grid, log(zeta_g)
  std::vector<std::vector<double>> i_hat;   // per grid: i_hat(Lambda*_{i,g}) for every site i
};

struct GridDiagnostics {
  int macro_diversity = 0;
  double outage_lhs = 0.0;  // left side of the grid's outage constraint
  double log_zeta = 0.0;
  std::vector<std::pair<int, double>> sinr_lb;  // (site id, SINR lower bound) per covering link
};

// Selected sites, association matrix, and per-grid diagnostics.
struct Deployment {
  std::string scheme;
  bool feasible = false;
  std::vector<int> y;             // B entries, 0/1
  std::vector<std::uint8_t> x;    // B x G association, site-major
  double cost = 0.0;
  double phi = 0.0;
  std::vector<GridDiagnostics> per_grid;      // G entries
  std::vector<double> site_load;              // E[n_b(x_b)] per site
  std::vector<int> infeasible_grids;          // offending grid ids when infeasible
  long ilp_nodes = 0;

  int num_sites = 0, num_grids = 0;
  bool covers(int site_id, int grid_id) const {  // 1-based ids
    return x[static_cast<std::size_t>(site_id - 1) * static_cast<std::size_t>(num_grids) +
             static_cast<std::size_t>(grid_id - 1)] != 0;
  }
  int deployed_count() const {
    int n = 0;
    for (int v : y) n += v;
    return n;
  }
};

// Raised by build_selection_ilp when some grid cannot meet its tolerance even
// with every covering candidate deployed and unblocked by SINR.
class InfeasibleScenarioError : public std::runtime_error {
 public:
  InfeasibleScenarioError(std::string msg, std::vector<int> grids)
      : std::runtime_error(std::move(msg)), grids_(std::move(grids)) {}
  const std::vector<int>& grids() const { return grids_; }

 private:
  std::vector<int> grids_;
};

// Assembles the minimum-cost subset-selection ILP: variables are the site
// indicators followed by one SINR auxiliary per covered pair of a constrained
// grid, with indicator rows in big-M form and one outage row per grid.
// With `apply_nulling` false every (site, grid) pair is materialized instead
// (used to measure what variable nulling buys).
IlpInstance build_selection_ilp(const CoverageSolution& coverage, const LinkTable& table,
                                const Scenario& scenario, OutageModel* model = nullptr,
                                bool apply_nulling = true);

// Exact left side of grid `grid_id`'s outage constraint for deployment y with
// the association x = diag(y) * Lambda*.
double evaluate_outage_lhs(const std::vector<int>& y, const CoverageSolution& coverage,
                           const LinkTable& table, const Scenario& scenario, int grid_id);

// Same, for an arbitrary association matrix (benchmark planners).
double evaluate_outage_lhs_x(const std::vector<int>& y, const std::vector<std::uint8_t>& x,
                             const LinkTable& table, const Scenario& scenario, int grid_id);

// Per-link SINR lower bound for a covering pair under deployment (y, x).
double sinr_lower_bound(const std::vector<int>& y, const std::vector<std::uint8_t>& x,
                        const LinkTable& table, const Scenario& scenario, int site_id,
                        int grid_id);

// Fills cost, association diagnostics, and per-grid statistics for a given
// (y, x); shared by the proposed pipeline and the benchmark planners.
Deployment assemble_deployment(std::string scheme, const Scenario& scenario,
                               const LinkTable& table, std::vector<int> y,
                               std::vector<std::uint8_t> x, double phi);

// Full pipeline: link table -> phi -> coverage -> ILP -> branch and bound ->
// reconstruction.  Infeasibility is reported, not thrown.
Deployment solve_deployment(const Scenario& scenario, int threads = 0);

}  // namespace mmplan
