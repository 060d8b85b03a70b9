#pragma once

#include "mmplan/deploy.hpp"
#include "mmplan/rng.hpp"

namespace mmplan {

struct McConfig {
  int n_trials = 50;
  std::uint64_t seed = 0;
  bool use_grid_center = false;  // evaluate UEs at grid centers (bound-exact mode)
  int threads = 0;
};

// One Monte Carlo realization: sampled UEs, blockage draws, RF-chain
// contention, realized SINRs.
struct TrialRecord {
  std::vector<double> sinr;       // realized SINR per served unblocked link
  std::vector<double> sinr_lb;    // deterministic bound for the same (site, grid)
  std::vector<int> attempts;      // per site: unblocked UEs attempting access
  std::vector<int> denied;        // per site: UEs turned away by chain contention
  std::vector<long> grid_ue;      // per grid: sampled UEs
  std::vector<long> grid_outage;  // per grid: UEs whose every covering link failed
};

struct SiteAccessStats {
  int site_id = 0;
  double est = 0.0;          // empirical access-blockage probability
  double se = 0.0;           // standard error of the estimate
  double closed_form = 0.0;  // rho(E[n_b(x_b)])
  double attempt_mean = 0.0;
  double attempt_se = 0.0;
  double expected_load = 0.0;  // E[n_b(x_b)]
};

struct GridOutageStats {
  int grid_id = 0;
  bool defined = false;  // false when no UE was ever sampled in the grid
  double est = 0.0;
  long n_ue = 0;
};

struct McReport {
  long trials = 0;
  std::vector<double> sinr_samples;
  std::vector<double> sinr_lb_samples;
  std::vector<SiteAccessStats> access;     // deployed sites only
  std::vector<GridOutageStats> ue_outage;  // every grid
  std::vector<long> diversity_hist;        // index = macro diversity order
};

// Immutable per-evaluation tables shared by all trials.
struct McContext {
  const Deployment* deployment = nullptr;
  const Scenario* scenario = nullptr;
  const LinkTable* table = nullptr;
  std::vector<int> deployed_sites;   // 1-based ids
  std::vector<double> sinr_bound;    // B x G deterministic lower bounds (covered pairs)
};

McContext make_mc_context(const Deployment& deployment, const Scenario& scenario,
                          const LinkTable& table);

// One trial; `trial_rng` must be the stream derived for this trial index so
// parallel execution reproduces bit-identically.
TrialRecord run_trial(const McContext& ctx, CounterRng trial_rng, const McConfig& config);

McReport aggregate(const McContext& ctx, const std::vector<TrialRecord>& trials);

// Builds the link table, runs `config.n_trials` trials (parallel over
// trials), and aggregates.
McReport run_evaluation(const Deployment& deployment, const Scenario& scenario,
                        const McConfig& config);

}  // namespace mmplan
