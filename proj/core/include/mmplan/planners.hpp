#pragma once

#include "mmplan/deploy.hpp"

namespace mmplan {

struct BenchmarkConfig {
  double rss_threshold_db = -90.0;  // average-RSS floor for ASSGP
  int min_diversity = 2;            // macro-diversity floor for MDP/ASSGP
};

// Macro-diversity planner: exact ILP minimizing cost subject to every
// constrained grid being LoS-covered by at least `min_diversity` sites within
// range.  Association is the plain LoS rule (no load ceiling).
Deployment solve_mdp(const Scenario& scenario, const BenchmarkConfig& config = {},
                     int threads = 0);

// Average-signal-strength planner: cost-normalized greedy selection until
// every constrained grid has the diversity floor and an average received
// signal strength (dB over covering links) above the threshold.
Deployment solve_assgp(const Scenario& scenario, const BenchmarkConfig& config = {},
                       int threads = 0);

// Blockage-guaranteed greedy planner: reuses the load-capped coverage
// indicators and adds sites until every grid's blockage-only outage row is
// satisfied (SINR term dropped).
Deployment solve_bgga(const Scenario& scenario, const BenchmarkConfig& config = {},
                      int threads = 0);

// Average RSS in dB for a link: p_tx[dBm] + g_main[dB] - pathloss[dB].
double link_rss_db(const Scenario& scenario, const LinkTable& table, int site_id, int grid_id);

}  // namespace mmplan
