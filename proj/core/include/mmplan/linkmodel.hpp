#pragma once

#include <functional>
#include <vector>

#include "mmplan/geometry.hpp"

namespace mmplan {

// 28 GHz LoS pathloss, linear gain: 10^(-3.24 - 2.1 log10 r - 2.0 log10 28).
double pathloss(double r_meters);

// Physical blockage probability: 1 - exp(-beta r - alpha) for an LoS link
// within range, 1 otherwise.
double blockage_prob(double r_meters, bool los, const RadioParams& params);

// UE access-limited blockage probability for a Poisson number of unblocked
// active UEs with mean mu contending for n_rf chains:
//   rho = sum_{i > n_rf} Pois(i; mu) * (i - n_rf) / i.
// Absolute accuracy 1e-12 (series truncated once the Poisson tail mass drops
// below `tail_cutoff`).
double access_block_prob(double mu, int n_rf, double tail_cutoff = 1e-14);

// Expected unblocked active UEs in the cell selected by `assoc_row`.
double mean_active_ue(const std::vector<std::uint8_t>& assoc_row,
                      const class LinkTable& table, const Scenario& scenario, int site_id);

// Solves rho(Phi) = gamma for the expected-load ceiling Phi by bracketing
// bisection.  The returned value sits on the conservative side:
// rho(Phi) <= gamma, with |rho(Phi) - gamma| <= 1e-9.
double solve_phi(double gamma, int n_rf);

// Blockage parameters from obstacle moments: beta = 2 lambda (E[L]+E[W])/pi * eta,
// alpha = lambda E[L] E[W].  `eta` can be computed from the obstacle-height CDF.
struct BlockageParams {
  double alpha;
  double beta;
};
BlockageParams blockage_params_from_obstacles(double lambda_obs, double mean_len,
                                              double mean_wid, double eta);
// eta = 1 - integral_0^1 F_h(s*h_ue + (1-s)*h_bs) ds, Simpson quadrature.
double eta_from_height_cdf(const std::function<double(double)>& height_cdf, double h_ue,
                           double h_bs, int panels = 512);

// Precomputed per (site, grid) link statistics.
class LinkTable {
 public:
  struct Entry {
    bool los = false;
    double r = 0.0;       // meters
    double pl = 0.0;      // linear pathloss
    double p_blk = 1.0;   // physical blockage probability
    double p_bar = 0.0;   // desired-power lower bound at x=1 [W]
    double i_hat0 = 0.0;  // interference upper bound at x=0 [W]
    double i_hat1 = 0.0;  // interference upper bound at x=1 [W]
  };

  LinkTable() = default;
  LinkTable(int num_sites, int num_grids)
      : num_sites_(num_sites),
        num_grids_(num_grids),
        entries_(static_cast<std::size_t>(num_sites) * static_cast<std::size_t>(num_grids)) {}

  const Entry& at(int site_id, int grid_id) const {  // 1-based ids
    return entries_[static_cast<std::size_t>(site_id - 1) * num_grids_ + (grid_id - 1)];
  }
  Entry& at(int site_id, int grid_id) {
    return entries_[static_cast<std::size_t>(site_id - 1) * num_grids_ + (grid_id - 1)];
  }

  int num_sites() const { return num_sites_; }
  int num_grids() const { return num_grids_; }

 private:
  int num_sites_ = 0;
  std::size_t num_grids_ = 0;
  std::vector<Entry> entries_;
};

LinkTable build_link_table(const Scenario& scenario, int threads = 0);

}  // namespace mmplan
