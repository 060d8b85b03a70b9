#pragma once

#include <cstdint>
#include <vector>

#include "mmplan/linkmodel.hpp"

namespace mmplan {

// Per-site maximum link distance and coverage indicators.
struct CoverageSolution {
  std::vector<double> r_max_per_site;                // B
  std::vector<std::vector<std::uint8_t>> lambda;     // B rows of G indicators
  std::vector<double> mean_load_per_site;            // B, E[n_b(Lambda_b)]
  std::vector<int> bisect_iterations;                // B, 0 when prefix scan was used
  std::vector<std::uint8_t> no_feasible_grid;        // B, degenerate-site flag

  bool covers(int site_id, int grid_id) const {  // 1-based ids
    return lambda[static_cast<std::size_t>(site_id - 1)]
                 [static_cast<std::size_t>(grid_id - 1)] != 0;
  }
};

enum class CoverageMethod {
  PrefixScan,  // O(G log G) greedy prefix walk
  Bisection,   // iterative feasibility testing on the link distance
};

// LoS-reachable grids of one site (p_blk < 1, r <= R^max), sorted by
// ascending distance, ties by ascending grid id.  Returns 1-based grid ids.
std::vector<int> sorted_feasible_grids(const LinkTable& table, int site_id);

// Maximizes each site's coverage subject to the expected-load ceiling `phi`.
// Both methods return the same coverage indicators: the longest
// distance-prefix of sorted_feasible_grids whose cumulative expected load
// stays within phi, where equidistant grids are admitted or rejected as a
// group.
CoverageSolution max_coverage(const LinkTable& table, const Scenario& scenario, double phi,
                              CoverageMethod method = CoverageMethod::PrefixScan,
                              int threads = 0);

}  // namespace mmplan
