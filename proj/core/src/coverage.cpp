#include "mmplan/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mmplan/parallel.hpp"

namespace mmplan {

namespace {

struct FeasibleGrid {
  int grid_id;
  double r;
  double load;  // lambda * side^2 * (1 - p_blk)
};

std::vector<FeasibleGrid> feasible_grids(const LinkTable& table, const Scenario& scenario,
                                         int site_id) {
  std::vector<FeasibleGrid> out;
  for (int g = 1; g <= table.num_grids(); ++g) {
    const LinkTable::Entry& e = table.at(site_id, g);
    if (e.p_blk >= 1.0) continue;  // excludes non-LoS and r > R^max
    const GridCell& cell = scenario.grid(g);
    out.push_back({g, e.r, cell.ue_density * cell.side * cell.side * (1.0 - e.p_blk)});
  }
  std::sort(out.begin(), out.end(), [](const FeasibleGrid& a, const FeasibleGrid& b) {
    if (a.r != b.r) return a.r < b.r;
    return a.grid_id < b.grid_id;
  });
  return out;
}

// End index (exclusive) of the tie group starting at `k`.
std::size_t tie_group_end(const std::vector<FeasibleGrid>& fg, std::size_t k) {
  std::size_t j = k + 1;
  while (j < fg.size() && fg[j].r == fg[k].r) ++j;
  return j;
}

}  // namespace

std::vector<int> sorted_feasible_grids(const LinkTable& table, int site_id) {
  if (site_id < 1 || site_id > table.num_sites())
    throw std::invalid_argument("sorted_feasible_grids: unknown site id");
  std::vector<FeasibleGrid> fg;
  for (int g = 1; g <= table.num_grids(); ++g) {
    const LinkTable::Entry& e = table.at(site_id, g);
    if (e.p_blk >= 1.0) continue;
    fg.push_back({g, e.r, 0.0});
  }
  std::sort(fg.begin(), fg.end(), [](const FeasibleGrid& a, const FeasibleGrid& b) {
    if (a.r != b.r) return a.r < b.r;
    return a.grid_id < b.grid_id;
  });
  std::vector<int> ids;
  ids.reserve(fg.size());
  for (const auto& f : fg) ids.push_back(f.grid_id);
  return ids;
}

CoverageSolution max_coverage(const LinkTable& table, const Scenario& scenario, double phi,
                              CoverageMethod method, int threads) {
  const int num_sites = table.num_sites();
  const int num_grids = table.num_grids();
  const RadioParams& rp = scenario.radio();

  CoverageSolution sol;
  sol.r_max_per_site.assign(static_cast<std::size_t>(num_sites), 0.0);
  sol.lambda.assign(static_cast<std::size_t>(num_sites),
                    std::vector<std::uint8_t>(static_cast<std::size_t>(num_grids), 0));
  sol.mean_load_per_site.assign(static_cast<std::size_t>(num_sites), 0.0);
  sol.bisect_iterations.assign(static_cast<std::size_t>(num_sites), 0);
  sol.no_feasible_grid.assign(static_cast<std::size_t>(num_sites), 0);

  parallel_for(num_sites, threads, [&](int b0) {
    const int b = b0 + 1;
    std::vector<FeasibleGrid> fg = feasible_grids(table, scenario, b);
    const std::size_t n = fg.size();

    if (n == 0) {
      // Degenerate site: nothing is reachable, report the full radius.
      sol.r_max_per_site[static_cast<std::size_t>(b0)] = rp.r_max;
      sol.no_feasible_grid[static_cast<std::size_t>(b0)] = 1;
      return;
    }

    // Prefix sums in sorted order; both methods test feasibility against the
    // same sums so their outputs agree bit for bit.
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + fg[i].load;

    std::size_t k = 0;        // admitted prefix length
    double r_site = rp.r_max;

    if (method == CoverageMethod::Bisection) {
      double lb = 0.0, ub = rp.r_max;
      int iters = 0;
      while (ub - lb > rp.eps_bisect) {
        double md = 0.5 * (lb + ub);
        // Grids within distance md; ties enter together by construction.
        std::size_t cnt = static_cast<std::size_t>(
            std::upper_bound(fg.begin(), fg.end(), md,
                             [](double v, const FeasibleGrid& f) { return v < f.r; }) -
            fg.begin());
        if (cum[cnt] <= phi)
          lb = md;
        else
          ub = md;
        ++iters;
      }
      sol.bisect_iterations[static_cast<std::size_t>(b0)] = iters;
      k = static_cast<std::size_t>(
          std::upper_bound(fg.begin(), fg.end(), lb,
                           [](double v, const FeasibleGrid& f) { return v < f.r; }) -
          fg.begin());
      // The bisection bracket can stop short of a feasible tie group whose
      // distance lies within eps of the boundary; extend to the true maximal
      // prefix so the output matches the greedy characterization.
      while (k < n) {
        std::size_t j = tie_group_end(fg, k);
        if (cum[j] <= phi)
          k = j;
        else
          break;
      }
      r_site = (k > 0) ? std::max(lb, fg[k - 1].r) : lb;
    } else {
      while (k < n) {
        std::size_t j = tie_group_end(fg, k);
        if (cum[j] <= phi)
          k = j;
        else
          break;
      }
      if (k == n)
        r_site = rp.r_max;  // capacity never bound within range
      else
        r_site = (k > 0) ? fg[k - 1].r : 0.0;
    }

    sol.r_max_per_site[static_cast<std::size_t>(b0)] = r_site;
    sol.mean_load_per_site[static_cast<std::size_t>(b0)] = cum[k];
    auto& row = sol.lambda[static_cast<std::size_t>(b0)];
    for (std::size_t i = 0; i < k; ++i)
      row[static_cast<std::size_t>(fg[i].grid_id - 1)] = 1;
  });

  return sol;
}

}  // namespace mmplan
