#include "mmplan/planners.hpp"

#include <cmath>

#include "mmplan/log.hpp"

namespace mmplan {

namespace {

// Plain LoS association rule used by MDP/ASSGP: any reachable grid within
// range, no load ceiling.
std::vector<std::uint8_t> los_mask(const LinkTable& table) {
  const std::size_t B = static_cast<std::size_t>(table.num_sites());
  const std::size_t G = static_cast<std::size_t>(table.num_grids());
  std::vector<std::uint8_t> mask(B * G, 0);
  for (int b = 1; b <= table.num_sites(); ++b)
    for (int g = 1; g <= table.num_grids(); ++g)
      if (table.at(b, g).p_blk < 1.0) mask[(b - 1) * G + (g - 1)] = 1;
  return mask;
}

std::vector<std::uint8_t> apply_y(const std::vector<std::uint8_t>& mask,
                                  const std::vector<int>& y, int B, int G) {
  std::vector<std::uint8_t> x(mask.size(), 0);
  for (int b = 0; b < B; ++b) {
    if (!y[static_cast<std::size_t>(b)]) continue;
    for (int g = 0; g < G; ++g) {
      std::size_t k = static_cast<std::size_t>(b) * static_cast<std::size_t>(G) +
                      static_cast<std::size_t>(g);
      x[k] = mask[k];
    }
  }
  return x;
}

std::vector<int> constrained_grids(const Scenario& scenario) {
  std::vector<int> out;
  for (int g = 1; g <= scenario.num_grids(); ++g)
    if (scenario.grid(g).outage_tolerance < 1.0) out.push_back(g);
  return out;
}

Deployment infeasible_deployment(std::string scheme, const Scenario& scenario, double phi,
                                 std::vector<int> grids) {
  Deployment d;
  d.scheme = std::move(scheme);
  d.feasible = false;
  d.num_sites = scenario.num_sites();
  d.num_grids = scenario.num_grids();
  d.phi = phi;
  d.y.assign(static_cast<std::size_t>(d.num_sites), 0);
  d.x.assign(static_cast<std::size_t>(d.num_sites) * static_cast<std::size_t>(d.num_grids), 0);
  d.infeasible_grids = std::move(grids);
  return d;
}

}  // namespace

double link_rss_db(const Scenario& scenario, const LinkTable& table, int site_id, int grid_id) {
  const RadioParams& rp = scenario.radio();
  const double p_tx_dbm = 10.0 * std::log10(rp.p_tx * 1000.0);
  const double pl_db = -linear_to_db(table.at(site_id, grid_id).pl);
  return p_tx_dbm + linear_to_db(rp.g_main) - pl_db;
}

Deployment solve_mdp(const Scenario& scenario, const BenchmarkConfig& config, int threads) {
  const int B = scenario.num_sites();
  const int G = scenario.num_grids();
  const RadioParams& rp = scenario.radio();
  LinkTable table = build_link_table(scenario, threads);
  const double phi = solve_phi(rp.gamma, rp.n_rf);
  std::vector<std::uint8_t> mask = los_mask(table);

  // Structural check doubles as the infeasibility report.
  std::vector<int> short_grids;
  for (int g : constrained_grids(scenario)) {
    int cands = 0;
    for (int b = 1; b <= B; ++b)
      if (mask[static_cast<std::size_t>(b - 1) * G + (g - 1)]) ++cands;
    if (cands < config.min_diversity) short_grids.push_back(g);
  }
  if (!short_grids.empty()) {
    log::warn("mdp: " + std::to_string(short_grids.size()) + " grid(s) lack candidates");
    return infeasible_deployment("mdp", scenario, phi, std::move(short_grids));
  }

  IlpInstance inst;
  inst.n_vars = B;
  inst.objective.resize(static_cast<std::size_t>(B));
  inst.var_names.resize(static_cast<std::size_t>(B));
  for (int b = 1; b <= B; ++b) {
    inst.objective[static_cast<std::size_t>(b - 1)] = scenario.site(b).cost;
    inst.var_names[static_cast<std::size_t>(b - 1)] = "y" + std::to_string(b);
  }
  for (int g : constrained_grids(scenario)) {
    IlpConstraint c;
    c.sense = Sense::Ge;
    c.rhs = config.min_diversity;
    c.name = "div_g" + std::to_string(g);
    for (int b = 1; b <= B; ++b)
      if (mask[static_cast<std::size_t>(b - 1) * G + (g - 1)]) c.coeffs.emplace_back(b - 1, 1.0);
    inst.constraints.push_back(std::move(c));
  }

  IlpSolution sol = solve_bb(inst);
  if (sol.status != IlpStatus::Optimal)
    return infeasible_deployment("mdp", scenario, phi, constrained_grids(scenario));

  Deployment d = assemble_deployment("mdp", scenario, table, sol.assignment,
                                     apply_y(mask, sol.assignment, B, G), phi);
  d.ilp_nodes = sol.nodes_explored;
  return d;
}

Deployment solve_assgp(const Scenario& scenario, const BenchmarkConfig& config, int threads) {
  const int B = scenario.num_sites();
  const int G = scenario.num_grids();
  const RadioParams& rp = scenario.radio();
  LinkTable table = build_link_table(scenario, threads);
  const double phi = solve_phi(rp.gamma, rp.n_rf);
  std::vector<std::uint8_t> mask = los_mask(table);
  std::vector<int> need = constrained_grids(scenario);

  std::vector<double> rss(static_cast<std::size_t>(B) * static_cast<std::size_t>(G), 0.0);
  for (int b = 1; b <= B; ++b)
    for (int g = 1; g <= G; ++g)
      if (mask[static_cast<std::size_t>(b - 1) * G + (g - 1)])
        rss[static_cast<std::size_t>(b - 1) * G + (g - 1)] = link_rss_db(scenario, table, b, g);

  std::vector<int> y(static_cast<std::size_t>(B), 0);

  auto grid_satisfied = [&](int g, const std::vector<int>& sel) {
    int div = 0;
    double rss_sum = 0.0;
    for (int b = 1; b <= B; ++b) {
      std::size_t k = static_cast<std::size_t>(b - 1) * G + (g - 1);
      if (sel[static_cast<std::size_t>(b - 1)] && mask[k]) {
        ++div;
        rss_sum += rss[k];
      }
    }
    if (div < config.min_diversity) return false;
    return rss_sum / div >= config.rss_threshold_db;
  };

  // Residual used when no single site flips a grid to satisfied: remaining
  // diversity deficit (the RSS term alone is not monotone in the selection).
  auto residual = [&](int g, const std::vector<int>& sel) {
    int div = 0;
    for (int b = 1; b <= B; ++b)
      if (sel[static_cast<std::size_t>(b - 1)] && mask[static_cast<std::size_t>(b - 1) * G + (g - 1)]) ++div;
    return std::max(0, config.min_diversity - div);
  };

  auto unsatisfied = [&](const std::vector<int>& sel) {
    std::vector<int> out;
    for (int g : need)
      if (!grid_satisfied(g, sel)) out.push_back(g);
    return out;
  };

  for (int round = 0; round < B; ++round) {
    std::vector<int> unsat = unsatisfied(y);
    if (unsat.empty()) break;

    int best_site = -1;
    long best_count = 0;
    long best_red = 0;
    double best_cost = 0.0;
    for (int b = 1; b <= B; ++b) {
      if (y[static_cast<std::size_t>(b - 1)]) continue;
      std::vector<int> trial(y);
      trial[static_cast<std::size_t>(b - 1)] = 1;
      long count = 0;
      long red = 0;
      for (int g : unsat) {
        if (grid_satisfied(g, trial)) ++count;
        red += residual(g, y) - residual(g, trial);
      }
      if (count == 0 && red == 0) continue;
      double cost = scenario.site(b).cost;
      // Ratio comparison (count/cost) by cross-multiplication, then residual
      // reduction, then cheaper, then lower id.
      bool better;
      if (best_site < 0) {
        better = true;
      } else if (count * best_cost != best_count * cost) {
        better = count * best_cost > best_count * cost;
      } else if (count != best_count) {
        better = count > best_count;
      } else if (red != best_red) {
        better = red > best_red;
      } else if (cost != best_cost) {
        better = cost < best_cost;
      } else {
        better = false;
      }
      if (better) {
        best_site = b;
        best_count = count;
        best_red = red;
        best_cost = cost;
      }
    }

    if (best_site < 0) {
      log::warn("assgp: stalled with " + std::to_string(unsat.size()) + " grid(s) unsatisfied");
      return infeasible_deployment("assgp", scenario, phi, std::move(unsat));
    }
    y[static_cast<std::size_t>(best_site - 1)] = 1;
  }

  std::vector<int> unsat = unsatisfied(y);
  if (!unsat.empty())
    return infeasible_deployment("assgp", scenario, phi, std::move(unsat));
  return assemble_deployment("assgp", scenario, table, y, apply_y(mask, y, B, G), phi);
}

Deployment solve_bgga(const Scenario& scenario, const BenchmarkConfig& /*config*/, int threads) {
  const int B = scenario.num_sites();
  const int G = scenario.num_grids();
  const RadioParams& rp = scenario.radio();
  LinkTable table = build_link_table(scenario, threads);
  const double phi = solve_phi(rp.gamma, rp.n_rf);
  CoverageSolution cov = max_coverage(table, scenario, phi, CoverageMethod::PrefixScan, threads);

  std::vector<int> need = constrained_grids(scenario);

  // Blockage-only log terms over the load-capped coverage pairs.
  std::vector<double> term(static_cast<std::size_t>(B) * static_cast<std::size_t>(G), 0.0);
  for (int b = 1; b <= B; ++b)
    for (int g = 1; g <= G; ++g)
      if (cov.covers(b, g)) {
        const LinkTable::Entry& e = table.at(b, g);
        term[static_cast<std::size_t>(b - 1) * G + (g - 1)] =
            std::log(e.p_blk + rp.gamma * (1.0 - e.p_blk));
      }

  std::vector<double> lhs(static_cast<std::size_t>(G), 0.0);
  std::vector<int> y(static_cast<std::size_t>(B), 0);
  auto satisfied = [&](int g) {
    return lhs[static_cast<std::size_t>(g - 1)] <= std::log(scenario.grid(g).outage_tolerance);
  };

  for (int round = 0; round < B; ++round) {
    std::vector<int> unsat;
    for (int g : need)
      if (!satisfied(g)) unsat.push_back(g);
    if (unsat.empty()) break;

    int best_site = -1;
    long best_count = -1;
    double best_cost = 0.0;
    for (int b = 1; b <= B; ++b) {
      if (y[static_cast<std::size_t>(b - 1)]) continue;
      long count = 0;
      double gain = 0.0;
      for (int g : unsat) {
        double t = term[static_cast<std::size_t>(b - 1) * G + (g - 1)];
        if (t == 0.0) continue;
        gain += -t;
        if (lhs[static_cast<std::size_t>(g - 1)] + t <=
            std::log(scenario.grid(g).outage_tolerance))
          ++count;
      }
      if (gain == 0.0) continue;  // touches no unsatisfied grid
      double cost = scenario.site(b).cost;
      bool better;
      if (best_site < 0) {
        better = true;
      } else if (count != best_count) {
        better = count > best_count;
      } else if (cost != best_cost) {
        better = cost < best_cost;
      } else {
        better = false;  // lowest id wins
      }
      if (better) {
        best_site = b;
        best_count = count;
        best_cost = cost;
      }
    }

    if (best_site < 0) {
      log::warn("bgga: stalled with " + std::to_string(unsat.size()) + " grid(s) unsatisfied");
      return infeasible_deployment("bgga", scenario, phi, std::move(unsat));
    }
    y[static_cast<std::size_t>(best_site - 1)] = 1;
    for (int g = 1; g <= G; ++g)
      lhs[static_cast<std::size_t>(g - 1)] +=
          term[static_cast<std::size_t>(best_site - 1) * G + (g - 1)];
  }

  std::vector<int> unsat;
  for (int g : need)
    if (!satisfied(g)) unsat.push_back(g);
  if (!unsat.empty()) return infeasible_deployment("bgga", scenario, phi, std::move(unsat));

  std::vector<std::uint8_t> x(static_cast<std::size_t>(B) * static_cast<std::size_t>(G), 0);
  for (int b = 1; b <= B; ++b) {
    if (!y[static_cast<std::size_t>(b - 1)]) continue;
    for (int g = 1; g <= G; ++g)
      if (cov.covers(b, g)) x[static_cast<std::size_t>(b - 1) * G + (g - 1)] = 1;
  }
  return assemble_deployment("bgga", scenario, table, y, x, phi);
}

}  // namespace mmplan
