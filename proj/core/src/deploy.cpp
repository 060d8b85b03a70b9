#include "mmplan/deploy.hpp"

#include <cmath>

#include "mmplan/log.hpp"

namespace mmplan {

namespace {

// i_hat(Lambda*_{i,g}) for every site of one grid.
std::vector<double> interference_bounds(const std::vector<std::uint8_t>& covers_col,
                                        const LinkTable& table, int grid_id) {
  std::vector<double> out(static_cast<std::size_t>(table.num_sites()), 0.0);
  for (int i = 1; i <= table.num_sites(); ++i) {
    const LinkTable::Entry& e = table.at(i, grid_id);
    out[static_cast<std::size_t>(i - 1)] =
        covers_col[static_cast<std::size_t>(i - 1)] ? e.i_hat1 : e.i_hat0;
  }
  return out;
}

std::vector<std::uint8_t> lambda_column(const CoverageSolution& cov, int num_sites, int grid_id) {
  std::vector<std::uint8_t> col(static_cast<std::size_t>(num_sites), 0);
  for (int b = 1; b <= num_sites; ++b)
    col[static_cast<std::size_t>(b - 1)] = cov.covers(b, grid_id) ? 1 : 0;
  return col;
}

}  // namespace

double sinr_lower_bound(const std::vector<int>& y, const std::vector<std::uint8_t>& x,
                        const LinkTable& table, const Scenario& scenario, int site_id,
                        int grid_id) {
  const RadioParams& rp = scenario.radio();
  const std::size_t G = static_cast<std::size_t>(table.num_grids());
  double interference = 0.0;
  for (int i = 1; i <= table.num_sites(); ++i) {
    if (!y[static_cast<std::size_t>(i - 1)]) continue;
    const LinkTable::Entry& e = table.at(i, grid_id);
    bool assoc = x[static_cast<std::size_t>(i - 1) * G + static_cast<std::size_t>(grid_id - 1)] != 0;
    interference += assoc ? e.i_hat1 : e.i_hat0;
  }
  return table.at(site_id, grid_id).p_bar / (rp.noise + interference);
}

double evaluate_outage_lhs_x(const std::vector<int>& y, const std::vector<std::uint8_t>& x,
                             const LinkTable& table, const Scenario& scenario, int grid_id) {
  const RadioParams& rp = scenario.radio();
  const std::size_t G = static_cast<std::size_t>(table.num_grids());

  double interference = 0.0;
  for (int i = 1; i <= table.num_sites(); ++i) {
    if (!y[static_cast<std::size_t>(i - 1)]) continue;
    const LinkTable::Entry& e = table.at(i, grid_id);
    bool assoc = x[static_cast<std::size_t>(i - 1) * G + static_cast<std::size_t>(grid_id - 1)] != 0;
    interference += assoc ? e.i_hat1 : e.i_hat0;
  }
  const double denom = rp.noise + interference;

  double lhs = 0.0;
  for (int b = 1; b <= table.num_sites(); ++b) {
    if (!y[static_cast<std::size_t>(b - 1)]) continue;
    if (!x[static_cast<std::size_t>(b - 1) * G + static_cast<std::size_t>(grid_id - 1)]) continue;
    const LinkTable::Entry& e = table.at(b, grid_id);
    if (e.p_bar / denom < rp.z) continue;  // SINR indicator trips: term is log(1) = 0
    lhs += std::log(e.p_blk + rp.gamma * (1.0 - e.p_blk));
  }
  return lhs;
}

double evaluate_outage_lhs(const std::vector<int>& y, const CoverageSolution& coverage,
                           const LinkTable& table, const Scenario& scenario, int grid_id) {
  if (static_cast<int>(y.size()) != table.num_sites())
    throw std::invalid_argument("evaluate_outage_lhs: y length must equal site count");
  const std::size_t G = static_cast<std::size_t>(table.num_grids());
  std::vector<std::uint8_t> x(static_cast<std::size_t>(table.num_sites()) * G, 0);
  for (int b = 1; b <= table.num_sites(); ++b) {
    if (!y[static_cast<std::size_t>(b - 1)]) continue;
    for (int g = 1; g <= table.num_grids(); ++g)
      if (coverage.covers(b, g))
        x[static_cast<std::size_t>(b - 1) * G + static_cast<std::size_t>(g - 1)] = 1;
  }
  return evaluate_outage_lhs_x(y, x, table, scenario, grid_id);
}

IlpInstance build_selection_ilp(const CoverageSolution& coverage, const LinkTable& table,
                                const Scenario& scenario, OutageModel* model,
                                bool apply_nulling) {
  const RadioParams& rp = scenario.radio();
  const int B = table.num_sites();
  const int G = table.num_grids();

  IlpInstance inst;
  inst.n_vars = B;
  inst.objective.resize(static_cast<std::size_t>(B));
  inst.var_names.resize(static_cast<std::size_t>(B));
  for (int b = 1; b <= B; ++b) {
    inst.objective[static_cast<std::size_t>(b - 1)] = scenario.site(b).cost;
    inst.var_names[static_cast<std::size_t>(b - 1)] = "y" + std::to_string(b);
  }

  OutageModel local;
  OutageModel& om = model != nullptr ? *model : local;
  om.pairs.clear();
  om.zeta_log.resize(static_cast<std::size_t>(G));
  om.i_hat.assign(static_cast<std::size_t>(G), {});

  // Structural infeasibility: a constrained grid whose full candidate set is
  // still short of the tolerance can never be served.
  std::vector<int> hopeless;
  for (int g = 1; g <= G; ++g) {
    const double zeta = scenario.grid(g).outage_tolerance;
    om.zeta_log[static_cast<std::size_t>(g - 1)] = std::log(zeta);
    if (zeta >= 1.0) continue;
    double best = 0.0;
    for (int b = 1; b <= B; ++b) {
      if (!coverage.covers(b, g)) continue;
      const LinkTable::Entry& e = table.at(b, g);
      best += std::log(e.p_blk + rp.gamma * (1.0 - e.p_blk));
    }
    if (best > om.zeta_log[static_cast<std::size_t>(g - 1)] + 1e-12)
      hopeless.push_back(g);
  }
  if (!hopeless.empty())
    throw InfeasibleScenarioError(
        "selection ILP: " + std::to_string(hopeless.size()) +
            " grid(s) cannot meet their outage tolerance with any deployment",
        hopeless);

  // SINR auxiliaries: one per covered pair of a constrained grid.  Pairs with
  // Lambda* = 0 (and every pair of an unconstrained grid) stay out of the
  // program entirely unless nulling is disabled for comparison runs.
  std::vector<IlpConstraint> pair_rows;
  std::vector<IlpConstraint> outage_rows;

  for (int g = 1; g <= G; ++g) {
    const double zeta = scenario.grid(g).outage_tolerance;
    const bool constrained = zeta < 1.0;
    if (!constrained && apply_nulling) continue;

    std::vector<std::uint8_t> col = lambda_column(coverage, B, g);
    om.i_hat[static_cast<std::size_t>(g - 1)] = interference_bounds(col, table, g);
    const std::vector<double>& ih = om.i_hat[static_cast<std::size_t>(g - 1)];

    double m_paper = 2.0 * rp.noise;
    for (double v : ih) m_paper += v;

    IlpConstraint outage;
    outage.sense = Sense::Le;
    outage.rhs = om.zeta_log[static_cast<std::size_t>(g - 1)];
    outage.name = "outage_g" + std::to_string(g);

    for (int b = 1; b <= B; ++b) {
      const bool covered = col[static_cast<std::size_t>(b - 1)] != 0;
      if (covered || !apply_nulling) {
        const LinkTable::Entry& e = table.at(b, g);
        OutageModel::PairTerm pt;
        pt.site_id = b;
        pt.grid_id = g;
        pt.p_bar = covered ? e.p_bar : 0.0;  // desired power is gated by Lambda*
        pt.log_blocked = std::log(e.p_blk + rp.gamma * (1.0 - e.p_blk));
        pt.big_m = m_paper;
        pt.big_m_row = m_paper + pt.p_bar / rp.z;
        pt.s_var = inst.n_vars++;
        inst.objective.push_back(0.0);
        inst.var_names.push_back("s_" + std::to_string(b) + "_" + std::to_string(g));
        om.pairs.push_back(pt);

        const double M = pt.big_m_row;
        // s <= y * Lambda*
        IlpConstraint a;
        a.sense = Sense::Le;
        a.rhs = 0.0;
        a.name = "link_" + std::to_string(b) + "_" + std::to_string(g);
        a.coeffs.emplace_back(pt.s_var, 1.0);
        if (covered) a.coeffs.emplace_back(b - 1, -1.0);
        pair_rows.push_back(std::move(a));

        // Indicator rows, scaled by 1/M so the coefficients are O(1):
        //   y_b pbar/z - sum_i y_i ihat_i - s M <= sigma^2        (lower)
        //   sum_i y_i ihat_i - y_b pbar/z + s M <  M - sigma^2    (strict upper)
        IlpConstraint blo, bup;
        blo.sense = Sense::Le;
        blo.rhs = rp.noise / M;
        blo.name = "sinr_lo_" + std::to_string(b) + "_" + std::to_string(g);
        bup.sense = Sense::Lt;
        bup.rhs = 1.0 - rp.noise / M;
        bup.name = "sinr_up_" + std::to_string(b) + "_" + std::to_string(g);
        for (int i = 1; i <= B; ++i) {
          double coef = ih[static_cast<std::size_t>(i - 1)] / M;
          if (i == b) coef -= pt.p_bar / (rp.z * M);
          if (coef != 0.0) {
            blo.coeffs.emplace_back(i - 1, -coef);
            bup.coeffs.emplace_back(i - 1, coef);
          }
        }
        blo.coeffs.emplace_back(pt.s_var, -1.0);
        bup.coeffs.emplace_back(pt.s_var, 1.0);
        pair_rows.push_back(std::move(blo));
        pair_rows.push_back(std::move(bup));

        if (constrained && pt.log_blocked != 0.0)
          outage.coeffs.emplace_back(pt.s_var, pt.log_blocked);
      }
    }
    if (constrained) outage_rows.push_back(std::move(outage));
  }

  inst.constraints.reserve(pair_rows.size() + outage_rows.size());
  for (auto& c : pair_rows) inst.constraints.push_back(std::move(c));
  for (auto& c : outage_rows) inst.constraints.push_back(std::move(c));
  inst.validate();
  return inst;
}

Deployment assemble_deployment(std::string scheme, const Scenario& scenario,
                               const LinkTable& table, std::vector<int> y,
                               std::vector<std::uint8_t> x, double phi) {
  const int B = table.num_sites();
  const int G = table.num_grids();
  Deployment d;
  d.scheme = std::move(scheme);
  d.feasible = true;
  d.num_sites = B;
  d.num_grids = G;
  d.y = std::move(y);
  d.x = std::move(x);
  d.phi = phi;
  d.cost = 0.0;
  for (int b = 1; b <= B; ++b)
    if (d.y[static_cast<std::size_t>(b - 1)]) d.cost += scenario.site(b).cost;

  d.site_load.assign(static_cast<std::size_t>(B), 0.0);
  for (int b = 1; b <= B; ++b) {
    if (!d.y[static_cast<std::size_t>(b - 1)]) continue;
    std::vector<std::uint8_t> row(static_cast<std::size_t>(G), 0);
    for (int g = 1; g <= G; ++g)
      row[static_cast<std::size_t>(g - 1)] = d.covers(b, g) ? 1 : 0;
    d.site_load[static_cast<std::size_t>(b - 1)] = mean_active_ue(row, table, scenario, b);
  }

  d.per_grid.resize(static_cast<std::size_t>(G));
  for (int g = 1; g <= G; ++g) {
    GridDiagnostics& gd = d.per_grid[static_cast<std::size_t>(g - 1)];
    gd.log_zeta = std::log(scenario.grid(g).outage_tolerance);
    gd.macro_diversity = 0;
    for (int b = 1; b <= B; ++b)
      if (d.y[static_cast<std::size_t>(b - 1)] && d.covers(b, g)) {
        ++gd.macro_diversity;
        gd.sinr_lb.emplace_back(b, sinr_lower_bound(d.y, d.x, table, scenario, b, g));
      }
    gd.outage_lhs = evaluate_outage_lhs_x(d.y, d.x, table, scenario, g);
  }
  return d;
}

Deployment solve_deployment(const Scenario& scenario, int threads) {
  const int B = scenario.num_sites();
  const int G = scenario.num_grids();
  const RadioParams& rp = scenario.radio();

  LinkTable table = build_link_table(scenario, threads);
  const double phi = solve_phi(rp.gamma, rp.n_rf);
  CoverageSolution cov = max_coverage(table, scenario, phi, CoverageMethod::PrefixScan, threads);

  auto x_from_y = [&](const std::vector<int>& y) {
    std::vector<std::uint8_t> x(static_cast<std::size_t>(B) * static_cast<std::size_t>(G), 0);
    for (int b = 1; b <= B; ++b) {
      if (!y[static_cast<std::size_t>(b - 1)]) continue;
      for (int g = 1; g <= G; ++g)
        if (cov.covers(b, g))
          x[static_cast<std::size_t>(b - 1) * static_cast<std::size_t>(G) +
            static_cast<std::size_t>(g - 1)] = 1;
    }
    return x;
  };

  IlpInstance inst;
  try {
    inst = build_selection_ilp(cov, table, scenario, nullptr, true);
  } catch (const InfeasibleScenarioError& e) {
    Deployment d;
    d.scheme = "proposed";
    d.feasible = false;
    d.num_sites = B;
    d.num_grids = G;
    d.phi = phi;
    d.y.assign(static_cast<std::size_t>(B), 0);
    d.x.assign(static_cast<std::size_t>(B) * static_cast<std::size_t>(G), 0);
    d.infeasible_grids = e.grids();
    log::warn(std::string("optimize: ") + e.what());
    return d;
  }

  log::info("selection ILP: " + std::to_string(inst.n_vars) + " vars, " +
            std::to_string(inst.constraints.size()) + " rows");
  IlpSolution sol = solve_bb(inst);

  if (sol.status != IlpStatus::Optimal) {
    // Even the densest deployment fails at least one grid; report those.
    Deployment d;
    d.scheme = "proposed";
    d.feasible = false;
    d.num_sites = B;
    d.num_grids = G;
    d.phi = phi;
    d.ilp_nodes = sol.nodes_explored;
    d.y.assign(static_cast<std::size_t>(B), 0);
    d.x.assign(static_cast<std::size_t>(B) * static_cast<std::size_t>(G), 0);
    std::vector<int> all_on(static_cast<std::size_t>(B), 1);
    for (int g = 1; g <= G; ++g) {
      if (scenario.grid(g).outage_tolerance >= 1.0) continue;
      double lhs = evaluate_outage_lhs(all_on, cov, table, scenario, g);
      if (lhs > std::log(scenario.grid(g).outage_tolerance) + 1e-9)
        d.infeasible_grids.push_back(g);
    }
    return d;
  }

  std::vector<int> y(static_cast<std::size_t>(B));
  for (int b = 0; b < B; ++b) y[static_cast<std::size_t>(b)] = sol.assignment[static_cast<std::size_t>(b)];
  Deployment d = assemble_deployment("proposed", scenario, table, y, x_from_y(y), phi);
  d.ilp_nodes = sol.nodes_explored;
  return d;
}

}  // namespace mmplan
