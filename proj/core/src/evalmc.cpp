#include "mmplan/evalmc.hpp"

#include <cmath>

#include "mmplan/parallel.hpp"

namespace mmplan {

namespace {

// Stream labels; every random decision hangs off (seed, label, trial, ...).
constexpr std::uint64_t kStreamUeCount = 1;
constexpr std::uint64_t kStreamUePos = 2;
constexpr std::uint64_t kStreamBlockage = 3;
constexpr std::uint64_t kStreamContention = 4;

struct UeDraw {
  int grid_id = 0;
  Point3 pos;
  std::vector<double> dist;       // per deployed site (indexed as ctx.deployed_sites)
  std::vector<std::uint8_t> unblocked;  // per deployed site
};

}  // namespace

McContext make_mc_context(const Deployment& deployment, const Scenario& scenario,
                          const LinkTable& table) {
  McContext ctx;
  ctx.deployment = &deployment;
  ctx.scenario = &scenario;
  ctx.table = &table;
  for (int b = 1; b <= scenario.num_sites(); ++b)
    if (deployment.y[static_cast<std::size_t>(b - 1)]) ctx.deployed_sites.push_back(b);
  ctx.sinr_bound.assign(
      static_cast<std::size_t>(scenario.num_sites()) * static_cast<std::size_t>(scenario.num_grids()),
      0.0);
  for (int b : ctx.deployed_sites)
    for (int g = 1; g <= scenario.num_grids(); ++g)
      if (deployment.covers(b, g))
        ctx.sinr_bound[static_cast<std::size_t>(b - 1) * scenario.num_grids() + (g - 1)] =
            sinr_lower_bound(deployment.y, deployment.x, table, scenario, b, g);
  return ctx;
}

TrialRecord run_trial(const McContext& ctx, CounterRng trial_rng, const McConfig& config) {
  const Scenario& sc = *ctx.scenario;
  const Deployment& dep = *ctx.deployment;
  const LinkTable& lt = *ctx.table;
  const RadioParams& rp = sc.radio();
  const int B = sc.num_sites();
  const int G = sc.num_grids();
  const int n_dep = static_cast<int>(ctx.deployed_sites.size());

  TrialRecord rec;
  rec.attempts.assign(static_cast<std::size_t>(B), 0);
  rec.denied.assign(static_cast<std::size_t>(B), 0);
  rec.grid_ue.assign(static_cast<std::size_t>(G), 0);
  rec.grid_outage.assign(static_cast<std::size_t>(G), 0);

  // 1. Sample UEs per grid and their blockage state toward every deployed
  // site.  Blockage draws are independent across links of the same UE.
  std::vector<UeDraw> ues;
  for (int g = 1; g <= G; ++g) {
    const GridCell& cell = sc.grid(g);
    if (cell.ue_density <= 0.0) continue;
    CounterRng grid_rng = trial_rng.stream(kStreamUeCount, g);
    int n = grid_rng.next_poisson(cell.ue_density * cell.side * cell.side);
    rec.grid_ue[static_cast<std::size_t>(g - 1)] = n;
    for (int u = 0; u < n; ++u) {
      UeDraw ue;
      ue.grid_id = g;
      if (config.use_grid_center) {
        ue.pos = cell.center;
      } else {
        CounterRng pos_rng = trial_rng.stream(kStreamUePos, g, u);
        ue.pos.x = cell.center.x + (pos_rng.next_double() - 0.5) * cell.side;
        ue.pos.y = cell.center.y + (pos_rng.next_double() - 0.5) * cell.side;
        ue.pos.z = cell.center.z;
      }
      ue.dist.resize(static_cast<std::size_t>(n_dep));
      ue.unblocked.resize(static_cast<std::size_t>(n_dep));
      for (int k = 0; k < n_dep; ++k) {
        const int i = ctx.deployed_sites[static_cast<std::size_t>(k)];
        double d, p_blk;
        if (config.use_grid_center) {
          const LinkTable::Entry& e = lt.at(i, g);
          d = e.r;
          p_blk = e.p_blk;
        } else {
          const CandidateSite& st = sc.site(i);
          d = distance3(st.pos, ue.pos);
          bool los = true;
          for (std::size_t w = 0; w < sc.buildings().size(); ++w) {
            double t_skip = 0.0;
            if (static_cast<int>(w) == st.host_building && d > 0.0)
              t_skip = std::min(1.0, 0.01 / d);
            if (segment_intersects_interior(st.pos, ue.pos, sc.buildings()[w], t_skip)) {
              los = false;
              break;
            }
          }
          p_blk = blockage_prob(d, los, rp);
        }
        ue.dist[static_cast<std::size_t>(k)] = d;
        CounterRng blk_rng = trial_rng.stream(kStreamBlockage, g, u, i);
        ue.unblocked[static_cast<std::size_t>(k)] = blk_rng.next_double() >= p_blk ? 1 : 0;
      }
      ues.push_back(std::move(ue));
    }
  }

  // 2. Access contention: per site, unblocked UEs in covered grids attempt;
  // past n_rf chains a uniform subset is served.
  const std::size_t n_ue = ues.size();
  std::vector<std::vector<std::uint8_t>> served(
      static_cast<std::size_t>(n_dep), std::vector<std::uint8_t>(n_ue, 0));
  std::vector<int> n_served(static_cast<std::size_t>(n_dep), 0);
  for (int k = 0; k < n_dep; ++k) {
    const int b = ctx.deployed_sites[static_cast<std::size_t>(k)];
    std::vector<int> attempting;
    for (std::size_t u = 0; u < n_ue; ++u)
      if (dep.covers(b, ues[u].grid_id) && ues[u].unblocked[static_cast<std::size_t>(k)])
        attempting.push_back(static_cast<int>(u));
    const int n_att = static_cast<int>(attempting.size());
    rec.attempts[static_cast<std::size_t>(b - 1)] = n_att;
    int m = std::min(n_att, rp.n_rf);
    n_served[static_cast<std::size_t>(k)] = m;
    rec.denied[static_cast<std::size_t>(b - 1)] = n_att - m;
    if (n_att <= rp.n_rf) {
      for (int u : attempting) served[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)] = 1;
    } else {
      CounterRng cont_rng = trial_rng.stream(kStreamContention, b);
      for (int pick : cont_rng.next_subset(n_att, rp.n_rf))
        served[static_cast<std::size_t>(k)]
              [static_cast<std::size_t>(attempting[static_cast<std::size_t>(pick)])] = 1;
    }
  }

  // 3. Realized SINR on served links; a UE is in outage when every covering
  // link is blocked, denied, or below the threshold.
  for (std::size_t u = 0; u < n_ue; ++u) {
    const UeDraw& ue = ues[u];
    const int g = ue.grid_id;

    // Composite sidelobe interference at this UE: every deployed site with an
    // unblocked path and at least one active beam leaks, discounted by one
    // beam when the site is associated with the UE's grid.
    double interference = 0.0;
    for (int k = 0; k < n_dep; ++k) {
      if (!ue.unblocked[static_cast<std::size_t>(k)]) continue;
      const int i = ctx.deployed_sites[static_cast<std::size_t>(k)];
      const int m = n_served[static_cast<std::size_t>(k)];
      if (m == 0) continue;
      const int assoc = dep.covers(i, g) ? 1 : 0;
      const double frac = static_cast<double>(m - assoc) / m;
      if (frac == 0.0) continue;
      interference += frac * rp.p_tx * rp.g_side * pathloss(ue.dist[static_cast<std::size_t>(k)]);
    }

    bool out = true;
    for (int k = 0; k < n_dep; ++k) {
      const int b = ctx.deployed_sites[static_cast<std::size_t>(k)];
      if (!dep.covers(b, g)) continue;
      if (!ue.unblocked[static_cast<std::size_t>(k)]) continue;
      if (!served[static_cast<std::size_t>(k)][u]) continue;
      const int m = n_served[static_cast<std::size_t>(k)];
      const double desired =
          rp.p_tx * rp.g_main * pathloss(ue.dist[static_cast<std::size_t>(k)]) / m;
      const double sinr = desired / (rp.noise + interference);
      if (sinr >= rp.z) out = false;
      rec.sinr.push_back(sinr);
      rec.sinr_lb.push_back(
          ctx.sinr_bound[static_cast<std::size_t>(b - 1) * G + (g - 1)]);
    }
    if (out) ++rec.grid_outage[static_cast<std::size_t>(g - 1)];
  }

  return rec;
}

McReport aggregate(const McContext& ctx, const std::vector<TrialRecord>& trials) {
  const Scenario& sc = *ctx.scenario;
  const Deployment& dep = *ctx.deployment;
  const int B = sc.num_sites();
  const int G = sc.num_grids();
  const int n_rf = sc.radio().n_rf;
  const long T = static_cast<long>(trials.size());

  McReport rep;
  rep.trials = T;
  for (const auto& t : trials) {
    rep.sinr_samples.insert(rep.sinr_samples.end(), t.sinr.begin(), t.sinr.end());
    rep.sinr_lb_samples.insert(rep.sinr_lb_samples.end(), t.sinr_lb.begin(), t.sinr_lb.end());
  }

  for (int b = 1; b <= B; ++b) {
    if (!dep.y[static_cast<std::size_t>(b - 1)]) continue;
    SiteAccessStats st;
    st.site_id = b;
    st.expected_load = dep.site_load[static_cast<std::size_t>(b - 1)];
    st.closed_form = access_block_prob(st.expected_load, n_rf);
    double sum = 0.0, sumsq = 0.0, asum = 0.0, asumsq = 0.0;
    for (const auto& t : trials) {
      int att = t.attempts[static_cast<std::size_t>(b - 1)];
      double v = att > 0 ? static_cast<double>(t.denied[static_cast<std::size_t>(b - 1)]) / att : 0.0;
      sum += v;
      sumsq += v * v;
      asum += att;
      asumsq += static_cast<double>(att) * att;
    }
    st.est = sum / T;
    st.attempt_mean = asum / T;
    if (T > 1) {
      st.se = std::sqrt(std::max(0.0, (sumsq / T - st.est * st.est) / (T - 1)));
      st.attempt_se =
          std::sqrt(std::max(0.0, (asumsq / T - st.attempt_mean * st.attempt_mean) / (T - 1)));
    }
    rep.access.push_back(st);
  }

  for (int g = 1; g <= G; ++g) {
    GridOutageStats gs;
    gs.grid_id = g;
    long n = 0, out = 0;
    for (const auto& t : trials) {
      n += t.grid_ue[static_cast<std::size_t>(g - 1)];
      out += t.grid_outage[static_cast<std::size_t>(g - 1)];
    }
    gs.n_ue = n;
    gs.defined = n > 0;
    gs.est = n > 0 ? static_cast<double>(out) / n : 0.0;
    rep.ue_outage.push_back(gs);
  }

  int max_div = 0;
  std::vector<int> div(static_cast<std::size_t>(G), 0);
  for (int g = 1; g <= G; ++g) {
    int d = 0;
    for (int b : ctx.deployed_sites)
      if (dep.covers(b, g)) ++d;
    div[static_cast<std::size_t>(g - 1)] = d;
    max_div = std::max(max_div, d);
  }
  rep.diversity_hist.assign(static_cast<std::size_t>(max_div) + 1, 0);
  for (int d : div) ++rep.diversity_hist[static_cast<std::size_t>(d)];

  return rep;
}

McReport run_evaluation(const Deployment& deployment, const Scenario& scenario,
                        const McConfig& config) {
  if (config.n_trials < 1) throw std::invalid_argument("evaluate: n_trials must be >= 1");
  LinkTable table = build_link_table(scenario, config.threads);
  McContext ctx = make_mc_context(deployment, scenario, table);
  std::vector<TrialRecord> trials(static_cast<std::size_t>(config.n_trials));
  CounterRng master(CounterRng::mix(config.seed ^ 0x6d6d706c616eull));
  parallel_for(config.n_trials, config.threads, [&](int t) {
    trials[static_cast<std::size_t>(t)] = run_trial(ctx, master.stream(t), config);
  });
  return aggregate(ctx, trials);
}

}  // namespace mmplan
