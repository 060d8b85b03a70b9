// mmplan: command-line front end for the deployment planner.
//
// Subcommands: gen, coverage, optimize, benchmark, evaluate.
// Exit codes: 0 success, 1 input error, 2 infeasible plan.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmplan/coverage.hpp"
#include "mmplan/deploy.hpp"
#include "mmplan/evalmc.hpp"
#include "mmplan/gen.hpp"
#include "mmplan/log.hpp"
#include "mmplan/planners.hpp"
#include "mmplan/scenario_io.hpp"

namespace {

using mmplan::Deployment;
using mmplan::McConfig;
using mmplan::McReport;
using mmplan::Scenario;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
  std::string scenario_path;
  std::string out_path;
  std::uint64_t seed = 0;
  int threads = 0;
  std::optional<double> zeta;
  std::optional<double> gamma;
  std::optional<int> nrf;
  std::optional<double> rmax;
};

json manifest_json(const std::string& command, const CommonOpts& opts) {
  json overrides = json::object();
  if (opts.zeta) overrides["zeta"] = *opts.zeta;
  if (opts.gamma) overrides["gamma"] = *opts.gamma;
  if (opts.nrf) overrides["nrf"] = *opts.nrf;
  if (opts.rmax) overrides["rmax"] = *opts.rmax;
  if (opts.threads > 0) overrides["threads"] = opts.threads;
  return json{{"tool", "mmplan"},
              {"version", kVersion},
              {"command", command},
              {"scenario", opts.scenario_path},
              {"seed", opts.seed},
              {"overrides", overrides}};
}

// Applies parameter overrides on top of the loaded scenario.
Scenario apply_overrides(const Scenario& in, const CommonOpts& opts) {
  mmplan::RadioParams radio = in.radio();
  if (opts.gamma) radio.gamma = *opts.gamma;
  if (opts.nrf) radio.n_rf = *opts.nrf;
  if (opts.rmax) radio.r_max = *opts.rmax;
  std::vector<mmplan::GridCell> grids = in.grids();
  if (opts.zeta) {
    for (auto& g : grids)
      if (g.outage_tolerance < 1.0) g.outage_tolerance = *opts.zeta;
  }
  return Scenario(in.buildings(), in.sites(), std::move(grids), radio);
}

Scenario load_with_overrides(const CommonOpts& opts) {
  mmplan::ScenarioBundle bundle = mmplan::load_scenario(opts.scenario_path);
  return apply_overrides(bundle.scenario, opts);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write output file '" + path + "'");
  out << text;
}

json plan_json(const Deployment& d, const Scenario& sc, const json& manifest) {
  json doc;
  doc["manifest"] = manifest;
  doc["scheme"] = d.scheme;
  if (!d.feasible)
    doc["status"] = "infeasible";
  else if (d.scheme == "proposed" || d.scheme == "mdp")
    doc["status"] = "optimal";
  else
    doc["status"] = "feasible";
  doc["cost"] = d.cost;
  doc["phi"] = d.phi;
  doc["y"] = d.y;

  json sites = json::array();
  for (int b = 1; b <= d.num_sites; ++b) {
    json js = {{"id", b},
               {"cost", sc.site(b).cost},
               {"deployed", d.y[static_cast<std::size_t>(b - 1)]}};
    if (d.feasible) js["load"] = d.site_load[static_cast<std::size_t>(b - 1)];
    sites.push_back(js);
  }
  doc["sites"] = sites;

  json grids = json::array();
  if (d.feasible) {
    for (int g = 1; g <= d.num_grids; ++g) {
      const mmplan::GridDiagnostics& gd = d.per_grid[static_cast<std::size_t>(g - 1)];
      json cover = json::array();
      json sinr = json::array();
      for (const auto& [site, lb] : gd.sinr_lb) {
        cover.push_back(site);
        sinr.push_back(lb);
      }
      grids.push_back({{"id", g},
                       {"sites", cover},
                       {"diversity", gd.macro_diversity},
                       {"outage_lhs", gd.outage_lhs},
                       {"log_zeta", gd.log_zeta},
                       {"slack", gd.log_zeta - gd.outage_lhs},
                       {"sinr_lb", sinr}});
    }
  }
  doc["grids"] = grids;

  json diag;
  if (d.feasible) {
    int max_div = 0;
    for (const auto& gd : d.per_grid) max_div = std::max(max_div, gd.macro_diversity);
    std::vector<long> hist(static_cast<std::size_t>(max_div) + 1, 0);
    for (const auto& gd : d.per_grid) ++hist[static_cast<std::size_t>(gd.macro_diversity)];
    diag["diversity_hist"] = hist;
  }
  diag["infeasible_grids"] = d.infeasible_grids;
  diag["ilp_nodes"] = d.ilp_nodes;
  doc["diagnostics"] = diag;
  return doc;
}

// Rebuilds a Deployment from plan.json (y plus per-grid covering sites).
Deployment deployment_from_plan(const std::string& path, const Scenario& sc) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open plan file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("plan: invalid JSON: ") + e.what());
  }
  if (doc.value("status", "") == "infeasible")
    throw std::invalid_argument("plan: cannot evaluate an infeasible plan");

  Deployment d;
  d.scheme = doc.value("scheme", "unknown");
  d.feasible = true;
  d.num_sites = sc.num_sites();
  d.num_grids = sc.num_grids();
  d.phi = doc.value("phi", 0.0);
  d.y = doc["y"].get<std::vector<int>>();
  if (static_cast<int>(d.y.size()) != sc.num_sites())
    throw std::invalid_argument("plan: y length does not match the scenario");
  d.x.assign(static_cast<std::size_t>(d.num_sites) * static_cast<std::size_t>(d.num_grids), 0);
  for (const auto& jg : doc["grids"]) {
    int g = jg["id"].get<int>();
    for (const auto& js : jg["sites"]) {
      int b = js.get<int>();
      d.x[static_cast<std::size_t>(b - 1) * static_cast<std::size_t>(d.num_grids) +
          static_cast<std::size_t>(g - 1)] = 1;
    }
  }
  // Derived fields used by the evaluator's closed-form comparisons.
  mmplan::LinkTable table = mmplan::build_link_table(sc);
  Deployment full = mmplan::assemble_deployment(d.scheme, sc, table, d.y, d.x, d.phi);
  return full;
}

void write_cdf_csv(const std::string& path, const json& manifest, std::vector<double> vals) {
  std::sort(vals.begin(), vals.end());
  std::ostringstream os;
  os << "# manifest: " << manifest.dump() << "\n";
  os << "value,cdf\n";
  const std::size_t n = vals.size();
  os.precision(17);
  for (std::size_t i = 0; i < n; ++i)
    os << vals[i] << "," << static_cast<double>(i + 1) / static_cast<double>(n) << "\n";
  write_text(path, os.str());
}

std::string stem_of(const std::string& path) {
  std::string s = path;
  std::size_t dot = s.rfind('.');
  if (dot != std::string::npos && dot > s.rfind('/')) s = s.substr(0, dot);
  return s;
}

int run_plan_command(const std::string& scheme, const CommonOpts& opts, const json& manifest) {
  Scenario sc = load_with_overrides(opts);
  Deployment d;
  if (scheme == "proposed")
    d = mmplan::solve_deployment(sc, opts.threads);
  else if (scheme == "mdp")
    d = mmplan::solve_mdp(sc, {}, opts.threads);
  else if (scheme == "assgp")
    d = mmplan::solve_assgp(sc, {}, opts.threads);
  else if (scheme == "bgga")
    d = mmplan::solve_bgga(sc, {}, opts.threads);
  else
    throw std::invalid_argument("unknown scheme '" + scheme + "' (mdp|assgp|bgga|proposed)");

  write_text(opts.out_path, plan_json(d, sc, manifest).dump(2) + "\n");
  if (!d.feasible) {
    std::cerr << "mmplan: infeasible: " << d.infeasible_grids.size()
              << " grid(s) cannot be served; see " << opts.out_path << "\n";
    return 2;
  }
  std::cout << "scheme=" << d.scheme << " cost=" << d.cost << " deployed=" << d.deployed_count()
            << "/" << d.num_sites << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave base-station deployment planner"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string size_class = "tiny";
  std::string scheme = "proposed";
  std::string plan_path;
  int trials = 50;
  bool grid_center = false;

  auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
    if (needs_scenario)
      cmd->add_option("--scenario", opts.scenario_path, "scenario JSON file")->required();
    cmd->add_option("--out", opts.out_path, "output file")->required();
    cmd->add_option("--seed", opts.seed, "random seed");
    cmd->add_option("--threads", opts.threads, "worker thread cap (0 = auto)");
    cmd->add_option("--zeta", [&](const std::vector<std::string>& v) {
      opts.zeta = std::stod(v[0]);
      return true;
    }, "override outage tolerance of constrained grids");
    cmd->add_option("--gamma", [&](const std::vector<std::string>& v) {
      opts.gamma = std::stod(v[0]);
      return true;
    }, "override access-blockage tolerance");
    cmd->add_option("--nrf", [&](const std::vector<std::string>& v) {
      opts.nrf = std::stoi(v[0]);
      return true;
    }, "override RF chain count");
    cmd->add_option("--rmax", [&](const std::vector<std::string>& v) {
      opts.rmax = std::stod(v[0]);
      return true;
    }, "override maximum link distance");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic scenario");
  gen->add_option("--size", size_class, "size class: tiny|small|demo");
  add_common(gen, false);

  CLI::App* coverage = app.add_subcommand("coverage", "per-site coverage maximization");
  add_common(coverage, true);

  CLI::App* optimize = app.add_subcommand("optimize", "minimum-cost deployment");
  add_common(optimize, true);

  CLI::App* benchmark = app.add_subcommand("benchmark", "benchmark planners");
  benchmark->add_option("--scheme", scheme, "mdp|assgp|bgga|proposed");
  add_common(benchmark, true);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Monte Carlo validation of a plan");
  evaluate->add_option("--plan", plan_path, "plan JSON file")->required();
  evaluate->add_option("--trials", trials, "number of Monte Carlo trials");
  evaluate->add_flag("--grid-center", grid_center, "evaluate UEs at grid centers");
  add_common(evaluate, true);

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  std::string command;
  try {
    if (gen->parsed()) {
      command = "gen";
      std::string text = mmplan::generate_scenario_text(mmplan::parse_size_class(size_class),
                                                        opts.seed);
      write_text(opts.out_path, text);
      std::cout << "wrote " << opts.out_path << "\n";
    } else if (coverage->parsed()) {
      command = "coverage";
      json manifest = manifest_json(command, opts);
      Scenario sc = load_with_overrides(opts);
      mmplan::LinkTable table = mmplan::build_link_table(sc, opts.threads);
      double phi = mmplan::solve_phi(sc.radio().gamma, sc.radio().n_rf);
      mmplan::CoverageSolution cov =
          mmplan::max_coverage(table, sc, phi, mmplan::CoverageMethod::PrefixScan, opts.threads);
      std::ostringstream os;
      os << "# manifest: " << manifest.dump() << "\n";
      os << "site_id,r_max,mean_load,n_grids\n";
      os.precision(17);
      for (int b = 1; b <= sc.num_sites(); ++b) {
        long n_grids = 0;
        for (int g = 1; g <= sc.num_grids(); ++g)
          if (cov.covers(b, g)) ++n_grids;
        os << b << "," << cov.r_max_per_site[static_cast<std::size_t>(b - 1)] << ","
           << cov.mean_load_per_site[static_cast<std::size_t>(b - 1)] << "," << n_grids << "\n";
      }
      write_text(opts.out_path, os.str());
      std::cout << "wrote " << opts.out_path << "\n";
    } else if (optimize->parsed()) {
      command = "optimize";
      rc = run_plan_command("proposed", opts, manifest_json(command, opts));
    } else if (benchmark->parsed()) {
      command = "benchmark";
      json manifest = manifest_json(command, opts);
      manifest["scheme"] = scheme;
      rc = run_plan_command(scheme, opts, manifest);
    } else if (evaluate->parsed()) {
      command = "evaluate";
      json manifest = manifest_json(command, opts);
      manifest["plan"] = plan_path;
      manifest["trials"] = trials;
      manifest["grid_center"] = grid_center;
      Scenario sc = load_with_overrides(opts);
      Deployment d = deployment_from_plan(plan_path, sc);
      McConfig cfg;
      cfg.n_trials = trials;
      cfg.seed = opts.seed;
      cfg.use_grid_center = grid_center;
      cfg.threads = opts.threads;
      McReport rep = mmplan::run_evaluation(d, sc, cfg);

      long below = 0;
      for (std::size_t i = 0; i < rep.sinr_samples.size(); ++i)
        if (rep.sinr_samples[i] < rep.sinr_lb_samples[i]) ++below;

      json doc;
      doc["manifest"] = manifest;
      doc["trials"] = rep.trials;
      doc["mode"] = grid_center ? "center" : "sampled";
      doc["sinr"] = {{"n", rep.sinr_samples.size()}, {"below_bound", below}};
      json access = json::array();
      for (const auto& a : rep.access)
        access.push_back({{"site", a.site_id},
                          {"est", a.est},
                          {"se", a.se},
                          {"closed_form", a.closed_form},
                          {"attempt_mean", a.attempt_mean},
                          {"attempt_se", a.attempt_se},
                          {"expected_load", a.expected_load}});
      doc["access"] = access;
      json outage = json::array();
      for (const auto& o : rep.ue_outage)
        outage.push_back(
            {{"grid", o.grid_id}, {"defined", o.defined}, {"est", o.est}, {"n", o.n_ue}});
      doc["ue_outage"] = outage;
      doc["diversity_hist"] = rep.diversity_hist;
      write_text(opts.out_path, doc.dump(2) + "\n");

      const std::string stem = stem_of(opts.out_path);
      write_cdf_csv(stem + "_sinr_cdf.csv", manifest, rep.sinr_samples);
      write_cdf_csv(stem + "_sinr_lb_cdf.csv", manifest, rep.sinr_lb_samples);
      std::vector<double> acc_vals, out_vals;
      for (const auto& a : rep.access) acc_vals.push_back(a.est);
      for (const auto& o : rep.ue_outage)
        if (o.defined) out_vals.push_back(o.est);
      write_cdf_csv(stem + "_access_cdf.csv", manifest, acc_vals);
      write_cdf_csv(stem + "_outage_cdf.csv", manifest, out_vals);
      std::cout << "trials=" << rep.trials << " links=" << rep.sinr_samples.size()
                << " below_bound=" << below << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "mmplan: error: " << e.what() << "\n";
    return 1;
  }

  const auto t1 = std::chrono::steady_clock::now();
  mmplan::log::info(
      command + " finished in " +
      std::to_string(std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()) +
      " ms");
  return rc;
}
