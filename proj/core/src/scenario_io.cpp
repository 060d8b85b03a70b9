#include "mmplan/scenario_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mmplan {

using nlohmann::json;

namespace {

double require_num(const json& j, const char* key, const char* ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw std::invalid_argument(std::string("scenario: missing numeric '") + key + "' in " + ctx);
  return j[key].get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j[key].get<double>() : fallback;
}

}  // namespace

ScenarioBundle parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: invalid JSON: ") + e.what());
  }

  std::vector<Building> buildings;
  for (const auto& jb : doc.value("buildings", json::array())) {
    Building b;
    b.x0 = require_num(jb, "x0", "building");
    b.y0 = require_num(jb, "y0", "building");
    b.x1 = require_num(jb, "x1", "building");
    b.y1 = require_num(jb, "y1", "building");
    b.h = require_num(jb, "h", "building");
    buildings.push_back(b);
  }

  RadioParams radio;
  if (doc.contains("radio")) {
    const json& jr = doc["radio"];
    radio.h_bs = num_or(jr, "h_bs", radio.h_bs);
    radio.h_ue = num_or(jr, "h_ue", radio.h_ue);
    radio.alpha = num_or(jr, "alpha", radio.alpha);
    radio.beta = num_or(jr, "beta", radio.beta);
    radio.r_max = num_or(jr, "r_max", radio.r_max);
    radio.n_rf = static_cast<int>(num_or(jr, "n_rf", radio.n_rf));
    radio.z = num_or(jr, "z", radio.z);
    radio.gamma = num_or(jr, "gamma", radio.gamma);
    radio.p_tx = num_or(jr, "p_tx", radio.p_tx);
    radio.eps_bisect = num_or(jr, "eps_bisect", radio.eps_bisect);
    radio.set_gains_db(num_or(jr, "g_main_db", radio.g_main_db),
                       num_or(jr, "g_side_db", radio.g_side_db));
    radio.set_noise_dbm(num_or(jr, "noise_dbm", radio.noise_dbm));
  }

  std::vector<CandidateSite> sites;
  int next_site_id = 1;
  for (const auto& js : doc.value("sites", json::array())) {
    CandidateSite s;
    s.id = next_site_id++;
    s.pos.x = require_num(js, "x", "site");
    s.pos.y = require_num(js, "y", "site");
    s.pos.z = num_or(js, "z", radio.h_bs);
    s.cost = require_num(js, "cost", "site");
    if (js.contains("host")) s.host_building = js["host"].get<int>() - 1;
    sites.push_back(s);
  }

  if (!doc.contains("grid")) throw std::invalid_argument("scenario: missing 'grid' block");
  const json& jg = doc["grid"];
  GridSpec spec;
  spec.x0 = require_num(jg, "x0", "grid");
  spec.y0 = require_num(jg, "y0", "grid");
  spec.nx = static_cast<int>(require_num(jg, "nx", "grid"));
  spec.ny = static_cast<int>(require_num(jg, "ny", "grid"));
  spec.side = require_num(jg, "side", "grid");
  if (spec.nx < 1 || spec.ny < 1 || !(spec.side > 0.0))
    throw std::invalid_argument("scenario: grid block must have nx,ny >= 1 and side > 0");

  std::vector<Region> regions;
  for (const auto& jr : doc.value("regions", json::array())) {
    Region r;
    r.x0 = require_num(jr, "x0", "region");
    r.y0 = require_num(jr, "y0", "region");
    r.x1 = require_num(jr, "x1", "region");
    r.y1 = require_num(jr, "y1", "region");
    r.lambda = require_num(jr, "lambda", "region");
    r.zeta = require_num(jr, "zeta", "region");
    regions.push_back(r);
  }

  std::vector<GridCell> grids;
  int next_grid_id = 1;
  for (int iy = 0; iy < spec.ny; ++iy) {
    for (int ix = 0; ix < spec.nx; ++ix) {
      GridCell c;
      c.center.x = spec.x0 + (ix + 0.5) * spec.side;
      c.center.y = spec.y0 + (iy + 0.5) * spec.side;
      c.center.z = radio.h_ue;
      c.side = spec.side;
      c.ue_density = 0.0;
      c.outage_tolerance = 1.0;
      bool indoor = false;
      for (const auto& b : buildings)
        if (b.contains_interior(c.center)) {
          indoor = true;
          break;
        }
      if (indoor) continue;
      for (const auto& r : regions)
        if (c.center.x >= r.x0 && c.center.x <= r.x1 && c.center.y >= r.y0 &&
            c.center.y <= r.y1) {
          c.ue_density = r.lambda;
          c.outage_tolerance = r.zeta;
        }
      c.id = next_grid_id++;
      grids.push_back(c);
    }
  }

  Scenario scenario(std::move(buildings), std::move(sites), std::move(grids), radio);
  return ScenarioBundle{std::move(scenario), spec, std::move(regions)};
}

ScenarioBundle load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scenario: cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string scenario_to_text(const ScenarioBundle& bundle) {
  const Scenario& s = bundle.scenario;
  json doc;
  doc["buildings"] = json::array();
  for (const auto& b : s.buildings())
    doc["buildings"].push_back({{"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}, {"h", b.h}});
  doc["sites"] = json::array();
  for (const auto& st : s.sites()) {
    json js = {{"x", st.pos.x}, {"y", st.pos.y}, {"z", st.pos.z}, {"cost", st.cost}};
    if (st.host_building >= 0) js["host"] = st.host_building + 1;
    doc["sites"].push_back(js);
  }
  doc["grid"] = {{"x0", bundle.grid_spec.x0},
                 {"y0", bundle.grid_spec.y0},
                 {"nx", bundle.grid_spec.nx},
                 {"ny", bundle.grid_spec.ny},
                 {"side", bundle.grid_spec.side}};
  doc["regions"] = json::array();
  for (const auto& r : bundle.regions)
    doc["regions"].push_back({{"x0", r.x0},
                              {"y0", r.y0},
                              {"x1", r.x1},
                              {"y1", r.y1},
                              {"lambda", r.lambda},
                              {"zeta", r.zeta}});
  const RadioParams& rp = s.radio();
  doc["radio"] = {{"h_bs", rp.h_bs},
                  {"h_ue", rp.h_ue},
                  {"alpha", rp.alpha},
                  {"beta", rp.beta},
                  {"r_max", rp.r_max},
                  {"n_rf", rp.n_rf},
                  {"z", rp.z},
                  {"gamma", rp.gamma},
                  {"g_main_db", rp.g_main_db},
                  {"g_side_db", rp.g_side_db},
                  {"p_tx", rp.p_tx},
                  {"noise_dbm", rp.noise_dbm},
                  {"eps_bisect", rp.eps_bisect}};
  return doc.dump(2) + "\n";
}

void save_scenario(const ScenarioBundle& bundle, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("scenario: cannot write file '" + path + "'");
  out << scenario_to_text(bundle);
}

}  // namespace mmplan
