#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmplan/geometry.hpp"

namespace mmplan {

// Row-major rectangular grid block.  Cells whose centers fall strictly inside
// a building are dropped at load time (the grids partition the outdoor area);
// surviving cells are numbered contiguously in row-major order.
struct GridSpec {
  double x0 = 0.0, y0 = 0.0;
  int nx = 0, ny = 0;
  double side = 5.0;
};

// Rectangle assigning UE density and outage tolerance to the grid centers it
// contains.  Later regions win on overlap; uncovered centers default to
// lambda = 0, zeta = 1.
struct Region {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  double lambda = 0.0;
  double zeta = 1.0;
};

// Scenario plus the blocks it was built from, so it can be written back out.
struct ScenarioBundle {
  Scenario scenario;
  GridSpec grid_spec;
  std::vector<Region> regions;
};

ScenarioBundle parse_scenario_text(const std::string& text);
ScenarioBundle load_scenario(const std::string& path);

std::string scenario_to_text(const ScenarioBundle& bundle);
void save_scenario(const ScenarioBundle& bundle, const std::string& path);

}  // namespace mmplan
