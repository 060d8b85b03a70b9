#pragma once

#include <string>
#include <vector>

#include "mmplan/radio_params.hpp"

namespace mmplan {

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline double distance3(const Point3& a, const Point3& b) {
  double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Axis-aligned box footprint extruded from the ground plane to height h.
struct Building {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  double h = 0.0;

  bool contains_interior(const Point3& p) const {
    return p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1 && p.z > 0.0 && p.z < h;
  }
};

struct CandidateSite {
  int id = 0;  // 1-based, contiguous
  Point3 pos;
  double cost = 0.0;
  int host_building = -1;  // 0-based index into buildings, -1 if free-standing
};

struct GridCell {
  int id = 0;  // 1-based, contiguous
  Point3 center;
  double side = 5.0;
  double ue_density = 0.0;       // lambda_UE [1/m^2]
  double outage_tolerance = 1.0; // zeta in (0, 1]
};

// True when the open segment a-b passes through the interior of the box.
// Face/edge grazing contacts do not count.  `t_skip` excludes the initial
// parameter range [0, t_skip) from the test (host-wall exclusion).
bool segment_intersects_interior(const Point3& a, const Point3& b, const Building& box,
                                 double t_skip = 0.0);

// Immutable world description.  All queries are pure and thread-safe.
class Scenario {
 public:
  Scenario(std::vector<Building> buildings, std::vector<CandidateSite> sites,
           std::vector<GridCell> grids, RadioParams radio);

  const std::vector<Building>& buildings() const { return buildings_; }
  const std::vector<CandidateSite>& sites() const { return sites_; }
  const std::vector<GridCell>& grids() const { return grids_; }
  const RadioParams& radio() const { return radio_; }
  RadioParams& radio() { return radio_; }

  int num_sites() const { return static_cast<int>(sites_.size()); }
  int num_grids() const { return static_cast<int>(grids_.size()); }

  const CandidateSite& site(int site_id) const;  // 1-based id
  const GridCell& grid(int grid_id) const;       // 1-based id

 private:
  std::vector<Building> buildings_;
  std::vector<CandidateSite> sites_;
  std::vector<GridCell> grids_;
  RadioParams radio_;
};

// LoS existence between a candidate site and a grid center: no building
// interior may cut the open segment.  Intersections within 1 cm of the site
// are ignored for the site's host building so a wall-mounted site does not
// occlude itself.
bool los_visible(const Scenario& s, int site_id, int grid_id);

// Euclidean 3D distance between site position and grid center.
double link_distance(const Scenario& s, int site_id, int grid_id);

}  // namespace mmplan
