#include "mmplan/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mmplan {

namespace {

// Open slab interval of t where lo < a + t*d < hi.  Returns false when the
// interval is empty.
bool axis_interval(double a, double d, double lo, double hi, double& tlo, double& thi) {
  if (d == 0.0) {
    if (a <= lo || a >= hi) return false;
    tlo = -std::numeric_limits<double>::infinity();
    thi = std::numeric_limits<double>::infinity();
    return true;
  }
  double t0 = (lo - a) / d;
  double t1 = (hi - a) / d;
  tlo = std::min(t0, t1);
  thi = std::max(t0, t1);
  return true;
}

bool lex_less(const Point3& a, const Point3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

}  // namespace

bool segment_intersects_interior(const Point3& a, const Point3& b, const Building& box,
                                 double t_skip) {
  // Canonical endpoint order makes the test exactly symmetric in floating
  // point; the skipped prefix is remapped onto the canonical parameter.
  const bool swapped = lex_less(b, a);
  const Point3& p = swapped ? b : a;
  const Point3& q = swapped ? a : b;
  double allow_lo = swapped ? 0.0 : t_skip;
  double allow_hi = swapped ? 1.0 - t_skip : 1.0;

  double lo = allow_lo, hi = allow_hi;
  double tlo, thi;
  double dx = q.x - p.x, dy = q.y - p.y, dz = q.z - p.z;
  if (!axis_interval(p.x, dx, box.x0, box.x1, tlo, thi)) return false;
  lo = std::max(lo, tlo);
  hi = std::min(hi, thi);
  if (!axis_interval(p.y, dy, box.y0, box.y1, tlo, thi)) return false;
  lo = std::max(lo, tlo);
  hi = std::min(hi, thi);
  if (!axis_interval(p.z, dz, 0.0, box.h, tlo, thi)) return false;
  lo = std::max(lo, tlo);
  hi = std::min(hi, thi);
  return lo < hi;
}

Scenario::Scenario(std::vector<Building> buildings, std::vector<CandidateSite> sites,
                   std::vector<GridCell> grids, RadioParams radio)
    : buildings_(std::move(buildings)),
      sites_(std::move(sites)),
      grids_(std::move(grids)),
      radio_(radio) {
  radio_.validate();
  for (const auto& bld : buildings_) {
    if (!(bld.x1 > bld.x0 && bld.y1 > bld.y0))
      throw std::invalid_argument("building footprint must have positive width and depth");
    if (!(bld.h > 0.0)) throw std::invalid_argument("building height must be > 0");
  }
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    const auto& st = sites_[i];
    if (st.id != static_cast<int>(i) + 1)
      throw std::invalid_argument("site ids must be contiguous from 1");
    if (!(st.pos.z > radio_.h_ue))
      throw std::invalid_argument("site height must exceed the UE height");
    if (st.cost < 0.0) throw std::invalid_argument("site cost must be nonnegative");
    if (st.host_building < -1 || st.host_building >= static_cast<int>(buildings_.size()))
      throw std::invalid_argument("site host building index out of range");
    for (const auto& bld : buildings_)
      if (bld.contains_interior(st.pos))
        throw std::invalid_argument("site position lies strictly inside a building");
  }
  for (std::size_t i = 0; i < grids_.size(); ++i) {
    const auto& g = grids_[i];
    if (g.id != static_cast<int>(i) + 1)
      throw std::invalid_argument("grid ids must be contiguous from 1");
    if (!(g.side > 0.0)) throw std::invalid_argument("grid side must be > 0");
    if (g.ue_density < 0.0) throw std::invalid_argument("grid ue_density must be >= 0");
    if (!(g.outage_tolerance > 0.0 && g.outage_tolerance <= 1.0))
      throw std::invalid_argument("grid outage_tolerance must be in (0,1]");
    for (const auto& bld : buildings_)
      if (bld.contains_interior(g.center))
        throw std::invalid_argument("grid center lies strictly inside a building");
  }
}

const CandidateSite& Scenario::site(int site_id) const {
  if (site_id < 1 || site_id > num_sites())
    throw std::invalid_argument("unknown site id " + std::to_string(site_id));
  return sites_[static_cast<std::size_t>(site_id - 1)];
}

const GridCell& Scenario::grid(int grid_id) const {
  if (grid_id < 1 || grid_id > num_grids())
    throw std::invalid_argument("unknown grid id " + std::to_string(grid_id));
  return grids_[static_cast<std::size_t>(grid_id - 1)];
}

bool los_visible(const Scenario& s, int site_id, int grid_id) {
  const CandidateSite& st = s.site(site_id);
  const GridCell& g = s.grid(grid_id);
  const double len = distance3(st.pos, g.center);
  for (std::size_t k = 0; k < s.buildings().size(); ++k) {
    double t_skip = 0.0;
    if (static_cast<int>(k) == st.host_building && len > 0.0)
      t_skip = std::min(1.0, 0.01 / len);
    if (segment_intersects_interior(st.pos, g.center, s.buildings()[k], t_skip)) return false;
  }
  return true;
}

double link_distance(const Scenario& s, int site_id, int grid_id) {
  return distance3(s.site(site_id).pos, s.grid(grid_id).center);
}

}  // namespace mmplan
