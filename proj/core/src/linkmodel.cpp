#include "mmplan/linkmodel.hpp"

#include <cmath>
#include <stdexcept>

#include "mmplan/parallel.hpp"

namespace mmplan {

double pathloss(double r_meters) {
  if (!(r_meters > 0.0)) throw std::domain_error("pathloss: r must be > 0");
  static const double log10_28 = std::log10(28.0);
  return std::pow(10.0, -3.24 - 2.1 * std::log10(r_meters) - 2.0 * log10_28);
}

double blockage_prob(double r_meters, bool los, const RadioParams& params) {
  if (!los || r_meters > params.r_max) return 1.0;
  return 1.0 - std::exp(-params.beta * r_meters - params.alpha);
}

double access_block_prob(double mu, int n_rf, double tail_cutoff) {
  if (mu < 0.0) throw std::domain_error("access_block_prob: mu must be >= 0");
  if (mu == 0.0) return 0.0;
  if (tail_cutoff < 1e-300) tail_cutoff = 1e-300;
  // Walk the Poisson pmf with the multiplicative recurrence; terms at or
  // below n_rf contribute nothing.  For large mu the walk starts at the mode
  // (pmf via lgamma) so exp(-mu) underflow cannot zero the series.
  int i0 = 0;
  double pmf0;
  if (mu <= 30.0) {
    pmf0 = std::exp(-mu);
  } else {
    i0 = static_cast<int>(mu);
    pmf0 = std::exp(i0 * std::log(mu) - mu - std::lgamma(i0 + 1.0));
  }
  double rho = (i0 > n_rf) ? pmf0 * static_cast<double>(i0 - n_rf) / i0 : 0.0;
  // Upward sweep: remaining mass past i is below pmf_i * q/(1-q), q = mu/(i+1).
  double p = pmf0;
  for (int i = i0 + 1;; ++i) {
    p *= mu / i;
    if (i > n_rf) rho += p * static_cast<double>(i - n_rf) / i;
    if (i >= mu) {
      double q = mu / (i + 1);
      if (p * q / (1.0 - q) < tail_cutoff) break;
    }
  }
  // Downward sweep from the mode stops at n_rf (terms vanish) or when the
  // remaining mass bound i * pmf_i drops below the cutoff.
  p = pmf0;
  for (int i = i0; i - 1 > n_rf; --i) {
    p *= static_cast<double>(i) / mu;
    rho += p * static_cast<double>(i - 1 - n_rf) / (i - 1);
    if ((i - 1) * p < tail_cutoff) break;
  }
  return rho;
}

double mean_active_ue(const std::vector<std::uint8_t>& assoc_row, const LinkTable& table,
                      const Scenario& scenario, int site_id) {
  if (static_cast<int>(assoc_row.size()) != scenario.num_grids())
    throw std::invalid_argument("mean_active_ue: indicator length must equal grid count");
  double sum = 0.0;
  for (int g = 1; g <= scenario.num_grids(); ++g) {
    if (!assoc_row[static_cast<std::size_t>(g - 1)]) continue;
    const GridCell& cell = scenario.grid(g);
    const LinkTable::Entry& e = table.at(site_id, g);
    sum += cell.ue_density * cell.side * cell.side * (1.0 - e.p_blk);
  }
  return sum;
}

double solve_phi(double gamma, int n_rf) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("solve_phi: gamma must be in (0,1)");
  // rho is continuous and monotone in mu (0 at 0, -> 1), so a bracket always
  // exists; double the upper end until it straddles gamma.
  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(n_rf));
  while (access_block_prob(hi, n_rf) <= gamma) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double val = access_block_prob(mid, n_rf);
    if (val <= gamma) {
      lo = mid;
      if (gamma - val <= 1e-12) break;
    } else {
      hi = mid;
    }
  }
  return lo;  // rho(lo) <= gamma by bracket invariant
}

BlockageParams blockage_params_from_obstacles(double lambda_obs, double mean_len,
                                              double mean_wid, double eta) {
  BlockageParams out;
  out.beta = 2.0 * lambda_obs * (mean_len + mean_wid) / M_PI * eta;
  out.alpha = lambda_obs * mean_len * mean_wid;
  return out;
}

double eta_from_height_cdf(const std::function<double(double)>& height_cdf, double h_ue,
                           double h_bs, int panels) {
  if (panels < 2) panels = 2;
  if (panels % 2 != 0) ++panels;
  auto f = [&](double s) { return height_cdf(s * h_ue + (1.0 - s) * h_bs); };
  double h = 1.0 / panels;
  double acc = f(0.0) + f(1.0);
  for (int i = 1; i < panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
  return 1.0 - acc * h / 3.0;
}

LinkTable build_link_table(const Scenario& scenario, int threads) {
  const RadioParams& rp = scenario.radio();
  LinkTable table(scenario.num_sites(), scenario.num_grids());
  parallel_for(scenario.num_sites(), threads, [&](int b0) {
    const int b = b0 + 1;
    for (int g = 1; g <= scenario.num_grids(); ++g) {
      LinkTable::Entry& e = table.at(b, g);
      e.los = los_visible(scenario, b, g);
      e.r = link_distance(scenario, b, g);
      e.pl = pathloss(e.r);
      e.p_blk = blockage_prob(e.r, e.los, rp);
      if (e.p_blk < 1.0) {
        e.p_bar = rp.p_tx * rp.g_main * e.pl / rp.n_rf;
        e.i_hat0 = rp.p_tx * rp.g_side * e.pl;
        e.i_hat1 = (1.0 - 1.0 / rp.n_rf) * e.i_hat0;
      } else {
        // A link that is always blocked can neither carry desired power nor
        // leak sidelobe interference.
        e.p_bar = 0.0;
        e.i_hat0 = 0.0;
        e.i_hat1 = 0.0;
      }
    }
  });
  return table;
}

}  // namespace mmplan
