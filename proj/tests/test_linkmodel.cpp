#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmplan/gen.hpp"
#include "mmplan/linkmodel.hpp"
#include "mmplan/rng.hpp"
#include "support/oracles.hpp"

using namespace mmplan;

TEST_CASE("pathloss: frozen reference points") {
  // 10^(-3.24 - 2.1 log10 r - 2 log10 28), evaluated independently at high
  // precision.
  CHECK(pathloss(1.0) == doctest::Approx(7.33979511909639e-7).epsilon(1e-12));
  CHECK(pathloss(200.0) == doctest::Approx(1.08024172067447e-11).epsilon(1e-12));
}

TEST_CASE("pathloss: exponent linearity in log10 r") {
  CHECK(pathloss(10.0) / pathloss(1.0) == doctest::Approx(std::pow(10.0, -2.1)).epsilon(1e-12));
  CHECK(pathloss(100.0) / pathloss(10.0) == doctest::Approx(std::pow(10.0, -2.1)).epsilon(1e-12));
}

TEST_CASE("pathloss: strictly decreasing, domain errors") {
  double prev = pathloss(0.5);
  for (double r = 1.0; r < 300.0; r += 7.3) {
    double cur = pathloss(r);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(pathloss(0.0), std::domain_error);
  CHECK_THROWS_AS(pathloss(-3.0), std::domain_error);
}

TEST_CASE("blockage_prob: frozen references and the non-LoS branch") {
  RadioParams rp;  // alpha = beta = 0.08, r_max = 200
  CHECK(blockage_prob(0.0, true, rp) == doctest::Approx(0.0768836536133642).epsilon(1e-12));
  CHECK(blockage_prob(100.0, true, rp) == doctest::Approx(0.999690328964581).epsilon(1e-12));
  CHECK(blockage_prob(17.0, false, rp) == 1.0);
  CHECK(blockage_prob(0.0, false, rp) == 1.0);
}

TEST_CASE("blockage_prob: nondecreasing in r, jumps to 1 past r_max") {
  RadioParams rp;
  double prev = -1.0;
  for (double r = 0.0; r <= rp.r_max; r += 2.37) {
    double p = blockage_prob(r, true, rp);
    CHECK(p >= prev);
    CHECK(p < 1.0);
    prev = p;
  }
  CHECK(blockage_prob(rp.r_max + 1e-9, true, rp) == 1.0);
}

TEST_CASE("access_block_prob: boundary cases") {
  CHECK(access_block_prob(0.0, 12) == 0.0);
  CHECK(access_block_prob(0.0, 0) == 0.0);
  CHECK_THROWS_AS(access_block_prob(-1.0, 12), std::domain_error);
  // n_rf = 0 collapses to P(n >= 1) = 1 - exp(-mu).
  for (double mu : {0.1, 0.7, 2.0, 9.0, 40.0})
    CHECK(access_block_prob(mu, 0) == doctest::Approx(1.0 - std::exp(-mu)).epsilon(1e-12));
}

TEST_CASE("access_block_prob: Monte Carlo cross-check at mu=12, n_rf=12") {
  const double mu = 12.0;
  const int n_rf = 12;
  const int n_samples = 1000000;
  CounterRng rng(CounterRng::mix(777));
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    int n = rng.stream(i).next_poisson(mu);
    double v = n > n_rf ? static_cast<double>(n - n_rf) / n : 0.0;
    sum += v;
    sumsq += v * v;
  }
  double est = sum / n_samples;
  double se = std::sqrt((sumsq / n_samples - est * est) / (n_samples - 1));
  double closed = access_block_prob(mu, n_rf);
  CHECK(std::abs(closed - est) <= 3.0 * se);
  // Independently derived series value.
  CHECK(closed == doctest::Approx(0.0839612065247994).epsilon(1e-10));
}

TEST_CASE("access_block_prob: monotone in mu, antitone in n_rf, within [0,1]") {
  for (int k : {1, 4, 12, 14}) {
    double prev = 0.0;
    for (double mu = 0.0; mu <= 40.0; mu += 0.5) {
      double v = access_block_prob(mu, k);
      CHECK(v >= prev - 1e-13);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
  CounterRng rng(5);
  for (int it = 0; it < 100; ++it) {
    double mu = rng.next_double(0.0, 50.0);
    int k = static_cast<int>(rng.next_below(20));
    CHECK(access_block_prob(mu, k + 1) <= access_block_prob(mu, k) + 1e-13);
  }
}

TEST_CASE("access_block_prob: truncation depth does not matter") {
  for (double mu : {0.3, 3.0, 12.0, 33.3, 120.0})
    CHECK(std::abs(access_block_prob(mu, 12, 1e-14) - access_block_prob(mu, 12, 1e-20)) <=
          1e-12);
}

TEST_CASE("solve_phi: round-trips and monotonicity") {
  for (double gamma : {0.01, 0.05, 0.1, 0.2})
    for (int k : {1, 4, 12, 14}) {
      double phi = solve_phi(gamma, k);
      double back = access_block_prob(phi, k);
      CHECK(back <= gamma);  // conservative side
      CHECK(std::abs(back - gamma) <= 1e-9);
    }
  CHECK(solve_phi(1e-9, 12) < solve_phi(0.05, 12));
  // n_rf = 0: analytic inverse of the collapsed series.
  for (double gamma : {0.02, 0.3, 0.8})
    CHECK(solve_phi(gamma, 0) == doctest::Approx(-std::log(1.0 - gamma)).epsilon(1e-8));
}

TEST_CASE("mean_active_ue: examples") {
  // One site, one grid, LoS, no blockage discount beyond exp(-alpha).
  ScenarioBundle bundle = oracle::scenario_from_text(R"({
    "buildings": [],
    "sites": [{"x": 0, "y": 0, "z": 10, "cost": 1}],
    "grid": {"x0": -2.5, "y0": -2.5, "nx": 1, "ny": 1, "side": 5},
    "regions": [{"x0": -3, "y0": -3, "x1": 3, "y1": 3, "lambda": 4e-4, "zeta": 0.5}],
    "radio": {"alpha": 0.0, "beta": 0.0}
  })");
  const Scenario& sc = bundle.scenario;
  LinkTable lt = build_link_table(sc);
  // alpha = beta = 0 makes p_blk = 0 on LoS links.
  CHECK(lt.at(1, 1).p_blk == doctest::Approx(0.0));
  CHECK(mean_active_ue({1}, lt, sc, 1) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(mean_active_ue({0}, lt, sc, 1) == 0.0);
  CHECK_THROWS_AS(mean_active_ue({1, 0}, lt, sc, 1), std::invalid_argument);
}

TEST_CASE("mean_active_ue: matches a direct summation oracle on a generated scenario") {
  ScenarioBundle bundle = generate_scenario(SizeClass::Tiny, 3);
  const Scenario& sc = bundle.scenario;
  LinkTable lt = build_link_table(sc);
  CounterRng rng(99);
  for (int b = 1; b <= sc.num_sites(); ++b) {
    std::vector<std::uint8_t> row(static_cast<std::size_t>(sc.num_grids()));
    for (auto& v : row) v = rng.next_double() < 0.5 ? 1 : 0;
    double expect = 0.0;
    for (int g = 1; g <= sc.num_grids(); ++g) {
      if (!row[static_cast<std::size_t>(g - 1)]) continue;
      const GridCell& cell = sc.grid(g);
      expect += cell.ue_density * cell.side * cell.side * (1.0 - lt.at(b, g).p_blk);
    }
    CHECK(mean_active_ue(row, lt, sc, b) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("build_link_table: composition matches the individual operations") {
  ScenarioBundle bundle = generate_scenario(SizeClass::Tiny, 7);
  const Scenario& sc = bundle.scenario;
  const RadioParams& rp = sc.radio();
  LinkTable lt = build_link_table(sc);
  for (int b = 1; b <= sc.num_sites(); ++b) {
    for (int g = 1; g <= sc.num_grids(); ++g) {
      const LinkTable::Entry& e = lt.at(b, g);
      CHECK(e.los == los_visible(sc, b, g));
      CHECK(e.r == doctest::Approx(link_distance(sc, b, g)).epsilon(1e-15));
      CHECK(e.pl == doctest::Approx(pathloss(e.r)).epsilon(1e-15));
      CHECK(e.p_blk == doctest::Approx(blockage_prob(e.r, e.los, rp)).epsilon(1e-15));
      if (e.p_blk < 1.0) {
        CHECK(e.p_bar == doctest::Approx(rp.p_tx * rp.g_main * e.pl / rp.n_rf).epsilon(1e-15));
        CHECK(e.i_hat0 == doctest::Approx(rp.p_tx * rp.g_side * e.pl).epsilon(1e-15));
        CHECK(e.i_hat1 ==
              doctest::Approx((1.0 - 1.0 / rp.n_rf) * e.i_hat0).epsilon(1e-15));
        CHECK(e.i_hat1 <= e.i_hat0);
        CHECK(e.p_bar > 0.0);
      } else {
        CHECK(e.p_bar == 0.0);
        CHECK(e.i_hat0 == 0.0);
        CHECK(e.i_hat1 == 0.0);
      }
    }
  }
}

TEST_CASE("build_link_table: deterministic across thread counts") {
  ScenarioBundle bundle = generate_scenario(SizeClass::Tiny, 11);
  const Scenario& sc = bundle.scenario;
  LinkTable a = build_link_table(sc, 1);
  LinkTable b = build_link_table(sc, 4);
  for (int s = 1; s <= sc.num_sites(); ++s)
    for (int g = 1; g <= sc.num_grids(); ++g) {
      CHECK(a.at(s, g).p_blk == b.at(s, g).p_blk);
      CHECK(a.at(s, g).p_bar == b.at(s, g).p_bar);
    }
}

TEST_CASE("blockage parameters from obstacle moments") {
  // Uniform obstacle heights on [0, H] against BS/UE heights gives a closed
  // form for eta.
  double h_bs = 10.0, h_ue = 1.5, H = 6.0;
  auto cdf = [&](double x) { return std::clamp(x / H, 0.0, 1.0); };
  double eta = eta_from_height_cdf(cdf, h_ue, h_bs);
  // integral of F(s h_ue + (1-s) h_bs) over s in [0,1]: the argument falls
  // from 10 to 1.5, crossing H=6 at s = (10-6)/8.5.
  double s_star = (h_bs - H) / (h_bs - h_ue);
  double expected = 1.0 - ((1.0 - s_star) * 0.5 * (6.0 + 1.5) / H + s_star * 1.0);
  CHECK(eta == doctest::Approx(expected).epsilon(1e-6));

  BlockageParams bp = blockage_params_from_obstacles(0.01, 5.0, 4.0, eta);
  CHECK(bp.alpha == doctest::Approx(0.01 * 5.0 * 4.0).epsilon(1e-12));
  CHECK(bp.beta == doctest::Approx(2.0 * 0.01 * 9.0 / M_PI * eta).epsilon(1e-12));
}
