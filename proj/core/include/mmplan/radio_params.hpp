#pragma once

#include <cmath>
#include <stdexcept>

namespace mmplan {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// Radio-layer parameters shared by every link computation.  Gains and powers
// are stored in linear scale; dB/dBm appear only at the config boundary.
struct RadioParams {
  double h_bs = 10.0;       // default site height [m]
  double h_ue = 1.5;        // UE height [m]
  double alpha = 0.08;      // blockage intercept
  double beta = 0.08;       // blockage slope [1/m]
  double r_max = 200.0;     // max reliable link distance [m]
  int n_rf = 12;            // RF chains per site
  double z = 1.0;           // SINR threshold (linear)
  double gamma = 0.05;      // access-limited blockage tolerance
  double g_main = 31.6227766016837933;   // mainlobe gain (15 dB)
  double g_side = 0.12589254117941673;   // sidelobe gain (-9 dB)
  double p_tx = 1.0;                     // transmit power [W]
  double noise = 3.5481338923357546e-14; // noise power (-104.5 dBm) [W]
  double eps_bisect = 0.1;  // coverage bisection tolerance [m]

  // dB/dBm values as they appeared at the config boundary; kept so saving a
  // scenario reproduces the input bytes.  The linear fields above are
  // authoritative everywhere else.
  double g_main_db = 15.0;
  double g_side_db = -9.0;
  double noise_dbm = -104.5;

  void set_gains_db(double main_db, double side_db) {
    g_main_db = main_db;
    g_side_db = side_db;
    g_main = db_to_linear(main_db);
    g_side = db_to_linear(side_db);
  }
  void set_noise_dbm(double dbm) {
    noise_dbm = dbm;
    noise = dbm_to_watt(dbm);
  }

  void validate() const {
    if (!(r_max > 0.0)) throw std::invalid_argument("radio: r_max must be > 0");
    if (n_rf < 1) throw std::invalid_argument("radio: n_rf must be >= 1");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("radio: gamma must be in (0,1)");
    if (!(g_main > g_side && g_side > 0.0))
      throw std::invalid_argument("radio: need g_main > g_side > 0");
    if (!(p_tx > 0.0)) throw std::invalid_argument("radio: p_tx must be > 0");
    if (!(noise > 0.0)) throw std::invalid_argument("radio: noise must be > 0");
    if (!(eps_bisect > 0.0)) throw std::invalid_argument("radio: eps_bisect must be > 0");
    if (!(h_ue < h_bs)) throw std::invalid_argument("radio: h_ue must be below h_bs");
    if (!(z > 0.0)) throw std::invalid_argument("radio: z must be > 0");
  }
};

}  // namespace mmplan
