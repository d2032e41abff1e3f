#pragma once

#include <vector>

#include "fbm2d/model.hpp"

namespace fbm2d {

struct LagGrid {
  std::vector<double> lags;  // in steps; time lag is lags[i] * delta
  double delta = 1.0;

  void validate() const;
  static LagGrid integers(int lag_max, double delta);  // -lag_max..lag_max
};

// rho_jk - eta_jk sign(u), or with log|u| in the log regime. sign(0) = 0.
double weight_w(double u, int j, int k, const DerivedParams& d);

// gamma_jk(t, s) = E[Z_j(t) Z_k(s)], t, s >= 0
double process_cov(double t, double s, int j, int k, const DerivedParams& d);
double process_cov(double t, double s, int j, int k, const ModelParams& p);

// E[dZ_j(t) dZ_k(s)] for increments of length delta, h = t - s
double increment_cov(double h, double delta, int j, int k, const DerivedParams& d);
double increment_cov(double h, double delta, int j, int k, const ModelParams& p);

// Same quantity by differencing process_cov at base time s (default |h| + delta).
double increment_cov_oracle(double h, double delta, int j, int k, const DerivedParams& d,
                            double s = -1.0);

std::vector<double> increment_cov(const LagGrid& grid, int j, int k, const DerivedParams& d);

}  // namespace fbm2d
