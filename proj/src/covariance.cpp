#include "fbm2d/covariance.hpp"

#include <cmath>
#include <stdexcept>

namespace fbm2d {

namespace {

double sgn(double u) { return (u > 0) - (u < 0); }

// w(u) |u|^a with the 0 * w(0) = 0 convention
double wpow(double u, int j, int k, const DerivedParams& d) {
  if (u == 0.0) return 0.0;
  return weight_w(u, j, k, d) * std::pow(std::abs(u), d.hsum(j, k));
}

void check_index(int j, int k) {
  if (j < 0 || j > 1 || k < 0 || k > 1) throw std::out_of_range("component index must be 0 or 1");
}

}  // namespace

void LagGrid::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  for (double h : lags)
    if (!std::isfinite(h)) throw std::invalid_argument("lags must be finite");
}

LagGrid LagGrid::integers(int lag_max, double delta) {
  if (lag_max < 0) throw std::invalid_argument("lag_max must be non-negative");
  LagGrid g;
  g.delta = delta;
  for (int h = -lag_max; h <= lag_max; ++h) g.lags.push_back(h);
  g.validate();
  return g;
}

double weight_w(double u, int j, int k, const DerivedParams& d) {
  check_index(j, k);
  const double r = d.rho(j, k);
  if (d.log_branch(j, k)) {
    if (u == 0.0) return r;
    return r - d.eta(j, k) * sgn(u) * std::log(std::abs(u));
  }
  return r - d.eta(j, k) * sgn(u);
}

double process_cov(double t, double s, int j, int k, const DerivedParams& d) {
  if (t < 0 || s < 0) throw std::domain_error("process_cov: times must be >= 0");
  const double pref = 0.5 * d.params.sigma(j) * d.params.sigma(k);
  return pref * (wpow(t, j, k, d) + wpow(-s, j, k, d) - wpow(t - s, j, k, d));
}

double process_cov(double t, double s, int j, int k, const ModelParams& p) {
  return process_cov(t, s, j, k, derive(p));
}

double increment_cov(double h, double delta, int j, int k, const DerivedParams& d) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const double pref = 0.5 * d.params.sigma(j) * d.params.sigma(k);
  return pref * (wpow(h + delta, j, k, d) + wpow(h - delta, j, k, d) - 2 * wpow(h, j, k, d));
}

double increment_cov(double h, double delta, int j, int k, const ModelParams& p) {
  return increment_cov(h, delta, j, k, derive(p));
}

double increment_cov_oracle(double h, double delta, int j, int k, const DerivedParams& d,
                            double s) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (s < 0) s = std::abs(h) + delta;
  const double t = s + h;
  if (t < 0) throw std::domain_error("increment_cov_oracle: base time too small for lag");
  return process_cov(t + delta, s + delta, j, k, d) - process_cov(t, s + delta, j, k, d) -
         process_cov(t + delta, s, j, k, d) + process_cov(t, s, j, k, d);
}

std::vector<double> increment_cov(const LagGrid& grid, int j, int k, const DerivedParams& d) {
  grid.validate();
  std::vector<double> out;
  out.reserve(grid.lags.size());
  for (double h : grid.lags) out.push_back(increment_cov(h * grid.delta, grid.delta, j, k, d));
  return out;
}

}  // namespace fbm2d
