#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "fbm2d/numerics.hpp"

namespace fbm2d {

namespace {

GaussLegendreRule build_rule(int order) {
  GaussLegendreRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at converged node
    double p0 = 1, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1);
    const double w = 2 / ((1 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[order - 1 - i] = x;
    r.weights[i] = w;
    r.weights[order - 1 - i] = w;
  }
  return r;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 2 || order > 256) throw std::invalid_argument("gauss_legendre: order in [2,256]");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> rules;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = rules[order];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(order));
  return *slot;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int panels, int order) {
  if (panels < 1) throw std::invalid_argument("integrate_gl: panels >= 1");
  const auto& r = gauss_legendre(order);
  const double h = (b - a) / panels;
  double total = 0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double acc = 0;
    for (int i = 0; i < order; ++i) acc += r.weights[i] * f(mid + 0.5 * h * r.nodes[i]);
    total += 0.5 * h * acc;
  }
  return total;
}

}  // namespace fbm2d
