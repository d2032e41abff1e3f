#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace fbm2d {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Gamma on (0, 5]; throws std::domain_error elsewhere.
double gamma_fn(double x);

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int order);

// Composite Gauss-Legendre over [a, b] split into `panels` equal pieces.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int panels, int order = 16);

// Power-of-two complex DFT.
//   forward: X_k = sum_t x_t e^{-2 pi i t k / n}
//   inverse: x_t = (1/n) sum_k X_k e^{+2 pi i t k / n}
enum class DftDirection { Forward, Inverse };

void dft_inplace(std::span<cplx> values, DftDirection dir);
std::vector<cplx> dft(std::span<const cplx> values, DftDirection dir);

bool is_power_of_two(std::size_t n);

struct Hermitian2x2 {
  double a11 = 0.0;
  double a22 = 0.0;
  cplx a12{0.0, 0.0};
};

struct Eigen2x2 {
  std::array<double, 2> values{};  // descending
  // columns are eigenvectors: v[row][col]
  std::array<std::array<cplx, 2>, 2> vectors{};
};

Eigen2x2 eig_h2x2(const Hermitian2x2& m);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  std::size_t points = 0;
};

// OLS on (log x, log y) restricted to x in [x_lo, x_hi].
SlopeFit loglog_slope(std::span<const double> xs, std::span<const double> ys,
                      double x_lo, double x_hi);

std::vector<double> logspace(double lo, double hi, std::size_t points);

// Standard normal stream. Seeded by (seed, stream) through splitmix64 so that
// worker streams never overlap in practice.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed, std::uint64_t stream = 0);
  double operator()();
  void fill(std::span<double> out);

 private:
  double uniform_open();  // (0, 1)

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::vector<double> gaussian_rng(std::uint64_t seed, std::size_t count);

}  // namespace fbm2d
