#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "fbm2d/numerics.hpp"

using namespace fbm2d;
using Catch::Approx;

namespace {

// naive O(n^2) transform, same sign and scaling conventions as dft()
std::vector<cplx> naive_dft(const std::vector<cplx>& x, DftDirection dir) {
  const std::size_t n = x.size();
  const double sgn = dir == DftDirection::Forward ? -1.0 : 1.0;
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0;
    for (std::size_t t = 0; t < n; ++t) acc += x[t] * std::polar(1.0, sgn * 2 * kPi * double(t * k % n) / n);
    out[k] = dir == DftDirection::Forward ? acc : acc / double(n);
  }
  return out;
}

std::vector<cplx> random_vec(std::size_t n, unsigned seed) {
  std::mt19937 g(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {nd(g), nd(g)};
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("gamma_fn trivial values") {
  CHECK(gamma_fn(1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(gamma_fn(0.5) == Approx(std::sqrt(kPi)).epsilon(1e-14));
  CHECK(gamma_fn(5.0) == Approx(24.0).epsilon(1e-14));
}

TEST_CASE("gamma_fn against 40-digit reference values") {
  // tests/oracles/gen_constants.py
  const std::pair<double, double> refs[] = {{1.7, 0.90863873285329044998},
                                            {0.3, 2.9915689876875906283},
                                            {4.5, 11.631728396567448929},
                                            {0.05, 19.470085311255512864}};
  for (auto [x, g] : refs) CHECK(std::abs(gamma_fn(x) - g) / g < 1e-13);
}

TEST_CASE("gamma_fn rejects arguments outside (0,5]") {
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-0.5), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(5.01), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(std::nan("")), std::domain_error);
}

TEST_CASE("Gauss-Legendre rule is exact for polynomials up to degree 2n-1") {
  for (int order : {2, 5, 12, 16}) {
    const auto& r = gauss_legendre(order);
    for (int deg = 0; deg <= 2 * order - 1; ++deg) {
      double s = 0;
      for (int i = 0; i < order; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(s == Approx(exact).margin(1e-14));
    }
  }
  CHECK_THROWS(gauss_legendre(1));
}

TEST_CASE("composite Gauss-Legendre integrates sin on [0, pi]") {
  CHECK(integrate_gl([](double x) { return std::sin(x); }, 0, kPi, 4) == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("dft of a delta sequence is constant") {
  std::vector<cplx> x(16, 0.0);
  x[0] = 1.0;
  for (auto v : dft(x, DftDirection::Forward)) CHECK(std::abs(v - cplx(1.0)) < 1e-15);
}

TEST_CASE("dft round trip") {
  const auto x = random_vec(1024, 1);
  const auto y = dft(dft(x, DftDirection::Forward), DftDirection::Inverse);
  CHECK(max_diff(x, y) < 1e-12);
}

TEST_CASE("dft matches a naive transform on n=64") {
  const auto x = random_vec(64, 2);
  CHECK(max_diff(dft(x, DftDirection::Forward), naive_dft(x, DftDirection::Forward)) < 1e-10);
  CHECK(max_diff(dft(x, DftDirection::Inverse), naive_dft(x, DftDirection::Inverse)) < 1e-10);
}

TEST_CASE("dft is linear") {
  const auto x = random_vec(256, 3), y = random_vec(256, 4);
  const cplx a(0.3, -1.2), b(2.0, 0.5);
  std::vector<cplx> z(256);
  for (int i = 0; i < 256; ++i) z[i] = a * x[i] + b * y[i];
  const auto X = dft(x, DftDirection::Forward), Y = dft(y, DftDirection::Forward);
  const auto Z = dft(z, DftDirection::Forward);
  double m = 0;
  for (int i = 0; i < 256; ++i) m = std::max(m, std::abs(Z[i] - a * X[i] - b * Y[i]));
  CHECK(m < 1e-12);
}

TEST_CASE("dft rejects lengths that are not powers of two") {
  std::vector<cplx> x(12);
  CHECK_THROWS_AS(dft(x, DftDirection::Forward), std::invalid_argument);
  CHECK_FALSE(is_power_of_two(0));
  CHECK(is_power_of_two(1));
  CHECK(is_power_of_two(4096));
}

TEST_CASE("eig_h2x2 simple matrices") {
  auto e = eig_h2x2({1.0, 1.0, 0.0});
  CHECK(e.values[0] == 1.0);
  CHECK(e.values[1] == 1.0);

  e = eig_h2x2({3.0, 1.0, 0.0});
  CHECK(e.values[0] == 3.0);
  CHECK(e.values[1] == 1.0);
  CHECK(std::abs(e.vectors[0][0]) == Approx(1.0));
  CHECK(std::abs(e.vectors[1][1]) == Approx(1.0));

  e = eig_h2x2({1.0, 3.0, 0.0});
  CHECK(e.values[0] == 3.0);
  CHECK(std::abs(e.vectors[1][0]) == Approx(1.0));

  // characteristic polynomial (2 - l)^2 - 1 = 0
  e = eig_h2x2({2.0, 2.0, cplx(0.0, 1.0)});
  CHECK(e.values[0] == Approx(3.0).epsilon(1e-15));
  CHECK(e.values[1] == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("eig_h2x2 reconstructs random Hermitian matrices") {
  std::mt19937 g(7);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 500; ++rep) {
    const Hermitian2x2 m{nd(g), nd(g) * 3, cplx(nd(g), nd(g)) * (rep % 5 == 0 ? 1e-9 : 1.0)};
    const auto e = eig_h2x2(m);
    REQUIRE(e.values[0] >= e.values[1]);
    const double norm = std::sqrt(m.a11 * m.a11 + m.a22 * m.a22 + 2 * std::norm(m.a12));
    double err = 0, unit = 0;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        cplx rec = 0, vv = 0;
        for (int q = 0; q < 2; ++q) {
          rec += e.vectors[r][q] * e.values[q] * std::conj(e.vectors[c][q]);
          vv += std::conj(e.vectors[q][r]) * e.vectors[q][c];
        }
        const cplx target = r == c ? (r == 0 ? m.a11 : m.a22) : (r == 0 ? m.a12 : std::conj(m.a12));
        err = std::max(err, std::abs(rec - target));
        unit = std::max(unit, std::abs(vv - (r == c ? 1.0 : 0.0)));
      }
    CHECK(err <= 1e-12 * norm);
    CHECK(unit < 1e-13);
  }
}

TEST_CASE("loglog_slope recovers power laws") {
  const auto xs = logspace(1.0, 100.0, 20);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(x * x);
  CHECK(loglog_slope(xs, ys, 1, 100).slope == Approx(2.0).epsilon(1e-12));

  std::mt19937 g(11);
  std::uniform_real_distribution<double> u(-1, 1);
  ys.clear();
  for (double x : xs) ys.push_back(3.0 * std::pow(x, -1.4) * (1 + 0.01 * u(g)));
  const auto fit = loglog_slope(xs, ys, 1, 100);
  CHECK(std::abs(fit.slope + 1.4) < 0.05);
  CHECK(fit.stderr_slope < 0.01);

  std::vector<double> flat(xs.size(), 5.0);
  CHECK(loglog_slope(xs, flat, 1, 100).slope == Approx(0.0).margin(1e-14));
}

TEST_CASE("loglog_slope input errors") {
  const auto xs = logspace(1.0, 100.0, 20);
  std::vector<double> ys(xs.size(), 1.0);
  ys[3] = -1.0;
  CHECK_THROWS_AS(loglog_slope(xs, ys, 1, 100), std::domain_error);
  ys[3] = 1.0;
  CHECK_THROWS_AS(loglog_slope(xs, ys, 1, 2), std::invalid_argument);  // too few points
}

TEST_CASE("gaussian_rng is deterministic per seed") {
  CHECK(gaussian_rng(42, 1000) == gaussian_rng(42, 1000));
  CHECK(gaussian_rng(42, 1000) != gaussian_rng(43, 1000));
  GaussianRng a(5, 0), b(5, 1);
  CHECK(a() != b());
}

TEST_CASE("gaussian_rng moments") {
  const std::size_t n = 1000000;
  const auto v = gaussian_rng(2024, n);
  double m = 0, m2 = 0;
  for (double x : v) m += x;
  m /= n;
  for (double x : v) m2 += (x - m) * (x - m);
  m2 /= (n - 1);
  CHECK(std::abs(m) < 4 / std::sqrt(double(n)));
  CHECK(m2 >= 0.99);
  CHECK(m2 <= 1.01);
}

TEST_CASE("gaussian_rng streams for different seeds are uncorrelated") {
  const std::size_t n = 100000;
  const auto a = gaussian_rng(1, n), b = gaussian_rng(2, n);
  double sab = 0, sa = 0, sb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += a[i] * b[i];
    sa += a[i] * a[i];
    sb += b[i] * b[i];
  }
  CHECK(std::abs(sab / std::sqrt(sa * sb)) < 0.01);
}
