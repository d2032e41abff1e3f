#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdlib>

#include "fbm2d/covariance.hpp"
#include "fbm2d/errors.hpp"
#include "fbm2d/simulate.hpp"
#include "fbm2d/spectral.hpp"

using namespace fbm2d;
using Catch::Approx;

namespace {

ModelParams P(double h1, double h2, double rho, Variant v = Variant::Causal, double s1 = 1,
              double s2 = 1) {
  return {h1, h2, rho, s1, s2, v};
}

struct Moment {
  double mean, var, se_var;
};

// sample mean and variance of Z_comp(i) across trajectories
Moment moments(const TrajectoryEnsemble& e, int comp, std::size_t i) {
  const double N = double(e.n_traj);
  double m = 0, m2 = 0, m4 = 0;
  for (std::size_t t = 0; t < e.n_traj; ++t) m += e.at(t, comp, i);
  m /= N;
  for (std::size_t t = 0; t < e.n_traj; ++t) {
    const double x = e.at(t, comp, i) - m;
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m2 /= N;
  m4 /= N;
  return {m, m2, std::sqrt((m4 - m2 * m2) / N)};
}

double sample_corr(const TrajectoryEnsemble& e, std::size_t i) {
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t t = 0; t < e.n_traj; ++t) {
    const double x = e.at(t, 0, i), y = e.at(t, 1, i);
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("Brownian embedding is constant across frequencies") {
  for (double delta : {1.0, 2.0}) {
    const auto e = build_embedding(P(0.5, 0.5, 0.3, Variant::Causal, 1.0, 2.0), 64, delta);
    REQUIRE(e.size() >= 128);
    for (const auto& m : e.matrices) {
      CHECK(m.a11 == Approx(delta).epsilon(1e-12));
      CHECK(m.a22 == Approx(4 * delta).epsilon(1e-12));
      CHECK(std::abs(m.a12 - cplx(0.6 * delta)) < 1e-12);
    }
    CHECK(e.clipped_fraction() == 0.0);
  }
}

TEST_CASE("embedding spectrum is Hermitian across k and M - k") {
  const auto e = build_embedding(P(0.2, 0.7, 0.5), 256);
  const std::size_t M = e.size();
  for (std::size_t k = 1; k < M; k += 7) {
    CHECK(std::abs(e.matrices[M - k].a11 - e.matrices[k].a11) < 1e-12);
    CHECK(std::abs(e.matrices[M - k].a12 - std::conj(e.matrices[k].a12)) < 1e-12);
  }
  CHECK(e.min_eigenvalue >= -kClipThreshold * e.max_diagonal);
}

TEST_CASE("embedding spectrum converges to 2 pi times the increment PSD") {
  for (Variant v : {Variant::Causal, Variant::WellBalanced}) {
    const auto p = P(0.2, 0.7, 0.5, v);
    const DerivedParams d = derive(p);
    const auto e = build_embedding(p, std::size_t(1) << 16);
    const std::size_t M = e.size();
    for (std::size_t k = M / 512; k < M / 2; k += M / 64) {
      const double f = 2 * kPi * double(k) / double(M);
      const auto& lam = e.matrices[k];
      const cplx s11 = 2 * kPi * increment_psd(f, 0, 0, d).value;
      const cplx s22 = 2 * kPi * increment_psd(f, 1, 1, d).value;
      const cplx s12 = 2 * kPi * increment_psd(f, 0, 1, d).value;
      INFO("f = " << f);
      CHECK(std::abs(lam.a11 - s11.real()) / s11.real() < 1e-2);
      CHECK(std::abs(lam.a22 - s22.real()) / s22.real() < 1e-2);
      CHECK(std::abs(lam.a12 - s12) / std::abs(s12) < 1e-2);
    }
  }
}

TEST_CASE("sampler input validation") {
  CHECK_THROWS_AS(build_embedding(P(0.3, 0.3, 0), 100), std::invalid_argument);
  CHECK_THROWS_AS(build_embedding(P(0.3, 0.3, 0), 64, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_paths(P(0.3, 0.3, 0), 64, 0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_paths(P(1.3, 0.3, 0), 64, 1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_paths_dense(P(0.3, 0.3, 0), 1024, 1, 1.0, 1), std::invalid_argument);
}

TEST_CASE("sampling is deterministic and independent of the worker count") {
  const auto p = P(0.3, 0.8, 0.6, Variant::WellBalanced);
  setenv("FBM2D_THREADS", "1", 1);
  const auto a = sample_paths(p, 128, 7, 1.0, 99);
  setenv("FBM2D_THREADS", "3", 1);
  const auto b = sample_paths(p, 128, 7, 1.0, 99);
  unsetenv("FBM2D_THREADS");
  CHECK(a.data == b.data);
  CHECK(sample_paths(p, 128, 7, 1.0, 100).data != a.data);
  REQUIRE(a.data.size() == 7 * 2 * 129);
  for (std::size_t t = 0; t < 7; ++t) {
    CHECK(a.at(t, 0, 0) == 0.0);
    CHECK(a.at(t, 1, 0) == 0.0);
  }
  // the first trajectories do not depend on how many are drawn
  const auto c = sample_paths(p, 128, 3, 1.0, 99);
  for (std::size_t i = 0; i <= 128; ++i) CHECK(c.at(2, 1, i) == a.at(2, 1, i));
}

TEST_CASE("ensemble metadata") {
  const auto e = sample_paths(P(0.2, 0.7, 0.5), 256, 2, 0.5, 3);
  CHECK(e.n == 256);
  CHECK(e.delta == 0.5);
  CHECK(e.method == SamplingMethod::Circulant);
  CHECK(e.embedding_size >= 512);
  CHECK(e.clipped_fraction < kApproximateFraction);
  CHECK_FALSE(e.approximate);
  const auto inc = e.increments(1, 0);
  REQUIRE(inc.size() == 256);
  CHECK(inc[5] == e.at(1, 0, 6) - e.at(1, 0, 5));
}

TEST_CASE("sampled paths have zero mean and self-similar variance") {
  const std::size_t N = 4000, n = 256;
  for (Variant v : {Variant::Causal, Variant::WellBalanced}) {
    const auto p = P(0.3, 0.8, 0.5, v, 1.5, 0.7);
    const auto e = sample_paths(p, n, N, 1.0, 5);
    for (std::size_t i : {1ul, 16ul, 64ul, 256ul})
      for (int c = 0; c < 2; ++c) {
        const auto m = moments(e, c, i);
        const double var = p.sigma(c) * p.sigma(c) * std::pow(double(i), 2 * p.hurst(c));
        INFO(to_string(v) << " comp " << c << " i " << i);
        CHECK(std::abs(m.mean) < 4 * std::sqrt(var / N));
        CHECK(std::abs(m.var - var) < 4 * m.se_var);
      }
  }
}

TEST_CASE("Brownian end-point variance") {
  const auto e = sample_paths(P(0.5, 0.5, 0.0, Variant::Causal, 2.0, 1.0), 256, 2000, 0.25, 8);
  const auto m = moments(e, 0, 256);
  CHECK(std::abs(m.var - 4.0 * 64.0) < 4 * m.se_var);
}

TEST_CASE("equal exponents: correlation of the components is rho") {
  const std::size_t N = 4000;
  const auto e = sample_paths(P(0.4, 0.4, 0.6), 128, N, 1.0, 12);
  for (std::size_t i : {1ul, 64ul, 128ul}) {
    const double r = sample_corr(e, i);
    CHECK(std::abs(r - 0.6) < 4 * (1 - 0.36) / std::sqrt(double(N)));
  }
}

TEST_CASE("dense covariance matrix matches the analytic increment covariance") {
  const auto p = P(0.2, 0.7, 0.5);
  const DerivedParams d = derive(p);
  const auto m = increment_covariance_matrix(p, 2, 0.5);
  REQUIRE(m.rows() == 4);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      for (int t = 0; t < 2; ++t)
        for (int s = 0; s < 2; ++s)
          CHECK(m(j * 2 + t, k * 2 + s) == Approx(increment_cov((t - s) * 0.5, 0.5, j, k, d)).epsilon(1e-14));
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dense sampler: one-sided cross covariance when H2 = 1/2") {
  const std::size_t N = 20000;
  const auto e = sample_paths_dense(P(0.2, 0.5, 0.5), 4, N, 1.0, 4);
  CHECK(e.method == SamplingMethod::DenseExact);
  // increments dZ1(t + h) dZ2(t) for h = 1 vanish, h = -1 do not
  double plus = 0, minus = 0, p2 = 0, m2 = 0;
  for (std::size_t t = 0; t < N; ++t) {
    const auto a = e.increments(t, 0), b = e.increments(t, 1);
    const double xp = a[2] * b[1], xm = a[1] * b[2];
    plus += xp;
    minus += xm;
    p2 += xp * xp;
    m2 += xm * xm;
  }
  plus /= N;
  minus /= N;
  CHECK(std::abs(plus) < 4 * std::sqrt(p2 / N / N));
  CHECK(std::abs(minus) > 4 * std::sqrt(m2 / N / N));
}

TEST_CASE("circulant and dense samplers agree") {
  const std::size_t N = 4000, n = 64;
  const auto p = P(0.2, 0.7, 0.5);
  const auto c = sample_paths(p, n, N, 1.0, 21);
  const auto d = sample_paths_dense(p, n, N, 1.0, 21);
  for (std::size_t i : {1ul, 32ul, 64ul})
    for (int comp = 0; comp < 2; ++comp) {
      const auto a = moments(c, comp, i), b = moments(d, comp, i);
      CHECK(std::abs(a.var - b.var) < 4 * std::hypot(a.se_var, b.se_var));
    }
}
