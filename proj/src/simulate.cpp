#include "fbm2d/simulate.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "fbm2d/covariance.hpp"
#include "fbm2d/errors.hpp"
#include "fbm2d/parallel.hpp"

namespace fbm2d {

namespace {

void check_n(std::size_t n) {
  if (n < 2 || !is_power_of_two(n)) throw std::invalid_argument("n must be a power of two >= 2");
}

struct Attempt {
  std::vector<Hermitian2x2> mats;
  double min_eig = 0.0;
  double max_diag = 0.0;
};

Attempt spectrum_at(const DerivedParams& d, std::size_t m, double delta) {
  const std::size_t M = 2 * m;
  std::array<std::vector<cplx>, 3> seq;  // 00, 11, 01
  const int jk[3][2] = {{0, 0}, {1, 1}, {0, 1}};
  for (int s = 0; s < 3; ++s) {
    const int j = jk[s][0], k = jk[s][1];
    auto& c = seq[s];
    c.assign(M, cplx(0));
    for (std::size_t h = 0; h < m; ++h) c[h] = increment_cov(double(h) * delta, delta, j, k, d);
    const double lm = double(m) * delta;
    c[m] = 0.5 * (increment_cov(lm, delta, j, k, d) + increment_cov(-lm, delta, j, k, d));
    for (std::size_t h = m + 1; h < M; ++h)
      c[h] = increment_cov((double(h) - double(M)) * delta, delta, j, k, d);
    // sum_h c(h) e^{+2 pi i h k / M}
    dft_inplace(c, DftDirection::Inverse);
    for (auto& v : c) v *= double(M);
  }
  Attempt a;
  a.mats.resize(M);
  a.min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < M; ++q) {
    Hermitian2x2 h{seq[0][q].real(), seq[1][q].real(), seq[2][q]};
    a.mats[q] = h;
    a.max_diag = std::max({a.max_diag, h.a11, h.a22});
    a.min_eig = std::min(a.min_eig, eig_h2x2(h).values[1]);
  }
  return a;
}

}  // namespace

EmbeddingSpectrum build_embedding(const ModelParams& p, std::size_t n, double delta) {
  check_n(n);
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const DerivedParams d = derive(p);
  std::size_t m = n;
  Attempt att = spectrum_at(d, m, delta);
  while (att.min_eig < -kClipThreshold * att.max_diag) {
    if (4 * m > kMaxEmbeddingFactor * n) {
      throw EmbeddingError("circulant embedding not nonnegative definite (min eigenvalue " +
                               std::to_string(att.min_eig) + ", size " + std::to_string(2 * m) +
                               ")",
                           att.min_eig, 2 * m);
    }
    m *= 2;
    att = spectrum_at(d, m, delta);
  }

  EmbeddingSpectrum e;
  e.m = m;
  e.n = n;
  e.delta = delta;
  e.min_eigenvalue = att.min_eig;
  e.max_diagonal = att.max_diag;
  e.factors.resize(att.mats.size());
  for (std::size_t q = 0; q < att.mats.size(); ++q) {
    const Eigen2x2 eg = eig_h2x2(att.mats[q]);
    for (int c = 0; c < 2; ++c) {
      const double lam = eg.values[c];
      e.total_mass += std::abs(lam);
      if (lam < 0) e.clipped_mass += -lam;
      const double r = std::sqrt(std::max(lam, 0.0));
      for (int row = 0; row < 2; ++row) e.factors[q][row][c] = eg.vectors[row][c] * r;
    }
  }
  e.matrices = std::move(att.mats);
  e.approximate = e.clipped_fraction() > kApproximateFraction;
  return e;
}

std::vector<double> TrajectoryEnsemble::increments(std::size_t traj, int comp) const {
  auto z = path(traj, comp);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = z[i + 1] - z[i];
  return out;
}

unsigned thread_count() {
  if (const char* env = std::getenv("FBM2D_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(std::min(v, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

TrajectoryEnsemble empty_ensemble(const ModelParams& p, std::size_t n, std::size_t n_traj,
                                  double delta, std::uint64_t seed, SamplingMethod method) {
  if (n_traj < 1) throw std::invalid_argument("number of trajectories must be >= 1");
  TrajectoryEnsemble ens;
  ens.n = n;
  ens.n_traj = n_traj;
  ens.delta = delta;
  ens.params = p;
  ens.seed = seed;
  ens.method = method;
  ens.data.assign(n_traj * 2 * (n + 1), 0.0);
  return ens;
}

}  // namespace

TrajectoryEnsemble sample_paths(const EmbeddingSpectrum& emb, const ModelParams& p,
                                std::size_t n_traj, std::uint64_t seed) {
  p.validate();
  const std::size_t n = emb.n, M = emb.size();
  TrajectoryEnsemble ens = empty_ensemble(p, n, n_traj, emb.delta, seed, SamplingMethod::Circulant);
  ens.clipped_fraction = emb.clipped_fraction();
  ens.min_eigenvalue = emb.min_eigenvalue;
  ens.embedding_size = M;
  ens.approximate = emb.approximate;
  const double scale = 1.0 / std::sqrt(double(M));
  const std::size_t pairs = (n_traj + 1) / 2;

  parallel_for(pairs, [&](std::size_t pair) {
    GaussianRng rng(seed, pair);
    std::vector<cplx> y0(M), y1(M);
    for (std::size_t q = 0; q < M; ++q) {
      const cplx w0(rng(), rng());
      const cplx w1(rng(), rng());
      const auto& B = emb.factors[q];
      y0[q] = B[0][0] * w0 + B[0][1] * w1;
      y1[q] = B[1][0] * w0 + B[1][1] * w1;
    }
    dft_inplace(y0, DftDirection::Forward);
    dft_inplace(y1, DftDirection::Forward);
    const std::size_t traj[2] = {2 * pair, 2 * pair + 1};
    for (int part = 0; part < 2; ++part) {
      if (traj[part] >= n_traj) break;
      for (int comp = 0; comp < 2; ++comp) {
        const auto& y = comp == 0 ? y0 : y1;
        double* z = ens.data.data() + (traj[part] * 2 + comp) * (n + 1);
        double acc = 0.0;
        z[0] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          acc += scale * (part == 0 ? y[i].real() : y[i].imag());
          z[i + 1] = acc;
        }
      }
    }
  });
  return ens;
}

TrajectoryEnsemble sample_paths(const ModelParams& p, std::size_t n, std::size_t n_traj,
                                double delta, std::uint64_t seed) {
  return sample_paths(build_embedding(p, n, delta), p, n_traj, seed);
}

Eigen::MatrixXd increment_covariance_matrix(const ModelParams& p, std::size_t n, double delta) {
  const DerivedParams d = derive(p);
  const long N = static_cast<long>(n);
  Eigen::MatrixXd S(2 * N, 2 * N);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      std::vector<double> g(2 * N - 1);
      for (long h = -(N - 1); h <= N - 1; ++h)
        g[h + N - 1] = increment_cov(double(h) * delta, delta, j, k, d);
      for (long t = 0; t < N; ++t)
        for (long s = 0; s < N; ++s) S(j * N + t, k * N + s) = g[t - s + N - 1];
    }
  return S;
}

TrajectoryEnsemble sample_paths_dense(const ModelParams& p, std::size_t n, std::size_t n_traj,
                                      double delta, std::uint64_t seed) {
  p.validate();
  if (n < 1 || n > kDenseMaxN) throw std::invalid_argument("dense sampler supports 1 <= n <= 512");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const Eigen::MatrixXd S = increment_covariance_matrix(p, n, delta);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const double lmin = es.eigenvalues().minCoeff();
  const double scale = std::max(1.0, S.diagonal().maxCoeff());
  if (lmin < -1e-8 * scale)
    throw CovarianceNotPsd("increment covariance not positive semidefinite", lmin);
  const Eigen::MatrixXd L =
      es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  TrajectoryEnsemble ens = empty_ensemble(p, n, n_traj, delta, seed, SamplingMethod::DenseExact);
  ens.min_eigenvalue = lmin;
  ens.embedding_size = 2 * n;
  const long N = static_cast<long>(n);
  parallel_for(n_traj, [&](std::size_t tr) {
    GaussianRng rng(seed ^ 0xA5A5A5A5DEADBEEFull, tr);
    Eigen::VectorXd z(2 * N);
    for (long i = 0; i < 2 * N; ++i) z[i] = rng();
    const Eigen::VectorXd x = L * z;
    for (int comp = 0; comp < 2; ++comp) {
      double* out = ens.data.data() + (tr * 2 + comp) * (n + 1);
      double acc = 0.0;
      out[0] = 0.0;
      for (long i = 0; i < N; ++i) {
        acc += x[comp * N + i];
        out[i + 1] = acc;
      }
    }
  });
  return ens;
}

}  // namespace fbm2d
