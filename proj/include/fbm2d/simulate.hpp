#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fbm2d/model.hpp"
#include "fbm2d/numerics.hpp"

namespace fbm2d {

enum class SamplingMethod { Circulant, DenseExact };

struct EmbeddingSpectrum {
  std::vector<Hermitian2x2> matrices;  // length 2m
  // per-frequency factor B with B B^* = matrices[k] (negative eigenvalues clipped)
  std::vector<std::array<std::array<cplx, 2>, 2>> factors;
  double min_eigenvalue = 0.0;
  double max_diagonal = 0.0;
  double clipped_mass = 0.0;
  double total_mass = 0.0;
  std::size_t m = 0;
  std::size_t n = 0;
  double delta = 1.0;
  bool approximate = false;

  std::size_t size() const { return 2 * m; }
  double clipped_fraction() const { return total_mass > 0 ? clipped_mass / total_mass : 0.0; }
};

inline constexpr std::size_t kMaxEmbeddingFactor = 64;  // 2m <= 64 n
inline constexpr double kClipThreshold = 1e-9;          // relative to max diagonal
inline constexpr double kApproximateFraction = 1e-6;

EmbeddingSpectrum build_embedding(const ModelParams& p, std::size_t n, double delta = 1.0);

struct TrajectoryEnsemble {
  // positions, layout ((traj * 2 + comp) * (n + 1) + i), Z(0) = 0
  std::vector<double> data;
  std::size_t n_traj = 0;
  std::size_t n = 0;
  double delta = 1.0;
  ModelParams params;
  std::uint64_t seed = 0;
  SamplingMethod method = SamplingMethod::Circulant;
  double clipped_fraction = 0.0;
  double min_eigenvalue = 0.0;
  std::size_t embedding_size = 0;
  bool approximate = false;

  double at(std::size_t traj, int comp, std::size_t i) const {
    return data[(traj * 2 + comp) * (n + 1) + i];
  }
  std::span<const double> path(std::size_t traj, int comp) const {
    return {data.data() + (traj * 2 + comp) * (n + 1), n + 1};
  }
  std::vector<double> increments(std::size_t traj, int comp) const;
};

// Worker count: FBM2D_THREADS if set, else hardware concurrency (see parallel.hpp).
TrajectoryEnsemble sample_paths(const ModelParams& p, std::size_t n, std::size_t n_traj,
                                double delta, std::uint64_t seed);
TrajectoryEnsemble sample_paths(const EmbeddingSpectrum& emb, const ModelParams& p,
                                std::size_t n_traj, std::uint64_t seed);

inline constexpr std::size_t kDenseMaxN = 512;

// 2n x 2n covariance of (dZ_1(0..n-1), dZ_2(0..n-1)).
Eigen::MatrixXd increment_covariance_matrix(const ModelParams& p, std::size_t n, double delta);

TrajectoryEnsemble sample_paths_dense(const ModelParams& p, std::size_t n, std::size_t n_traj,
                                      double delta, std::uint64_t seed);

}  // namespace fbm2d
