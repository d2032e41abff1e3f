#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fbm2d/numerics.hpp"
#include "fbm2d/simulate.hpp"

namespace fbm2d {

struct CrossCovEstimate {
  std::vector<int> lags;  // in steps of delta
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t n_traj = 0;
};

// gamma-hat_jk(h) = < dZ_j(t + h) dZ_k(t) >, averaged over t then over trajectories.
CrossCovEstimate sample_cross_cov(const TrajectoryEnsemble& ens, int j, int k,
                                  std::span<const int> lags);

enum class PsdMode { IncrementPSD, ProcessPSD };

// (delta^2 / T) [sum_i e^{i f t_i} x_i] conj[sum_i e^{i f t_i} y_i], t_i = i delta, i < n
std::complex<double> cross_periodogram(std::span<const double> x, std::span<const double> y,
                                       double delta, double f);

std::vector<std::complex<double>> process_periodogram(const TrajectoryEnsemble& ens,
                                                      std::size_t traj, int j, int k,
                                                      std::span<const double> freqs);
std::vector<std::complex<double>> increment_periodogram(const TrajectoryEnsemble& ens,
                                                        std::size_t traj, int j, int k,
                                                        std::span<const double> freqs);

struct SpectralEstimate {
  std::vector<double> freqs;
  std::array<std::array<std::vector<std::complex<double>>, 2>, 2> values;
  // standard errors of the real and imaginary parts
  std::array<std::array<std::vector<double>, 2>, 2> se_re, se_im;
  std::size_t n_traj = 0;
  PsdMode mode = PsdMode::IncrementPSD;
};

// 2 pi k / (n delta), k = 1..n/2
std::vector<double> fourier_frequencies(std::size_t n, double delta);

// Ensemble-averaged periodogram matrix at arbitrary frequencies.
SpectralEstimate ensemble_periodogram(const TrajectoryEnsemble& ens, std::span<const double> freqs,
                                      PsdMode mode);
// Same at the Fourier frequencies, computed with the FFT.
SpectralEstimate ensemble_periodogram_fft(const TrajectoryEnsemble& ens, PsdMode mode);

// Pointwise complex mean with standard error across inputs.
SpectralEstimate ensemble_average(std::span<const SpectralEstimate> estimates);

struct BandValue {
  double lo = 0, hi = 0;
  std::size_t bins = 0;
  std::complex<double> mean;
  double se_re = 0, se_im = 0;
};

using SpectralMatrixSeries = std::array<std::array<std::vector<std::complex<double>>, 2>, 2>;

// Streaming mean/SE over trajectories, per frequency and per band. Band
// averages are formed per trajectory first so their errors reflect the
// trajectory-to-trajectory spread.
class SpectralAccumulator {
 public:
  SpectralAccumulator(std::vector<double> freqs, PsdMode mode,
                      std::vector<std::pair<double, double>> bands = {});
  void add(const SpectralMatrixSeries& values);
  SpectralEstimate result() const;
  std::vector<BandValue> bands(int j, int k) const;
  void merge(const SpectralAccumulator& other);
  std::size_t count() const { return count_; }

 private:
  struct Moments {
    std::vector<double> sr, sr2, si, si2;
    void resize(std::size_t n);
    void add(std::size_t i, std::complex<double> v);
    std::complex<double> mean(std::size_t i, std::size_t count) const;
    std::pair<double, double> se(std::size_t i, std::size_t count) const;
  };
  std::vector<double> freqs_;
  PsdMode mode_;
  std::vector<std::pair<double, double>> band_edges_;
  std::vector<std::vector<std::size_t>> band_bins_;
  std::size_t count_ = 0;
  std::array<std::array<Moments, 2>, 2> bins_, bands_;
};

SpectralAccumulator accumulate_periodogram_fft(const TrajectoryEnsemble& ens, PsdMode mode,
                                               std::vector<std::pair<double, double>> bands = {});

// Decade bands [nyquist / 10^(i+1), nyquist / 10^i), i < count.
std::vector<std::pair<double, double>> decade_bands(double nyquist, int count);

}  // namespace fbm2d
