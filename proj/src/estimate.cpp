#include "fbm2d/estimate.hpp"

#include <cmath>
#include <stdexcept>

#include "fbm2d/parallel.hpp"

namespace fbm2d {

namespace {

void check_pair(int j, int k) {
  if (j < 0 || j > 1 || k < 0 || k > 1) throw std::out_of_range("component index must be 0 or 1");
}

std::vector<double> positions_left(const TrajectoryEnsemble& ens, std::size_t traj, int comp) {
  auto z = ens.path(traj, comp);
  return {z.begin(), z.begin() + ens.n};
}

std::vector<double> series(const TrajectoryEnsemble& ens, std::size_t traj, int comp,
                           PsdMode mode) {
  return mode == PsdMode::IncrementPSD ? ens.increments(traj, comp)
                                       : positions_left(ens, traj, comp);
}

// Fixed chunking keeps the reduction order independent of the worker count.
constexpr std::size_t kChunk = 64;

}  // namespace

CrossCovEstimate sample_cross_cov(const TrajectoryEnsemble& ens, int j, int k,
                                  std::span<const int> lags) {
  check_pair(j, k);
  const long n = static_cast<long>(ens.n);
  for (int h : lags)
    if (std::abs(long(h)) > n - 1) throw std::out_of_range("lag outside +-(n-1)");
  const std::size_t L = lags.size(), N = ens.n_traj;
  std::vector<double> per(N * L);
  parallel_for(N, [&](std::size_t tr) {
    const auto dj = ens.increments(tr, j);
    const auto dk = j == k ? dj : ens.increments(tr, k);
    for (std::size_t l = 0; l < L; ++l) {
      const long h = lags[l];
      const long t0 = std::max(0L, -h), t1 = n - std::max(0L, h);
      double acc = 0;
      for (long t = t0; t < t1; ++t) acc += dj[t + h] * dk[t];
      per[tr * L + l] = acc / double(t1 - t0);
    }
  });
  CrossCovEstimate out;
  out.lags.assign(lags.begin(), lags.end());
  out.n_traj = N;
  out.mean.assign(L, 0.0);
  out.stderr_.assign(L, 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    double s = 0, s2 = 0;
    for (std::size_t tr = 0; tr < N; ++tr) s += per[tr * L + l];
    const double m = s / N;
    for (std::size_t tr = 0; tr < N; ++tr) s2 += (per[tr * L + l] - m) * (per[tr * L + l] - m);
    out.mean[l] = m;
    out.stderr_[l] = N > 1 ? std::sqrt(s2 / (N - 1) / N) : 0.0;
  }
  return out;
}

std::complex<double> cross_periodogram(std::span<const double> x, std::span<const double> y,
                                       double delta, double f) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("series length mismatch");
  std::complex<double> sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto e = std::polar(1.0, f * double(i) * delta);
    sx += e * x[i];
    sy += e * y[i];
  }
  const double T = double(x.size()) * delta;
  return delta * delta / T * sx * std::conj(sy);
}

namespace {

std::vector<std::complex<double>> periodogram_at(const TrajectoryEnsemble& ens, std::size_t traj,
                                                 int j, int k, std::span<const double> freqs,
                                                 PsdMode mode) {
  check_pair(j, k);
  if (traj >= ens.n_traj) throw std::out_of_range("trajectory index");
  const auto x = series(ens, traj, j, mode);
  const auto y = series(ens, traj, k, mode);
  std::vector<std::complex<double>> out;
  out.reserve(freqs.size());
  for (double f : freqs) out.push_back(cross_periodogram(x, y, ens.delta, f));
  return out;
}

}  // namespace

std::vector<std::complex<double>> process_periodogram(const TrajectoryEnsemble& ens,
                                                      std::size_t traj, int j, int k,
                                                      std::span<const double> freqs) {
  return periodogram_at(ens, traj, j, k, freqs, PsdMode::ProcessPSD);
}

std::vector<std::complex<double>> increment_periodogram(const TrajectoryEnsemble& ens,
                                                        std::size_t traj, int j, int k,
                                                        std::span<const double> freqs) {
  return periodogram_at(ens, traj, j, k, freqs, PsdMode::IncrementPSD);
}

std::vector<double> fourier_frequencies(std::size_t n, double delta) {
  std::vector<double> f(n / 2);
  for (std::size_t q = 1; q <= n / 2; ++q) f[q - 1] = 2 * kPi * double(q) / (double(n) * delta);
  return f;
}

std::vector<std::pair<double, double>> decade_bands(double nyquist, int count) {
  std::vector<std::pair<double, double>> b;
  double hi = nyquist * (1 + 1e-12);
  for (int i = 0; i < count; ++i) {
    const double lo = nyquist / std::pow(10.0, i + 1);
    b.emplace_back(lo, hi);
    hi = lo;
  }
  return b;
}

void SpectralAccumulator::Moments::resize(std::size_t n) {
  sr.assign(n, 0);
  sr2.assign(n, 0);
  si.assign(n, 0);
  si2.assign(n, 0);
}

void SpectralAccumulator::Moments::add(std::size_t i, std::complex<double> v) {
  sr[i] += v.real();
  sr2[i] += v.real() * v.real();
  si[i] += v.imag();
  si2[i] += v.imag() * v.imag();
}

std::complex<double> SpectralAccumulator::Moments::mean(std::size_t i, std::size_t count) const {
  return {sr[i] / count, si[i] / count};
}

std::pair<double, double> SpectralAccumulator::Moments::se(std::size_t i,
                                                           std::size_t count) const {
  if (count < 2) return {0.0, 0.0};
  const double n = double(count);
  auto one = [&](double s, double s2) {
    const double var = std::max(0.0, (s2 - s * s / n) / (n - 1));
    return std::sqrt(var / n);
  };
  return {one(sr[i], sr2[i]), one(si[i], si2[i])};
}

SpectralAccumulator::SpectralAccumulator(std::vector<double> freqs, PsdMode mode,
                                         std::vector<std::pair<double, double>> bands)
    : freqs_(std::move(freqs)), mode_(mode), band_edges_(std::move(bands)) {
  for (auto [lo, hi] : band_edges_) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < freqs_.size(); ++i)
      if (freqs_[i] >= lo && freqs_[i] < hi) idx.push_back(i);
    band_bins_.push_back(std::move(idx));
  }
  for (auto& row : bins_)
    for (auto& m : row) m.resize(freqs_.size());
  for (auto& row : bands_)
    for (auto& m : row) m.resize(band_edges_.size());
}

void SpectralAccumulator::add(const SpectralMatrixSeries& values) {
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const auto& v = values[j][k];
      if (v.size() != freqs_.size()) throw std::invalid_argument("spectral series length mismatch");
      for (std::size_t i = 0; i < v.size(); ++i) bins_[j][k].add(i, v[i]);
      for (std::size_t b = 0; b < band_bins_.size(); ++b) {
        if (band_bins_[b].empty()) continue;
        std::complex<double> s = 0;
        for (auto i : band_bins_[b]) s += v[i];
        bands_[j][k].add(b, s / double(band_bins_[b].size()));
      }
    }
  ++count_;
}

void SpectralAccumulator::merge(const SpectralAccumulator& o) {
  if (o.freqs_ != freqs_ || o.band_edges_ != band_edges_ || o.mode_ != mode_)
    throw std::invalid_argument("accumulator axis mismatch");
  auto add_all = [](Moments& a, const Moments& b) {
    for (std::size_t i = 0; i < a.sr.size(); ++i) {
      a.sr[i] += b.sr[i];
      a.sr2[i] += b.sr2[i];
      a.si[i] += b.si[i];
      a.si2[i] += b.si2[i];
    }
  };
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      add_all(bins_[j][k], o.bins_[j][k]);
      add_all(bands_[j][k], o.bands_[j][k]);
    }
  count_ += o.count_;
}

SpectralEstimate SpectralAccumulator::result() const {
  SpectralEstimate e;
  e.freqs = freqs_;
  e.n_traj = count_;
  e.mode = mode_;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const std::size_t nf = freqs_.size();
      e.values[j][k].resize(nf);
      e.se_re[j][k].resize(nf);
      e.se_im[j][k].resize(nf);
      for (std::size_t i = 0; i < nf; ++i) {
        e.values[j][k][i] = count_ ? bins_[j][k].mean(i, count_) : 0.0;
        std::tie(e.se_re[j][k][i], e.se_im[j][k][i]) = bins_[j][k].se(i, count_);
      }
    }
  return e;
}

std::vector<BandValue> SpectralAccumulator::bands(int j, int k) const {
  check_pair(j, k);
  std::vector<BandValue> out;
  for (std::size_t b = 0; b < band_edges_.size(); ++b) {
    BandValue v;
    v.lo = band_edges_[b].first;
    v.hi = band_edges_[b].second;
    v.bins = band_bins_[b].size();
    if (count_ && v.bins) {
      v.mean = bands_[j][k].mean(b, count_);
      std::tie(v.se_re, v.se_im) = bands_[j][k].se(b, count_);
    }
    out.push_back(v);
  }
  return out;
}

SpectralAccumulator accumulate_periodogram_fft(const TrajectoryEnsemble& ens, PsdMode mode,
                                               std::vector<std::pair<double, double>> bands) {
  const std::size_t n = ens.n;
  if (!is_power_of_two(n)) throw std::invalid_argument("FFT periodogram needs n a power of two");
  const auto freqs = fourier_frequencies(n, ens.delta);
  const std::size_t chunks = (ens.n_traj + kChunk - 1) / kChunk;
  std::vector<SpectralAccumulator> parts(chunks, SpectralAccumulator(freqs, mode, bands));
  parallel_for(chunks, [&](std::size_t c) {
    std::array<std::vector<cplx>, 2> X;
    SpectralMatrixSeries v;
    for (auto& row : v)
      for (auto& s : row) s.resize(n / 2);
    const double scale = ens.delta / double(n);  // delta^2 / T
    for (std::size_t tr = c * kChunk; tr < std::min(ens.n_traj, (c + 1) * kChunk); ++tr) {
      for (int comp = 0; comp < 2; ++comp) {
        const auto x = series(ens, tr, comp, mode);
        X[comp].assign(x.begin(), x.end());
        dft_inplace(X[comp], DftDirection::Inverse);  // (1/n) sum x_i e^{+2 pi i i q / n}
      }
      const double nn = double(n) * double(n);
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (std::size_t q = 1; q <= n / 2; ++q)
            v[j][k][q - 1] = scale * nn * X[j][q] * std::conj(X[k][q]);
      parts[c].add(v);
    }
  });
  SpectralAccumulator total(freqs, mode, std::move(bands));
  for (const auto& p : parts) total.merge(p);
  return total;
}

SpectralEstimate ensemble_periodogram_fft(const TrajectoryEnsemble& ens, PsdMode mode) {
  return accumulate_periodogram_fft(ens, mode).result();
}

SpectralEstimate ensemble_periodogram(const TrajectoryEnsemble& ens, std::span<const double> freqs,
                                      PsdMode mode) {
  std::vector<double> fv(freqs.begin(), freqs.end());
  const std::size_t chunks = (ens.n_traj + kChunk - 1) / kChunk;
  std::vector<SpectralAccumulator> parts(chunks, SpectralAccumulator(fv, mode));
  parallel_for(chunks, [&](std::size_t c) {
    SpectralMatrixSeries v;
    for (std::size_t tr = c * kChunk; tr < std::min(ens.n_traj, (c + 1) * kChunk); ++tr) {
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) v[j][k] = periodogram_at(ens, tr, j, k, fv, mode);
      parts[c].add(v);
    }
  });
  SpectralAccumulator total(fv, mode);
  for (const auto& p : parts) total.merge(p);
  return total.result();
}

SpectralEstimate ensemble_average(std::span<const SpectralEstimate> estimates) {
  if (estimates.empty()) throw std::invalid_argument("ensemble_average: no inputs");
  const auto& first = estimates.front();
  SpectralAccumulator acc(first.freqs, first.mode);
  std::size_t total = 0;
  for (const auto& e : estimates) {
    if (e.freqs != first.freqs || e.mode != first.mode)
      throw std::invalid_argument("ensemble_average: axis mismatch");
    acc.add(e.values);
    total += e.n_traj;
  }
  SpectralEstimate out = acc.result();
  out.n_traj = total;
  return out;
}

}  // namespace fbm2d
