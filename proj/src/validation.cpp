#include "fbm2d/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>

#include "fbm2d/covariance.hpp"
#include "fbm2d/estimate.hpp"
#include "fbm2d/model.hpp"
#include "fbm2d/numerics.hpp"
#include "fbm2d/simulate.hpp"
#include "fbm2d/spectral.hpp"

namespace fbm2d {

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Pair {
  double h1, h2;
};

const Pair kSixPairs[] = {{0.2, 0.2}, {0.5, 0.5}, {0.7, 0.7}, {0.2, 0.5}, {0.2, 0.7}, {0.5, 0.7}};
const Pair kSpectralPairs[] = {{0.2, 0.2}, {0.2, 0.7}, {0.7, 0.7}};
const Variant kVariants[] = {Variant::Causal, Variant::WellBalanced};
const int kEntries[3][2] = {{0, 0}, {0, 1}, {1, 1}};

// 40-digit reference values of a_H and a*_H (offline mpmath evaluation).
struct ConstRef {
  double H, causal, wb;
};
const ConstRef kConstRefs[] = {
    {0.1, 0.35768577342233513605, 0.22106196526729691117},
    {0.2, 0.55634286500719697975, 0.31219909725912423655},
    {0.3, 0.7302829340799229657, 0.38393245909546183699},
    {0.4, 0.8807256833637268803, 0.44585201989579028827},
    {0.5, 1.0, 0.5},
    {0.6, 1.0760051841318071863, 0.54470886205027670931},
    {0.7, 1.0918091308839125879, 0.57399802860142406661},
    {0.8, 1.0214099061575616825, 0.57317756853014087235},
    {0.9, 0.81122064814335251477, 0.50136193292831113519},
};

ModelParams params_for(Pair p, Variant v, double rho) { return {p.h1, p.h2, rho, 1.0, 1.0, v}; }

// Noise correlation giving rho12 = 0.5.
ModelParams params_rho12_half(Pair p, Variant v) {
  return params_for(p, v, noise_correlation_for(p.h1, p.h2, v, 0.5));
}

std::string label(Pair p, Variant v) {
  return fmt("(%.1f,%.1f,%s)", p.h1, p.h2, std::string(to_string(v)).c_str());
}

void embedding_note(CheckResult& r, const TrajectoryEnsemble& e, const std::string& what) {
  r.notes.push_back(fmt("%s: embedding size %zu, min eigenvalue %.3e, clipped fraction %.3e%s",
                        what.c_str(), e.embedding_size, e.min_eigenvalue, e.clipped_fraction,
                        e.approximate ? " (approximate)" : ""));
}

void check_constants(CheckResult& r, const ValidationOptions& o) {
  const double bump = 1.0 + o.corrupt_constant;
  const double c5 = normalization_constant_causal(0.5) * bump;
  const double w5 = normalization_constant_wb(0.5);
  if (std::abs(c5 - 1.0) >= 1e-12) r.failures.push_back(fmt("a_H(0.5) = %.15g, expected 1", c5));
  if (std::abs(w5 - 1.0) >= 1e-12) r.failures.push_back(fmt("a*_H(0.5) = %.15g, expected 1", w5));
  double worst = 0;
  for (const auto& ref : kConstRefs) {
    const double ec = std::abs(normalization_constant_causal(ref.H) * bump - ref.causal);
    const double ew = std::abs(normalization_constant_wb(ref.H) - ref.wb);
    worst = std::max({worst, ec, ew});
    if (ec >= 1e-10) r.failures.push_back(fmt("a_H(%.1f) off by %.3e", ref.H, ec));
    if (ew >= 1e-10) r.failures.push_back(fmt("a*_H(%.1f) off by %.3e", ref.H, ew));
  }
  r.metric = fmt("a_H(0.5)=%.15g a*_H(0.5)=%.15g max_oracle_err=%.2e", c5, w5, worst);
}

void check_rho12(CheckResult& r, const ValidationOptions&) {
  double worst_eq = 0;
  for (double H = 0.1; H < 0.95; H += 0.1)
    for (double rho : {-1.0, -0.5, 0.3, 0.8, 1.0})
      for (Variant v : kVariants) {
        const double e = std::abs(cross_correlation({H, H, rho, 1, 1, v}) - rho);
        worst_eq = std::max(worst_eq, e);
      }
  if (worst_eq >= 1e-12) r.failures.push_back(fmt("H1=H2 rho12 != rho by %.3e", worst_eq));

  const double r27 = cross_correlation({0.2, 0.7, 1.0, 1, 1, Variant::Causal});
  if (std::abs(std::abs(r27) - 0.5) > 0.02)
    r.failures.push_back(fmt("causal (0.2,0.7,1): |rho12| = %.6f, expected 0.5 +- 0.02", r27));

  double worst_id = 0;
  for (int a = 1; a <= 9; ++a)
    for (int b = 1; b <= 9; ++b) {
      if (a + b == 10) continue;
      const double h1 = a / 10.0, h2 = b / 10.0;
      const ModelParams p{h1, h2, 0.7, 1, 1, Variant::Causal};
      const double rho12 = cross_correlation(p);
      const double eta = asymmetry(p).value;
      const double id = -rho12 * std::tan(kPi * (h1 - h2) / 2) * std::tan(kPi * (h1 + h2) / 2);
      const double err = std::abs(eta - id) / std::max(1.0, std::abs(eta));
      worst_id = std::max(worst_id, err);
    }
  if (worst_id >= 1e-10) r.failures.push_back(fmt("eta-rho identity off by %.3e", worst_id));
  r.metric = fmt("H1=H2 err=%.2e |rho12(0.2,0.7,1)|=%.6f identity_err=%.2e", worst_eq,
                 std::abs(r27), worst_id);
}

void check_cov_oracle(CheckResult& r, const ValidationOptions&) {
  double worst = 0;
  for (Pair pr : kSixPairs)
    for (Variant v : kVariants)
      for (double rho : {0.0, 0.5}) {
        const DerivedParams d = derive(params_for(pr, v, rho));
        for (double delta : {0.5, 1.0, 2.0})
          for (int h = -20; h <= 20; ++h)
            for (int j = 0; j < 2; ++j)
              for (int k = 0; k < 2; ++k) {
                const double e = std::abs(increment_cov(h, delta, j, k, d) -
                                          increment_cov_oracle(h, delta, j, k, d));
                if (e > worst) worst = e;
                if (e >= 1e-10)
                  r.failures.push_back(fmt("%s rho=%.1f delta=%.1f h=%d jk=%d%d err=%.3e",
                                           label(pr, v).c_str(), rho, delta, h, j + 1, k + 1, e));
              }
      }
  r.metric = fmt("max_abs_err=%.2e", worst);
}

void check_one_sided(CheckResult& r, const ValidationOptions&) {
  const DerivedParams d = derive({0.2, 0.5, 0.5, 1, 1, Variant::Causal});
  double worst = 0, left = 0;
  for (int h = 1; h <= 64; ++h) {
    worst = std::max(worst, std::abs(increment_cov(h, 1.0, 0, 1, d)));
    left = std::max(left, std::abs(increment_cov(-h, 1.0, 0, 1, d)));
  }
  if (worst >= 1e-12) r.failures.push_back(fmt("max |gamma12(h>=1)| = %.3e", worst));
  r.metric = fmt("max|gamma12(h>=1)|=%.2e max|gamma12(h<=-1)|=%.3f", worst, left);
}

void check_wiener_khinchin(CheckResult& r, const ValidationOptions&) {
  double worst = 0, worst_sharp = 0;
  for (Pair pr : kSpectralPairs)
    for (Variant v : kVariants) {
      const DerivedParams d = derive(params_for(pr, v, 0.5));
      for (double f : {0.5, 1.0, 2.0})
        for (auto [j, k] : kEntries) {
          const auto t = increment_psd(f, j, k, d, 10000).value;
          const auto o = increment_psd_oracle(f, j, k, d, 1 << 14, LagWindow::Cesaro);
          const auto os = increment_psd_oracle(f, j, k, d, 1 << 14, LagWindow::Sharp);
          const double rel = std::abs(t - o) / std::abs(o);
          worst = std::max(worst, rel);
          worst_sharp = std::max(worst_sharp, std::abs(t - os) / std::abs(os));
          if (rel >= 1e-3)
            r.failures.push_back(fmt("%s f=%.1f jk=%d%d rel=%.3e", label(pr, v).c_str(), f, j + 1,
                                     k + 1, rel));
        }
    }
  r.metric = fmt("max_rel_err=%.2e (sharp cutoff %.2e)", worst, worst_sharp);
}

void check_ensemble_quadrature(CheckResult& r, const ValidationOptions&) {
  double worst = 0;
  for (Pair pr : kSpectralPairs)
    for (Variant v : kVariants) {
      if (v == Variant::WellBalanced && pr.h1 == pr.h2) continue;  // same process as causal
      const DerivedParams d = derive(params_for(pr, v, 0.5));
      for (double w : {1.0, 5.0, 20.0, 50.0})
        for (auto [j, k] : kEntries) {
          if (pr.h1 == pr.h2 && j == 1 && k == 1) continue;
          const auto a = ensemble_psd(w, 1.0, j, k, d);
          const auto o = ensemble_psd_oracle(w, 1.0, j, k, d, 2000);
          const double rel = std::abs(a - o) / std::abs(o);
          worst = std::max(worst, rel);
          if (rel >= 1e-6)
            r.failures.push_back(fmt("%s w=%.0f jk=%d%d rel=%.3e", label(pr, v).c_str(), w, j + 1,
                                     k + 1, rel));
        }
    }
  r.metric = fmt("max_rel_err=%.2e", worst);
}

void check_analytic_slopes(CheckResult& r, const ValidationOptions&) {
  const auto omegas = logspace(1e3, 1e4, 60);
  const auto freqs = logspace(1e-3, 1e-2, 30);
  double worst_ens = 0, worst_inc = 0;
  for (Pair pr : kSixPairs)
    for (Variant v : kVariants) {
      const DerivedParams d = derive(params_for(pr, v, 0.5));
      const double a = pr.h1 + pr.h2;
      if (std::abs(a - 1) > 1e-9) {
        std::vector<double> ys;
        for (double w : omegas) ys.push_back(ensemble_psd(w, 1.0, 0, 1, d).real());
        const double s = loglog_slope(omegas, ys, 1e3, 1e4).slope;
        const double target = a > 1 ? -2.0 : -(a + 1);
        worst_ens = std::max(worst_ens, std::abs(s - target));
        if (std::abs(s - target) > 0.05)
          r.failures.push_back(fmt("%s Re<S12> slope %.4f, expected %.2f", label(pr, v).c_str(), s,
                                   target));
      }
      std::vector<double> ys;
      for (double f : freqs) ys.push_back(increment_psd(f, 0, 1, d, 10000).value.real());
      const double s = loglog_slope(freqs, ys, 1e-3, 1e-2).slope;
      worst_inc = std::max(worst_inc, std::abs(s - (1 - a)));
      if (std::abs(s - (1 - a)) > 0.05)
        r.failures.push_back(fmt("%s Re<S^D12> slope %.4f, expected %.2f", label(pr, v).c_str(), s,
                                 1 - a));
    }
  r.metric = fmt("max_dev_ensemble=%.4f max_dev_increment=%.4f", worst_ens, worst_inc);
}

// |a - b| <= 4 sqrt(sa^2 + sb^2) per lag and entry
void check_sampler_vs_dense(CheckResult& r, const ValidationOptions& o) {
  const ModelParams p{0.2, 0.7, 0.5, 1, 1, Variant::Causal};
  const auto circ = sample_paths(p, o.dense_n, o.dense_traj, 1.0, o.seed);
  const auto dense = sample_paths_dense(p, o.dense_n, o.dense_traj, 1.0, o.seed + 1);
  embedding_note(r, circ, "circulant");
  std::vector<int> lags;
  for (int h = -10; h <= 10; ++h) lags.push_back(h);
  double worst = 0;
  for (auto [j, k] : kEntries) {
    const auto a = sample_cross_cov(circ, j, k, lags);
    const auto b = sample_cross_cov(dense, j, k, lags);
    for (std::size_t l = 0; l < lags.size(); ++l) {
      const double z = std::abs(a.mean[l] - b.mean[l]) /
                       std::hypot(a.stderr_[l], b.stderr_[l]);
      worst = std::max(worst, z);
      if (z > 4)
        r.failures.push_back(fmt("jk=%d%d h=%d: %.5f vs %.5f (z=%.2f)", j + 1, k + 1, lags[l],
                                 a.mean[l], b.mean[l], z));
    }
  }
  r.metric = fmt("max_z=%.2f", worst);
}

void check_mc_covariance(CheckResult& r, const ValidationOptions& o) {
  std::vector<int> lags;
  for (int h = -20; h <= 20; ++h) lags.push_back(h);
  double worst = 0, sum_z2 = 0;
  std::size_t count = 0;
  std::uint64_t seed = o.seed;
  for (Pair pr : kSixPairs)
    for (Variant v : kVariants) {
      const ModelParams p = params_rho12_half(pr, v);
      const DerivedParams d = derive(p);
      const auto ens = sample_paths(p, o.mc_n, o.mc_traj, 1.0, seed++);
      embedding_note(r, ens, label(pr, v));
      for (auto [j, k] : kEntries) {
        const auto est = sample_cross_cov(ens, j, k, lags);
        for (std::size_t l = 0; l < lags.size(); ++l) {
          const double th = increment_cov(lags[l], 1.0, j, k, d);
          const double se = est.stderr_[l];
          const double z = se > 0 ? std::abs(est.mean[l] - th) / se
                                  : (std::abs(est.mean[l] - th) > 1e-12 ? INFINITY : 0.0);
          worst = std::max(worst, z);
          sum_z2 += z * z;
          ++count;
          if (z > 4)
            r.failures.push_back(fmt("%s jk=%d%d h=%d: %.5f vs %.5f (z=%.2f)",
                                     label(pr, v).c_str(), j + 1, k + 1, lags[l], est.mean[l], th,
                                     z));
        }
      }
    }
  r.metric = fmt("max_z=%.2f rms_z=%.3f over %zu lags", worst, std::sqrt(sum_z2 / count), count);
}

void check_mc_psd(CheckResult& r, const ValidationOptions& o) {
  const auto bands = decade_bands(kPi, 3);
  double worst_rel = 0, worst_slope = 0, worst_wb_z = 0, min_causal_z = INFINITY;
  std::uint64_t seed = o.seed + 1000;
  for (Pair pr : kSixPairs)
    for (Variant v : kVariants) {
      const ModelParams p = params_rho12_half(pr, v);
      const DerivedParams d = derive(p);
      const auto ens = sample_paths(p, o.mc_n, o.mc_traj, 1.0, seed++);
      embedding_note(r, ens, label(pr, v));
      const SpectralAccumulator acc = accumulate_periodogram_fft(ens, PsdMode::IncrementPSD, bands);
      const SpectralEstimate est = acc.result();
      std::vector<std::complex<double>> theory(est.freqs.size());
      for (std::size_t i = 0; i < est.freqs.size(); ++i)
        theory[i] = 2 * kPi * increment_psd(est.freqs[i], 0, 1, d, 2000).value;

      const auto bv = acc.bands(0, 1);
      for (const auto& b : bv) {
        std::complex<double> tb = 0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < est.freqs.size(); ++i)
          if (est.freqs[i] >= b.lo && est.freqs[i] < b.hi) tb += theory[i], ++cnt;
        tb /= double(cnt);
        const double rel = std::abs(b.mean - tb) / std::abs(tb);
        worst_rel = std::max(worst_rel, rel);
        if (rel > 0.05)
          r.failures.push_back(fmt("%s band [%.2g,%.2g): rel %.4f", label(pr, v).c_str(), b.lo,
                                   b.hi, rel));
        const double z = std::abs(b.mean.imag()) / b.se_im;
        if (v == Variant::WellBalanced) {
          worst_wb_z = std::max(worst_wb_z, z);
          if (z > 4)
            r.failures.push_back(fmt("%s band [%.2g,%.2g): Im %.4g is %.2f SE from 0",
                                     label(pr, v).c_str(), b.lo, b.hi, b.mean.imag(), z));
        } else if (pr.h1 == 0.2 && pr.h2 == 0.7) {
          min_causal_z = std::min(min_causal_z, z);
          if (z < 4)
            r.failures.push_back(fmt("%s band [%.2g,%.2g): Im %.4g only %.2f SE from 0",
                                     label(pr, v).c_str(), b.lo, b.hi, b.mean.imag(), z));
        }
      }

      std::vector<double> re(est.freqs.size());
      for (std::size_t i = 0; i < re.size(); ++i) re[i] = std::abs(est.values[0][1][i].real());
      const double lo = kPi / 1000, hi = kPi / 10;
      const double s = loglog_slope(est.freqs, re, lo, hi).slope;
      const double target = 1 - pr.h1 - pr.h2;
      worst_slope = std::max(worst_slope, std::abs(s - target));
      if (std::abs(s - target) > 0.1)
        r.failures.push_back(fmt("%s low-f slope %.4f, expected %.2f", label(pr, v).c_str(), s,
                                 target));
    }
  r.metric = fmt("max_band_rel=%.4f max_slope_dev=%.4f wb_max_im_z=%.2f causal(0.2,0.7)_min_im_z=%.1f",
                 worst_rel, worst_slope, worst_wb_z, min_causal_z);
}

using CheckFn = std::function<void(CheckResult&, const ValidationOptions&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> r = {
      {"constants", check_constants},
      {"rho12_identity", check_rho12},
      {"increment_cov_oracle", check_cov_oracle},
      {"one_sided_vanishing", check_one_sided},
      {"wiener_khinchin", check_wiener_khinchin},
      {"ensemble_psd_quadrature", check_ensemble_quadrature},
      {"asymptotic_slopes", check_analytic_slopes},
      {"sampler_vs_dense", check_sampler_vs_dense},
      {"mc_covariance", check_mc_covariance},
      {"mc_psd", check_mc_psd},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& acceptance_check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

CheckResult run_check(const std::string& name, const ValidationOptions& opts) {
  for (const auto& [n, fn] : registry()) {
    if (n != name) continue;
    CheckResult r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(r, opts);
    } catch (const std::exception& e) {
      r.failures.push_back(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = r.failures.empty();
    return r;
  }
  throw std::invalid_argument("unknown check '" + name + "'");
}

}  // namespace fbm2d
