#include "fbm2d/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "fbm2d/covariance.hpp"
#include "fbm2d/errors.hpp"
#include "fbm2d/numerics.hpp"

namespace fbm2d {

namespace {

constexpr double kTwoPi = 2 * kPi;

// Nodes/weights on [0, 1]: `uniform` equal panels, the first one graded
// geometrically towards 0 to absorb the x^a endpoint behaviour.
struct Rule1d {
  std::vector<double> x, w;
};

Rule1d graded_rule(int uniform, int order, int levels = 40, double ratio = 0.15) {
  const auto& gl = gauss_legendre(order);
  Rule1d r;
  auto panel = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int i = 0; i < order; ++i) {
      r.x.push_back(mid + half * gl.nodes[i]);
      r.w.push_back(half * gl.weights[i]);
    }
  };
  const double h = 1.0 / uniform;
  double hi = h;
  for (int l = 0; l < levels; ++l) {
    panel(hi * ratio, hi);
    hi *= ratio;
  }
  panel(0.0, hi);
  for (int p = 1; p < uniform; ++p) panel(p * h, (p + 1) * h);
  return r;
}

int oscillatory_panels(double omega) {
  if (omega < 1.0) return 1;
  return static_cast<int>(std::ceil(4.0 * omega / kPi));
}

void check_pair(int j, int k) {
  if (j < 0 || j > 1 || k < 0 || k > 1) throw std::out_of_range("component index must be 0 or 1");
}

// Euler-Maclaurin remainder of sum_{n > N} (2 pi n + shift)^{-p}, p = 1 + a.
double em_tail(int N, double shift, double a) {
  const double p = 1 + a;
  const double x = kTwoPi * N + shift;
  const double g = std::pow(x, -p);
  const double integral = std::pow(x, -a) / (kTwoPi * a);
  const double g1 = -p * kTwoPi * std::pow(x, -p - 1);
  const double g3 = -p * (p + 1) * (p + 2) * std::pow(kTwoPi, 3) * std::pow(x, -p - 3);
  return integral - g / 2 - g1 / 12 + g3 / 720;
}

void reject_log_regime(int j, int k, const DerivedParams& d) {
  if (d.log_branch(j, k) && d.eta12.value != 0.0)
    throw UnsupportedRegime("ensemble PSD not available for H1+H2=1 with log weight");
}

struct Brackets {
  double re, im;
};

Brackets derivative_free(double w, double a) {
  const double C = oscillatory_C(w, a), S = oscillatory_S(w, a);
  const double s = std::sin(w), c = std::cos(w);
  return {(-c - a) / w * S - (1 - s / w) * C + s / w,
          (-c - a) / w * C + (1 - s / w) * S + c / w};
}

std::complex<double> assemble(double T, int j, int k, const DerivedParams& d, Brackets b) {
  const double a = d.hsum(j, k);
  const double pref = std::pow(T, a + 1) * d.params.sigma(j) * d.params.sigma(k);
  return pref * std::complex<double>(d.rho(j, k) * b.re, d.eta(j, k) * b.im);
}

void check_omega(double omega, double T) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega_tilde must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("horizon T must be positive");
}

}  // namespace

std::vector<double> FreqGrid::omega_tilde() const {
  std::vector<double> out;
  out.reserve(freqs.size());
  for (double f : freqs) out.push_back(f * horizon_T);
  return out;
}

PsdValue increment_psd(double f, int j, int k, const DerivedParams& d, int n_terms,
                       TailMode mode) {
  check_pair(j, k);
  if (n_terms < 1) throw std::invalid_argument("n_terms must be >= 1");
  if (!(std::abs(f) <= kPi)) throw std::invalid_argument("frequency must lie in [-pi, pi]");
  const double a = d.hsum(j, k);
  const std::complex<double> c = d.cmat[j][k];
  if (f == 0.0) {
    if (a >= 1.0) throw SpectralDivergence("increment PSD diverges at f=0 for Hj+Hk >= 1");
    return {};
  }
  const double p = 1 + a;
  // positive-x terms carry c, negative-x terms conj(c)
  double pos = 0.0, neg = 0.0;
  if (f > 0) pos += std::pow(f, -p);
  else neg += std::pow(-f, -p);
  for (int n = n_terms; n >= 1; --n) {
    pos += std::pow(kTwoPi * n + f, -p);
    neg += std::pow(kTwoPi * n - f, -p);
  }
  const double tp = em_tail(n_terms, f, a);
  const double tn = em_tail(n_terms, -f, a);
  const double filt = 2 - 2 * std::cos(f);  // |1 - e^{-if}|^2
  PsdValue out;
  out.tail = filt * std::abs(tp * c + tn * std::conj(c));
  if (mode == TailMode::EulerMaclaurin) {
    pos += tp;
    neg += tn;
  }
  out.value = filt * (pos * c + neg * std::conj(c));
  return out;
}

std::complex<double> increment_psd_low_f(double f, int j, int k, const DerivedParams& d) {
  check_pair(j, k);
  if (f == 0.0) throw SpectralDivergence("low-frequency form undefined at f=0");
  const double e = 1 - d.hsum(j, k);
  const auto c = d.cmat[j][k];
  return f > 0 ? std::pow(f, e) * c : std::pow(-f, e) * std::conj(c);
}

std::complex<double> increment_psd_oracle(double f, int j, int k, const DerivedParams& d,
                                          int n_lags, LagWindow window) {
  check_pair(j, k);
  if (n_lags < 0) throw std::invalid_argument("n_lags must be >= 0");
  const int half = n_lags / 2;
  std::complex<double> acc = increment_cov(0.0, 1.0, j, k, d);
  for (int h = n_lags; h >= 1; --h) {
    const double gp = increment_cov(h, 1.0, j, k, d);
    const double gm = increment_cov(-h, 1.0, j, k, d);
    double wt = 1.0;
    if (window == LagWindow::Cesaro && h > half) wt = double(n_lags - h + 1) / (n_lags - half + 1);
    acc += wt * (std::polar(1.0, h * f) * gp + std::polar(1.0, -h * f) * gm);
  }
  return acc / kTwoPi;
}

ComplexSpectrum increment_psd(const FreqGrid& grid, const DerivedParams& d, int n_terms) {
  ComplexSpectrum s;
  s.freqs = grid.freqs;
  s.n_terms = n_terms;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      auto& v = s.values[j][k];
      v.reserve(grid.freqs.size());
      for (double f : grid.freqs) v.push_back(increment_psd(f, j, k, d, n_terms).value);
    }
  return s;
}

double oscillatory_C(double omega, double a) {
  if (!(a > 0.0 && a < 3.0)) throw std::domain_error("exponent outside (0,3)");
  if (omega < 0) throw std::domain_error("omega must be >= 0");
  if (omega == 0.0) return 1.0 / (a + 1);
  const Rule1d r = graded_rule(oscillatory_panels(omega), 12);
  double acc = 0;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    acc += r.w[i] * std::cos(omega * r.x[i]) * std::pow(r.x[i], a);
  return acc;
}

double oscillatory_S(double omega, double a) {
  if (!(a > 0.0 && a < 3.0)) throw std::domain_error("exponent outside (0,3)");
  if (omega < 0) throw std::domain_error("omega must be >= 0");
  if (omega == 0.0) return 0.0;
  const Rule1d r = graded_rule(oscillatory_panels(omega), 12);
  double acc = 0;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    acc += r.w[i] * std::sin(omega * r.x[i]) * std::pow(r.x[i], a);
  return acc;
}

std::complex<double> ensemble_psd(double omega, double T, int j, int k, const DerivedParams& d) {
  check_pair(j, k);
  check_omega(omega, T);
  reject_log_regime(j, k, d);
  return assemble(T, j, k, d, derivative_free(omega, d.hsum(j, k)));
}

std::complex<double> ensemble_psd_derivative_form(double omega, double T, int j, int k,
                                                  const DerivedParams& d) {
  check_pair(j, k);
  check_omega(omega, T);
  reject_log_regime(j, k, d);
  const double a = d.hsum(j, k);
  // dS/dw = int x^{a+1} cos(wx), dC/dw = -int x^{a+1} sin(wx)
  const double dS = oscillatory_C(omega, a + 1);
  const double dC = -oscillatory_S(omega, a + 1);
  const double C = oscillatory_C(omega, a), S = oscillatory_S(omega, a);
  const double s = std::sin(omega), c = std::cos(omega);
  const Brackets b{(1 - c) / omega * S - (1 - s / omega) * C + dS,
                   (1 - c) / omega * C + (1 - s / omega) * S + dC};
  return assemble(T, j, k, d, b);
}

std::complex<double> ensemble_psd_asymptote(double omega, double T, int j, int k,
                                            const DerivedParams& d) {
  check_pair(j, k);
  check_omega(omega, T);
  reject_log_regime(j, k, d);
  const double a = d.hsum(j, k);
  const double w = omega;
  const double s = std::sin(w), c = std::cos(w);
  const double A = std::tgamma(a + 1) * std::sin(kPi * a / 2);
  const double ct = std::cos(kPi * a / 2) / std::sin(kPi * a / 2);
  const double wa1 = std::pow(w, a + 1), wa2 = wa1 * w;
  const Brackets b{
      1 / (w * w) - a * s / (w * w * w) + A * (1 / wa1 - ((a + c) * ct + s) / wa2),
      A * ct / wa1 + A * ((a + c) - s * ct) / wa2 - a * (1 + c) / (w * w * w)};
  return assemble(T, j, k, d, b);
}

std::complex<double> ensemble_psd_oracle(double omega, double T, int j, int k,
                                         const DerivedParams& d, int n_grid) {
  check_pair(j, k);
  check_omega(omega, T);
  reject_log_regime(j, k, d);
  if (n_grid < 16) throw std::invalid_argument("n_grid must be >= 16");
  const double a = d.hsum(j, k);
  constexpr int order = 10;
  const int levels = 24;
  const int uniform = std::max(1, n_grid / order - levels - 1);
  const Rule1d r = graded_rule(uniform, order, levels, 0.2);
  auto wp = [&](double u) {
    return u == 0.0 ? 0.0 : weight_w(u, j, k, d) * std::pow(std::abs(u), a);
  };
  // Two triangles, parametrised by the gap u = |x - y| and t along the
  // shorter edge: lower (y < x): y = t (1 - u), x = y + u; upper mirrors it.
  double re = 0, im = 0;
  for (std::size_t iu = 0; iu < r.x.size(); ++iu) {
    const double u = r.x[iu];
    const double jac = r.w[iu] * (1 - u);
    const double cu = std::cos(omega * u), su = std::sin(omega * u);
    double lower = 0, upper = 0;
    for (std::size_t it = 0; it < r.x.size(); ++it) {
      const double y = r.x[it] * (1 - u);
      lower += r.w[it] * (wp(y + u) + wp(-y) - wp(u));
      upper += r.w[it] * (wp(y) + wp(-(y + u)) - wp(-u));
    }
    re += jac * cu * (lower + upper);
    im += jac * su * (lower - upper);
  }
  const double pref = std::pow(T, a + 1) * d.params.sigma(j) * d.params.sigma(k) / 2;
  return pref * std::complex<double>(re, im);
}

}  // namespace fbm2d
