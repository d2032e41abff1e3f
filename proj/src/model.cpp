#include "fbm2d/model.hpp"

#include <cmath>
#include <stdexcept>

#include "fbm2d/numerics.hpp"

namespace fbm2d {

namespace {

void check_hurst(double H) {
  if (!(H > 0.0 && H < 1.0)) throw std::domain_error("H out of range (0,1)");
}

bool near_one(double a) { return std::abs(a - 1.0) < kLogRegimeTol; }

// rho * sqrt(G(2H1+1) G(2H2+1) sin(H1 pi) sin(H2 pi)), shared by rho12/eta12
double kernel_prefactor(const ModelParams& p) {
  const double g = gamma_fn(2 * p.h1 + 1) * gamma_fn(2 * p.h2 + 1) *
                   std::sin(p.h1 * kPi) * std::sin(p.h2 * kPi);
  return p.rho * std::sqrt(g);
}

}  // namespace

std::string_view to_string(Variant v) {
  return v == Variant::Causal ? "causal" : "wb";
}

Variant parse_variant(std::string_view s) {
  if (s == "causal" || s == "c") return Variant::Causal;
  if (s == "wb" || s == "well-balanced" || s == "wellbalanced") return Variant::WellBalanced;
  throw std::invalid_argument("unknown variant '" + std::string(s) + "'");
}

void ModelParams::validate() const {
  if (!(h1 > 0.0 && h1 < 1.0) || !(h2 > 0.0 && h2 < 1.0))
    throw std::invalid_argument("H out of range (0,1)");
  if (!(std::abs(rho) <= 1.0)) throw std::invalid_argument("rho out of range [-1,1]");
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || !std::isfinite(sigma1) || !std::isfinite(sigma2))
    throw std::invalid_argument("sigma must be positive");
}

double normalization_constant_causal(double H) {
  check_hurst(H);
  return std::sqrt(gamma_fn(2 * H + 1) * std::sin(H * kPi)) / gamma_fn(H + 0.5);
}

double normalization_constant_wb(double H) {
  check_hurst(H);
  const double g = gamma_fn(H + 0.5);
  const double c = std::cos(kPi * (H - 0.5) / 2);
  const double sq = 2 * H * gamma_fn(2 * H) * std::sin(kPi * H) / (4 * g * g * c * c);
  return std::sqrt(sq);
}

double normalization_constant(double H, Variant v) {
  return v == Variant::Causal ? normalization_constant_causal(H)
                              : normalization_constant_wb(H);
}

double cross_correlation(const ModelParams& p) {
  p.validate();
  const double a = p.h1 + p.h2;
  const double r = kernel_prefactor(p) / (gamma_fn(a + 1) * std::sin(a * kPi / 2));
  if (p.variant == Variant::WellBalanced) return r;
  return r * std::cos((p.h2 - p.h1) * kPi / 2);
}

Asymmetry asymmetry(const ModelParams& p) {
  p.validate();
  if (p.variant == Variant::WellBalanced || p.h1 == p.h2) return {};
  const double a = p.h1 + p.h2;
  const double s = std::sin((p.h2 - p.h1) * kPi / 2);
  if (near_one(a)) {
    // limit of eta12 * (a - 1) as a -> 1; G(a+1) = 1 there
    return {-(2 / kPi) * kernel_prefactor(p) * s, Regime::Log};
  }
  return {kernel_prefactor(p) * s / (gamma_fn(a + 1) * std::cos(a * kPi / 2)), Regime::Power};
}

Cmat spectral_matrix(const ModelParams& p) {
  p.validate();
  Cmat c{};
  const double H[2] = {p.h1, p.h2};
  const double sg[2] = {p.sigma1, p.sigma2};
  double amp[2];
  if (p.variant == Variant::Causal) {
    for (int j = 0; j < 2; ++j)
      amp[j] = sg[j] * gamma_fn(H[j] + 0.5) * normalization_constant_causal(H[j]);
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const double r = j == k ? 1.0 : p.rho;
        c[j][k] = r * amp[j] * amp[k] / (2 * kPi) *
                  std::polar(1.0, -kPi / 2 * (H[j] - H[k]));
      }
    }
  } else {
    for (int j = 0; j < 2; ++j)
      amp[j] = sg[j] * std::cos(kPi * (H[j] - 0.5) / 2) * gamma_fn(H[j] + 0.5) *
               normalization_constant_wb(H[j]);
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const double r = j == k ? 1.0 : p.rho;
        c[j][k] = r * (2 / kPi) * amp[j] * amp[k];
      }
    }
  }
  return c;
}

double b1(double H) {
  if (std::abs(H - 0.5) < 1e-14) return kPi / 2;
  return gamma_fn(2 - 2 * H) * std::cos(H * kPi) / (2 * H * (1 - 2 * H));
}

double b2(double H) {
  return gamma_fn(2 - 2 * H) * std::sin(H * kPi) / (2 * H * (1 - 2 * H));
}

double noise_correlation_for(double h1, double h2, Variant v, double rho12) {
  ModelParams p{h1, h2, 1.0, 1.0, 1.0, v};
  const double unit = cross_correlation(p);
  const double rho = rho12 / unit;
  if (!(std::abs(rho) <= 1.0))
    throw std::invalid_argument("requested rho12 not reachable with |rho| <= 1");
  return rho;
}

DerivedParams derive(const ModelParams& p) {
  p.validate();
  DerivedParams d;
  d.params = p;
  d.a1 = normalization_constant(p.h1, p.variant);
  d.a2 = normalization_constant(p.h2, p.variant);
  d.rho12 = cross_correlation(p);
  d.eta12 = asymmetry(p);
  d.cmat = spectral_matrix(p);
  return d;
}

}  // namespace fbm2d
