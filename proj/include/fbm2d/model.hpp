#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>

namespace fbm2d {

enum class Variant { Causal, WellBalanced };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);  // "causal" | "wb"

// Component indices are 0 and 1 throughout the library.
struct ModelParams {
  double h1 = 0.5;
  double h2 = 0.5;
  double rho = 0.0;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  Variant variant = Variant::Causal;

  void validate() const;  // throws std::invalid_argument
  double hurst(int j) const { return j == 0 ? h1 : h2; }
  double sigma(int j) const { return j == 0 ? sigma1 : sigma2; }
};

inline constexpr double kLogRegimeTol = 1e-12;

enum class Regime { Power, Log };

// eta12 for the causal variant. In the log regime (H1+H2 = 1, H1 != H2) the
// coefficient multiplies sign(u) log|u| instead of sign(u).
struct Asymmetry {
  double value = 0.0;
  Regime regime = Regime::Power;
};

using Cmat = std::array<std::array<std::complex<double>, 2>, 2>;

double normalization_constant_causal(double H);
double normalization_constant_wb(double H);
double normalization_constant(double H, Variant v);

double cross_correlation(const ModelParams& p);
Asymmetry asymmetry(const ModelParams& p);
Cmat spectral_matrix(const ModelParams& p);

double b1(double H);
double b2(double H);

// Noise correlation rho that produces the requested rho12 for given Hurst
// exponents and variant (rho12 is linear in rho).
double noise_correlation_for(double h1, double h2, Variant v, double rho12);

struct DerivedParams {
  ModelParams params;
  double a1 = 1.0;
  double a2 = 1.0;
  double rho12 = 0.0;
  Asymmetry eta12;
  Cmat cmat{};

  double hsum(int j, int k) const { return params.hurst(j) + params.hurst(k); }
  double rho(int j, int k) const { return j == k ? 1.0 : rho12; }
  // Signed coefficient of the asymmetric term: eta_21 = -eta_12.
  double eta(int j, int k) const {
    if (j == k) return 0.0;
    return j == 0 ? eta12.value : -eta12.value;
  }
  bool log_branch(int j, int k) const {
    return j != k && eta12.regime == Regime::Log;
  }
};

DerivedParams derive(const ModelParams& p);

}  // namespace fbm2d
