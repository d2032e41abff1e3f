#pragma once

#include <array>
#include <complex>
#include <vector>

#include "fbm2d/model.hpp"

namespace fbm2d {

struct FreqGrid {
  std::vector<double> freqs;  // angular frequency, rad per unit time
  double horizon_T = 1.0;

  std::vector<double> omega_tilde() const;
};

struct ComplexSpectrum {
  std::vector<double> freqs;
  // values[j][k][i] at freqs[i]
  std::array<std::array<std::vector<std::complex<double>>, 2>, 2> values;
  int n_terms = 0;
};

enum class TailMode { EulerMaclaurin, None };

struct PsdValue {
  std::complex<double> value;
  // size of the series remainder beyond n_terms (added back in EulerMaclaurin mode)
  double tail = 0.0;
};

// Increment spectral density at unit step, f in [-pi, pi] \ {0}.
PsdValue increment_psd(double f, int j, int k, const DerivedParams& d, int n_terms = 10000,
                       TailMode mode = TailMode::EulerMaclaurin);

// Leading low-frequency behaviour c_jk f^{1 - Hj - Hk}.
std::complex<double> increment_psd_low_f(double f, int j, int k, const DerivedParams& d);

// (1/2pi) sum_{|h| <= n_lags} e^{ihf} gamma^Delta_jk(h), delta = 1.
// Cesaro averages the partial sums with cutoffs n_lags/2..n_lags, which damps
// the oscillating remainder of the sharp cutoff (~ n_lags^{Hj+Hk-2}).
enum class LagWindow { Sharp, Cesaro };
std::complex<double> increment_psd_oracle(double f, int j, int k, const DerivedParams& d,
                                          int n_lags, LagWindow window = LagWindow::Sharp);

ComplexSpectrum increment_psd(const FreqGrid& grid, const DerivedParams& d, int n_terms = 10000);

// int_0^1 cos(w x) x^a dx and int_0^1 sin(w x) x^a dx
double oscillatory_C(double omega, double a);
double oscillatory_S(double omega, double a);

// Ensemble-averaged finite-horizon spectrum <S_jk>(omega_tilde = f T, T).
std::complex<double> ensemble_psd(double omega, double T, int j, int k, const DerivedParams& d);
// The form with dC/dw, dS/dw, each evaluated as its own oscillatory integral.
std::complex<double> ensemble_psd_derivative_form(double omega, double T, int j, int k,
                                                  const DerivedParams& d);
std::complex<double> ensemble_psd_asymptote(double omega, double T, int j, int k,
                                            const DerivedParams& d);
// Tensor-product quadrature of the defining double integral, n_grid nodes per axis.
std::complex<double> ensemble_psd_oracle(double omega, double T, int j, int k,
                                         const DerivedParams& d, int n_grid = 2000);

}  // namespace fbm2d
