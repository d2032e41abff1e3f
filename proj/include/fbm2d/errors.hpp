#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fbm2d {

// Domain errors use std::invalid_argument / std::domain_error directly.
// Everything below maps to the "numerical failure" exit code in the CLI.

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmbeddingError : public NumericalError {
 public:
  EmbeddingError(const std::string& what, double min_eigenvalue, std::size_t size)
      : NumericalError(what), min_eigenvalue_(min_eigenvalue), size_(size) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  std::size_t size() const noexcept { return size_; }

 private:
  double min_eigenvalue_;
  std::size_t size_;
};

class CovarianceNotPsd : public NumericalError {
 public:
  CovarianceNotPsd(const std::string& what, double min_eigenvalue)
      : NumericalError(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

// H_j + H_k = 1 with a non-vanishing log weight.
class UnsupportedRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Spectrum requested at f = 0 where it diverges.
class SpectralDivergence : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace fbm2d
