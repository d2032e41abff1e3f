#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

#include "fbm2d/numerics.hpp"

namespace fbm2d {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (n, direction) and never freed.
class PlanCache {
 public:
  fftw_plan get(std::size_t n, DftDirection dir) {
    std::lock_guard<std::mutex> lock(mu_);
    const auto key = std::make_pair(n, dir == DftDirection::Forward);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    fftw_complex* buf = fftw_alloc_complex(n);
    const int sign = dir == DftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void dft_inplace(std::span<cplx> values, DftDirection dir) {
  const std::size_t n = values.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("dft: length must be a power of two");
  auto* p = reinterpret_cast<fftw_complex*>(values.data());
  fftw_execute_dft(cache().get(n, dir), p, p);
  if (dir == DftDirection::Inverse) {
    const double s = 1.0 / double(n);
    for (auto& v : values) v *= s;
  }
}

std::vector<cplx> dft(std::span<const cplx> values, DftDirection dir) {
  std::vector<cplx> out(values.begin(), values.end());
  dft_inplace(out, dir);
  return out;
}

}  // namespace fbm2d
