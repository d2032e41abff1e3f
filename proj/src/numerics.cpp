#include "fbm2d/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fbm2d {

double gamma_fn(double x) {
  if (!(x > 0.0 && x <= 5.0)) throw std::domain_error("gamma_fn: argument outside (0,5]");
  return std::tgamma(x);
}

Eigen2x2 eig_h2x2(const Hermitian2x2& m) {
  Eigen2x2 out;
  const double mean = 0.5 * (m.a11 + m.a22);
  const double half = 0.5 * (m.a11 - m.a22);
  const double off = std::abs(m.a12);
  const double r = std::hypot(half, off);
  out.values = {mean + r, mean - r};

  if (off == 0.0) {
    if (m.a11 >= m.a22) {
      out.vectors = {{{cplx(1), cplx(0)}, {cplx(0), cplx(1)}}};
    } else {
      out.vectors = {{{cplx(0), cplx(1)}, {cplx(1), cplx(0)}}};
    }
    return out;
  }

  // v1 = (cos t, e^{-i phi} sin t), v2 = (-sin t, e^{-i phi} cos t), tan 2t = |a12| / half
  const double theta = 0.5 * std::atan2(off, half);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const cplx e = std::polar(1.0, -std::arg(m.a12));
  out.vectors[0][0] = c;
  out.vectors[1][0] = e * s;
  out.vectors[0][1] = -s;
  out.vectors[1][1] = e * c;
  return out;
}

SlopeFit loglog_slope(std::span<const double> xs, std::span<const double> ys,
                      double x_lo, double x_hi) {
  if (xs.size() != ys.size()) throw std::invalid_argument("loglog_slope: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < x_lo || xs[i] > x_hi) continue;
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw std::domain_error("loglog_slope: nonpositive data");
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    pts.emplace_back(lx, ly);
    sx += lx;
    sy += ly;
  }
  const std::size_t n = pts.size();
  if (n < 8) throw std::invalid_argument("loglog_slope: need at least 8 points");
  const double mx = sx / n, my = sy / n;
  for (auto [lx, ly] : pts) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
  }
  SlopeFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (auto [lx, ly] : pts) {
    const double r = ly - fit.intercept - fit.slope * lx;
    rss += r * r;
  }
  fit.stderr_slope = std::sqrt(rss / (n - 2) / sxx);
  return fit;
}

std::vector<double> logspace(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi >= lo) || points == 0)
    throw std::invalid_argument("logspace: need 0 < lo <= hi");
  std::vector<double> v(points);
  if (points == 1) {
    v[0] = lo;
    return v;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < points; ++i)
    v[i] = std::exp(a + (b - a) * double(i) / double(points - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

GaussianRng::GaussianRng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed ^ (stream * 0xD1B54A32D192ED03ull);
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(x)),
                    static_cast<std::uint32_t>(splitmix64(x)),
                    static_cast<std::uint32_t>(splitmix64(x)),
                    static_cast<std::uint32_t>(splitmix64(x)),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double GaussianRng::uniform_open() {
  // 53 random bits, shifted off zero
  return (double(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianRng::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform_open() - 1.0;
    v = 2.0 * uniform_open() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

void GaussianRng::fill(std::span<double> out) {
  for (auto& x : out) x = (*this)();
}

std::vector<double> gaussian_rng(std::uint64_t seed, std::size_t count) {
  GaussianRng rng(seed);
  std::vector<double> v(count);
  rng.fill(v);
  return v;
}

}  // namespace fbm2d
