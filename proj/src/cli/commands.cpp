#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "fbm2d/cli.hpp"
#include "fbm2d/covariance.hpp"
#include "fbm2d/errors.hpp"
#include "fbm2d/estimate.hpp"
#include "fbm2d/numerics.hpp"
#include "fbm2d/simulate.hpp"
#include "fbm2d/spectral.hpp"
#include "fbm2d/validation.hpp"

namespace fbm2d::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const int kJK[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};

std::string jk_name(int j, int k) { return std::to_string(j + 1) + std::to_string(k + 1); }

std::string num(double v) { return format_double(v); }

Table make_table(const RunConfig& c, std::string schema, std::vector<std::string> columns) {
  Table t;
  t.schema = std::move(schema);
  t.meta = base_meta(c);
  t.columns = std::move(columns);
  return t;
}

std::vector<double> freq_grid(const RunConfig& c) {
  if (!(c.freq_min > 0) || !(c.freq_max >= c.freq_min) || c.freq_points < 1)
    throw std::invalid_argument("frequency grid needs 0 < freq-min <= freq-max and points >= 1");
  return logspace(c.freq_min, c.freq_max, c.freq_points);
}

bool wants(const std::string& what, const char* item, std::initializer_list<const char*> allowed) {
  bool ok = what == "both";
  for (const char* a : allowed) ok = ok || what == a;
  if (!ok) throw std::invalid_argument("unsupported --what '" + what + "'");
  return what == "both" || what == item;
}

// Large-lag behaviour of the increment covariance, (s_j s_k / 2) a (a-1) w(h) |h|^{a-2} delta^2.
double increment_cov_asymptote(double h, double delta, int j, int k, const DerivedParams& d) {
  if (h == 0.0 || d.log_branch(j, k)) return kNaN;
  const double a = d.hsum(j, k);
  return 0.5 * d.params.sigma(j) * d.params.sigma(k) * a * (a - 1) * weight_w(h, j, k, d) *
         std::pow(std::abs(h), a - 2) * delta * delta;
}

std::vector<std::size_t> log_indices(std::size_t lo, std::size_t hi, std::size_t points) {
  std::set<std::size_t> s;
  for (double x : logspace(double(lo), double(hi), std::max<std::size_t>(points, 2)))
    s.insert(std::clamp<std::size_t>(std::size_t(std::llround(x)), lo, hi));
  return {s.begin(), s.end()};
}

double horizon(const RunConfig& c) { return c.horizon > 0 ? c.horizon : double(c.n) * c.delta; }

void add_embedding_meta(Table& t, const TrajectoryEnsemble& e) {
  t.meta.emplace_back("embedding_size", std::to_string(e.embedding_size));
  t.meta.emplace_back("min_eigenvalue", num(e.min_eigenvalue));
  t.meta.emplace_back("clipped_fraction", num(e.clipped_fraction));
  t.meta.emplace_back("approximate", e.approximate ? "true" : "false");
}

// Exact ensemble PSD or NaN where the log regime excludes it.
std::complex<double> ensemble_or_nan(double w, double T, int j, int k, const DerivedParams& d) {
  try {
    return ensemble_psd(w, T, j, k, d);
  } catch (const UnsupportedRegime&) {
    return {kNaN, kNaN};
  }
}

std::complex<double> asymptote_or_nan(double w, double T, int j, int k, const DerivedParams& d) {
  try {
    return ensemble_psd_asymptote(w, T, j, k, d);
  } catch (const UnsupportedRegime&) {
    return {kNaN, kNaN};
  }
}

// Expected increment periodogram at step delta: 2 pi delta^{a+1} S^Delta(f delta).
std::complex<double> increment_theory(double f, double delta, int j, int k,
                                      const DerivedParams& d, int n_terms) {
  const double a = d.hsum(j, k);
  return 2 * kPi * std::pow(delta, a + 1) * increment_psd(f * delta, j, k, d, n_terms).value;
}

}  // namespace

std::vector<Table> cmd_derive(const RunConfig& c) {
  c.params.validate();
  Table t = make_table(c, "fbm2d.derive/1",
                       {"variant", "a1", "a2", "rho12", "eta12", "eta_regime", "c11", "c12_re",
                        "c12_im", "c22"});
  for (Variant v : {Variant::Causal, Variant::WellBalanced}) {
    ModelParams p = c.params;
    p.variant = v;
    const DerivedParams d = derive(p);
    t.rows.push_back({std::string(to_string(v)), d.a1, d.a2, d.rho12, d.eta12.value,
                      std::string(d.eta12.regime == Regime::Log ? "log" : "power"),
                      d.cmat[0][0].real(), d.cmat[0][1].real(), d.cmat[0][1].imag(),
                      d.cmat[1][1].real()});
  }
  return {t};
}

std::vector<Table> cmd_cov(const RunConfig& c) {
  const DerivedParams d = derive(c.params);
  const LagGrid grid = LagGrid::integers(c.lag_max, c.delta);
  const bool inc = wants(c.what, "increment", {"process", "increment"});
  const bool proc = wants(c.what, "process", {"process", "increment"});
  const double base = c.lag_max * c.delta;
  Table t = make_table(c, "fbm2d.cov/1", {"quantity", "h", "jk", "re", "im", "asym_re", "asym_im"});
  t.meta.emplace_back("process_base_s", num(base));
  for (auto [j, k] : kJK) {
    if (inc) {
      for (double i : grid.lags) {
        const double h = i * c.delta;
        const double asym = increment_cov_asymptote(h, c.delta, j, k, d);
        t.rows.push_back({std::string("increment_cov"), h, jk_name(j, k),
                          increment_cov(h, c.delta, j, k, d), 0.0, asym,
                          std::isnan(asym) ? kNaN : 0.0});
      }
    }
    if (proc) {
      for (double i : grid.lags) {
        const double h = i * c.delta;
        t.rows.push_back({std::string("process_cov"), h, jk_name(j, k),
                          process_cov(base + h, base, j, k, d), 0.0, kNaN, kNaN});
      }
    }
  }
  return {t};
}

std::vector<Table> cmd_psd(const RunConfig& c) {
  const DerivedParams d = derive(c.params);
  const auto freqs = freq_grid(c);
  const bool inc = wants(c.what, "increment", {"increment", "ensemble"});
  const bool ens = wants(c.what, "ensemble", {"increment", "ensemble"});
  const double T = horizon(c);
  Table t = make_table(c, "fbm2d.psd/1",
                       {"quantity", "f", "omega_tilde", "jk", "re", "im", "asym_re", "asym_im"});
  t.meta.emplace_back("horizon_T", num(T));
  t.meta.emplace_back("n_terms", std::to_string(c.n_terms));
  t.meta.emplace_back("increment_units", "unit step, f in (0, pi]");
  for (auto [j, k] : kJK) {
    if (inc) {
      for (double f : freqs) {
        if (f > kPi) continue;
        const auto v = increment_psd(f, j, k, d, c.n_terms).value;
        const auto a = increment_psd_low_f(f, j, k, d);
        t.rows.push_back({std::string("increment_psd"), f, kNaN, jk_name(j, k), v.real(),
                          v.imag(), a.real(), a.imag()});
      }
    }
    if (ens) {
      for (double f : freqs) {
        const double w = f * T;
        const auto v = ensemble_psd(w, T, j, k, d);
        const auto a = ensemble_psd_asymptote(w, T, j, k, d);
        t.rows.push_back({std::string("ensemble_psd"), f, w, jk_name(j, k), v.real(), v.imag(),
                          a.real(), a.imag()});
      }
    }
  }
  return {t};
}

std::vector<std::pair<std::string, Table>> cmd_simulate(const RunConfig& c) {
  const DerivedParams d = derive(c.params);
  const auto emb = build_embedding(c.params, c.n, c.delta);
  const auto ens = sample_paths(emb, c.params, c.num_traj, c.seed);
  const std::size_t N = ens.n_traj;
  std::vector<std::pair<std::string, Table>> out;

  Table s = make_table(c, "fbm2d.simulate.summary/1",
                       {"t", "mean1", "se_mean1", "mean2", "se_mean2", "var1", "se_var1",
                        "theory_var1", "var2", "se_var2", "theory_var2", "cov12", "se_cov12",
                        "theory_cov12"});
  add_embedding_meta(s, ens);
  auto mean_se = [&](auto&& f) {
    double m = 0, m2 = 0;
    for (std::size_t tr = 0; tr < N; ++tr) {
      const double v = f(tr);
      m += v;
      m2 += v * v;
    }
    m /= N;
    const double var = N > 1 ? std::max(0.0, (m2 - N * m * m) / (N - 1)) : 0.0;
    return std::pair{m, std::sqrt(var / N)};
  };
  for (std::size_t i : log_indices(1, c.n, c.freq_points)) {
    const double t = double(i) * c.delta;
    auto [m1, sm1] = mean_se([&](std::size_t tr) { return ens.at(tr, 0, i); });
    auto [m2, sm2] = mean_se([&](std::size_t tr) { return ens.at(tr, 1, i); });
    auto [v1, sv1] = mean_se([&](std::size_t tr) { return ens.at(tr, 0, i) * ens.at(tr, 0, i); });
    auto [v2, sv2] = mean_se([&](std::size_t tr) { return ens.at(tr, 1, i) * ens.at(tr, 1, i); });
    auto [c12, sc12] = mean_se([&](std::size_t tr) { return ens.at(tr, 0, i) * ens.at(tr, 1, i); });
    s.rows.push_back({t, m1, sm1, m2, sm2, v1, sv1, process_cov(t, t, 0, 0, d), v2, sv2,
                      process_cov(t, t, 1, 1, d), c12, sc12, process_cov(t, t, 0, 1, d)});
  }
  out.emplace_back("summary", std::move(s));

  if (c.estimate_cov) {
    Table t = make_table(c, "fbm2d.simulate.cov/1", {"h", "jk", "estimate", "se", "theory"});
    std::vector<int> lags;
    const int lim = std::min<int>(c.lag_max, int(c.n) - 1);
    for (int h = -lim; h <= lim; ++h) lags.push_back(h);
    for (auto [j, k] : kJK) {
      const auto est = sample_cross_cov(ens, j, k, lags);
      for (std::size_t l = 0; l < lags.size(); ++l)
        t.rows.push_back({lags[l] * c.delta, jk_name(j, k), est.mean[l], est.stderr_[l],
                          increment_cov(lags[l] * c.delta, c.delta, j, k, d)});
    }
    out.emplace_back("cov", std::move(t));
  }

  if (c.estimate_psd) {
    Table t = make_table(c, "fbm2d.simulate.psd/1",
                         {"quantity", "f", "jk", "re", "im", "se_re", "se_im", "theory_re",
                          "theory_im"});
    const double T = double(c.n) * c.delta;
    t.meta.emplace_back("horizon_T", num(T));
    const auto bins = log_indices(1, c.n / 2, c.freq_points);
    for (PsdMode mode : {PsdMode::IncrementPSD, PsdMode::ProcessPSD}) {
      const auto est = ensemble_periodogram_fft(ens, mode);
      const std::string q = mode == PsdMode::IncrementPSD ? "increment" : "process";
      for (auto [j, k] : kJK)
        for (std::size_t b : bins) {
          const double f = est.freqs[b - 1];
          const auto v = est.values[j][k][b - 1];
          const auto th = mode == PsdMode::IncrementPSD
                              ? increment_theory(f, c.delta, j, k, d, c.n_terms)
                              : ensemble_or_nan(f * T, T, j, k, d);
          t.rows.push_back({q, f, jk_name(j, k), v.real(), v.imag(), est.se_re[j][k][b - 1],
                            est.se_im[j][k][b - 1], th.real(), th.imag()});
        }
    }
    out.emplace_back("psd", std::move(t));
  }

  if (c.raw_paths > 0) {
    Table t = make_table(c, "fbm2d.simulate.paths/1", {"traj", "i", "t", "z1", "z2"});
    for (std::size_t tr = 0; tr < std::min(c.raw_paths, N); ++tr)
      for (std::size_t i = 0; i <= c.n; ++i)
        t.rows.push_back({(long long)tr, (long long)i, double(i) * c.delta, ens.at(tr, 0, i),
                          ens.at(tr, 1, i)});
    out.emplace_back("paths", std::move(t));
  }
  return out;
}

bool cmd_validate(const RunConfig& c, std::ostream& report, Table& summary) {
  ValidationOptions o;
  if (c.seed_given) o.seed = c.seed;
  if (c.num_traj_given) o.mc_traj = c.num_traj;
  if (c.n_given) o.mc_n = c.n;
  o.corrupt_constant = c.corrupt_constant;
  const auto& names = c.only.empty() ? acceptance_check_names() : c.only;
  summary = make_table(c, "fbm2d.validate/1",
                       {"check", "status", "metric", "failures", "notes"});
  summary.meta.emplace_back("mc_traj", std::to_string(o.mc_traj));
  summary.meta.emplace_back("mc_n", std::to_string(o.mc_n));
  bool all = true;
  for (const auto& name : names) {
    const CheckResult r = run_check(name, o);
    all = all && r.pass;
    report << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.metric << "  ("
           << format_double(std::round(r.seconds * 100) / 100) << " s)\n";
    std::string fails, notes;
    for (const auto& f : r.failures) {
      report << "  - " << f << '\n';
      fails += (fails.empty() ? "" : "; ") + f;
    }
    for (const auto& n : r.notes) {
      report << "  . " << n << '\n';
      notes += (notes.empty() ? "" : "; ") + n;
    }
    summary.rows.push_back({r.name, std::string(r.pass ? "pass" : "fail"), r.metric, fails, notes});
  }
  report << (all ? "all checks passed" : "some checks failed") << '\n';
  return all;
}

std::vector<std::pair<std::string, Table>> cmd_figures_data(const RunConfig& c) {
  struct P {
    double h1, h2;
  };
  const P equal[] = {{0.2, 0.2}, {0.5, 0.5}, {0.7, 0.7}};
  const P unequal[] = {{0.2, 0.5}, {0.2, 0.7}, {0.5, 0.7}};
  std::vector<std::pair<std::string, Table>> out;
  auto params = [&](P p, Variant v, double rho12) {
    ModelParams m{p.h1, p.h2, 0.0, c.params.sigma1, c.params.sigma2, v};
    m.rho = rho12 == 0.0 ? 0.0 : noise_correlation_for(p.h1, p.h2, v, rho12);
    return m;
  };

  Table f1 = make_table(c, "fbm2d.fig.rho/1",
                        {"variant", "h1", "h2", "rho", "rho12", "eta12", "eta_regime"});
  for (const auto* set : {equal, unequal})
    for (int q = 0; q < 3; ++q)
      for (Variant v : {Variant::Causal, Variant::WellBalanced})
        for (int i = 0; i <= 40; ++i) {
          const double rho = -1.0 + 0.05 * i;
          const DerivedParams d = derive({set[q].h1, set[q].h2, rho, 1, 1, v});
          f1.rows.push_back({std::string(to_string(v)), set[q].h1, set[q].h2, rho, d.rho12,
                             d.eta12.value,
                             std::string(d.eta12.regime == Regime::Log ? "log" : "power")});
        }
  out.emplace_back("fig1_rho", std::move(f1));

  const std::size_t n_paths = std::min<std::size_t>(c.n, 1024);
  for (int fig = 0; fig < 2; ++fig) {
    const P* set = fig == 0 ? equal : unequal;
    Table t = make_table(c, "fbm2d.fig.paths/1",
                         {"h1", "h2", "rho12", "traj", "i", "t", "z1", "z2"});
    std::uint64_t seed = c.seed + 100 * fig;
    for (int q = 0; q < 3; ++q)
      for (double rho12 : {0.0, 0.5}) {
        const ModelParams p = params(set[q], Variant::Causal, rho12);
        const auto e = sample_paths(p, n_paths, 4, c.delta, seed++);
        for (std::size_t tr = 0; tr < e.n_traj; ++tr)
          for (std::size_t i = 0; i <= e.n; ++i)
            t.rows.push_back({set[q].h1, set[q].h2, rho12, (long long)tr, (long long)i,
                              double(i) * c.delta, e.at(tr, 0, i), e.at(tr, 1, i)});
      }
    out.emplace_back(fig == 0 ? "fig2_paths_equal_h" : "fig3_paths_unequal_h", std::move(t));
  }

  std::vector<int> lags;
  for (int h = -c.lag_max; h <= c.lag_max; ++h) lags.push_back(h);
  const double T = double(c.n) * c.delta;
  const auto bins = log_indices(1, c.n / 2, c.freq_points);
  Table cov[2], proc = make_table(c, "fbm2d.fig.process_psd/1",
                                  {"h1", "h2", "variant", "kind", "f", "omega_tilde", "re", "im",
                                   "se_re", "se_im"});
  Table inc = make_table(c, "fbm2d.fig.increment_psd/1",
                         {"h1", "h2", "variant", "kind", "f", "re", "im", "se_re", "se_im"});
  proc.meta.emplace_back("horizon_T", num(T));
  std::uint64_t seed = c.seed + 1000;
  for (int fig = 0; fig < 2; ++fig) {
    cov[fig] = make_table(c, "fbm2d.fig.cov/1",
                          {"h1", "h2", "variant", "kind", "h", "value", "se"});
    const P* set = fig == 0 ? equal : unequal;
    for (int q = 0; q < 3; ++q)
      for (Variant v : {Variant::Causal, Variant::WellBalanced}) {
        const P pr = set[q];
        const ModelParams p = params(pr, v, 0.5);
        const DerivedParams d = derive(p);
        const std::string vn(to_string(v));
        for (int i = -10 * c.lag_max; i <= 10 * c.lag_max; ++i) {
          const double h = 0.1 * i * c.delta;
          cov[fig].rows.push_back({pr.h1, pr.h2, vn, std::string("analytic"), h,
                                   increment_cov(h, c.delta, 0, 1, d), 0.0});
        }
        const auto e = sample_paths(p, c.n, c.num_traj, c.delta, seed++);
        const auto est = sample_cross_cov(e, 0, 1, lags);
        for (std::size_t l = 0; l < lags.size(); ++l)
          cov[fig].rows.push_back({pr.h1, pr.h2, vn, std::string("estimate"), lags[l] * c.delta,
                                   est.mean[l], est.stderr_[l]});

        const auto pe = ensemble_periodogram_fft(e, PsdMode::ProcessPSD);
        const auto ie = ensemble_periodogram_fft(e, PsdMode::IncrementPSD);
        for (std::size_t b : bins) {
          const double f = pe.freqs[b - 1];
          const auto v1 = pe.values[0][1][b - 1];
          proc.rows.push_back({pr.h1, pr.h2, vn, std::string("estimate"), f, f * T, v1.real(),
                               v1.imag(), pe.se_re[0][1][b - 1], pe.se_im[0][1][b - 1]});
          const auto ex = ensemble_or_nan(f * T, T, 0, 1, d);
          proc.rows.push_back({pr.h1, pr.h2, vn, std::string("exact"), f, f * T, ex.real(),
                               ex.imag(), 0.0, 0.0});
          const auto as = asymptote_or_nan(f * T, T, 0, 1, d);
          proc.rows.push_back({pr.h1, pr.h2, vn, std::string("asymptote"), f, f * T, as.real(),
                               as.imag(), 0.0, 0.0});

          const auto v2 = ie.values[0][1][b - 1];
          inc.rows.push_back({pr.h1, pr.h2, vn, std::string("estimate"), f, v2.real(), v2.imag(),
                              ie.se_re[0][1][b - 1], ie.se_im[0][1][b - 1]});
          const auto th = increment_theory(f, c.delta, 0, 1, d, c.n_terms);
          inc.rows.push_back({pr.h1, pr.h2, vn, std::string("exact"), f, th.real(), th.imag(),
                              0.0, 0.0});
          const double a = d.hsum(0, 1);
          const auto lo = 2 * kPi * std::pow(c.delta, a + 1) *
                          increment_psd_low_f(f * c.delta, 0, 1, d);
          inc.rows.push_back({pr.h1, pr.h2, vn, std::string("asymptote"), f, lo.real(),
                              lo.imag(), 0.0, 0.0});
        }
      }
  }
  out.emplace_back("fig4_cov_equal_h", std::move(cov[0]));
  out.emplace_back("fig5_cov_unequal_h", std::move(cov[1]));
  out.emplace_back("fig6_process_psd", std::move(proc));
  out.emplace_back("fig7_increment_psd", std::move(inc));
  return out;
}

namespace {

const char* extension(Format f) { return f == Format::CSV ? ".csv" : ".json"; }

void write_file(const std::string& path, const Table& t, Format f) {
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot open output file '" + path + "'");
  write_table(os, t, f);
  if (!os) throw std::invalid_argument("failed writing '" + path + "'");
}

void emit(const RunConfig& c, const std::vector<Table>& tables, std::ostream& out) {
  if (c.out.empty()) {
    for (const auto& t : tables) write_table(out, t, c.format);
    return;
  }
  std::ofstream os(c.out);
  if (!os) throw std::invalid_argument("cannot open output file '" + c.out + "'");
  for (const auto& t : tables) write_table(os, t, c.format);
}

void emit_named(const RunConfig& c, const std::vector<std::pair<std::string, Table>>& tables,
                std::ostream& out, bool directory) {
  if (c.out.empty()) {
    if (directory) throw std::invalid_argument("figures-data needs --out DIR");
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (i) out << '\n';
      write_table(out, tables[i].second, c.format);
    }
    return;
  }
  if (directory) {
    std::error_code ec;
    std::filesystem::create_directories(c.out, ec);
    if (ec) throw std::invalid_argument("cannot create directory '" + c.out + "'");
  }
  for (const auto& [name, t] : tables) {
    const std::string path = directory ? (std::filesystem::path(c.out) / name).string()
                                       : c.out + "_" + name;
    write_file(path + extension(c.format), t, c.format);
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    if (!parse_args(argc, argv, c, out)) return 0;
    c.params.validate();
    if (!(c.delta > 0) || !std::isfinite(c.delta)) throw std::invalid_argument("delta must be positive");
    if (c.command == "derive") {
      emit(c, cmd_derive(c), out);
    } else if (c.command == "cov") {
      emit(c, cmd_cov(c), out);
    } else if (c.command == "psd") {
      emit(c, cmd_psd(c), out);
    } else if (c.command == "simulate") {
      emit_named(c, cmd_simulate(c), out, false);
    } else if (c.command == "validate") {
      Table summary;
      const bool ok = cmd_validate(c, out, summary);
      if (!c.out.empty()) write_file(c.out, summary, c.format);
      return ok ? 0 : 1;
    } else if (c.command == "figures-data") {
      emit_named(c, cmd_figures_data(c), out, true);
    }
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const EmbeddingError& e) {
    err << "numerical failure: " << e.what() << " [min_eigenvalue=" << e.min_eigenvalue()
        << ", embedding_size=" << e.size() << "]\n";
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace fbm2d::cli
