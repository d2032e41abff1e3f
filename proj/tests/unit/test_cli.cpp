#include <catch2/catch_amalgamated.hpp>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "fbm2d/cli.hpp"
#include "fbm2d/spectral.hpp"

using namespace fbm2d;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fbm2d");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct Csv {
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string get(std::size_t r, const std::string& col) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == col) return rows.at(r).at(i);
    throw std::out_of_range(col);
  }
  double num(std::size_t r, const std::string& col) const { return std::stod(get(r, col)); }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

Csv parse_csv(const std::string& text) {
  Csv c;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto pos = line.find(": ");
      c.meta[line.substr(2, pos - 2)] = line.substr(pos + 2);
    } else if (c.columns.empty()) {
      c.columns = split(line, ',');
    } else if (!line.empty()) {
      c.rows.push_back(split(line, ','));
    }
  }
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("fbm2d_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("derive reports both variants") {
  const auto r = run_cli({"derive", "--h1", "0.5", "--h2", "0.5", "--rho", "0.3"});
  REQUIRE(r.code == 0);
  const auto c = parse_csv(r.out);
  CHECK(c.meta.at("schema") == "fbm2d.derive/1");
  CHECK(c.meta.at("rho") == "0.3");
  CHECK(c.meta.at("seed") == "1");
  CHECK(c.meta.count("version") == 1);
  REQUIRE(c.rows.size() == 2);
  CHECK(c.get(0, "variant") == "causal");
  CHECK(c.get(1, "variant") == "wb");
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(c.num(i, "rho12") == Catch::Approx(0.3).epsilon(1e-14));
    CHECK(c.num(i, "eta12") == 0.0);
  }
  CHECK(c.num(0, "a1") == 1.0);
  CHECK(c.num(1, "a1") == 0.5);
}

TEST_CASE("derive flags the log regime") {
  const auto r = run_cli({"derive", "--h1", "0.3", "--h2", "0.7", "--rho", "0.5"});
  REQUIRE(r.code == 0);
  const auto c = parse_csv(r.out);
  CHECK(c.get(0, "eta_regime") == "log");
}

TEST_CASE("invalid input exits with code 2") {
  auto r = run_cli({"derive", "--h1", "-0.1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("H out of range") != std::string::npos);
  CHECK(run_cli({"derive", "--rho", "1.5"}).code == 2);
  CHECK(run_cli({"derive", "--variant", "neither"}).code == 2);
  CHECK(run_cli({"simulate", "--n", "100", "--num-traj", "2"}).code == 2);
  CHECK(run_cli({"nonsense"}).code == 2);
  CHECK(run_cli({"derive", "--no-such-flag", "1"}).code == 2);
  CHECK(run_cli({}).code == 2);
}

TEST_CASE("ensemble PSD in the log regime exits with code 2") {
  CHECK(run_cli({"psd", "--h1", "0.3", "--h2", "0.7", "--rho", "0.5", "--what", "ensemble"}).code == 2);
}

TEST_CASE("config file values apply and flags override them") {
  const auto d = scratch_dir("config");
  const auto cfg = d / "run.ini";
  std::ofstream(cfg) << "h1 = 0.2\nh2 = 0.7\nrho = 0.9\nseed = 5\n";
  const auto r = run_cli({"derive", "--config", cfg.string(), "--rho", "0.4"});
  REQUIRE(r.code == 0);
  const auto c = parse_csv(r.out);
  CHECK(c.meta.at("h1") == "0.2");
  CHECK(c.meta.at("rho") == "0.4");
  CHECK(c.meta.at("seed") == "5");
}

TEST_CASE("cov at h = 0 gives the increment variance") {
  const auto r = run_cli({"cov", "--h1", "0.3", "--h2", "0.8", "--sigma1", "2", "--delta", "0.5",
                          "--lag-max", "3", "--what", "increment"});
  REQUIRE(r.code == 0);
  const auto c = parse_csv(r.out);
  bool found = false;
  for (std::size_t i = 0; i < c.rows.size(); ++i)
    if (c.get(i, "jk") == "11" && c.num(i, "h") == 0.0) {
      CHECK(c.num(i, "re") == Catch::Approx(4 * std::pow(0.5, 0.6)).epsilon(1e-14));
      found = true;
    }
  CHECK(found);
  for (std::size_t i = 0; i < c.rows.size(); ++i) CHECK(c.get(i, "quantity") == "increment_cov");
}

TEST_CASE("psd rows are Hermitian and match the library") {
  const auto r = run_cli({"psd", "--h1", "0.2", "--h2", "0.7", "--rho", "0.5", "--what", "increment",
                          "--freq-points", "8"});
  REQUIRE(r.code == 0);
  const auto c = parse_csv(r.out);
  const DerivedParams d = derive({0.2, 0.7, 0.5, 1, 1, Variant::Causal});
  std::map<double, std::pair<double, double>> s12, s21;
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const double f = c.num(i, "f");
    if (c.get(i, "jk") == "12") {
      s12[f] = {c.num(i, "re"), c.num(i, "im")};
      const auto v = increment_psd(f, 0, 1, d).value;
      CHECK(c.num(i, "re") == Catch::Approx(v.real()).epsilon(1e-14));
      CHECK(c.num(i, "im") == Catch::Approx(v.imag()).epsilon(1e-14));
    }
    if (c.get(i, "jk") == "21") s21[f] = {c.num(i, "re"), c.num(i, "im")};
  }
  REQUIRE(s12.size() == 8);
  for (auto [f, v] : s12) {
    CHECK(s21.at(f).first == v.first);
    CHECK(s21.at(f).second == -v.second);
  }
}

TEST_CASE("json output") {
  const auto r = run_cli({"derive", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "fbm2d.derive/1");
  CHECK(j["rows"].size() == 2);
  CHECK(j["columns"][0] == "variant");
}

TEST_CASE("simulate output is reproducible for a fixed seed") {
  const auto d = scratch_dir("simulate");
  const std::vector<std::string> base{"simulate", "--h1", "0.2", "--h2", "0.7", "--rho", "0.5",
                                      "--n", "256", "--num-traj", "20", "--seed", "11",
                                      "--lag-max", "4", "--freq-points", "8", "--raw-paths", "2"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", (d / "a").string()});
  b.insert(b.end(), {"--out", (d / "b").string()});
  REQUIRE(run_cli(a).code == 0);
  REQUIRE(run_cli(b).code == 0);
  for (const char* part : {"summary", "cov", "psd", "paths"}) {
    const auto fa = d / (std::string("a_") + part + ".csv");
    const auto fb = d / (std::string("b_") + part + ".csv");
    REQUIRE(fs::exists(fa));
    CHECK(slurp(fa) == slurp(fb));
  }
  auto c = base;
  c[12] = "12";
  c.insert(c.end(), {"--out", (d / "c").string()});
  REQUIRE(run_cli(c).code == 0);
  CHECK(slurp(d / "c_paths.csv") != slurp(d / "a_paths.csv"));
  const auto summary = parse_csv(slurp(d / "a_summary.csv"));
  CHECK(summary.meta.at("seed") == "11");
}

TEST_CASE("validate runs a named check and reports failures by name") {
  auto r = run_cli({"validate", "--only", "one_sided_vanishing"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS one_sided_vanishing") != std::string::npos);

  r = run_cli({"validate", "--only", "constants", "--corrupt-constant", "0.01"});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL constants") != std::string::npos);
  CHECK(r.out.find("a_H(0.3) off by") != std::string::npos);
  r = run_cli({"validate", "--only", "constants"});
  CHECK(r.out.find("off by") == std::string::npos);

  CHECK(run_cli({"validate", "--only", "no_such_check"}).code == 2);
}

TEST_CASE("figures-data writes the figure inputs") {
  const auto d = scratch_dir("figures");
  const auto r = run_cli({"figures-data", "--out", d.string(), "--n", "256", "--num-traj", "8",
                          "--lag-max", "3", "--freq-points", "6"});
  REQUIRE(r.code == 0);
  for (const char* f : {"fig1_rho", "fig2_paths_equal_h", "fig3_paths_unequal_h", "fig4_cov_equal_h",
                        "fig5_cov_unequal_h", "fig6_process_psd", "fig7_increment_psd"}) {
    const auto p = d / (std::string(f) + ".csv");
    REQUIRE(fs::exists(p));
    CHECK_FALSE(parse_csv(slurp(p)).rows.empty());
  }
}

TEST_CASE("format_double") {
  CHECK(cli::format_double(0.3) == "0.3");
  CHECK(cli::format_double(-0.0) == "0");
  CHECK(cli::format_double(std::nan("")) == "nan");
  CHECK(cli::format_double(1e300) == "1e+300");
}

TEST_CASE("installed binary exit codes") {
  const char* tool = std::getenv("FBM2D_TOOL");
  if (!tool) SKIP("FBM2D_TOOL not set");
  const std::string t = std::string("\"") + tool + "\"";
  auto status = [](const std::string& cmd) { return WEXITSTATUS(std::system((cmd + " >/dev/null 2>&1").c_str())); };
  CHECK(status(t + " derive") == 0);
  CHECK(status(t + " derive --h1 -0.1") == 2);
  CHECK(status(t + " validate --only constants --corrupt-constant 0.01") == 1);
}
