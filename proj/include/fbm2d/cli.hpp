#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fbm2d/model.hpp"

namespace fbm2d::cli {

enum class Format { CSV, JSON };

struct RunConfig {
  std::string command;
  ModelParams params;
  std::size_t n = 4096;
  std::size_t num_traj = 1000;
  double delta = 1.0;
  std::uint64_t seed = 1;
  double freq_min = 1e-3;
  double freq_max = 3.0;
  std::size_t freq_points = 64;
  int lag_max = 20;
  std::string out;
  Format format = Format::CSV;
  double horizon = 0.0;  // ensemble PSD horizon T; 0 means n * delta
  int n_terms = 10000;
  std::string what = "both";  // cov: process|increment|both, psd: increment|ensemble|both
  std::size_t raw_paths = 0;
  bool estimate_cov = true;
  bool estimate_psd = true;
  std::vector<std::string> only;
  double corrupt_constant = 0.0;
  // set when the flag was given explicitly (validate keeps acceptance sizes otherwise)
  bool n_given = false, num_traj_given = false, seed_given = false;
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string schema;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Shortest round-trip text for a double; nan/inf spelled out.
std::string format_double(double v);

void write_csv(std::ostream& os, const Table& t);
void write_json(std::ostream& os, const Table& t);
void write_table(std::ostream& os, const Table& t, Format f);

// Parameter echo, seed and version shared by every export.
std::vector<std::pair<std::string, std::string>> base_meta(const RunConfig& c);

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses argv into a RunConfig. Returns false when help was printed.
bool parse_args(int argc, const char* const* argv, RunConfig& cfg, std::ostream& out);

std::vector<Table> cmd_derive(const RunConfig& c);
std::vector<Table> cmd_cov(const RunConfig& c);
std::vector<Table> cmd_psd(const RunConfig& c);
// Named tables; the name is the file suffix when writing to a prefix.
std::vector<std::pair<std::string, Table>> cmd_simulate(const RunConfig& c);
// Report lines go to `report`; returns true when every check passed.
bool cmd_validate(const RunConfig& c, std::ostream& report, Table& summary);
std::vector<std::pair<std::string, Table>> cmd_figures_data(const RunConfig& c);

// Exit codes: 0 ok, 1 check failure, 2 invalid input, 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fbm2d::cli
