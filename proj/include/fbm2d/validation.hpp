#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fbm2d {

struct ValidationOptions {
  std::uint64_t seed = 20240607;
  std::size_t mc_traj = 2000;
  std::size_t mc_n = 4096;
  std::size_t dense_traj = 20000;
  std::size_t dense_n = 256;
  // harness hook: perturb a_H by this relative amount inside the constants check
  double corrupt_constant = 0.0;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string metric;  // headline number(s)
  std::vector<std::string> failures;
  std::vector<std::string> notes;  // diagnostics, e.g. clipped eigenvalue mass
  double seconds = 0.0;
};

const std::vector<std::string>& acceptance_check_names();

CheckResult run_check(const std::string& name, const ValidationOptions& opts = {});

}  // namespace fbm2d
