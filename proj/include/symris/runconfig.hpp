#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "symris/sampling.hpp"
#include "symris/septest.hpp"

namespace symris::runconfig {

// Resolved parameters of one CLI run; serialized next to every output set.
struct RunConfig {
  std::string command;
  sampling::Method method = sampling::Method::MI;
  int n_qubits = 4;
  std::vector<int> ancilla;     // sweep grid, or a single operating point
  std::vector<int> n_list;      // phase-diagram qubit numbers
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  int workers = 1;              // 0 = auto-detect
  std::string out_dir = ".";
  std::string state_file;       // classify: input state JSON
  std::int64_t trial_index = 0; // classify: generator trial index
  double tau_ppt = 1e-9;
  double eps_sep = 1e-6;
  double eps_ent = 1e-4;
  int budget = 2000;
  std::int64_t min_count = 10;  // refined-label floor (p_min = min_count / n)
  int bins = 200;               // histogram bins
  int attempt_factor = 50;      // BE collection cap = attempt_factor * trials
  std::vector<std::string> scan_dirs;  // phase-diagram: prior scan outputs

  septest::SepConfig sep_config() const;
  // key = value lines covering every field above, plus the tool version.
  std::string resolved_text() const;
};

// Ancilla grids: "12", "3,5,9", "1..40", or "1..40:2" (inclusive, step >= 1).
std::vector<int> parse_grid(const std::string& spec);

// Comma-separated integers, e.g. "4,5,6".
std::vector<int> parse_int_list(const std::string& spec);

// key = value file, '#' comments, blank lines ignored; returns pairs in file
// order.  Malformed lines raise std::invalid_argument.
std::vector<std::pair<std::string, std::string>> parse_kv_file(const std::string& path);

// Applies one config-file entry to cfg; unknown keys raise
// std::invalid_argument.  Keys match the CLI flag names with '-' or '_'.
void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace symris::runconfig
