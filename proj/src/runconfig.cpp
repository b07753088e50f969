#include "symris/runconfig.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "symris/errors.hpp"
#include "symris/stateio.hpp"
#include "symris/version.hpp"

namespace symris::runconfig {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

long long to_ll(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": '" + s + "' is not an integer");
  }
  if (pos != s.size()) throw std::invalid_argument(what + ": '" + s + "' is not an integer");
  return v;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": '" + s + "' is not a number");
  }
  if (pos != s.size()) throw std::invalid_argument(what + ": '" + s + "' is not a number");
  return v;
}

std::string normalize_key(const std::string& key) {
  std::string k = key;
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

std::vector<int> parse_grid(const std::string& spec) {
  const std::string s = trim(spec);
  if (s.empty()) throw std::invalid_argument("ancilla grid: empty spec");
  const std::size_t dots = s.find("..");
  if (dots != std::string::npos) {
    const std::string lo_s = trim(s.substr(0, dots));
    std::string rest = trim(s.substr(dots + 2));
    long long step = 1;
    const std::size_t colon = rest.find(':');
    if (colon != std::string::npos) {
      step = to_ll(trim(rest.substr(colon + 1)), "ancilla grid step");
      rest = trim(rest.substr(0, colon));
    }
    const long long lo = to_ll(lo_s, "ancilla grid start");
    const long long hi = to_ll(rest, "ancilla grid end");
    if (step < 1) throw std::invalid_argument("ancilla grid: step must be >= 1");
    if (hi < lo) throw std::invalid_argument("ancilla grid: end must be >= start");
    std::vector<int> out;
    for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<int>(v));
    return out;
  }
  return parse_int_list(s);
}

std::vector<int> parse_int_list(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("integer list: empty entry in '" + spec + "'");
    out.push_back(static_cast<int>(to_ll(item, "integer list")));
  }
  if (out.empty()) throw std::invalid_argument("integer list: empty spec");
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
      val = val.substr(1, val.size() - 2);
    if (key.empty()) throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                                 ": empty key");
    out.emplace_back(std::move(key), std::move(val));
  }
  return out;
}

void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string k = normalize_key(key);
  if (k == "method") cfg.method = stateio::method_from_string(value);
  else if (k == "n_qubits") cfg.n_qubits = static_cast<int>(to_ll(value, "n_qubits"));
  else if (k == "ancilla") cfg.ancilla = parse_grid(value);
  else if (k == "n_list") cfg.n_list = parse_int_list(value);
  else if (k == "trials") cfg.trials = to_ll(value, "trials");
  else if (k == "seed") cfg.seed = static_cast<std::uint64_t>(to_ll(value, "seed"));
  else if (k == "workers") cfg.workers = static_cast<int>(to_ll(value, "workers"));
  else if (k == "out") cfg.out_dir = value;
  else if (k == "state") cfg.state_file = value;
  else if (k == "trial") cfg.trial_index = to_ll(value, "trial");
  else if (k == "tau_ppt") cfg.tau_ppt = to_double(value, "tau_ppt");
  else if (k == "eps_sep") cfg.eps_sep = to_double(value, "eps_sep");
  else if (k == "eps_ent") cfg.eps_ent = to_double(value, "eps_ent");
  else if (k == "budget") cfg.budget = static_cast<int>(to_ll(value, "budget"));
  else if (k == "min_count") cfg.min_count = to_ll(value, "min_count");
  else if (k == "bins") cfg.bins = static_cast<int>(to_ll(value, "bins"));
  else if (k == "attempt_factor")
    cfg.attempt_factor = static_cast<int>(to_ll(value, "attempt_factor"));
  else if (k == "scans") {
    cfg.scan_dirs.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!trim(item).empty()) cfg.scan_dirs.push_back(trim(item));
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

septest::SepConfig RunConfig::sep_config() const {
  septest::SepConfig sc;
  sc.eps_sep = eps_sep;
  sc.eps_ent = eps_ent;
  sc.budget = budget;
  return sc;
}

std::string RunConfig::resolved_text() const {
  std::string out;
  out += "version = " + std::string(kVersion) + "\n";
  out += "command = " + command + "\n";
  out += "method = " + stateio::method_string(method) + "\n";
  out += "n_qubits = " + std::to_string(n_qubits) + "\n";
  if (!ancilla.empty()) out += "ancilla = " + join_ints(ancilla) + "\n";
  if (!n_list.empty()) out += "n_list = " + join_ints(n_list) + "\n";
  out += "trials = " + std::to_string(trials) + "\n";
  out += "seed = " + std::to_string(seed) + "\n";
  out += "workers = " + std::to_string(workers) + "\n";
  out += "out = " + out_dir + "\n";
  if (!state_file.empty()) out += "state = " + state_file + "\n";
  if (command == "classify" && state_file.empty())
    out += "trial = " + std::to_string(trial_index) + "\n";
  out += "tau_ppt = " + stateio::fmt_double(tau_ppt) + "\n";
  out += "eps_sep = " + stateio::fmt_double(eps_sep) + "\n";
  out += "eps_ent = " + stateio::fmt_double(eps_ent) + "\n";
  out += "budget = " + std::to_string(budget) + "\n";
  out += "min_count = " + std::to_string(min_count) + "\n";
  out += "bins = " + std::to_string(bins) + "\n";
  out += "attempt_factor = " + std::to_string(attempt_factor) + "\n";
  if (!scan_dirs.empty()) {
    out += "scans = ";
    for (std::size_t i = 0; i < scan_dirs.size(); ++i) {
      if (i) out += ",";
      out += scan_dirs[i];
    }
    out += "\n";
  }
  return out;
}

}  // namespace symris::runconfig
