#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

#include "symris/stateio.hpp"
#include "symris/symspace.hpp"

namespace fs = std::filesystem;
namespace stateio = symris::stateio;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the installed binary with the given arguments, capturing both streams.
CliResult run_cli(const std::string& args) {
  const std::string err_path = "./cli_stderr.txt";
  const std::string cmd = std::string("\"") + SYMRIS_BIN + "\" " + args + " 2>" + err_path;
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  const int rc = pclose(pipe);
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::FILE* ef = std::fopen(err_path.c_str(), "rb");
  if (ef) {
    while ((got = fread(buf, 1, sizeof(buf), ef)) > 0) r.err.append(buf, got);
    std::fclose(ef);
    std::remove(err_path.c_str());
  }
  return r;
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const char* name) : dir(fs::path(".") / name) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const char* leaf) const { return (dir / leaf).string(); }
};

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("usage and version") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  const auto v = run_cli("--version");
  CHECK(v.code == 0);
  CHECK(v.out.find("symris 0.1.0") != std::string::npos);
  const auto h = run_cli("--help");
  CHECK(h.code == 0);
  CHECK(h.out.find("scan") != std::string::npos);
  CHECK(h.out.find("phase-diagram") != std::string::npos);
}

TEST_CASE("scan: argument validation") {
  Scratch s("cli_scan_bad");
  CHECK(run_cli("scan --ancilla 3 --trials 0 --out " + (s / "x")).code == 2);
  const auto r = run_cli("scan --trials 5 --out " + (s / "y"));
  CHECK(r.code == 2);
  CHECK(r.err.find("ancilla") != std::string::npos);
  CHECK(run_cli("scan --ancilla 9..5 --trials 5").code == 2);
}

TEST_CASE("classify: state file errors map to documented exit codes") {
  Scratch s("cli_classify_bad");
  CHECK(run_cli("classify --state " + (s / "missing.json")).code == 4);

  stateio::write_text_file(s / "garbage.json", "{not json at all");
  CHECK(run_cli("classify --state " + (s / "garbage.json") + " --out " + (s / "o1")).code == 2);

  // Hermitian, unit trace, but not PSD: rejected with the invariant named.
  stateio::write_text_file(
      s / "nonpsd.json",
      "{\"n_qubits\": 1, \"matrix\": [[[-0.2, 0], [0, 0]], [[0, 0], [1.2, 0]]]}\n");
  const auto r = run_cli("classify --state " + (s / "nonpsd.json") + " --out " + (s / "o2"));
  CHECK(r.code == 2);
  CHECK(r.err.find("positive") != std::string::npos);

  // No state and no generator spec: instructive usage error.
  const auto g = run_cli("classify");
  CHECK(g.code == 2);
  CHECK(g.err.find("--state") != std::string::npos);
}

TEST_CASE("classify: separable and NPT endpoints produce full verdicts") {
  Scratch s("cli_classify_ok");
  stateio::save_state(symris::maximally_mixed(4), s / "mms.json");
  const auto r = run_cli("classify --state " + (s / "mms.json") + " --out " + (s / "sep"));
  REQUIRE(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["n_qubits"] == 4);
  CHECK(j["outcome"] == "SEP");
  CHECK(j["tag"] == "plain");
  REQUIRE(j["certificate"].is_object());
  CHECK(j["certificate"]["verdict"] == "SEP");
  CHECK(j["certificate"]["residual"].get<double>() <= 1e-6);
  CHECK(j["certificate"]["decomposition"].size() >= 1);
  // The verdict is also written next to the config.
  CHECK(fs::exists(s.dir / "sep" / "verdict.json"));
  CHECK(fs::exists(s.dir / "sep" / "config.txt"));
  const nlohmann::json j2 =
      nlohmann::json::parse(stateio::read_text_file(s / "sep/verdict.json"));
  CHECK(j2 == j);

  stateio::save_state(symris::dicke_projector_state(4, 2), s / "dicke.json");
  const auto rn = run_cli("classify --state " + (s / "dicke.json") + " --out " + (s / "npt"));
  REQUIRE(rn.code == 0);
  const nlohmann::json jn = nlohmann::json::parse(rn.out);
  CHECK(jn["outcome"] == "NPT");
  CHECK(jn["label"] == "NPT");
  CHECK(jn["certificate"].is_null());
  REQUIRE(jn["flags"].size() == 2);
  CHECK(jn["flags"][1]["ppt"] == false);
}

TEST_CASE("classify: generator spec records the trial in the config") {
  Scratch s("cli_classify_gen");
  const auto r = run_cli("classify --method MII --n-qubits 4 --ancilla 80 --seed 5 --trial 3"
                         " --out " + (s / "g"));
  REQUIRE(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK((j["outcome"] == "SEP" || j["outcome"] == "UNK"));
  const std::string cfg = stateio::read_text_file(s / "g/config.txt");
  CHECK(cfg.find("command = classify\n") != std::string::npos);
  CHECK(cfg.find("method = MII\n") != std::string::npos);
  CHECK(cfg.find("trial = 3\n") != std::string::npos);
  CHECK(cfg.find("version = symris 0.1.0\n") == 0);

  CHECK(run_cli("classify --ancilla 2,3 --out " + (s / "h")).code == 2);
  CHECK(run_cli("classify --ancilla 2 --trial 16777216 --out " + (s / "i")).code == 2);
}

TEST_CASE("scan: artifacts, worker invariance, config round trip") {
  Scratch s("cli_scan_ok");
  const std::string base = "scan --method MI --n-qubits 3 --ancilla 1,2 --trials 25"
                           " --seed 7 --budget 300";
  REQUIRE(run_cli(base + " --workers 1 --out " + (s / "w1")).code == 0);
  REQUIRE(run_cli(base + " --workers 2 --out " + (s / "w2")).code == 0);
  for (const char* leaf :
       {"scan_long.csv", "scan_wide.csv", "scan_refined.csv", "scan.svg", "config.txt"}) {
    CHECK(fs::exists(s.dir / "w1" / leaf));
    CHECK(fs::exists(s.dir / "w2" / leaf));
  }
  // Identical bytes regardless of the worker count.
  for (const char* leaf : {"scan_long.csv", "scan_wide.csv", "scan_refined.csv", "scan.svg"}) {
    CHECK(stateio::read_text_file((s.dir / "w1" / leaf).string()) ==
          stateio::read_text_file((s.dir / "w2" / leaf).string()));
  }
  // N = 3 has a single cut: no refined PPT-BE columns can appear.
  const std::string wide = stateio::read_text_file(s / "w1/scan_wide.csv");
  CHECK(wide.find("method,n_qubits,ancilla,n,P_NPT,P_PPTBE,P_SEP,P_UNK\n") == 0);
  CHECK(wide.find("PPTBE_") == std::string::npos);

  // The resolved config replays to the same outputs.
  REQUIRE(run_cli("scan --config " + (s / "w1/config.txt") + " --out " + (s / "w3")).code == 0);
  CHECK(stateio::read_text_file(s / "w1/scan_long.csv") ==
        stateio::read_text_file(s / "w3/scan_long.csv"));
}

TEST_CASE("convergence: single-trial edge case still writes a ledger") {
  Scratch s("cli_conv");
  const auto r = run_cli("convergence --method MII --n-qubits 2 --ancilla 9 --trials 1"
                         " --seed 3 --out " + (s / "c"));
  REQUIRE(r.code == 0);
  const std::string csv = stateio::read_text_file(s / "c/checkpoints.csv");
  CHECK(csv.find("n,P_NPT,P_PPTBE,P_SEP,P_UNK,dNPT,dPPTBE,dSEP,dUNK\n") == 0);
  CHECK(csv.find("\n1,") != std::string::npos);
  CHECK(csv.substr(csv.size() - 5) == ",,,,\n");
  CHECK(fs::exists(s.dir / "c" / "convergence_prob.svg"));
  CHECK(fs::exists(s.dir / "c" / "convergence_diff.svg"));

  CHECK(run_cli("convergence --ancilla 1,2 --trials 5 --out " + (s / "d")).code == 2);
}

TEST_CASE("phase-diagram: scan reuse, missing data diagnostics, fits") {
  Scratch s("cli_phase");

  // Missing directory: IO error.
  CHECK(run_cli("phase-diagram --scans " + (s / "nowhere") + " --out " + (s / "p0")).code == 4);

  // Synthetic wide CSVs with planted crossings: NPT/BE at 2N, BE/SEP at N^2.
  const auto plant = [&](const fs::path& dir, std::initializer_list<int> ns) {
    fs::create_directories(dir);
    std::string csv = "method,n_qubits,ancilla,n,P_NPT,P_PPTBE,P_SEP,P_UNK\n";
    for (int n : ns) {
      const auto row = [&](int a, double pn, double pb, double ps) {
        csv += "MI," + std::to_string(n) + "," + std::to_string(a) + ",1000," +
               stateio::fmt_double(pn) + "," + stateio::fmt_double(pb) + "," +
               stateio::fmt_double(ps) + ",0\n";
      };
      row(2 * n - 1, 0.6, 0.4, 0.0);
      row(2 * n + 1, 0.4, 0.6, 0.0);
      row(n * n - 1, 0.0, 0.5, 0.3);
      row(n * n + 1, 0.0, 0.3, 0.5);
    }
    stateio::write_text_file((dir / "scan_wide.csv").string(), csv);
  };
  plant(s.dir / "s4", {4});
  plant(s.dir / "s56", {5, 6});

  // Partial coverage: instructive error naming the absent N and the command.
  const auto partial =
      run_cli("phase-diagram --scans " + (s / "s4") + " --out " + (s / "p1"));
  CHECK(partial.code == 2);
  CHECK(partial.err.find("5,6") != std::string::npos);
  CHECK(partial.err.find("symris scan") != std::string::npos);
  CHECK(partial.err.find("--scans") != std::string::npos);

  // Full coverage: exact crossings, near-exact fits.
  const auto full = run_cli("phase-diagram --scans " + (s / "s4") + "," + (s / "s56") +
                            " --out " + (s / "p2"));
  REQUIRE(full.code == 0);
  const nlohmann::json j =
      nlohmann::json::parse(stateio::read_text_file(s / "p2/boundaries.json"));
  CHECK(j["method"] == "MI");
  CHECK(j["n_list"] == nlohmann::json::array({4, 5, 6}));
  REQUIRE(j["boundaries"].size() == 2);
  const auto& nb = j["boundaries"][0];
  CHECK(nb["kind"] == "NPT_to_BE");
  CHECK(nb["model"] == "linear");
  REQUIRE(nb["points"].size() == 3);
  CHECK(nb["points"][0][0].get<double>() == 4.0);
  CHECK(nb["points"][0][1].get<double>() == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(nb["points"][2][1].get<double>() == doctest::Approx(12.0).epsilon(1e-9));
  CHECK(nb["coefficients"][0].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(nb["coefficients"][1].get<double>()) < 1e-6);
  CHECK(nb["rss"].get<double>() < 1e-12);
  const auto& bs = j["boundaries"][1];
  CHECK(bs["kind"] == "BE_to_SEP");
  CHECK(bs["model"] == "quadratic");
  CHECK(bs["points"][1][1].get<double>() == doctest::Approx(25.0).epsilon(1e-9));
  CHECK(bs["coefficients"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(bs["rss"].get<double>() < 1e-9);
  CHECK(bs["linear_rss"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(fs::exists(s.dir / "p2" / "phase_diagram.svg"));
  CHECK(fs::exists(s.dir / "p2" / "config.txt"));

  // Neither --scans nor a generation spec: usage error.
  CHECK(run_cli("phase-diagram --out " + (s / "p3")).code == 2);
}

TEST_SUITE_END();
