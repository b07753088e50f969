#include <doctest.h>

#include <cstdio>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "symris/errors.hpp"
#include "symris/runconfig.hpp"
#include "symris/stateio.hpp"

using symris::SymState;
namespace mc = symris::montecarlo;
namespace runconfig = symris::runconfig;
namespace sampling = symris::sampling;
namespace stateio = symris::stateio;

namespace {
std::string temp_path(const char* name) {
  return std::string("./") + name;
}
}  // namespace

TEST_SUITE_BEGIN("stateio");

TEST_CASE("state JSON round trip is exact") {
  symris::RngStream rng(51, 0);
  const SymState s = oracle::random_sym_state(4, rng);
  const SymState back = stateio::state_from_json(stateio::state_to_json(s));
  CHECK(back.n_qubits == 4);
  CHECK((back.matrix - s.matrix).cwiseAbs().maxCoeff() == 0.0);

  const std::string path = temp_path("state_roundtrip.json");
  stateio::save_state(s, path);
  const SymState loaded = stateio::load_state(path);
  CHECK((loaded.matrix - s.matrix).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("state_from_json rejects malformed documents") {
  using nlohmann::json;
  CHECK_THROWS_AS(stateio::state_from_json(json::array()), std::invalid_argument);
  CHECK_THROWS_AS(stateio::state_from_json(json{{"n_qubits", 2}}), std::invalid_argument);
  CHECK_THROWS_AS(stateio::state_from_json(json{{"n_qubits", 2.5}, {"matrix", json::array()}}),
                  std::invalid_argument);
  // Wrong row count.
  json j{{"n_qubits", 2}, {"matrix", json::array({json::array(), json::array()})}};
  CHECK_THROWS_WITH_AS(stateio::state_from_json(j), doctest::Contains("rows"),
                       std::invalid_argument);
  // Entry is a bare number, not an [re, im] pair.
  json good = stateio::state_to_json(symris::maximally_mixed(2));
  good["matrix"][0][0] = 0.5;
  CHECK_THROWS_WITH_AS(stateio::state_from_json(good), doctest::Contains("[re, im]"),
                       std::invalid_argument);
}

TEST_CASE("load_state: missing file is an io_error, garbage is a parse error") {
  CHECK_THROWS_AS(stateio::load_state("./no_such_file_498151.json"), symris::io_error);
  const std::string path = temp_path("garbage_state.json");
  stateio::write_text_file(path, "{this is not json");
  CHECK_THROWS_AS(stateio::load_state(path), nlohmann::json::exception);
  std::remove(path.c_str());
}

TEST_CASE("label, kind, tag and method strings") {
  using mc::Kind;
  CHECK(stateio::kind_string(Kind::NPT) == "NPT");
  CHECK(stateio::kind_string(Kind::PPT_BE) == "PPT_BE");
  CHECK(stateio::label_string({Kind::SEP, {}}) == "SEP");
  CHECK(stateio::label_string({Kind::PPT_BE, {1}}) == "PPTBE_1");
  CHECK(stateio::label_string({Kind::PPT_BE, {1, 3}}) == "PPTBE_1_3");
  CHECK(stateio::tag_string(mc::Tag::All) == "all");
  CHECK(stateio::tag_string(mc::Tag::X) == "x");
  CHECK(stateio::tag_string(mc::Tag::Plain) == "plain");

  CHECK(stateio::method_string(sampling::Method::MI) == "MI");
  CHECK(stateio::method_string(sampling::Method::MII) == "MII");
  CHECK(stateio::method_from_string("mi") == sampling::Method::MI);
  CHECK(stateio::method_from_string("2") == sampling::Method::MII);
  CHECK_THROWS_AS(stateio::method_from_string("M3"), std::invalid_argument);
}

TEST_CASE("fmt_double is locale-free shortest-ish decimal") {
  CHECK(stateio::fmt_double(0.0) == "0");
  CHECK(stateio::fmt_double(0.5) == "0.5");
  CHECK(stateio::fmt_double(1e-9) == "1e-09");
  CHECK(stateio::fmt_double(-3.25) == "-3.25");
  CHECK(stateio::fmt_double(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("verdict JSON carries outcome, flags and certificate") {
  const auto v = mc::classify_state_full(symris::dicke_projector_state(4, 2));
  const auto j = stateio::verdict_to_json(v, 4);
  CHECK(j["n_qubits"] == 4);
  CHECK(j["outcome"] == "NPT");
  CHECK(j["label"] == "NPT");
  CHECK(j["tag"] == "plain");
  CHECK(j["ppt_set"].empty());
  REQUIRE(j["flags"].size() == 2);
  CHECK(j["flags"][0]["k"] == 1);
  CHECK(j["flags"][0]["ppt"] == false);
  CHECK(j["flags"][0]["min_eig"].get<double>() < 0);
  CHECK(j["certificate"].is_null());

  const auto vs = mc::classify_state_full(symris::maximally_mixed(2));
  const auto js = stateio::verdict_to_json(vs, 2);
  CHECK(js["outcome"] == "SEP");
  REQUIRE(js["certificate"].is_object());
  CHECK(js["certificate"]["verdict"] == "SEP");
  CHECK(js["certificate"]["residual"].get<double>() <= 1e-6);
  CHECK(js["certificate"]["decomposition"].is_array());
  CHECK(!js["certificate"].contains("witness"));
}

TEST_CASE("sweep CSVs: exact layout from a fabricated ledger") {
  mc::SweepPoint pt;
  pt.ancilla = 3;
  pt.ledger.params = {sampling::Method::MI, 4, 3};
  pt.ledger.n = 8;
  pt.ledger.counts[{mc::Kind::NPT, {}}] = 4;
  pt.ledger.counts[{mc::Kind::PPT_BE, {1}}] = 2;
  pt.ledger.counts[{mc::Kind::PPT_BE, {1, 2}}] = 1;
  pt.ledger.counts[{mc::Kind::SEP, {}}] = 1;

  // Half NPT / half SEP over 16 trials: stderr is exactly 0.125.
  mc::SweepPoint even;
  even.ancilla = 5;
  even.ledger.n = 16;
  even.ledger.counts[{mc::Kind::NPT, {}}] = 8;
  even.ledger.counts[{mc::Kind::SEP, {}}] = 8;
  const std::string long_csv = stateio::sweep_long_csv(sampling::Method::MI, 4, {even});
  CHECK(long_csv ==
        "method,n_qubits,ancilla,n,outcome,probability,stderr\n"
        "MI,4,5,16,NPT,0.5,0.125\n"
        "MI,4,5,16,PPT_BE,0,0\n"
        "MI,4,5,16,SEP,0.5,0.125\n"
        "MI,4,5,16,UNK,0,0\n");

  const std::string wide_csv = stateio::sweep_wide_csv(sampling::Method::MI, 4, {pt});
  CHECK(wide_csv ==
        "method,n_qubits,ancilla,n,P_NPT,P_PPTBE,P_SEP,P_UNK,PPTBE_1,PPTBE_1_2\n"
        "MI,4,3,8,0.5,0.375,0.125,0,0.25,0.125\n");
}

TEST_CASE("checkpoints CSV leaves the first difference row blank") {
  mc::TrialLedger ledger;
  ledger.n = 4;
  ledger.checkpoints.push_back({1, 1.0, 0.0, 0.0, 0.0});
  ledger.checkpoints.push_back({2, 0.5, 0.5, 0.0, 0.0});
  ledger.checkpoints.push_back({4, 0.25, 0.5, 0.25, 0.0});
  CHECK(stateio::checkpoints_csv(ledger) ==
        "n,P_NPT,P_PPTBE,P_SEP,P_UNK,dNPT,dPPTBE,dSEP,dUNK\n"
        "1,1,0,0,0,,,,\n"
        "2,0.5,0.5,0,0,0.5,0.5,0,0\n"
        "4,0.25,0.5,0.25,0,0.25,0,0.25,0\n");
}

TEST_CASE("histogram and mmd CSVs") {
  symris::geometry::HistogramPDF h;
  h.bin_edges = {0.0, 0.5, 1.0};
  h.density = {1.5, 0.5};
  h.n_samples = 4;
  CHECK(stateio::histogram_csv(h) ==
        "bin_left,bin_right,density\n"
        "0,0.5,1.5\n"
        "0.5,1,0.5\n");

  CHECK(stateio::mmd_csv({{2, 0.25, 0.125}}) ==
        "ancilla,mean,std\n"
        "2,0.25,0.125\n");
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("runconfig");

TEST_CASE("parse_grid: single values, lists, ranges, strides, errors") {
  CHECK(runconfig::parse_grid("12") == std::vector<int>{12});
  CHECK(runconfig::parse_grid("3,5,9") == std::vector<int>{3, 5, 9});
  CHECK(runconfig::parse_grid("1..5") == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(runconfig::parse_grid("2..10:3") == std::vector<int>{2, 5, 8});
  CHECK(runconfig::parse_grid(" 4 .. 6 ") == std::vector<int>{4, 5, 6});
  CHECK_THROWS_AS(runconfig::parse_grid("5..1"), std::invalid_argument);
  CHECK_THROWS_AS(runconfig::parse_grid("1..9:0"), std::invalid_argument);
  CHECK_THROWS_AS(runconfig::parse_grid("a..b"), std::invalid_argument);
  CHECK_THROWS_AS(runconfig::parse_grid(""), std::invalid_argument);
  CHECK_THROWS_AS(runconfig::parse_int_list("1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(runconfig::parse_int_list("1,x"), std::invalid_argument);
}

TEST_CASE("parse_kv_file: comments, quotes, diagnostics") {
  const std::string path = "./kv_test.cfg";
  stateio::write_text_file(path,
                           "# full line comment\n"
                           "method = MII\n"
                           "\n"
                           "out = \"with spaces/dir\"  # trailing comment\n"
                           "trials=500\n");
  const auto kvs = runconfig::parse_kv_file(path);
  REQUIRE(kvs.size() == 3);
  CHECK(kvs[0].first == "method");
  CHECK(kvs[0].second == "MII");
  CHECK(kvs[1].second == "with spaces/dir");
  CHECK(kvs[2].first == "trials");
  CHECK(kvs[2].second == "500");
  std::remove(path.c_str());

  stateio::write_text_file(path, "ok = 1\nbroken line\n");
  CHECK_THROWS_WITH_AS(runconfig::parse_kv_file(path),
                       doctest::Contains(":2: expected 'key = value'"),
                       std::invalid_argument);
  std::remove(path.c_str());
  CHECK_THROWS_AS(runconfig::parse_kv_file("./missing_4981.cfg"), symris::io_error);
}

TEST_CASE("apply_kv: key normalization, typed parsing, unknown keys") {
  runconfig::RunConfig cfg;
  runconfig::apply_kv(cfg, "method", "MII");
  CHECK(cfg.method == sampling::Method::MII);
  runconfig::apply_kv(cfg, "n-qubits", "6");  // hyphened alias
  CHECK(cfg.n_qubits == 6);
  runconfig::apply_kv(cfg, "ancilla", "1..4");
  CHECK(cfg.ancilla == std::vector<int>{1, 2, 3, 4});
  runconfig::apply_kv(cfg, "eps_sep", "1e-7");
  CHECK(cfg.eps_sep == 1e-7);
  runconfig::apply_kv(cfg, "scans", "a/b, c/d");
  CHECK(cfg.scan_dirs == std::vector<std::string>{"a/b", "c/d"});
  runconfig::apply_kv(cfg, "trial", "7");
  CHECK(cfg.trial_index == 7);
  CHECK_THROWS_WITH_AS(runconfig::apply_kv(cfg, "no_such_key", "1"),
                       doctest::Contains("unknown config key"), std::invalid_argument);
  CHECK_THROWS_AS(runconfig::apply_kv(cfg, "trials", "many"), std::invalid_argument);
}

TEST_CASE("resolved_text replays through apply_kv to the same configuration") {
  runconfig::RunConfig cfg;
  cfg.command = "scan";
  cfg.method = sampling::Method::MII;
  cfg.n_qubits = 5;
  cfg.ancilla = {1, 3, 5};
  cfg.trials = 250;
  cfg.seed = 42;
  cfg.out_dir = "out/test";
  const std::string text = cfg.resolved_text();
  CHECK(text.find("version = symris 0.1.0\n") == 0);
  CHECK(text.find("command = scan\n") != std::string::npos);
  CHECK(text.find("ancilla = 1,3,5\n") != std::string::npos);

  // Round trip: write, parse, re-apply (skipping the bookkeeping keys).
  const std::string path = "./resolved_test.cfg";
  stateio::write_text_file(path, text);
  runconfig::RunConfig back;
  for (const auto& [k, v] : runconfig::parse_kv_file(path)) {
    if (k == "version" || k == "command") continue;
    runconfig::apply_kv(back, k, v);
  }
  std::remove(path.c_str());
  CHECK(back.method == cfg.method);
  CHECK(back.n_qubits == 5);
  CHECK(back.ancilla == cfg.ancilla);
  CHECK(back.trials == 250);
  CHECK(back.seed == 42);
  CHECK(back.out_dir == "out/test");
  CHECK(back.tau_ppt == cfg.tau_ppt);

  // classify without a state file records the trial index.
  runconfig::RunConfig cc;
  cc.command = "classify";
  cc.trial_index = 9;
  CHECK(cc.resolved_text().find("trial = 9\n") != std::string::npos);
  cc.state_file = "s.json";
  CHECK(cc.resolved_text().find("trial = ") == std::string::npos);
}

TEST_SUITE_END();
