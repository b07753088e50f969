#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "symris/errors.hpp"
#include "symris/geometry.hpp"
#include "symris/montecarlo.hpp"
#include "symris/phases.hpp"
#include "symris/runconfig.hpp"
#include "symris/sampling.hpp"
#include "symris/stateio.hpp"
#include "symris/svg.hpp"
#include "symris/version.hpp"

namespace fs = std::filesystem;
using symris::runconfig::RunConfig;

namespace {

const char* kColorNpt = "#c0392b";
const char* kColorBe = "#d4a017";
const char* kColorSep = "#27ae60";
const char* kColorUnk = "#7f8c8d";
const char* kBandNpt = "#f2c4bd";
const char* kBandBe = "#f7e6b0";
const char* kBandSep = "#bfe6cc";
const char* kBrowns[] = {"#8b5a2b", "#a0522d", "#6f4518", "#b97a3d", "#5c3a1e"};

std::string pretty_label(const std::vector<int>& ppt_set) {
  std::string s = "PPT BE ";
  for (std::size_t i = 0; i < ppt_set.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(ppt_set[i]);
  }
  return s;
}

symris::montecarlo::ClassifyConfig classify_cfg(const RunConfig& cfg) {
  symris::montecarlo::ClassifyConfig c;
  c.tau_ppt = cfg.tau_ppt;
  c.sep = cfg.sep_config();
  return c;
}

void write_run_config(const RunConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  symris::stateio::write_text_file((dir / "config.txt").string(), cfg.resolved_text());
}

double polyval(const std::vector<double>& coeffs, double x) {
  double v = 0.0;
  for (double c : coeffs) v = v * x + c;
  return v;
}

// ---- scan ------------------------------------------------------------

void scan_figure(const RunConfig& cfg, const std::vector<symris::montecarlo::SweepPoint>& sweep,
                 const fs::path& path) {
  symris::svg::Figure fig;
  fig.title = "Outcome probabilities, " + symris::stateio::method_string(cfg.method) +
              ", N = " + std::to_string(cfg.n_qubits) +
              ", n = " + std::to_string(cfg.trials);
  fig.xlabel = cfg.method == symris::sampling::Method::MI ? "traced ancilla qubits"
                                                          : "ancilla dimension";
  fig.ylabel = "probability";

  std::vector<double> xs;
  symris::svg::Series npt{{}, {}, kColorNpt, "NPT", 2.0, false};
  symris::svg::Series be{{}, {}, kColorBe, "PPT BE", 2.0, false};
  symris::svg::Series sep{{}, {}, kColorSep, "SEP", 2.0, false};
  symris::svg::Series unk{{}, {}, kColorUnk, "UNK", 1.2, false};
  for (const auto& pt : sweep) {
    const double a = pt.ancilla;
    xs.push_back(a);
    npt.x.push_back(a);
    npt.y.push_back(pt.ledger.probability(symris::montecarlo::Kind::NPT));
    be.x.push_back(a);
    be.y.push_back(pt.ledger.probability(symris::montecarlo::Kind::PPT_BE));
    sep.x.push_back(a);
    sep.y.push_back(pt.ledger.probability(symris::montecarlo::Kind::SEP));
    unk.x.push_back(a);
    unk.y.push_back(pt.ledger.probability(symris::montecarlo::Kind::UNK));
  }

  // Shaded background per dominant phase, edges at grid midpoints.
  const std::size_t n = sweep.size();
  std::vector<int> dominant(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double p[3] = {npt.y[i], be.y[i], sep.y[i]};
    int best = 0;
    for (int j = 1; j < 3; ++j)
      if (p[j] > p[best]) best = j;
    dominant[i] = best;
  }
  const char* band_color[3] = {kBandNpt, kBandBe, kBandSep};
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && dominant[j + 1] == dominant[i]) ++j;
    symris::svg::Band b;
    b.x0 = i == 0 ? xs.front() : 0.5 * (xs[i - 1] + xs[i]);
    b.x1 = j + 1 == n ? xs.back() : 0.5 * (xs[j] + xs[j + 1]);
    b.color = band_color[dominant[i]];
    fig.bands.push_back(b);
    i = j + 1;
  }

  // Refined PPT-BE labels as dashed brown curves.
  std::set<std::vector<int>> labels;
  for (const auto& pt : sweep)
    for (const auto& [oc, cnt] : pt.ledger.counts)
      if (oc.kind == symris::montecarlo::Kind::PPT_BE) labels.insert(oc.ppt_set);
  int li = 0;
  for (const auto& set : labels) {
    symris::svg::Series s;
    s.color = kBrowns[li++ % 5];
    s.label = pretty_label(set);
    s.width = 1.3;
    s.dashed = true;
    for (const auto& pt : sweep) {
      const auto it = pt.ledger.counts.find({symris::montecarlo::Kind::PPT_BE, set});
      const std::int64_t cnt = it == pt.ledger.counts.end() ? 0 : it->second;
      s.x.push_back(pt.ancilla);
      s.y.push_back(static_cast<double>(cnt) / static_cast<double>(pt.ledger.n));
    }
    fig.series.push_back(std::move(s));
  }

  fig.series.push_back(std::move(npt));
  fig.series.push_back(std::move(be));
  fig.series.push_back(std::move(sep));
  fig.series.push_back(std::move(unk));
  symris::svg::write_figure(fig, path.string());
}

std::vector<symris::montecarlo::SweepPoint> run_sweep(const RunConfig& cfg) {
  std::vector<symris::montecarlo::SweepPoint> sweep;
  const auto ccfg = classify_cfg(cfg);
  for (int a : cfg.ancilla) {
    symris::sampling::MethodParams p{cfg.method, cfg.n_qubits, a};
    symris::montecarlo::SweepPoint pt;
    pt.ancilla = a;
    pt.ledger = symris::montecarlo::estimate(p, cfg.trials, cfg.seed, cfg.workers, ccfg);
    std::cerr << "[scan] " << symris::stateio::method_string(cfg.method) << " N="
              << cfg.n_qubits << " ancilla=" << a
              << ": NPT=" << pt.ledger.probability(symris::montecarlo::Kind::NPT)
              << " BE=" << pt.ledger.probability(symris::montecarlo::Kind::PPT_BE)
              << " SEP=" << pt.ledger.probability(symris::montecarlo::Kind::SEP)
              << " UNK=" << pt.ledger.probability(symris::montecarlo::Kind::UNK) << "\n";
    sweep.push_back(std::move(pt));
  }
  return sweep;
}

void write_scan_outputs(const RunConfig& cfg,
                        const std::vector<symris::montecarlo::SweepPoint>& sweep,
                        const fs::path& dir) {
  fs::create_directories(dir);
  symris::stateio::write_text_file(
      (dir / "scan_long.csv").string(),
      symris::stateio::sweep_long_csv(cfg.method, cfg.n_qubits, sweep));
  symris::stateio::write_text_file(
      (dir / "scan_wide.csv").string(),
      symris::stateio::sweep_wide_csv(cfg.method, cfg.n_qubits, sweep));
  std::string refined = "label,ancilla,probability\n";
  for (const auto& la : symris::montecarlo::refine_order(sweep, cfg.min_count))
    refined += symris::stateio::label_string({symris::montecarlo::Kind::PPT_BE, la.ppt_set}) +
               "," + std::to_string(la.ancilla) + "," +
               symris::stateio::fmt_double(la.probability) + "\n";
  symris::stateio::write_text_file((dir / "scan_refined.csv").string(), refined);
  scan_figure(cfg, sweep, dir / "scan.svg");
}

int cmd_scan(const RunConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("scan: --trials must be >= 1");
  if (cfg.ancilla.empty())
    throw std::invalid_argument("scan: provide an ancilla grid, e.g. --ancilla 1..40");
  const auto sweep = run_sweep(cfg);
  write_scan_outputs(cfg, sweep, cfg.out_dir);
  write_run_config(cfg, cfg.out_dir);
  std::cout << "scan written to " << cfg.out_dir << "\n";
  return 0;
}

// ---- classify --------------------------------------------------------

int cmd_classify(const RunConfig& cfg) {
  symris::SymState rho;
  if (!cfg.state_file.empty()) {
    rho = symris::stateio::load_state(cfg.state_file);
  } else if (!cfg.ancilla.empty()) {
    if (cfg.ancilla.size() != 1)
      throw std::invalid_argument("classify: generator spec needs a single ancilla value");
    if (cfg.trial_index < 0 || cfg.trial_index >= (1LL << 24))
      throw std::invalid_argument("classify: --trial must be in [0, 2^24)");
    symris::sampling::MethodParams p{cfg.method, cfg.n_qubits, cfg.ancilla[0]};
    rho = symris::sampling::sample_trial(p, cfg.seed,
                                         static_cast<std::uint32_t>(cfg.trial_index));
  } else {
    throw std::invalid_argument(
        "classify: provide --state FILE or a generator spec "
        "(--method, --n-qubits, --ancilla, --seed, --trial)");
  }
  symris::validate_state(rho);
  const auto verdict = symris::montecarlo::classify_state_full(rho, classify_cfg(cfg));
  const nlohmann::json j = symris::stateio::verdict_to_json(verdict, rho.n_qubits);
  std::cout << j.dump(2) << "\n";
  write_run_config(cfg, cfg.out_dir);
  symris::stateio::write_text_file((fs::path(cfg.out_dir) / "verdict.json").string(),
                                   j.dump(2) + "\n");
  return 0;
}

// ---- convergence -----------------------------------------------------

int cmd_convergence(const RunConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("convergence: --trials must be >= 1");
  if (cfg.ancilla.size() != 1)
    throw std::invalid_argument("convergence: provide exactly one --ancilla value");
  symris::sampling::MethodParams p{cfg.method, cfg.n_qubits, cfg.ancilla[0]};
  const auto ledger =
      symris::montecarlo::estimate(p, cfg.trials, cfg.seed, cfg.workers, classify_cfg(cfg));
  fs::create_directories(cfg.out_dir);
  symris::stateio::write_text_file((fs::path(cfg.out_dir) / "checkpoints.csv").string(),
                                   symris::stateio::checkpoints_csv(ledger));

  symris::svg::Figure probs;
  probs.title = "Running probabilities, " + symris::stateio::method_string(cfg.method) +
                ", N = " + std::to_string(cfg.n_qubits) +
                ", ancilla = " + std::to_string(cfg.ancilla[0]);
  probs.xlabel = "trials";
  probs.ylabel = "probability";
  probs.logx = true;
  symris::svg::Figure diffs;
  diffs.title = "Successive checkpoint differences";
  diffs.xlabel = "trials";
  diffs.ylabel = "|difference|";
  diffs.logx = true;
  diffs.logy = true;

  const char* colors[4] = {kColorNpt, kColorBe, kColorSep, kColorUnk};
  const char* names[4] = {"NPT", "PPT BE", "SEP", "UNK"};
  for (int c = 0; c < 4; ++c) {
    symris::svg::Series sp{{}, {}, colors[c], names[c], 1.8, false};
    symris::svg::Series sd{{}, {}, colors[c], names[c], 1.4, false};
    const symris::montecarlo::CheckpointRow* prev = nullptr;
    for (const auto& row : ledger.checkpoints) {
      const double v[4] = {row.p_npt, row.p_ppt_be, row.p_sep, row.p_unk};
      sp.x.push_back(static_cast<double>(row.n));
      sp.y.push_back(v[c]);
      if (prev) {
        const double pv[4] = {prev->p_npt, prev->p_ppt_be, prev->p_sep, prev->p_unk};
        sd.x.push_back(static_cast<double>(row.n));
        sd.y.push_back(std::abs(v[c] - pv[c]));
      }
      prev = &row;
    }
    probs.series.push_back(std::move(sp));
    diffs.series.push_back(std::move(sd));
  }
  symris::svg::write_figure(probs, (fs::path(cfg.out_dir) / "convergence_prob.svg").string());
  symris::svg::write_figure(diffs, (fs::path(cfg.out_dir) / "convergence_diff.svg").string());
  write_run_config(cfg, cfg.out_dir);
  std::cout << "convergence artifacts written to " << cfg.out_dir << "\n";
  return 0;
}

// ---- geometry ----------------------------------------------------------

int cmd_geometry(const RunConfig& cfg) {
  if (cfg.trials < 2) throw std::invalid_argument("geometry: --trials must be >= 2");
  if (cfg.ancilla.empty())
    throw std::invalid_argument("geometry: provide an ancilla grid, e.g. --ancilla 12");
  fs::create_directories(cfg.out_dir);
  const auto ccfg = classify_cfg(cfg);

  nlohmann::json summary;
  summary["method"] = symris::stateio::method_string(cfg.method);
  summary["n_qubits"] = cfg.n_qubits;

  // Mean/std distance to the maximally mixed state, all generated states.
  std::vector<symris::geometry::MmdPoint> mmd;
  for (int a : cfg.ancilla) {
    symris::sampling::MethodParams p{cfg.method, cfg.n_qubits, a};
    symris::sampling::validate_params(p);
    std::vector<symris::SymState> states;
    states.reserve(cfg.trials);
    for (std::int64_t t = 0; t < cfg.trials; ++t)
      states.push_back(symris::sampling::sample_trial(p, cfg.seed,
                                                      static_cast<std::uint32_t>(t)));
    mmd.push_back(symris::geometry::mmd_sweep({{a, states}})[0]);
    std::cerr << "[geometry] ancilla=" << a << ": mean D_HS=" << mmd.back().mean
              << " std=" << mmd.back().std << "\n";
  }
  symris::stateio::write_text_file((fs::path(cfg.out_dir) / "mmd.csv").string(),
                                   symris::stateio::mmd_csv(mmd));
  {
    symris::svg::Figure fig;
    fig.title = "Mean distance to the maximally mixed state, " +
                symris::stateio::method_string(cfg.method) + ", N = " +
                std::to_string(cfg.n_qubits);
    fig.xlabel = cfg.method == symris::sampling::Method::MI ? "traced ancilla qubits"
                                                            : "ancilla dimension";
    fig.ylabel = "mean D_HS";
    symris::svg::Series mean{{}, {}, "#2c3e50", "mean", 2.0, false};
    symris::svg::Series hi{{}, {}, "#7f8c8d", "mean + std", 1.0, true};
    symris::svg::Series lo{{}, {}, "#7f8c8d", "mean - std", 1.0, true};
    for (const auto& pt : mmd) {
      mean.x.push_back(pt.ancilla);
      mean.y.push_back(pt.mean);
      hi.x.push_back(pt.ancilla);
      hi.y.push_back(pt.mean + pt.std);
      lo.x.push_back(pt.ancilla);
      lo.y.push_back(pt.mean - pt.std);
    }
    fig.series = {mean, hi, lo};
    symris::svg::write_figure(fig, (fs::path(cfg.out_dir) / "mmd.svg").string());
  }
  {
    nlohmann::json jm = nlohmann::json::array();
    for (const auto& pt : mmd)
      jm.push_back({{"ancilla", pt.ancilla}, {"mean", pt.mean}, {"std", pt.std}});
    summary["mmd"] = std::move(jm);
  }

  // Bound-entangled collections per ancilla: pairwise PDF + Dicke panels.
  nlohmann::json jbe = nlohmann::json::array();
  for (int a : cfg.ancilla) {
    symris::sampling::MethodParams p{cfg.method, cfg.n_qubits, a};
    const std::int64_t cap = static_cast<std::int64_t>(cfg.attempt_factor) * cfg.trials;
    const auto be = symris::montecarlo::collect_be(p, static_cast<int>(cfg.trials), cap,
                                                   cfg.seed, cfg.workers, ccfg);
    std::cerr << "[geometry] ancilla=" << a << ": " << be.size()
              << " bound entangled states collected\n";
    nlohmann::json entry;
    entry["ancilla"] = a;
    entry["n_be"] = be.size();
    if (be.size() < 2) {
      std::cerr << "[geometry] ancilla=" << a
                << ": fewer than 2 bound entangled states; skipping PDFs\n";
      jbe.push_back(std::move(entry));
      continue;
    }
    const std::string suffix = "_a" + std::to_string(a);
    const auto pdf = symris::geometry::pairwise_pdf(be, cfg.bins);
    symris::stateio::write_text_file(
        (fs::path(cfg.out_dir) / ("pairwise" + suffix + ".csv")).string(),
        symris::stateio::histogram_csv(pdf));
    {
      symris::svg::Figure fig;
      fig.title = "Pairwise distances of bound entangled states, ancilla = " +
                  std::to_string(a);
      fig.xlabel = "D_HS";
      fig.ylabel = "density";
      symris::svg::Series s{{}, {}, kColorBe, "", 1.8, false};
      for (std::size_t b = 0; b < pdf.density.size(); ++b) {
        s.x.push_back(0.5 * (pdf.bin_edges[b] + pdf.bin_edges[b + 1]));
        s.y.push_back(pdf.density[b]);
      }
      fig.series.push_back(std::move(s));
      symris::svg::write_figure(fig,
                                (fs::path(cfg.out_dir) / ("pairwise" + suffix + ".svg")).string());
    }

    // Sample mean/variance over the pair distances, streamed.
    double psum = 0.0, psq = 0.0;
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < be.size(); ++i)
      for (std::size_t j = i + 1; j < be.size(); ++j) {
        const double d = symris::geometry::hs_distance(be[i].matrix, be[j].matrix);
        psum += d;
        psq += d * d;
        ++pairs;
      }
    const double pmean = psum / static_cast<double>(pairs);
    const double pvar =
        pairs > 1 ? (psq - psum * pmean) / static_cast<double>(pairs - 1) : 0.0;
    entry["pair_count"] = pairs;
    entry["pair_mean"] = pmean;
    entry["pair_variance"] = pvar;

    const auto panels = symris::geometry::dicke_projector_pdfs(be, cfg.bins);
    std::vector<symris::svg::Panel> grid;
    nlohmann::json refs = nlohmann::json::array();
    for (const auto& panel : panels) {
      symris::svg::Panel sp;
      sp.ref_x = panel.reference;
      sp.label = "(" + std::to_string(panel.alpha) + "," + std::to_string(panel.beta) + ")";
      for (std::size_t b = 0; b < panel.pdf.density.size(); ++b) {
        sp.x.push_back(0.5 * (panel.pdf.bin_edges[b] + panel.pdf.bin_edges[b + 1]));
        sp.y.push_back(panel.pdf.density[b]);
      }
      grid.push_back(std::move(sp));
      refs.push_back({{"alpha", panel.alpha},
                      {"beta", panel.beta},
                      {"reference", panel.reference}});
    }
    symris::svg::write_panel_grid(
        "Distances to Dicke projectors, ancilla = " + std::to_string(a), grid,
        cfg.n_qubits + 1,
        (fs::path(cfg.out_dir) / ("dicke_grid" + suffix + ".svg")).string());
    entry["dicke_references"] = std::move(refs);
    jbe.push_back(std::move(entry));
  }
  summary["be"] = std::move(jbe);
  symris::stateio::write_text_file((fs::path(cfg.out_dir) / "geometry_summary.json").string(),
                                   summary.dump(2) + "\n");
  write_run_config(cfg, cfg.out_dir);
  std::cout << "geometry artifacts written to " << cfg.out_dir << "\n";
  return 0;
}

// ---- phase diagram -----------------------------------------------------

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path) {
  const std::string text = symris::stateio::read_text_file(path);
  CsvTable t;
  std::stringstream ss(text);
  std::string line;
  bool first = true;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

int csv_col(const CsvTable& t, const std::string& name, const std::string& path) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return static_cast<int>(i);
  throw std::invalid_argument(path + ": missing column '" + name + "'");
}

std::string boundary_kind_name(symris::phases::BoundaryKind k) {
  return k == symris::phases::BoundaryKind::NptToBe ? "NPT_to_BE" : "BE_to_SEP";
}

int cmd_phase_diagram(RunConfig cfg) {
  if (cfg.n_list.empty()) cfg.n_list = {4, 5, 6};

  // Sweep samples per N, either parsed from prior scans or generated now.
  std::map<int, std::vector<symris::phases::SweepSample>> samples;
  if (!cfg.scan_dirs.empty()) {
    for (const auto& dir : cfg.scan_dirs) {
      const std::string path = (fs::path(dir) / "scan_wide.csv").string();
      if (!fs::exists(path))
        throw symris::io_error("phase-diagram: " + path + " not found");
      const CsvTable t = read_csv(path);
      const int cn = csv_col(t, "n_qubits", path);
      const int ca = csv_col(t, "ancilla", path);
      const int cnpt = csv_col(t, "P_NPT", path);
      const int cbe = csv_col(t, "P_PPTBE", path);
      const int csep = csv_col(t, "P_SEP", path);
      for (const auto& row : t.rows) {
        symris::phases::SweepSample s;
        s.ancilla = std::stod(row[ca]);
        s.p_npt = std::stod(row[cnpt]);
        s.p_ppt_be = std::stod(row[cbe]);
        s.p_sep = std::stod(row[csep]);
        samples[std::stoi(row[cn])].push_back(s);
      }
    }
    for (auto& [n, v] : samples)
      std::sort(v.begin(), v.end(),
                [](const auto& a, const auto& b) { return a.ancilla < b.ancilla; });
    std::string missing;
    for (int n : cfg.n_list)
      if (!samples.count(n)) missing += missing.empty() ? std::to_string(n) : "," + std::to_string(n);
    if (!missing.empty())
      throw std::invalid_argument(
          "phase-diagram: no scan data for N in {" + missing + "}; produce it with e.g.\n"
          "  symris scan --method " + symris::stateio::method_string(cfg.method) +
          " --n-qubits " + missing.substr(0, missing.find(',')) +
          " --ancilla 1..40 --trials 2000 --seed " + std::to_string(cfg.seed) +
          " --out scans/N" + missing.substr(0, missing.find(',')) +
          "\nand pass every scan directory via --scans dir1,dir2,...");
  } else {
    if (cfg.ancilla.empty())
      throw std::invalid_argument(
          "phase-diagram: provide --scans with prior scan directories, or an --ancilla "
          "grid (plus --trials) to generate the scans now");
    if (cfg.trials < 1) throw std::invalid_argument("phase-diagram: --trials must be >= 1");
    for (int n : cfg.n_list) {
      RunConfig sub = cfg;
      sub.command = "scan";
      sub.n_qubits = n;
      sub.out_dir = (fs::path(cfg.out_dir) / ("scan_N" + std::to_string(n))).string();
      const auto sweep = run_sweep(sub);
      write_scan_outputs(sub, sweep, sub.out_dir);
      write_run_config(sub, sub.out_dir);
      for (const auto& pt : sweep) {
        symris::phases::SweepSample s;
        s.ancilla = pt.ancilla;
        s.p_npt = pt.ledger.probability(symris::montecarlo::Kind::NPT);
        s.p_ppt_be = pt.ledger.probability(symris::montecarlo::Kind::PPT_BE);
        s.p_sep = pt.ledger.probability(symris::montecarlo::Kind::SEP);
        samples[n].push_back(s);
      }
    }
  }

  std::vector<std::pair<double, double>> pts_nb, pts_bs;
  for (int n : cfg.n_list) {
    const auto& sweep = samples[n];
    const auto nb = symris::phases::curve_intersections(
        sweep, symris::phases::BoundaryKind::NptToBe);
    const auto bs = symris::phases::curve_intersections(
        sweep, symris::phases::BoundaryKind::BeToSep);
    if (nb.multiplicity > 1)
      std::cerr << "[phase-diagram] N=" << n << ": NPT/BE curves cross " << nb.multiplicity
                << " times (shot noise); using the first crossing\n";
    if (bs.multiplicity > 1)
      std::cerr << "[phase-diagram] N=" << n << ": BE/SEP curves cross " << bs.multiplicity
                << " times (shot noise); using the first crossing\n";
    if (nb.exists) pts_nb.emplace_back(n, nb.ancilla);
    else std::cerr << "[phase-diagram] N=" << n << ": no NPT/BE crossing in range\n";
    if (bs.exists) pts_bs.emplace_back(n, bs.ancilla);
    else std::cerr << "[phase-diagram] N=" << n << ": no BE/SEP crossing in range\n";
  }

  const auto lin_nb = symris::phases::fit_boundary(
      symris::phases::BoundaryKind::NptToBe, pts_nb, symris::phases::FitModel::Linear);
  const auto quad_bs = symris::phases::fit_boundary(
      symris::phases::BoundaryKind::BeToSep, pts_bs, symris::phases::FitModel::Quadratic);
  const auto lin_bs = symris::phases::fit_boundary(
      symris::phases::BoundaryKind::BeToSep, pts_bs, symris::phases::FitModel::Linear);

  nlohmann::json out;
  out["method"] = symris::stateio::method_string(cfg.method);
  out["n_list"] = cfg.n_list;
  auto boundary_json = [](const symris::phases::PhaseBoundary& b) {
    nlohmann::json j;
    j["kind"] = boundary_kind_name(b.kind);
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [n, a] : b.points) pts.push_back({n, a});
    j["points"] = std::move(pts);
    j["model"] = b.model == symris::phases::FitModel::Linear ? "linear" : "quadratic";
    j["coefficients"] = b.coefficients;
    j["rss"] = b.rss;
    return j;
  };
  nlohmann::json jb = nlohmann::json::array();
  jb.push_back(boundary_json(lin_nb));
  {
    nlohmann::json j = boundary_json(quad_bs);
    j["linear_rss"] = lin_bs.rss;  // model-comparison reference
    jb.push_back(std::move(j));
  }
  out["boundaries"] = std::move(jb);
  fs::create_directories(cfg.out_dir);
  symris::stateio::write_text_file((fs::path(cfg.out_dir) / "boundaries.json").string(),
                                   out.dump(2) + "\n");

  // Fig-4-style rendering: shaded regions split by the fitted curves.
  {
    symris::svg::Figure fig;
    fig.title = "Entanglement phase diagram, " + symris::stateio::method_string(cfg.method);
    fig.xlabel = "qubits N";
    fig.ylabel = cfg.method == symris::sampling::Method::MI ? "traced ancilla qubits"
                                                            : "ancilla dimension";
    const double nmin = static_cast<double>(cfg.n_list.front()) - 0.3;
    const double nmax = static_cast<double>(cfg.n_list.back()) + 0.3;
    double ytop = 1.0;
    std::vector<double> gx;
    for (int i = 0; i <= 60; ++i) gx.push_back(nmin + (nmax - nmin) * i / 60.0);
    symris::svg::Series c_nb{{}, {}, kColorNpt, "NPT / PPT-BE boundary (linear)", 2.0, false};
    symris::svg::Series c_bs{{}, {}, kColorSep, "PPT-BE / SEP boundary (quadratic)", 2.0,
                             false};
    for (double x : gx) {
      const double y1 = std::max(0.0, polyval(lin_nb.coefficients, x));
      const double y2 = std::max(0.0, polyval(quad_bs.coefficients, x));
      c_nb.x.push_back(x);
      c_nb.y.push_back(y1);
      c_bs.x.push_back(x);
      c_bs.y.push_back(y2);
      ytop = std::max({ytop, y1, y2});
    }
    ytop *= 1.25;
    symris::svg::Polygon npt_region{{}, {}, kBandNpt, 0.5};
    symris::svg::Polygon be_region{{}, {}, kBandBe, 0.5};
    symris::svg::Polygon sep_region{{}, {}, kBandSep, 0.5};
    for (std::size_t i = 0; i < gx.size(); ++i) {
      npt_region.x.push_back(gx[i]);
      npt_region.y.push_back(c_nb.y[i]);
      be_region.x.push_back(gx[i]);
      be_region.y.push_back(c_nb.y[i]);
      sep_region.x.push_back(gx[i]);
      sep_region.y.push_back(c_bs.y[i]);
    }
    npt_region.x.push_back(nmax);
    npt_region.y.push_back(0.0);
    npt_region.x.push_back(nmin);
    npt_region.y.push_back(0.0);
    for (std::size_t i = gx.size(); i-- > 0;) {
      be_region.x.push_back(gx[i]);
      be_region.y.push_back(c_bs.y[i]);
    }
    sep_region.x.push_back(nmax);
    sep_region.y.push_back(ytop);
    sep_region.x.push_back(nmin);
    sep_region.y.push_back(ytop);
    fig.polygons = {npt_region, be_region, sep_region};
    for (const auto& [n, a] : pts_nb)
      fig.markers.push_back({n, a, kColorNpt, 4.0});
    for (const auto& [n, a] : pts_bs)
      fig.markers.push_back({n, a, kColorSep, 4.0});
    fig.series = {c_nb, c_bs};
    symris::svg::write_figure(fig, (fs::path(cfg.out_dir) / "phase_diagram.svg").string());
  }
  write_run_config(cfg, cfg.out_dir);
  std::cout << "phase diagram written to " << cfg.out_dir << "\n";
  return 0;
}

// ---- flag plumbing -----------------------------------------------------

struct Flags {
  std::string config, method, ancilla, n_list, scans, out, state;
  int n_qubits = 4, workers = 1, budget = 2000, bins = 200, attempt_factor = 50;
  std::int64_t trials = 1000, trial = 0, min_count = 10;
  std::uint64_t seed = 1;
  double tau_ppt = 1e-9, eps_sep = 1e-6, eps_ent = 1e-4;
};

struct CommonOpts {
  CLI::Option *config = nullptr, *method = nullptr, *n_qubits = nullptr, *ancilla = nullptr,
              *n_list = nullptr, *scans = nullptr, *trials = nullptr, *seed = nullptr,
              *workers = nullptr, *out = nullptr, *state = nullptr, *trial = nullptr,
              *tau_ppt = nullptr, *eps_sep = nullptr, *eps_ent = nullptr, *budget = nullptr,
              *min_count = nullptr, *bins = nullptr, *attempt_factor = nullptr;
};

CommonOpts add_common(CLI::App* sub, Flags& f) {
  CommonOpts o;
  o.config = sub->add_option("--config", f.config, "key = value config file; flags override");
  o.method = sub->add_option("--method", f.method, "ensemble: MI or MII");
  o.n_qubits = sub->add_option("--n-qubits", f.n_qubits, "number of system qubits (>= 2)");
  o.ancilla =
      sub->add_option("--ancilla", f.ancilla, "ancilla grid: 12 | 3,5,9 | 1..40 | 1..40:2");
  o.trials = sub->add_option("--trials", f.trials, "trials per sweep point");
  o.seed = sub->add_option("--seed", f.seed, "master seed");
  o.workers = sub->add_option("--workers", f.workers, "worker threads (0 = auto)");
  o.out = sub->add_option("--out", f.out, "output directory");
  o.tau_ppt = sub->add_option("--tau-ppt", f.tau_ppt, "PPT eigenvalue tolerance");
  o.eps_sep = sub->add_option("--eps-sep", f.eps_sep, "separability residual tolerance");
  o.eps_ent = sub->add_option("--eps-ent", f.eps_ent, "entanglement residual threshold");
  o.budget = sub->add_option("--budget", f.budget, "separability certifier iteration budget");
  o.min_count =
      sub->add_option("--min-count", f.min_count, "refined-label floor (p_min = count/n)");
  return o;
}

void apply_overrides(RunConfig& cfg, const Flags& f, const CommonOpts& o) {
  if (o.config && o.config->count())
    for (const auto& [k, v] : symris::runconfig::parse_kv_file(f.config)) {
      if (k == "version" || k == "command") continue;  // replaying a resolved config
      symris::runconfig::apply_kv(cfg, k, v);
    }
  if (o.method && o.method->count()) cfg.method = symris::stateio::method_from_string(f.method);
  if (o.n_qubits && o.n_qubits->count()) cfg.n_qubits = f.n_qubits;
  if (o.ancilla && o.ancilla->count()) cfg.ancilla = symris::runconfig::parse_grid(f.ancilla);
  if (o.n_list && o.n_list->count()) cfg.n_list = symris::runconfig::parse_int_list(f.n_list);
  if (o.scans && o.scans->count()) {
    cfg.scan_dirs.clear();
    std::stringstream ss(f.scans);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) cfg.scan_dirs.push_back(item);
  }
  if (o.trials && o.trials->count()) cfg.trials = f.trials;
  if (o.seed && o.seed->count()) cfg.seed = f.seed;
  if (o.workers && o.workers->count()) cfg.workers = f.workers;
  if (o.out && o.out->count()) cfg.out_dir = f.out;
  if (o.state && o.state->count()) cfg.state_file = f.state;
  if (o.trial && o.trial->count()) cfg.trial_index = f.trial;
  if (o.tau_ppt && o.tau_ppt->count()) cfg.tau_ppt = f.tau_ppt;
  if (o.eps_sep && o.eps_sep->count()) cfg.eps_sep = f.eps_sep;
  if (o.eps_ent && o.eps_ent->count()) cfg.eps_ent = f.eps_ent;
  if (o.budget && o.budget->count()) cfg.budget = f.budget;
  if (o.min_count && o.min_count->count()) cfg.min_count = f.min_count;
  if (o.bins && o.bins->count()) cfg.bins = f.bins;
  if (o.attempt_factor && o.attempt_factor->count()) cfg.attempt_factor = f.attempt_factor;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetric random induced states: sampling, classification, and studies"};
  app.set_version_flag("--version", symris::kVersion);
  app.require_subcommand(1);

  Flags f;
  std::map<const CLI::App*, CommonOpts> opts;

  CLI::App* scan = app.add_subcommand("scan", "outcome probabilities over an ancilla grid");
  opts[scan] = add_common(scan, f);

  CLI::App* classify =
      app.add_subcommand("classify", "classify one state (file or generator spec)");
  {
    CommonOpts o = add_common(classify, f);
    o.state = classify->add_option("--state", f.state, "state JSON file");
    o.trial = classify->add_option("--trial", f.trial, "generator trial index");
    opts[classify] = o;
  }

  CLI::App* convergence =
      app.add_subcommand("convergence", "checkpointed running probabilities at one point");
  opts[convergence] = add_common(convergence, f);

  CLI::App* geometry =
      app.add_subcommand("geometry", "Hilbert-Schmidt distance studies per ancilla");
  {
    CommonOpts o = add_common(geometry, f);
    o.bins = geometry->add_option("--bins", f.bins, "histogram bins");
    o.attempt_factor = geometry->add_option(
        "--attempt-factor", f.attempt_factor,
        "bound-entangled collection cap = factor * trials");
    opts[geometry] = o;
  }

  CLI::App* phase =
      app.add_subcommand("phase-diagram", "probability-curve crossings and boundary fits");
  {
    CommonOpts o = add_common(phase, f);
    o.n_list = phase->add_option("--n-list", f.n_list, "qubit numbers, e.g. 4,5,6");
    o.scans = phase->add_option("--scans", f.scans,
                                "comma-separated scan output directories to reuse");
    opts[phase] = o;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunConfig cfg;
  cfg.command = sub->get_name();
  try {
    apply_overrides(cfg, f, opts.at(sub));
    if (sub == scan) return cmd_scan(cfg);
    if (sub == classify) return cmd_classify(cfg);
    if (sub == convergence) return cmd_convergence(cfg);
    if (sub == geometry) return cmd_geometry(cfg);
    return cmd_phase_diagram(cfg);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const symris::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const symris::numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
