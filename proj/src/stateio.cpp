#include "symris/stateio.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "symris/errors.hpp"

namespace symris::stateio {

nlohmann::json state_to_json(const SymState& s) {
  nlohmann::json m = nlohmann::json::array();
  for (int r = 0; r < s.matrix.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < s.matrix.cols(); ++c)
      row.push_back({s.matrix(r, c).real(), s.matrix(r, c).imag()});
    m.push_back(std::move(row));
  }
  return nlohmann::json{{"n_qubits", s.n_qubits}, {"matrix", std::move(m)}};
}

SymState state_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n_qubits") || !j.contains("matrix"))
    throw std::invalid_argument("state document must contain n_qubits and matrix");
  if (!j["n_qubits"].is_number_integer())
    throw std::invalid_argument("state document: n_qubits must be an integer");
  SymState s;
  s.n_qubits = j["n_qubits"].get<int>();
  const int d = s.n_qubits + 1;
  const auto& m = j["matrix"];
  if (!m.is_array() || static_cast<int>(m.size()) != d)
    throw std::invalid_argument("state document: matrix must have N+1 rows");
  s.matrix.resize(d, d);
  for (int r = 0; r < d; ++r) {
    const auto& row = m[r];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw std::invalid_argument("state document: matrix rows must have N+1 entries");
    for (int c = 0; c < d; ++c) {
      const auto& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw std::invalid_argument("state document: entries must be [re, im] pairs");
      s.matrix(r, c) = {e[0].get<double>(), e[1].get<double>()};
    }
  }
  return s;
}

SymState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open state file " + path);
  nlohmann::json j;
  in >> j;  // malformed content raises nlohmann::json::parse_error
  return state_from_json(j);
}

void save_state(const SymState& s, const std::string& path) {
  write_text_file(path, state_to_json(s).dump(2) + "\n");
}

std::string method_string(sampling::Method m) {
  return m == sampling::Method::MI ? "MI" : "MII";
}

sampling::Method method_from_string(const std::string& s) {
  if (s == "MI" || s == "mi" || s == "1") return sampling::Method::MI;
  if (s == "MII" || s == "mii" || s == "2") return sampling::Method::MII;
  throw std::invalid_argument("unknown method '" + s + "' (expected MI or MII)");
}

std::string kind_string(montecarlo::Kind k) {
  switch (k) {
    case montecarlo::Kind::NPT: return "NPT";
    case montecarlo::Kind::PPT_BE: return "PPT_BE";
    case montecarlo::Kind::SEP: return "SEP";
    case montecarlo::Kind::UNK: return "UNK";
  }
  return "UNK";
}

std::string tag_string(montecarlo::Tag t) {
  switch (t) {
    case montecarlo::Tag::Plain: return "plain";
    case montecarlo::Tag::All: return "all";
    case montecarlo::Tag::X: return "x";
  }
  return "plain";
}

std::string label_string(const montecarlo::OutcomeClass& oc) {
  if (oc.kind != montecarlo::Kind::PPT_BE) return kind_string(oc.kind);
  std::string s = "PPTBE";
  for (int k : oc.ppt_set) s += "_" + std::to_string(k);
  return s;
}

nlohmann::json certificate_to_json(const septest::SepCertificate& cert) {
  nlohmann::json j;
  switch (cert.verdict) {
    case septest::Verdict::SEP: j["verdict"] = "SEP"; break;
    case septest::Verdict::ENT: j["verdict"] = "ENT"; break;
    case septest::Verdict::UNK: j["verdict"] = "UNK"; break;
  }
  j["residual"] = cert.residual;
  if (cert.verdict == septest::Verdict::SEP) {
    nlohmann::json dec = nlohmann::json::array();
    for (const auto& p : cert.decomposition)
      dec.push_back({{"theta", p.theta}, {"phi", p.phi}, {"weight", p.weight}});
    j["decomposition"] = std::move(dec);
  }
  if (cert.witness) {
    nlohmann::json w;
    nlohmann::json m = nlohmann::json::array();
    for (int r = 0; r < cert.witness->matrix.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < cert.witness->matrix.cols(); ++c)
        row.push_back({cert.witness->matrix(r, c).real(), cert.witness->matrix(r, c).imag()});
      m.push_back(std::move(row));
    }
    w["matrix"] = std::move(m);
    w["verified_min"] = cert.witness->verified_min;
    w["eps_grid"] = cert.witness->eps_grid;
    w["expectation"] = cert.witness->expectation;
    j["witness"] = std::move(w);
  }
  return j;
}

nlohmann::json verdict_to_json(const montecarlo::Verdict& v, int n_qubits) {
  nlohmann::json j;
  j["n_qubits"] = n_qubits;
  j["outcome"] = kind_string(v.outcome.kind);
  j["label"] = label_string(v.outcome);
  j["tag"] = tag_string(montecarlo::tag_of(v.outcome, n_qubits));
  j["ppt_set"] = v.outcome.ppt_set;
  nlohmann::json flags = nlohmann::json::array();
  for (int k = 1; k <= v.flags.n_cuts(); ++k)
    flags.push_back({{"k", k},
                     {"ppt", static_cast<bool>(v.flags.ppt[k - 1])},
                     {"min_eig", v.flags.min_eig[k - 1]}});
  j["flags"] = std::move(flags);
  j["certificate"] = v.certificate ? certificate_to_json(*v.certificate) : nlohmann::json();
  return j;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw io_error("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

double binomial_stderr(double p, std::int64_t n) {
  return n > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0;
}

}  // namespace

std::string sweep_long_csv(sampling::Method method, int n_qubits,
                           const std::vector<montecarlo::SweepPoint>& sweep) {
  std::string out = "method,n_qubits,ancilla,n,outcome,probability,stderr\n";
  const montecarlo::Kind kinds[] = {montecarlo::Kind::NPT, montecarlo::Kind::PPT_BE,
                                    montecarlo::Kind::SEP, montecarlo::Kind::UNK};
  for (const auto& pt : sweep) {
    for (montecarlo::Kind k : kinds) {
      const double p = pt.ledger.probability(k);
      out += method_string(method) + "," + std::to_string(n_qubits) + "," +
             std::to_string(pt.ancilla) + "," + std::to_string(pt.ledger.n) + "," +
             kind_string(k) + "," + fmt_double(p) + "," +
             fmt_double(binomial_stderr(p, pt.ledger.n)) + "\n";
    }
  }
  return out;
}

std::string sweep_wide_csv(sampling::Method method, int n_qubits,
                           const std::vector<montecarlo::SweepPoint>& sweep) {
  std::set<std::vector<int>> labels;
  for (const auto& pt : sweep)
    for (const auto& [oc, cnt] : pt.ledger.counts)
      if (oc.kind == montecarlo::Kind::PPT_BE) labels.insert(oc.ppt_set);
  std::string out = "method,n_qubits,ancilla,n,P_NPT,P_PPTBE,P_SEP,P_UNK";
  for (const auto& set : labels)
    out += "," + label_string({montecarlo::Kind::PPT_BE, set});
  out += "\n";
  for (const auto& pt : sweep) {
    out += method_string(method) + "," + std::to_string(n_qubits) + "," +
           std::to_string(pt.ancilla) + "," + std::to_string(pt.ledger.n);
    out += "," + fmt_double(pt.ledger.probability(montecarlo::Kind::NPT));
    out += "," + fmt_double(pt.ledger.probability(montecarlo::Kind::PPT_BE));
    out += "," + fmt_double(pt.ledger.probability(montecarlo::Kind::SEP));
    out += "," + fmt_double(pt.ledger.probability(montecarlo::Kind::UNK));
    for (const auto& set : labels) {
      const auto it = pt.ledger.counts.find({montecarlo::Kind::PPT_BE, set});
      const std::int64_t cnt = it == pt.ledger.counts.end() ? 0 : it->second;
      out += "," + fmt_double(static_cast<double>(cnt) / static_cast<double>(pt.ledger.n));
    }
    out += "\n";
  }
  return out;
}

std::string checkpoints_csv(const montecarlo::TrialLedger& ledger) {
  std::string out = "n,P_NPT,P_PPTBE,P_SEP,P_UNK,dNPT,dPPTBE,dSEP,dUNK\n";
  const montecarlo::CheckpointRow* prev = nullptr;
  for (const auto& row : ledger.checkpoints) {
    out += std::to_string(row.n) + "," + fmt_double(row.p_npt) + "," +
           fmt_double(row.p_ppt_be) + "," + fmt_double(row.p_sep) + "," +
           fmt_double(row.p_unk);
    if (prev) {
      out += "," + fmt_double(std::abs(row.p_npt - prev->p_npt)) + "," +
             fmt_double(std::abs(row.p_ppt_be - prev->p_ppt_be)) + "," +
             fmt_double(std::abs(row.p_sep - prev->p_sep)) + "," +
             fmt_double(std::abs(row.p_unk - prev->p_unk));
    } else {
      out += ",,,,";
    }
    out += "\n";
    prev = &row;
  }
  return out;
}

std::string histogram_csv(const geometry::HistogramPDF& h) {
  std::string out = "bin_left,bin_right,density\n";
  for (std::size_t i = 0; i < h.density.size(); ++i)
    out += fmt_double(h.bin_edges[i]) + "," + fmt_double(h.bin_edges[i + 1]) + "," +
           fmt_double(h.density[i]) + "\n";
  return out;
}

std::string mmd_csv(const std::vector<geometry::MmdPoint>& points) {
  std::string out = "ancilla,mean,std\n";
  for (const auto& p : points)
    out += std::to_string(p.ancilla) + "," + fmt_double(p.mean) + "," + fmt_double(p.std) +
           "\n";
  return out;
}

}
