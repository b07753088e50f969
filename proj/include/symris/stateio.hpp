#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "symris/geometry.hpp"
#include "symris/montecarlo.hpp"
#include "symris/sampling.hpp"
#include "symris/septest.hpp"
#include "symris/symspace.hpp"

namespace symris::stateio {

// State document: {"n_qubits": N, "matrix": [[[re, im], ...], ...]} row-major
// in the Dicke basis.
nlohmann::json state_to_json(const SymState& s);
SymState state_from_json(const nlohmann::json& j);  // invalid structure -> std::invalid_argument

SymState load_state(const std::string& path);  // missing/unreadable file -> io_error
void save_state(const SymState& s, const std::string& path);

std::string method_string(sampling::Method m);
sampling::Method method_from_string(const std::string& s);
std::string kind_string(montecarlo::Kind k);
std::string tag_string(montecarlo::Tag t);
// "NPT", "SEP", "UNK", or "PPTBE_i1_i2_..." for PPT_BE outcomes.
std::string label_string(const montecarlo::OutcomeClass& oc);

nlohmann::json certificate_to_json(const septest::SepCertificate& cert);
nlohmann::json verdict_to_json(const montecarlo::Verdict& v, int n_qubits);

// Deterministic decimal formatting used by every CSV cell (%.12g).
std::string fmt_double(double x);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Long format: one row per (ancilla, outcome kind) with binomial stderr.
std::string sweep_long_csv(sampling::Method method, int n_qubits,
                           const std::vector<montecarlo::SweepPoint>& sweep);
// Wide format: per-kind probabilities plus one column per refined PPT-BE
// label observed anywhere in the sweep.
std::string sweep_wide_csv(sampling::Method method, int n_qubits,
                           const std::vector<montecarlo::SweepPoint>& sweep);
// Checkpoint series with absolute successive differences (blank on the first
// row).
std::string checkpoints_csv(const montecarlo::TrialLedger& ledger);
std::string histogram_csv(const geometry::HistogramPDF& h);
std::string mmd_csv(const std::vector<geometry::MmdPoint>& points);

}
