#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "symris/sampling.hpp"
#include "symris/septest.hpp"
#include "symris/spectra.hpp"

namespace symris::montecarlo {

enum class Kind { NPT, PPT_BE, SEP, UNK };

enum class Tag { Plain, All, X };

// Classification outcome of one trial.  ppt_set lists the PPT cut sizes and
// is nonempty exactly for PPT_BE outcomes.
struct OutcomeClass {
  Kind kind = Kind::UNK;
  std::vector<int> ppt_set;  // sorted ascending

  friend bool operator==(const OutcomeClass& a, const OutcomeClass& b) {
    return a.kind == b.kind && a.ppt_set == b.ppt_set;
  }
  friend bool operator<(const OutcomeClass& a, const OutcomeClass& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.ppt_set < b.ppt_set;
  }
};

// Derived label: All when every cut is PPT; X when every cut but the
// penultimate (k = floor(N/2) - 1) is PPT, which needs at least two cuts.
Tag tag_of(const OutcomeClass& oc, int n_qubits);

struct ClassifyConfig {
  double tau_ppt = 1e-9;
  septest::SepConfig sep;
};

// Full diagnostic record of one classification.
struct Verdict {
  OutcomeClass outcome;
  spectra::PartitionFlags flags;
  std::optional<septest::SepCertificate> certificate;  // present iff certify ran
};

Verdict classify_state_full(const SymState& rho, const ClassifyConfig& cfg = {});
OutcomeClass classify_state(const SymState& rho, const ClassifyConfig& cfg = {});

// Generates one state from the ensemble and classifies it.
OutcomeClass classify_trial(const sampling::MethodParams& params, RngStream& rng,
                            const ClassifyConfig& cfg = {});

struct CheckpointRow {
  std::int64_t n = 0;
  double p_npt = 0, p_ppt_be = 0, p_sep = 0, p_unk = 0;
};

struct TrialLedger {
  sampling::MethodParams params;
  std::int64_t n = 0;
  std::map<OutcomeClass, std::int64_t> counts;
  std::vector<CheckpointRow> checkpoints;

  std::int64_t kind_count(Kind k) const;
  double probability(Kind k) const;  // n_K / n
};

// Checkpoint schedule: powers of two up to 8192, then every 2000, then n.
std::vector<std::int64_t> checkpoint_schedule(std::int64_t n);

// Runs n independent trials on substreams 0..n-1, optionally across worker
// threads.  Counts and checkpoints are aggregated in trial-index order, so
// the ledger is identical for any worker count.
TrialLedger estimate(const sampling::MethodParams& params, std::int64_t n, std::uint64_t seed,
                     int workers = 1, const ClassifyConfig& cfg = {});

struct SweepPoint {
  int ancilla = 0;
  TrialLedger ledger;
};

// Generates trials until m_target PPT-BE states are collected (or the attempt
// cap is hit) and returns them in trial-index order.  Work proceeds in fixed
// blocks so the result is identical for any worker count.
std::vector<SymState> collect_be(const sampling::MethodParams& params, int m_target,
                                 std::int64_t max_attempts, std::uint64_t seed,
                                 int workers = 1, const ClassifyConfig& cfg = {});

struct LabelAppearance {
  std::vector<int> ppt_set;
  int ancilla = 0;      // smallest ancilla whose empirical probability clears the floor
  double probability = 0.0;
};

// First-appearance order of the refined PPT-BE labels along an ascending
// ancilla sweep.  A label is reported once it is seen at least min_count
// times at some sweep point (the p_min = min_count/n floor).
std::vector<LabelAppearance> refine_order(const std::vector<SweepPoint>& sweep,
                                          std::int64_t min_count = 10);

}
