#include "symris/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <string>
#include <thread>

#include "symris/errors.hpp"

namespace symris::montecarlo {

Tag tag_of(const OutcomeClass& oc, int n_qubits) {
  if (oc.kind != Kind::PPT_BE) return Tag::Plain;
  const int cuts = n_qubits / 2;
  std::vector<int> all(cuts);
  for (int k = 1; k <= cuts; ++k) all[k - 1] = k;
  if (oc.ppt_set == all) return Tag::All;
  if (cuts >= 2) {
    std::vector<int> x = all;
    x.erase(std::find(x.begin(), x.end(), cuts - 1));
    if (oc.ppt_set == x) return Tag::X;
  }
  return Tag::Plain;
}

Verdict classify_state_full(const SymState& rho, const ClassifyConfig& cfg) {
  Verdict v;
  v.flags = spectra::ppt_flags(rho, cfg.tau_ppt);
  const int cuts = v.flags.n_cuts();
  std::vector<int> ppt_cuts;
  for (int k = 1; k <= cuts; ++k)
    if (v.flags.ppt[k - 1]) ppt_cuts.push_back(k);
  if (ppt_cuts.empty()) {
    v.outcome.kind = Kind::NPT;
    return v;
  }
  if (static_cast<int>(ppt_cuts.size()) < cuts) {
    // Some cut is NPT, so the state is genuinely entangled (symmetric
    // shortcut) while bound entangled across the PPT cuts.
    v.outcome.kind = Kind::PPT_BE;
    v.outcome.ppt_set = std::move(ppt_cuts);
    return v;
  }
  v.certificate = septest::certify(rho, v.flags, cfg.sep);
  switch (v.certificate->verdict) {
    case septest::Verdict::SEP:
      v.outcome.kind = Kind::SEP;
      break;
    case septest::Verdict::ENT:
      v.outcome.kind = Kind::PPT_BE;
      v.outcome.ppt_set = std::move(ppt_cuts);
      break;
    case septest::Verdict::UNK:
      v.outcome.kind = Kind::UNK;
      break;
  }
  return v;
}

OutcomeClass classify_state(const SymState& rho, const ClassifyConfig& cfg) {
  return classify_state_full(rho, cfg).outcome;
}

OutcomeClass classify_trial(const sampling::MethodParams& params, RngStream& rng,
                            const ClassifyConfig& cfg) {
  const SymState rho = params.method == sampling::Method::MI
                           ? sampling::ris_method1(params.n_qubits, params.ancilla, rng)
                           : sampling::ris_method2(params.n_qubits, params.ancilla, rng);
  return classify_state(rho, cfg);
}

std::int64_t TrialLedger::kind_count(Kind k) const {
  std::int64_t c = 0;
  for (const auto& [oc, cnt] : counts)
    if (oc.kind == k) c += cnt;
  return c;
}

double TrialLedger::probability(Kind k) const {
  return n == 0 ? 0.0 : static_cast<double>(kind_count(k)) / static_cast<double>(n);
}

std::vector<std::int64_t> checkpoint_schedule(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("checkpoint_schedule: n must be >= 1");
  std::vector<std::int64_t> cp;
  for (std::int64_t p = 1; p <= n && p <= 8192; p *= 2) cp.push_back(p);
  for (std::int64_t m = 10000; m <= n; m += 2000) cp.push_back(m);
  if (cp.back() != n) cp.push_back(n);
  return cp;
}

TrialLedger estimate(const sampling::MethodParams& params, std::int64_t n, std::uint64_t seed,
                     int workers, const ClassifyConfig& cfg) {
  if (n < 1) throw std::invalid_argument("estimate: n must be >= 1");
  sampling::validate_params(params);
  if (workers < 1) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  std::vector<OutcomeClass> outcomes(n);
  auto run_trial = [&](std::int64_t idx) {
    try {
      RngStream rng = sampling::trial_stream(params, seed, static_cast<std::uint32_t>(idx));
      outcomes[idx] = classify_trial(params, rng, cfg);
    } catch (const std::exception& e) {
      throw numerical_error("trial " + std::to_string(idx) + ": " + e.what());
    }
  };

  if (workers == 1 || n == 1) {
    for (std::int64_t i = 0; i < n; ++i) run_trial(i);
  } else {
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    std::vector<std::string> errors(workers);
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        while (!failed.load(std::memory_order_relaxed)) {
          const std::int64_t idx = next.fetch_add(1);
          if (idx >= n) break;
          try {
            run_trial(idx);
          } catch (const std::exception& e) {
            errors[t] = e.what();
            failed.store(true);
            break;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) {
      for (const auto& msg : errors)
        if (!msg.empty()) throw numerical_error(msg);
      throw numerical_error("estimate: a worker failed without a message");
    }
  }

  TrialLedger ledger;
  ledger.params = params;
  ledger.n = n;
  const std::vector<std::int64_t> schedule = checkpoint_schedule(n);
  std::size_t next_cp = 0;
  std::int64_t knpt = 0, kbe = 0, ksep = 0, kunk = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    ++ledger.counts[outcomes[i]];
    switch (outcomes[i].kind) {
      case Kind::NPT: ++knpt; break;
      case Kind::PPT_BE: ++kbe; break;
      case Kind::SEP: ++ksep; break;
      case Kind::UNK: ++kunk; break;
    }
    if (next_cp < schedule.size() && i + 1 == schedule[next_cp]) {
      const double m = static_cast<double>(i + 1);
      ledger.checkpoints.push_back(
          {i + 1, knpt / m, kbe / m, ksep / m, kunk / m});
      ++next_cp;
    }
  }
  return ledger;
}

std::vector<SymState> collect_be(const sampling::MethodParams& params, int m_target,
                                 std::int64_t max_attempts, std::uint64_t seed, int workers,
                                 const ClassifyConfig& cfg) {
  if (m_target < 1) throw std::invalid_argument("collect_be: m_target must be >= 1");
  if (max_attempts < m_target)
    throw std::invalid_argument("collect_be: max_attempts must be >= m_target");
  sampling::validate_params(params);
  if (workers < 1) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  std::vector<SymState> collected;
  collected.reserve(m_target);
  const std::int64_t block = std::max<std::int64_t>(256, 32LL * workers);
  for (std::int64_t lo = 0; lo < max_attempts && static_cast<int>(collected.size()) < m_target;
       lo += block) {
    const std::int64_t hi = std::min(lo + block, max_attempts);
    std::vector<SymState> states(hi - lo);
    std::vector<char> keep(hi - lo, 0);
    auto run_trial = [&](std::int64_t idx) {
      try {
        RngStream rng = sampling::trial_stream(params, seed, static_cast<std::uint32_t>(idx));
        SymState rho = params.method == sampling::Method::MI
                           ? sampling::ris_method1(params.n_qubits, params.ancilla, rng)
                           : sampling::ris_method2(params.n_qubits, params.ancilla, rng);
        if (classify_state(rho, cfg).kind == Kind::PPT_BE) {
          keep[idx - lo] = 1;
          states[idx - lo] = std::move(rho);
        }
      } catch (const std::exception& e) {
        throw numerical_error("trial " + std::to_string(idx) + ": " + e.what());
      }
    };
    if (workers == 1) {
      for (std::int64_t i = lo; i < hi; ++i) run_trial(i);
    } else {
      std::atomic<std::int64_t> next{lo};
      std::atomic<bool> failed{false};
      std::vector<std::thread> pool;
      std::vector<std::string> errors(workers);
      for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
          while (!failed.load(std::memory_order_relaxed)) {
            const std::int64_t idx = next.fetch_add(1);
            if (idx >= hi) break;
            try {
              run_trial(idx);
            } catch (const std::exception& e) {
              errors[t] = e.what();
              failed.store(true);
              break;
            }
          }
        });
      }
      for (auto& th : pool) th.join();
      if (failed.load()) {
        for (const auto& msg : errors)
          if (!msg.empty()) throw numerical_error(msg);
        throw numerical_error("collect_be: a worker failed without a message");
      }
    }
    for (std::int64_t i = 0; i < hi - lo && static_cast<int>(collected.size()) < m_target; ++i)
      if (keep[i]) collected.push_back(std::move(states[i]));
  }
  return collected;
}

std::vector<LabelAppearance> refine_order(const std::vector<SweepPoint>& sweep,
                                          std::int64_t min_count) {
  std::vector<const SweepPoint*> order;
  for (const SweepPoint& pt : sweep) order.push_back(&pt);
  std::sort(order.begin(), order.end(),
            [](const SweepPoint* a, const SweepPoint* b) { return a->ancilla < b->ancilla; });
  std::map<std::vector<int>, LabelAppearance> first;
  for (const SweepPoint* ptr : order) {
    const SweepPoint& pt = *ptr;
    for (const auto& [oc, cnt] : pt.ledger.counts) {
      if (oc.kind != Kind::PPT_BE || cnt < min_count) continue;
      if (first.count(oc.ppt_set)) continue;
      first[oc.ppt_set] = {oc.ppt_set, pt.ancilla,
                           static_cast<double>(cnt) / static_cast<double>(pt.ledger.n)};
    }
  }
  std::vector<LabelAppearance> out;
  for (auto& [set, la] : first) out.push_back(la);
  std::sort(out.begin(), out.end(), [](const LabelAppearance& a, const LabelAppearance& b) {
    if (a.ancilla != b.ancilla) return a.ancilla < b.ancilla;
    return a.ppt_set < b.ppt_set;
  });
  return out;
}

}
