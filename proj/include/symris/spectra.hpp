#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "symris/symspace.hpp"

namespace symris::spectra {

// Per-bipartition PPT verdicts for the cuts k | N-k, k = 1..floor(N/2).
// ppt[k-1] is true when the partial transpose across the k-cut is positive
// semidefinite up to tau_ppt; min_eig[k-1] holds its smallest eigenvalue.
struct PartitionFlags {
  int n_qubits = 1;
  std::vector<bool> ppt;
  std::vector<double> min_eig;

  int n_cuts() const { return n_qubits / 2; }
  bool all_ppt() const;
  bool any_npt() const;
};

// Partial transpose of the bipartite embedding across its left block:
// out[(a,b),(c,d)] = in[(c,b),(a,d)].
Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& m, const BipartiteEmbedding& emb);

// Partial transpose of rho across the k-cut, as a (k+1)(N-k+1) matrix.
Eigen::MatrixXcd partial_transpose(const SymState& rho, int k);

// Smallest eigenvalue of the partial transpose of rho across the k-cut.
double min_pt_eigenvalue(const SymState& rho, int k);

// Evaluates every bipartition.  tau_ppt is the PSD slack: a cut is PPT when
// its smallest partial-transpose eigenvalue is >= -tau_ppt.
PartitionFlags ppt_flags(const SymState& rho, double tau_ppt = 1e-9);

}
