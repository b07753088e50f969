#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace symris {

// Dicke basis state label: alpha excitations among n_qubits.
struct DickeIndex {
  int alpha = 0;
  int n_qubits = 1;
};

// Symmetric N-qubit density matrix in the Dicke basis,
// rho(a,b) = <D^a_N| rho |D^b_N>.
struct SymState {
  int n_qubits = 1;
  Eigen::MatrixXcd matrix;

  int dim() const { return n_qubits + 1; }
};

struct StateTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
};

// Largest |rho - rho^dagger| entry.
double hermiticity_residual(const Eigen::MatrixXcd& m);

// Throws std::invalid_argument naming the violated invariant
// (hermiticity, unit trace, positive semidefiniteness).
void validate_state(const SymState& rho, const StateTolerances& tol = {});

// Exact binomial triangle C(n,m) for 0 <= m <= n <= n_max. Requires
// n_max <= 64; an entry that would not fit in 64 bits raises an error
// naming the offending (n,m).
std::vector<std::vector<std::uint64_t>> binomial_table(int n_max);

// |D^alpha_N> written out in the full 2^N computational basis
// (qubit j <-> bit j). Oracle-scale only: N <= 14.
Eigen::VectorXcd dicke_vector_full(const DickeIndex& idx);

// Coefficients of the Dicke tensor decomposition
//   |D^alpha_{L+R}> = sum_{a+b=alpha} c(a,b) |D^a_L> (x) |D^b_R>,
//   c(a,b) = sqrt( C(L,a) C(R,b) / C(L+R,a+b) ).
// Exact-integer binomials and one square root up to L+R = 64; a log-gamma
// evaluation of the same ratio beyond that.
Eigen::MatrixXd dicke_split_coeffs(int n_left, int n_right);

// Precomputed coefficients for the k | N-k cut of N symmetric qubits.
// Composite bipartite index: (a,b) -> a*(N-k+1)+b, fixed everywhere
// (partial transposition depends on it).
struct BipartiteEmbedding {
  int n_qubits = 2;
  int k = 1;
  Eigen::MatrixXd coeff;  // (k+1) x (N-k+1)

  int left_dim() const { return k + 1; }
  int right_dim() const { return n_qubits - k + 1; }
  int bipartite_dim() const { return left_dim() * right_dim(); }
  int composite(int a, int b) const { return a * right_dim() + b; }
};

// Requires 1 <= k <= floor(N/2); k|N-k and (N-k)|k are the same cut for
// symmetric states, so only the lower half is enumerated.
BipartiteEmbedding make_embedding(int n_qubits, int k);

// The state viewed in the Dicke (x) Dicke basis of the k | N-k cut:
// M[(a,b),(c,d)] = c(a,b) c(c,d) rho[a+b, c+d]. Isometric, so M keeps
// the trace and the nonzero spectrum of rho.
Eigen::MatrixXcd embed_bipartite(const SymState& rho, const BipartiteEmbedding& emb);

// Identity/(N+1) on the symmetric subspace.
SymState maximally_mixed(int n_qubits);

// |D^alpha_N><D^alpha_N| as a SymState.
SymState dicke_projector_state(int n_qubits, int alpha);

}
