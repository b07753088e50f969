#pragma once

#include <cstdint>
#include <Eigen/Dense>

#include "symris/rng.hpp"
#include "symris/symspace.hpp"

namespace symris::sampling {

enum class Method { MI, MII };

// Parameters of one random-induced-state ensemble.  `ancilla` is the number
// of traced ancilla qubits N_a for MI and the ancilla dimension d_a for MII.
struct MethodParams {
  Method method = Method::MI;
  int n_qubits = 1;
  int ancilla = 1;
};

// Throws std::invalid_argument if the parameters are out of range.
// MI requires n_qubits + ancilla <= 4096; MII requires
// (n_qubits + 1) * ancilla <= 2^20.  Both require n_qubits >= 2, ancilla >= 1
// (ancilla = 1 is the degenerate no-tracing case: an MI draw over N+1 qubits,
// or an MII draw that stays pure).
void validate_params(const MethodParams& p);

// Normalized complex Gaussian vector of length dim: the unitarily invariant
// (Fubini-Study) distribution on the unit sphere of C^dim.
Eigen::VectorXcd random_pure(std::int64_t dim, RngStream& rng);

// Partial trace of |psi><psi| over N_a qubits, where psi lives in the
// symmetric subspace of N + N_a qubits (dimension N + N_a + 1).  Returns the
// (N+1)x(N+1) reduced matrix in the Dicke basis of the remaining N qubits.
Eigen::MatrixXcd mi_reduce(const Eigen::VectorXcd& psi, int n_qubits, int n_ancilla);

// Partial trace of |psi><psi| over a d_a-dimensional ancilla, where psi lives
// in Sym_N (x) C^{d_a} laid out ancilla-major-last: psi(alpha * d_a + j).
// Returns the (N+1)x(N+1) reduced matrix.
Eigen::MatrixXcd mii_reduce(const Eigen::VectorXcd& psi, int n_qubits, int d_ancilla);

// One draw from ensemble MI / MII.  The result satisfies validate_state().
SymState ris_method1(int n_qubits, int n_ancilla, RngStream& rng);
SymState ris_method2(int n_qubits, int d_ancilla, RngStream& rng);

// Deterministic stream for a given trial: independent of execution order and
// worker count.  Encodes (method, n_qubits, ancilla, trial) injectively into
// the stream index; requires 0 <= trial < 2^24 and ancilla < 2^24.
RngStream trial_stream(const MethodParams& p, std::uint64_t seed, std::uint32_t trial);

// Draws one state for the given trial of the ensemble.
SymState sample_trial(const MethodParams& p, std::uint64_t seed, std::uint32_t trial);

}
