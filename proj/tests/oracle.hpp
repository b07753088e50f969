#pragma once

#include <vector>

#include <Eigen/Dense>

#include "symris/rng.hpp"
#include "symris/symspace.hpp"

// Independent brute-force reference implementations working in the full
// 2^N computational basis, plus small statistical helpers.  Everything here
// is deliberately naive; the library must agree with it, not vice versa.
namespace oracle {

// rho in the full 2^N basis from its symmetric (Dicke) representation.
Eigen::MatrixXcd full_from_sym(const symris::SymState& rho);

// |psi> in the full 2^n basis from symmetric-subspace coefficients.
Eigen::VectorXcd full_from_sym_vector(const Eigen::VectorXcd& psi, int n_qubits);

// Partial trace of a 2^n-dimensional matrix over the qubits listed in
// `traced` (bit positions, 0-based).
Eigen::MatrixXcd partial_trace_full(const Eigen::MatrixXcd& m, int n_qubits,
                                    const std::vector<int>& traced);

// Partial transpose over the qubits listed in `transposed`.
Eigen::MatrixXcd partial_transpose_full(const Eigen::MatrixXcd& m, int n_qubits,
                                        const std::vector<int>& transposed);

// <D^a_N| m |D^b_N> for all a, b: restriction to the symmetric subspace.
Eigen::MatrixXcd sym_restrict(const Eigen::MatrixXcd& m, int n_qubits);

// kron(a, b) with a's index major (qubit group a occupies the high bits).
Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

// Ascending real eigenvalues of a Hermitian matrix.
Eigen::VectorXd eigvals(const Eigen::MatrixXcd& m);

// Ascending eigenvalues padded with zeros to `dim` entries.
Eigen::VectorXd eigvals_padded(const Eigen::MatrixXcd& m, int dim);

// Random full-rank valid symmetric state (Ginibre G -> GG^dagger / trace).
symris::SymState random_sym_state(int n_qubits, symris::RngStream& rng);

// Exact binomial triangle built by Pascal's rule only (no factorials).
std::vector<std::vector<unsigned long long>> pascal_triangle(int n_max);

// Kolmogorov-Smirnov statistic sup_x |F_n(x) - cdf(x)|.
double ks_statistic(std::vector<double> samples, double (*cdf)(double));

// Two-sample chi-square statistic over matched count vectors; classes with
// zero combined count are skipped.  dof_out gets (used classes - 1).
double chi_square_two_sample(const std::vector<long long>& a,
                             const std::vector<long long>& b, int* dof_out);

// Haar-random unitary via Ginibre QR with the standard phase fix.
Eigen::MatrixXcd haar_unitary(int dim, symris::RngStream& rng);

}  // namespace oracle
