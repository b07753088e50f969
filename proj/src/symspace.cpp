#include "symris/symspace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "symris/errors.hpp"

namespace symris {

double hermiticity_residual(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void validate_state(const SymState& rho, const StateTolerances& tol) {
  const int d = rho.n_qubits + 1;
  if (rho.n_qubits < 1) throw std::invalid_argument("SymState: n_qubits must be >= 1");
  if (rho.matrix.rows() != d || rho.matrix.cols() != d)
    throw std::invalid_argument("SymState: matrix must be (N+1)x(N+1)");
  if (hermiticity_residual(rho.matrix) > tol.hermiticity)
    throw std::invalid_argument("SymState: hermiticity violated beyond tolerance");
  if (std::abs(rho.matrix.trace().real() - 1.0) > tol.trace ||
      std::abs(rho.matrix.trace().imag()) > tol.trace)
    throw std::invalid_argument("SymState: unit trace violated beyond tolerance");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numerical_error("SymState: eigensolver failed during validation");
  if (es.eigenvalues().minCoeff() < tol.min_eigenvalue)
    throw std::invalid_argument("SymState: positive semidefiniteness violated beyond tolerance");
}

std::vector<std::vector<std::uint64_t>> binomial_table(int n_max) {
  if (n_max < 0) throw std::invalid_argument("binomial_table: n_max must be >= 0");
  if (n_max > 64)
    throw std::overflow_error("binomial_table: C(" + std::to_string(n_max) + ",m) exceeds the 64-bit range");
  std::vector<std::vector<std::uint64_t>> c(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    c[n].assign(static_cast<std::size_t>(n) + 1, 1);
    for (int m = 1; m < n; ++m) {
      std::uint64_t v = 0;
      if (__builtin_add_overflow(c[n - 1][m - 1], c[n - 1][m], &v))
        throw std::overflow_error("binomial_table: C(" + std::to_string(n) + "," +
                                  std::to_string(m) + ") overflows 64 bits");
      c[n][m] = v;
    }
  }
  return c;
}

Eigen::VectorXcd dicke_vector_full(const DickeIndex& idx) {
  const int n = idx.n_qubits;
  if (n < 1 || n > 14)
    throw std::invalid_argument("dicke_vector_full: requires 1 <= N <= 14");
  if (idx.alpha < 0 || idx.alpha > n)
    throw std::invalid_argument("dicke_vector_full: alpha out of range");
  const auto binom = binomial_table(n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(binom[n][idx.alpha]));
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(std::int64_t{1} << n);
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (__builtin_popcount(s) == idx.alpha) v(s) = amp;
  }
  return v;
}

Eigen::MatrixXd dicke_split_coeffs(int n_left, int n_right) {
  if (n_left < 0 || n_right < 0 || n_left + n_right < 1)
    throw std::invalid_argument("dicke_split_coeffs: invalid block sizes");
  const int total = n_left + n_right;
  Eigen::MatrixXd c(n_left + 1, n_right + 1);
  if (total <= 64) {
    const auto binom = binomial_table(total);
    for (int a = 0; a <= n_left; ++a)
      for (int b = 0; b <= n_right; ++b) {
        const long double num = static_cast<long double>(binom[n_left][a]) *
                                static_cast<long double>(binom[n_right][b]);
        const long double den = static_cast<long double>(binom[total][a + b]);
        c(a, b) = static_cast<double>(std::sqrt(num / den));
      }
  } else {
    auto lchoose = [](int n, int m) {
      return std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
    };
    for (int a = 0; a <= n_left; ++a)
      for (int b = 0; b <= n_right; ++b)
        c(a, b) = std::exp(0.5 * (lchoose(n_left, a) + lchoose(n_right, b) -
                                  lchoose(total, a + b)));
  }
  return c;
}

BipartiteEmbedding make_embedding(int n_qubits, int k) {
  if (n_qubits < 2)
    throw std::invalid_argument("make_embedding: n_qubits must be >= 2");
  if (k < 1 || k > n_qubits / 2)
    throw std::invalid_argument("make_embedding: requires 1 <= k <= floor(N/2)");
  BipartiteEmbedding emb;
  emb.n_qubits = n_qubits;
  emb.k = k;
  emb.coeff = dicke_split_coeffs(k, n_qubits - k);
  return emb;
}

Eigen::MatrixXcd embed_bipartite(const SymState& rho, const BipartiteEmbedding& emb) {
  if (rho.n_qubits != emb.n_qubits)
    throw std::invalid_argument("embed_bipartite: state and embedding qubit counts differ");
  const int ld = emb.left_dim(), rd = emb.right_dim();
  Eigen::MatrixXcd m(ld * rd, ld * rd);
  for (int a = 0; a < ld; ++a)
    for (int b = 0; b < rd; ++b) {
      const int row = emb.composite(a, b);
      const double ca = emb.coeff(a, b);
      for (int c = 0; c < ld; ++c)
        for (int d = 0; d < rd; ++d)
          m(row, emb.composite(c, d)) = ca * emb.coeff(c, d) * rho.matrix(a + b, c + d);
    }
  return m;
}

SymState maximally_mixed(int n_qubits) {
  SymState s;
  s.n_qubits = n_qubits;
  const int d = n_qubits + 1;
  s.matrix = Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
  return s;
}

SymState dicke_projector_state(int n_qubits, int alpha) {
  if (alpha < 0 || alpha > n_qubits)
    throw std::invalid_argument("dicke_projector_state: alpha out of range");
  SymState s;
  s.n_qubits = n_qubits;
  s.matrix = Eigen::MatrixXcd::Zero(n_qubits + 1, n_qubits + 1);
  s.matrix(alpha, alpha) = 1.0;
  return s;
}

}
