#include "symris/sampling.hpp"

#include <stdexcept>
#include <string>

#include "symris/errors.hpp"

namespace symris::sampling {

void validate_params(const MethodParams& p) {
  if (p.n_qubits < 2)
    throw std::invalid_argument("MethodParams: n_qubits must be >= 2");
  if (p.ancilla < 1)
    throw std::invalid_argument("MethodParams: ancilla must be >= 1");
  if (p.method == Method::MI) {
    if (p.n_qubits + p.ancilla > 4096)
      throw std::invalid_argument("MethodParams: MI requires n_qubits + ancilla <= 4096");
  } else {
    const std::int64_t dim = static_cast<std::int64_t>(p.n_qubits + 1) * p.ancilla;
    if (dim > (std::int64_t{1} << 20))
      throw std::invalid_argument("MethodParams: MII requires (n_qubits + 1) * ancilla <= 2^20");
  }
}

Eigen::VectorXcd random_pure(std::int64_t dim, RngStream& rng) {
  if (dim < 1) throw std::invalid_argument("random_pure: dim must be >= 1");
  Eigen::VectorXcd v(dim);
  for (std::int64_t i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  const double norm = v.norm();
  if (!(norm > 0.0))
    throw numerical_error("random_pure: degenerate Gaussian draw");
  return v / norm;
}

Eigen::MatrixXcd mi_reduce(const Eigen::VectorXcd& psi, int n_qubits, int n_ancilla) {
  const int d = n_qubits + 1;
  if (psi.size() != n_qubits + n_ancilla + 1)
    throw std::invalid_argument("mi_reduce: psi must have length N + N_a + 1");
  const Eigen::MatrixXd c = dicke_split_coeffs(n_qubits, n_ancilla);
  Eigen::MatrixXcd rho(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b <= a; ++b) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j <= n_ancilla; ++j)
        acc += c(a, j) * c(b, j) * psi(a + j) * std::conj(psi(b + j));
      rho(a, b) = acc;
      rho(b, a) = std::conj(acc);
    }
  return rho;
}

Eigen::MatrixXcd mii_reduce(const Eigen::VectorXcd& psi, int n_qubits, int d_ancilla) {
  const int d = n_qubits + 1;
  if (psi.size() != static_cast<std::int64_t>(d) * d_ancilla)
    throw std::invalid_argument("mii_reduce: psi must have length (N + 1) * d_a");
  // Row alpha of A holds the ancilla amplitudes attached to |D^alpha>.
  Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      a(psi.data(), d, d_ancilla);
  return a * a.adjoint();
}

SymState ris_method1(int n_qubits, int n_ancilla, RngStream& rng) {
  MethodParams p{Method::MI, n_qubits, n_ancilla};
  validate_params(p);
  const Eigen::VectorXcd psi = random_pure(n_qubits + n_ancilla + 1, rng);
  SymState s;
  s.n_qubits = n_qubits;
  s.matrix = mi_reduce(psi, n_qubits, n_ancilla);
  return s;
}

SymState ris_method2(int n_qubits, int d_ancilla, RngStream& rng) {
  MethodParams p{Method::MII, n_qubits, d_ancilla};
  validate_params(p);
  const Eigen::VectorXcd psi =
      random_pure(static_cast<std::int64_t>(n_qubits + 1) * d_ancilla, rng);
  SymState s;
  s.n_qubits = n_qubits;
  s.matrix = mii_reduce(psi, n_qubits, d_ancilla);
  return s;
}

RngStream trial_stream(const MethodParams& p, std::uint64_t seed, std::uint32_t trial) {
  validate_params(p);
  if (trial >= (1u << 24))
    throw std::invalid_argument("trial_stream: trial index must be < 2^24");
  if (p.ancilla >= (1 << 24))
    throw std::invalid_argument("trial_stream: ancilla must be < 2^24");
  const std::uint64_t method_bits = (p.method == Method::MI) ? 1u : 2u;
  const std::uint64_t stream = (method_bits << 61) |
                               (static_cast<std::uint64_t>(p.n_qubits) << 48) |
                               (static_cast<std::uint64_t>(p.ancilla) << 24) |
                               static_cast<std::uint64_t>(trial);
  return RngStream(seed, stream);
}

SymState sample_trial(const MethodParams& p, std::uint64_t seed, std::uint32_t trial) {
  RngStream rng = trial_stream(p, seed, trial);
  return p.method == Method::MI ? ris_method1(p.n_qubits, p.ancilla, rng)
                                : ris_method2(p.n_qubits, p.ancilla, rng);
}

}
