#include "symris/spectra.hpp"

#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "symris/errors.hpp"

namespace symris::spectra {

bool PartitionFlags::all_ppt() const {
  for (bool f : ppt)
    if (!f) return false;
  return true;
}

bool PartitionFlags::any_npt() const { return !all_ppt(); }

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& m, const BipartiteEmbedding& emb) {
  const int ld = emb.left_dim(), rd = emb.right_dim();
  if (m.rows() != ld * rd || m.cols() != ld * rd)
    throw std::invalid_argument("partial_transpose: matrix does not match embedding dimensions");
  Eigen::MatrixXcd out(ld * rd, ld * rd);
  for (int a = 0; a < ld; ++a)
    for (int b = 0; b < rd; ++b)
      for (int c = 0; c < ld; ++c)
        for (int d = 0; d < rd; ++d)
          out(emb.composite(a, b), emb.composite(c, d)) =
              m(emb.composite(c, b), emb.composite(a, d));
  return out;
}

Eigen::MatrixXcd partial_transpose(const SymState& rho, int k) {
  const BipartiteEmbedding emb = make_embedding(rho.n_qubits, k);
  return partial_transpose(embed_bipartite(rho, emb), emb);
}

double min_pt_eigenvalue(const SymState& rho, int k) {
  const Eigen::MatrixXcd pt = partial_transpose(rho, k);
  if (hermiticity_residual(pt) > 1e-12)
    throw numerical_error("min_pt_eigenvalue: non-Hermitian partial transpose at cut " +
                          std::to_string(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numerical_error("min_pt_eigenvalue: eigensolver failed at cut " + std::to_string(k));
  return es.eigenvalues().minCoeff();
}

PartitionFlags ppt_flags(const SymState& rho, double tau_ppt) {
  PartitionFlags f;
  f.n_qubits = rho.n_qubits;
  const int cuts = f.n_cuts();
  f.ppt.resize(cuts);
  f.min_eig.resize(cuts);
  for (int k = 1; k <= cuts; ++k) {
    const double lam = min_pt_eigenvalue(rho, k);
    f.min_eig[k - 1] = lam;
    f.ppt[k - 1] = lam >= -tau_ppt;
  }
  return f;
}

}
