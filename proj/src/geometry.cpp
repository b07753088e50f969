#include "symris/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symris::geometry {
namespace {

// Uniform-bin histogram accumulation; values at the top edge land in the
// last bin.
HistogramPDF make_histogram(double upper, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
  HistogramPDF h;
  h.bin_edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) h.bin_edges[i] = upper * i / bins;
  h.density.assign(bins, 0.0);
  return h;
}

void add_sample(HistogramPDF& h, double x) {
  const int bins = static_cast<int>(h.density.size());
  const double upper = h.bin_edges.back();
  int idx = static_cast<int>(std::floor(x / upper * bins));
  idx = std::clamp(idx, 0, bins - 1);
  h.density[idx] += 1.0;
  ++h.n_samples;
}

void normalize(HistogramPDF& h) {
  const double width = h.bin_edges[1] - h.bin_edges[0];
  for (double& d : h.density) d /= static_cast<double>(h.n_samples) * width;
}

}  // namespace

double hs_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_distance: dimension mismatch");
  return (a - b).norm();
}

MeanStd mean_std(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean_std: empty sample");
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v = xs.size() > 1 ? v / static_cast<double>(xs.size() - 1) : 0.0;
  return {m, std::sqrt(v)};
}

std::vector<MmdPoint> mmd_sweep(
    const std::vector<std::pair<int, std::vector<SymState>>>& sweep) {
  std::vector<MmdPoint> out;
  for (const auto& [ancilla, states] : sweep) {
    if (states.size() < 2)
      throw std::invalid_argument("mmd_sweep: need at least 2 states per point");
    const Eigen::MatrixXcd mm = maximally_mixed(states.front().n_qubits).matrix;
    std::vector<double> d;
    d.reserve(states.size());
    for (const SymState& s : states) d.push_back(hs_distance(s.matrix, mm));
    const MeanStd ms = mean_std(d);
    out.push_back({ancilla, ms.mean, ms.std});
  }
  return out;
}

HistogramPDF pairwise_pdf(const std::vector<SymState>& states, int bins) {
  const std::size_t m = states.size();
  if (m < 2) throw std::invalid_argument("pairwise_pdf: need at least 2 states");
  double dmax = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      dmax = std::max(dmax, hs_distance(states[i].matrix, states[j].matrix));
  HistogramPDF h = make_histogram(dmax > 0.0 ? dmax * 1.05 : 1.0, bins);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      add_sample(h, hs_distance(states[i].matrix, states[j].matrix));
  normalize(h);
  return h;
}

double dicke_reference_distance(int n_qubits, int alpha, int beta) {
  if (alpha < 0 || alpha > n_qubits || beta < 0 || beta > n_qubits)
    throw std::invalid_argument("dicke_reference_distance: index out of range");
  const double d = n_qubits + 1;
  if (alpha == beta) {
    const double off = 1.0 - 1.0 / d;
    return std::sqrt(off * off + n_qubits / (d * d));
  }
  return std::sqrt(1.0 + 1.0 / d);  // <rho_0, |D^a><D^b|>_HS = 0 off the diagonal
}

std::vector<ProjectorPanel> dicke_projector_pdfs(const std::vector<SymState>& states,
                                                 int bins) {
  if (states.empty()) return {};
  const int n = states.front().n_qubits;
  const int d = n + 1;
  for (const SymState& s : states)
    if (s.n_qubits != n)
      throw std::invalid_argument("dicke_projector_pdfs: states must share n_qubits");
  std::vector<ProjectorPanel> panels;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Eigen::MatrixXcd dyad = Eigen::MatrixXcd::Zero(d, d);
      dyad(a, b) = 1.0;
      double dmax = 0.0;
      for (const SymState& s : states) dmax = std::max(dmax, hs_distance(s.matrix, dyad));
      ProjectorPanel panel;
      panel.alpha = a;
      panel.beta = b;
      panel.reference = dicke_reference_distance(n, a, b);
      panel.pdf = make_histogram(dmax > 0.0 ? dmax * 1.05 : 1.0, bins);
      for (const SymState& s : states) add_sample(panel.pdf, hs_distance(s.matrix, dyad));
      normalize(panel.pdf);
      panels.push_back(std::move(panel));
    }
  return panels;
}

}
