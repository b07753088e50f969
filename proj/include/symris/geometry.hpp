#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "symris/symspace.hpp"

namespace symris::geometry {

// Hilbert-Schmidt (Frobenius) distance sqrt(Tr[(A-B)^dag (A-B)]).
double hs_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

struct HistogramPDF {
  std::vector<double> bin_edges;  // bins + 1 ascending edges
  std::vector<double> density;    // probability density per bin
  std::int64_t n_samples = 0;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1 denominator)
};

MeanStd mean_std(const std::vector<double>& xs);

struct MmdPoint {
  int ancilla = 0;
  double mean = 0.0;
  double std = 0.0;
};

// Mean and std of D_HS(rho, rho_0) per ancilla value; >= 2 states per point.
std::vector<MmdPoint> mmd_sweep(const std::vector<std::pair<int, std::vector<SymState>>>& sweep);

// Histogram over all m(m-1)/2 unordered pair distances, streamed in two
// passes (bin range first, counts second) without materializing the list.
HistogramPDF pairwise_pdf(const std::vector<SymState>& states, int bins = 200);

// Exact D_HS(rho_0, |D^alpha><D^beta|) — the reference cross of each panel.
double dicke_reference_distance(int n_qubits, int alpha, int beta);

struct ProjectorPanel {
  int alpha = 0;
  int beta = 0;
  double reference = 0.0;
  HistogramPDF pdf;
};

// One distance histogram per Dicke dyad |D^alpha><D^beta|, (N+1)^2 panels.
std::vector<ProjectorPanel> dicke_projector_pdfs(const std::vector<SymState>& states,
                                                 int bins = 200);

}
