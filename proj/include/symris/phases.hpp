#pragma once

#include <utility>
#include <vector>

namespace symris::phases {

struct SweepSample {
  double ancilla = 0.0;
  double p_npt = 0.0;
  double p_ppt_be = 0.0;
  double p_sep = 0.0;
};

enum class BoundaryKind { NptToBe, BeToSep };

struct Crossing {
  bool exists = false;
  double ancilla = 0.0;  // linear-interpolated first crossing
  int multiplicity = 0;  // sign changes observed; > 1 means shot noise re-crossings
};

// First intersection of the adjacent probability curves (NPT vs PPT-BE or
// PPT-BE vs SEP) along the sweep; absent when the difference never changes
// sign.
Crossing curve_intersections(const std::vector<SweepSample>& sweep, BoundaryKind kind);

enum class FitModel { Linear, Quadratic };

struct PhaseBoundary {
  BoundaryKind kind = BoundaryKind::NptToBe;
  std::vector<std::pair<double, double>> points;  // (N, ancilla*)
  FitModel model = FitModel::Linear;
  std::vector<double> coefficients;  // descending degree: a*N + b or a*N^2 + b*N + c
  double rss = 0.0;
};

// Least-squares fit of crossing coordinates; throws when underdetermined.
PhaseBoundary fit_boundary(BoundaryKind kind,
                           const std::vector<std::pair<double, double>>& points,
                           FitModel model);

}
