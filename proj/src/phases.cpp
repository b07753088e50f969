#include "symris/phases.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace symris::phases {

Crossing curve_intersections(const std::vector<SweepSample>& sweep, BoundaryKind kind) {
  if (sweep.size() < 2)
    throw std::invalid_argument("curve_intersections: need at least 2 sweep points");
  auto diff = [&](const SweepSample& s) {
    return kind == BoundaryKind::NptToBe ? s.p_npt - s.p_ppt_be : s.p_ppt_be - s.p_sep;
  };
  // A crossing is a sign flip of the difference; zero samples (exact ties,
  // typically both curves at zero) do not count unless they separate opposite
  // signs, in which case the crossing sits at the first tied sample.
  Crossing c;
  int prev = -1;  // index of the last nonzero-sign sample
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const double d = diff(sweep[i]);
    if (d == 0.0) continue;
    if (prev >= 0) {
      const double dp = diff(sweep[prev]);
      if ((dp > 0.0) != (d > 0.0)) {
        double at;
        if (static_cast<std::size_t>(prev) + 1 == i) {
          at = sweep[prev].ancilla +
               dp * (sweep[i].ancilla - sweep[prev].ancilla) / (dp - d);
        } else {
          at = sweep[prev + 1].ancilla;  // tied run between the opposite signs
        }
        ++c.multiplicity;
        if (!c.exists) {
          c.exists = true;
          c.ancilla = at;
        }
      }
    }
    prev = static_cast<int>(i);
  }
  return c;
}

PhaseBoundary fit_boundary(BoundaryKind kind,
                           const std::vector<std::pair<double, double>>& points,
                           FitModel model) {
  const int order = model == FitModel::Linear ? 1 : 2;
  const int mrows = static_cast<int>(points.size());
  if (mrows < order + 1)
    throw std::invalid_argument("fit_boundary: underdetermined fit (need >= order + 1 points)");
  Eigen::MatrixXd x(mrows, order + 1);
  Eigen::VectorXd y(mrows);
  for (int i = 0; i < mrows; ++i) {
    const double nq = points[i].first;
    for (int j = 0; j <= order; ++j) x(i, j) = std::pow(nq, order - j);
    y(i) = points[i].second;
  }
  const Eigen::VectorXd beta = x.colPivHouseholderQr().solve(y);
  PhaseBoundary pb;
  pb.kind = kind;
  pb.points = points;
  pb.model = model;
  pb.coefficients.assign(beta.data(), beta.data() + beta.size());
  pb.rss = (y - x * beta).squaredNorm();
  return pb;
}

}
