#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "symris/spectra.hpp"
#include "symris/symspace.hpp"

namespace symris::septest {

// Spin-coherent mixture component.  The induced symmetric projector has Dicke
// components v[a] = sqrt(C(N,a)) cos(theta/2)^{N-a} (sin(theta/2) e^{i phi})^a.
struct CoherentPoint {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2*pi)
  double weight = 1.0; // convex weight
};

// Dicke components of |z(theta,phi)>^{(x)N}; unit norm.
Eigen::VectorXcd coherent_vector(int n_qubits, double theta, double phi);

// <z(theta,phi)| a |z(theta,phi)> for Hermitian a.
double coherent_expectation(const Eigen::MatrixXcd& a, int n_qubits, double theta, double phi);

struct SepConfig {
  double eps_sep = 1e-6;     // SEP when the HS residual falls below this
  double eps_ent = 1e-4;     // witness attempted only above this residual
  double eps_wit = 1e-8;     // required witness expectation margin
  int budget = 2000;         // Gilbert iterations
  int lmo_grid_theta = 64;   // coarse grid of the per-iteration maximization
  int lmo_grid_phi = 128;
  int lmo_ascent_steps = 50; // local ascent steps after the coarse grid
  int wit_grid_theta = 720;  // witness validation grid
  int wit_grid_phi = 1440;
  int wit_refine_points = 20;  // lowest grid points refined by Newton steps
  int wit_refine_steps = 30;
};

enum class Verdict { SEP, ENT, UNK };

// Output of the Gilbert solver: a convex mixture of coherent projectors
// approximating rho, its matrix, and the HS residual reached.
struct GilbertResult {
  std::vector<CoherentPoint> mixture;
  Eigen::MatrixXcd sigma;
  double residual = 0.0;
  int iterations = 0;
};

struct WitnessData {
  Eigen::MatrixXcd matrix;     // shifted witness W
  double verified_min = 0.0;   // refined minimum of <z|W|z> located by the scan
  double eps_grid = 0.0;       // rigorous curvature slack of the validation grid
  double expectation = 0.0;    // Tr(W rho)
};

struct SepCertificate {
  Verdict verdict = Verdict::UNK;
  std::vector<CoherentPoint> decomposition;  // SEP only
  std::optional<WitnessData> witness;        // witness-based ENT only
  double residual = -1.0;                    // HS residual; -1 if the solver never ran
};

// Curvature slack of a uniform (theta, phi) scan for a unit-HS-norm Hermitian
// observable: the true minimum of <z|A|z> over the manifold is never below the
// grid minimum by more than this.
double grid_slack(int n_qubits, int grid_theta, int grid_phi);

// Minimum of <z|a|z> over a uniform scan (theta endpoints included, phi
// periodic), returning the k lowest grid points in ascending order.
struct ScanHit {
  double value = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};
std::vector<ScanHit> scan_lowest(const Eigen::MatrixXcd& a, int n_qubits, int grid_theta,
                                 int grid_phi, int k);

// Local minimization of <z|a|z> from a start point (Newton with finite
// differences, gradient fallback); never returns a higher value than the start.
ScanHit refine_minimum(const Eigen::MatrixXcd& a, int n_qubits, ScanHit start, int steps);

// Gilbert-type projection of rho onto the convex hull of coherent projectors:
// per iteration, the residual direction is maximized over the manifold (coarse
// grid + local ascent), the new projector joins the mixture, and the mixture
// weights are re-optimized over the simplex (which subsumes the two-point line
// search).  The residual is non-increasing; stops early once it reaches
// eps_sep or the Frank-Wolfe gap certifies the projection has converged.
GilbertResult closest_separable(const SymState& rho, const SepConfig& cfg = {});

// Full separability decision: NPT shortcut, then SEP / witness-ENT / UNK.
SepCertificate certify(const SymState& rho, const spectra::PartitionFlags& flags,
                       const SepConfig& cfg = {});

}
