#include "symris/septest.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "symris/errors.hpp"

namespace symris::septest {
namespace {

constexpr double kPi = 3.14159265358979323846;

double hs_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a.conjugate().cwiseProduct(b).sum().real();  // Re tr(a† b)
}

Eigen::VectorXd sqrt_binomials(int n) {
  const auto binom = binomial_table(n);
  Eigen::VectorXd sb(n + 1);
  for (int a = 0; a <= n; ++a) sb(a) = std::sqrt(static_cast<double>(binom[n][a]));
  return sb;
}

// g[a] = sqrt(C(N,a)) cos(theta/2)^{N-a} sin(theta/2)^a.
void amplitudes(const Eigen::VectorXd& sb, double theta, Eigen::VectorXd& g) {
  const int n = static_cast<int>(sb.size()) - 1;
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  g(0) = 1.0;
  for (int a = 1; a <= n; ++a) g(a) = g(a - 1) * s;
  double cp = 1.0;
  for (int a = n; a >= 0; --a) {
    g(a) *= cp * sb(a);
    cp *= c;
  }
}

void coherent_into(const Eigen::VectorXd& sb, double theta, double phi, Eigen::VectorXcd& v) {
  const int n = static_cast<int>(sb.size()) - 1;
  Eigen::VectorXd g(n + 1);
  amplitudes(sb, theta, g);
  const std::complex<double> e = std::polar(1.0, phi);
  std::complex<double> p = 1.0;
  for (int a = 0; a <= n; ++a) {
    v(a) = g(a) * p;
    p *= e;
  }
}

double expectation_at(const Eigen::MatrixXcd& a, const Eigen::VectorXd& sb, double theta,
                      double phi) {
  const int d = static_cast<int>(sb.size());
  Eigen::VectorXcd v(d);
  coherent_into(sb, theta, phi, v);
  return (v.adjoint() * a * v)(0).real();
}

// Uniform scan of <z|A|z>: theta rows include both poles, phi is periodic.
// Per theta row the expectation is a short Fourier series in phi,
// <z|A|z> = h_0 + 2 Re sum_{d>=1} h_d e^{i d phi}, evaluated for all phi at
// once as two small matrix-vector products against precomputed cos/sin tables.
struct Scanner {
  int n, gt, gp;
  Eigen::VectorXd sb;
  Eigen::VectorXd thetas;  // gt
  Eigen::VectorXd phis;    // gp
  Eigen::MatrixXd cost;    // gp x n, cos(d * phi_j)
  Eigen::MatrixXd sint;    // gp x n, sin(d * phi_j)

  Scanner(int n_qubits, int grid_theta, int grid_phi)
      : n(n_qubits), gt(grid_theta), gp(grid_phi) {
    if (n < 1 || gt < 2 || gp < 1)
      throw std::invalid_argument("scan: requires n_qubits >= 1, grid_theta >= 2, grid_phi >= 1");
    sb = sqrt_binomials(n);
    thetas.resize(gt);
    for (int i = 0; i < gt; ++i) thetas(i) = kPi * i / (gt - 1);
    phis.resize(gp);
    cost.resize(gp, n);
    sint.resize(gp, n);
    for (int j = 0; j < gp; ++j) {
      phis(j) = 2.0 * kPi * j / gp;
      for (int d = 1; d <= n; ++d) {
        cost(j, d - 1) = std::cos(d * phis(j));
        sint(j, d - 1) = std::sin(d * phis(j));
      }
    }
  }

  std::vector<ScanHit> lowest(const Eigen::MatrixXcd& a, int k) const {
    auto worse = [](const ScanHit& l, const ScanHit& r) { return l.value < r.value; };
    std::vector<ScanHit> best;
    best.reserve(k + 1);
    Eigen::VectorXd g(n + 1), hr(n), hi(n), val(gp);
    for (int i = 0; i < gt; ++i) {
      amplitudes(sb, thetas(i), g);
      double h0 = 0.0;
      for (int al = 0; al <= n; ++al) h0 += g(al) * g(al) * a(al, al).real();
      for (int d = 1; d <= n; ++d) {
        std::complex<double> acc = 0.0;
        for (int al = 0; al + d <= n; ++al) acc += g(al) * g(al + d) * a(al, al + d);
        hr(d - 1) = 2.0 * acc.real();
        hi(d - 1) = -2.0 * acc.imag();
      }
      val.noalias() = cost * hr;
      val.noalias() += sint * hi;
      val.array() += h0;
      for (int j = 0; j < gp; ++j) {
        if (static_cast<int>(best.size()) < k) {
          best.push_back({val(j), thetas(i), phis(j)});
          std::push_heap(best.begin(), best.end(), worse);
        } else if (val(j) < best.front().value) {
          std::pop_heap(best.begin(), best.end(), worse);
          best.back() = {val(j), thetas(i), phis(j)};
          std::push_heap(best.begin(), best.end(), worse);
        }
      }
    }
    std::sort(best.begin(), best.end(), worse);
    return best;
  }
};

double wrap_phi(double phi) {
  phi = std::fmod(phi, 2.0 * kPi);
  return phi < 0.0 ? phi + 2.0 * kPi : phi;
}

ScanHit refine_impl(const Eigen::MatrixXcd& a, const Eigen::VectorXd& sb, ScanHit cur,
                    int steps) {
  double h = 1e-4;
  auto f = [&](double th, double ph) { return expectation_at(a, sb, th, ph); };
  for (int step = 0; step < steps; ++step) {
    const double th = cur.theta, ph = cur.phi, f0 = cur.value;
    const double fpt = f(th + h, ph), fmt = f(th - h, ph);
    const double fpp = f(th, ph + h), fmp = f(th, ph - h);
    const double gt = (fpt - fmt) / (2 * h), gp = (fpp - fmp) / (2 * h);
    if (std::abs(gt) + std::abs(gp) < 1e-13) break;
    const double htt = (fpt - 2 * f0 + fmt) / (h * h);
    const double hpp = (fpp - 2 * f0 + fmp) / (h * h);
    const double htp = (f(th + h, ph + h) - f(th + h, ph - h) - f(th - h, ph + h) +
                        f(th - h, ph - h)) /
                       (4 * h * h);
    const double det = htt * hpp - htp * htp;
    double dt, dp;
    if (htt > 0.0 && det > 1e-300) {
      dt = -(hpp * gt - htp * gp) / det;
      dp = -(htt * gp - htp * gt) / det;
    } else {
      const double norm = std::hypot(gt, gp);
      dt = -0.2 * gt / norm;
      dp = -0.2 * gp / norm;
    }
    const double len = std::hypot(dt, dp);
    if (len > 0.5) {  // cap step length; Newton can overshoot in flat regions
      dt *= 0.5 / len;
      dp *= 0.5 / len;
    }
    bool accepted = false;
    double lam = 1.0;
    for (int bt = 0; bt < 25; ++bt, lam *= 0.5) {
      const double thc = std::clamp(th + lam * dt, 0.0, kPi);
      const double phc = wrap_phi(ph + lam * dp);
      const double fc = f(thc, phc);
      if (fc < f0) {
        cur = {fc, thc, phc};
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      h *= 0.25;  // finite-difference noise dominates near the optimum
      if (h < 1e-9) break;
      continue;
    }
    if (lam * std::hypot(dt, dp) < 1e-12) break;
  }
  return cur;
}

// min (1/2) w'Qw - b'w  over the simplex {w >= 0, sum w = 1}, primal active
// set with warm start; every accepted iterate is feasible and non-increasing
// in objective, so the caller's residual stays monotone.
Eigen::VectorXd simplex_qp(const Eigen::MatrixXd& q, const Eigen::VectorXd& b,
                           Eigen::VectorXd w) {
  const int m = static_cast<int>(w.size());
  std::vector<char> active(m, 0);
  for (int i = 0; i < m; ++i) active[i] = w(i) > 0.0;
  if (std::none_of(active.begin(), active.end(), [](char c) { return c; })) {
    active[0] = 1;
    w.setZero();
    w(0) = 1.0;
  }
  const int max_iters = 100 + 10 * m;
  for (int iter = 0; iter < max_iters; ++iter) {
    std::vector<int> sup;
    for (int i = 0; i < m; ++i)
      if (active[i]) sup.push_back(i);
    const int s = static_cast<int>(sup.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
    Eigen::VectorXd rhs(s + 1);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) kkt(i, j) = q(sup[i], sup[j]);
      kkt(i, i) += 1e-12;
      kkt(i, s) = 1.0;
      kkt(s, i) = 1.0;
      rhs(i) = b(sup[i]);
    }
    rhs(s) = 1.0;
    const Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
    const Eigen::VectorXd u = sol.head(s);
    if (u.minCoeff() >= -1e-12) {
      w.setZero();
      for (int i = 0; i < s; ++i) w(sup[i]) = std::max(u(i), 0.0);
      const double tot = w.sum();
      if (tot > 0.0) w /= tot;
      const double nu = -sol(s);  // stationarity: Qw - b = nu * 1 on the support
      const Eigen::VectorXd grad = q * w - b;
      int enter = -1;
      double worst = -1e-11;
      for (int j = 0; j < m; ++j) {
        if (active[j]) continue;
        const double lam = grad(j) - nu;
        if (lam < worst) {
          worst = lam;
          enter = j;
        }
      }
      if (enter < 0) break;
      active[enter] = 1;
    } else {
      double alpha = 1.0;
      int blocker = -1;
      for (int i = 0; i < s; ++i) {
        if (u(i) < 0.0) {
          const double ai = w(sup[i]) / (w(sup[i]) - u(i));
          if (ai < alpha) {
            alpha = ai;
            blocker = i;
          }
        }
      }
      for (int i = 0; i < s; ++i) w(sup[i]) += alpha * (u(i) - w(sup[i]));
      if (blocker >= 0) {
        w(sup[blocker]) = 0.0;
        active[sup[blocker]] = 0;
      }
    }
  }
  return w;
}

}  // namespace

Eigen::VectorXcd coherent_vector(int n_qubits, double theta, double phi) {
  if (n_qubits < 1) throw std::invalid_argument("coherent_vector: n_qubits must be >= 1");
  const Eigen::VectorXd sb = sqrt_binomials(n_qubits);
  Eigen::VectorXcd v(n_qubits + 1);
  coherent_into(sb, theta, phi, v);
  return v;
}

double coherent_expectation(const Eigen::MatrixXcd& a, int n_qubits, double theta, double phi) {
  return expectation_at(a, sqrt_binomials(n_qubits), theta, phi);
}

double grid_slack(int n_qubits, int grid_theta, int grid_phi) {
  const double ht = kPi / (grid_theta - 1);
  const double hp = 2.0 * kPi / grid_phi;
  const double nsq = static_cast<double>(n_qubits) * n_qubits;
  // |d2f/dtheta2| <= N^2 and |d2f/dphi2| <= 4 N^2 for unit-HS-norm observables;
  // the 1D segment bound min(f) >= min(endpoints) - C h^2 / 8, chained per axis.
  return nsq * (ht * ht + 4.0 * hp * hp) / 8.0;
}

std::vector<ScanHit> scan_lowest(const Eigen::MatrixXcd& a, int n_qubits, int grid_theta,
                                 int grid_phi, int k) {
  if (k < 1) throw std::invalid_argument("scan_lowest: k must be >= 1");
  if (a.rows() != n_qubits + 1 || a.cols() != n_qubits + 1)
    throw std::invalid_argument("scan_lowest: matrix must be (N+1)x(N+1)");
  return Scanner(n_qubits, grid_theta, grid_phi).lowest(a, k);
}

ScanHit refine_minimum(const Eigen::MatrixXcd& a, int n_qubits, ScanHit start, int steps) {
  return refine_impl(a, sqrt_binomials(n_qubits), start, steps);
}

GilbertResult closest_separable(const SymState& rho, const SepConfig& cfg) {
  const int n = rho.n_qubits, d = n + 1;
  const Scanner scan(n, cfg.lmo_grid_theta, cfg.lmo_grid_phi);
  const Eigen::VectorXd sb = scan.sb;

  std::vector<Eigen::VectorXcd> vecs;
  std::vector<ScanHit> points;  // theta/phi of each atom (value field unused)
  Eigen::MatrixXd q(0, 0);
  Eigen::VectorXd b(0), w(0);
  Eigen::MatrixXcd sigma(d, d);

  auto append_atom = [&](const ScanHit& hit) {
    Eigen::VectorXcd v(d);
    coherent_into(sb, hit.theta, hit.phi, v);
    const int m = static_cast<int>(vecs.size());
    q.conservativeResize(m + 1, m + 1);
    b.conservativeResize(m + 1);
    w.conservativeResize(m + 1);
    for (int i = 0; i < m; ++i) {
      const double ov = std::norm(vecs[i].dot(v));  // |<v_i, v>|^2 = <P_i, P>
      q(i, m) = ov;
      q(m, i) = ov;
    }
    q(m, m) = 1.0;
    b(m) = (v.adjoint() * rho.matrix * v)(0).real();
    w(m) = 0.0;
    vecs.push_back(std::move(v));
    points.push_back(hit);
  };

  auto rebuild_sigma = [&] {
    sigma.setZero();
    for (std::size_t i = 0; i < vecs.size(); ++i)
      if (w(static_cast<int>(i)) > 0.0)
        sigma.noalias() += w(static_cast<int>(i)) * (vecs[i] * vecs[i].adjoint());
  };

  auto prune = [&] {
    const int m = static_cast<int>(vecs.size());
    std::vector<int> keep;
    int imax = 0;
    for (int i = 1; i < m; ++i)
      if (w(i) > w(imax)) imax = i;
    for (int i = 0; i < m; ++i)
      if (w(i) > 1e-14 || i == imax) keep.push_back(i);
    if (static_cast<int>(keep.size()) == m) return;
    std::vector<Eigen::VectorXcd> nv;
    std::vector<ScanHit> np;
    Eigen::MatrixXd nq(keep.size(), keep.size());
    Eigen::VectorXd nb(keep.size()), nw(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      nv.push_back(std::move(vecs[keep[i]]));
      np.push_back(points[keep[i]]);
      nb(i) = b(keep[i]);
      nw(i) = w(keep[i]);
      for (std::size_t j = 0; j < keep.size(); ++j) nq(i, j) = q(keep[i], keep[j]);
    }
    vecs = std::move(nv);
    points = std::move(np);
    q = std::move(nq);
    b = std::move(nb);
    w = nw / nw.sum();
  };

  // Initial atom: the best single coherent projector (maximizes <z|rho|z>).
  {
    const Eigen::MatrixXcd neg = -rho.matrix;
    ScanHit hit = refine_impl(neg, sb, scan.lowest(neg, 1)[0], cfg.lmo_ascent_steps);
    append_atom(hit);
    w(0) = 1.0;
    rebuild_sigma();
  }

  GilbertResult res;
  res.iterations = 1;
  double prev = std::numeric_limits<double>::infinity();
  double r = (rho.matrix - sigma).norm();
  while (true) {
    if (r > prev + 1e-12)
      throw numerical_error("closest_separable: residual increased across an iteration");
    prev = r;
    if (r <= cfg.eps_sep || res.iterations >= cfg.budget) break;

    const Eigen::MatrixXcd a = sigma - rho.matrix;  // minimize <z|A|z>
    const ScanHit best = refine_impl(a, sb, scan.lowest(a, 1)[0], cfg.lmo_ascent_steps);
    // Frank-Wolfe gap of f = ||rho - sigma||^2 at sigma.
    const double gap = 2.0 * (-best.value - hs_inner(rho.matrix - sigma, sigma));
    if (gap <= std::max(1e-15, 1e-6 * r * r)) break;

    bool dup = false;
    for (const auto& v : vecs) {
      Eigen::VectorXcd cand(d);
      coherent_into(sb, best.theta, best.phi, cand);
      if (std::norm(v.dot(cand)) > 1.0 - 1e-12) {
        dup = true;
        break;
      }
    }
    if (dup) break;

    append_atom(best);
    w = simplex_qp(q, b, w);
    prune();
    rebuild_sigma();
    ++res.iterations;
    r = (rho.matrix - sigma).norm();
  }

  res.sigma = sigma;
  res.residual = r;
  for (std::size_t i = 0; i < points.size(); ++i)
    res.mixture.push_back({points[i].theta, points[i].phi, w(static_cast<int>(i))});
  return res;
}

namespace {

WitnessData validate_witness(const Eigen::MatrixXcd& w_raw, const SymState& rho,
                             const SepConfig& cfg) {
  const int n = rho.n_qubits;
  const Eigen::VectorXd sb = sqrt_binomials(n);
  const std::vector<ScanHit> hits =
      scan_lowest(w_raw, n, cfg.wit_grid_theta, cfg.wit_grid_phi, cfg.wit_refine_points);
  double found = hits[0].value;
  for (const ScanHit& h : hits)
    found = std::min(found, refine_impl(w_raw, sb, h, cfg.wit_refine_steps).value);
  WitnessData wd;
  wd.eps_grid = grid_slack(n, cfg.wit_grid_theta, cfg.wit_grid_phi);
  wd.matrix = w_raw - found * Eigen::MatrixXcd::Identity(n + 1, n + 1);
  wd.verified_min = 0.0;  // the refined minimum of the shifted witness, by construction
  wd.expectation = hs_inner(wd.matrix, rho.matrix);
  return wd;
}

}  // namespace

SepCertificate certify(const SymState& rho, const spectra::PartitionFlags& flags,
                       const SepConfig& cfg) {
  SepCertificate cert;
  if (flags.any_npt()) {
    // One NPT bipartition already certifies genuine entanglement of a
    // symmetric state; the convex solver never runs.
    cert.verdict = Verdict::ENT;
    cert.residual = -1.0;
    return cert;
  }
  GilbertResult g = closest_separable(rho, cfg);
  cert.residual = g.residual;
  if (g.residual <= cfg.eps_sep) {
    cert.verdict = Verdict::SEP;
    cert.decomposition = std::move(g.mixture);
    return cert;
  }
  if (g.residual > cfg.eps_ent) {
    Eigen::MatrixXcd diff = g.sigma - rho.matrix;
    diff /= diff.norm();
    WitnessData wd = validate_witness(diff, rho, cfg);
    // Stricter than Tr(W rho) < -eps_wit by the validation slack: no state
    // inside the coherent hull can pass this margin, so ENT is never emitted
    // for a separable state.
    if (wd.expectation < -(cfg.eps_wit + wd.eps_grid)) {
      cert.verdict = Verdict::ENT;
      cert.witness = std::move(wd);
      return cert;
    }
  }
  cert.verdict = Verdict::UNK;
  return cert;
}

}
