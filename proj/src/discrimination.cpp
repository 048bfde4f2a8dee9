#include "tha/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tha/error.hpp"

namespace tha {

namespace {

// Squared Cholesky pivots below this are treated as rank deficiency.
constexpr double kPivotFloor = 1e-10;

Matrix3c projector(const Vector3c& v) { return v * v.adjoint(); }

struct SpectralParts {
  Matrix3c inv_sqrt;     // pseudo-inverse square root on the support
  Matrix3c support;      // projector onto the support
};

SpectralParts inverse_sqrt(const Matrix3c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) throw NumericError("eigensolve failed in inverse_sqrt");
  const auto& w = es.eigenvalues();
  const double cutoff = 1e-14 * std::max(w.maxCoeff(), 0.0);
  Eigen::Vector3d inv = Eigen::Vector3d::Zero();
  Eigen::Vector3d on = Eigen::Vector3d::Zero();
  for (int i = 0; i < 3; ++i) {
    if (w(i) > cutoff && w(i) > 0.0) {
      inv(i) = 1.0 / std::sqrt(w(i));
      on(i) = 1.0;
    }
  }
  const Matrix3c& u = es.eigenvectors();
  return {u * inv.cast<Complex>().asDiagonal() * u.adjoint(),
          u * on.cast<Complex>().asDiagonal() * u.adjoint()};
}

double min_eig(const Matrix3c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double primal_value(const std::array<Matrix3c, 3>& rho, const Priors& p,
                    const std::array<Matrix3c, 3>& f) {
  double v = 0.0;
  for (int a = 0; a < 3; ++a) v += p[a] * (f[a] * rho[a]).trace().real();
  return v;
}

}  // namespace

DiscriminationProblem DiscriminationProblem::from_ensemble(const StateEnsemble& ens) {
  DiscriminationProblem prob;
  prob.states = orthonormalize(gram_matrix(StateEnsemble(ens.mu())));
  prob.priors = ens.priors();
  return prob;
}

void DiscriminationProblem::validate() const {
  for (const auto& v : states)
    if (std::abs(v.norm() - 1.0) > 1e-10) throw DomainError("state vector is not normalized");
  double total = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("prior outside [0,1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("priors must sum to 1");
}

double PovmSet::completeness_error() const {
  Matrix3c sum = Matrix3c::Zero();
  for (const auto& f : elements) sum += f;
  return (sum - Matrix3c::Identity()).norm();
}

double PovmSet::min_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : elements) m = std::min(m, min_eig(f));
  return m;
}

std::array<Vector3c, 3> orthonormalize(const HermitianMatrix3& gram) {
  const Matrix3c g = 3.0 * gram.matrix();
  // Hand-rolled so a vanishing pivot can be reported instead of NaN-ing.
  Matrix3c l = Matrix3c::Zero();
  for (int j = 0; j < 3; ++j) {
    Complex s = g(j, j);
    for (int k = 0; k < j; ++k) s -= l(j, k) * std::conj(l(j, k));
    const double pivot = s.real();
    if (!(pivot > kPivotFloor))
      throw DegenerateEnsembleError("Gram matrix is not positive definite (pivot " +
                                    std::to_string(pivot) + ")");
    l(j, j) = std::sqrt(pivot);
    for (int i = j + 1; i < 3; ++i) {
      Complex t = g(i, j);
      for (int k = 0; k < j; ++k) t -= l(i, k) * std::conj(l(j, k));
      l(i, j) = t / l(j, j);
    }
  }
  // G = L L^dagger, so v_j = conj(row j of L) gives <v_j|v_k> = G_jk.
  std::array<Vector3c, 3> out;
  for (int j = 0; j < 3; ++j) out[j] = l.row(j).conjugate().transpose();
  return out;
}

HelstromResult helstrom_solve(const DiscriminationProblem& problem, const HelstromOptions& opts) {
  problem.validate();
  if (!(opts.tol > 0.0)) throw DomainError("solver tolerance must be > 0");
  const auto& p = problem.priors;
  std::array<Matrix3c, 3> rho;
  for (int a = 0; a < 3; ++a) rho[a] = projector(problem.states[a]);

  std::array<Matrix3c, 3> f;
  f.fill(Matrix3c::Identity() / 3.0);

  HelstromResult res;
  for (int it = 0;; ++it) {
    Matrix3c k = Matrix3c::Zero();
    for (int b = 0; b < 3; ++b) k += p[b] * rho[b] * f[b];
    k = 0.5 * (k + k.adjoint());
    double eps = 0.0;
    for (int a = 0; a < 3; ++a) eps = std::max(eps, -min_eig(k - p[a] * rho[a]));
    k += eps * Matrix3c::Identity();

    res.report.pg_primal = primal_value(rho, p, f);
    res.report.pg_dual = k.trace().real();
    res.report.duality_gap = res.report.pg_dual - res.report.pg_primal;
    res.report.iterations = it;
    res.dual_k = k;
    if (res.report.duality_gap <= opts.tol) {
      res.report.converged = true;
      break;
    }
    if (it >= opts.max_iter) break;

    Matrix3c l = Matrix3c::Zero();
    std::array<Matrix3c, 3> weighted;
    for (int b = 0; b < 3; ++b) {
      weighted[b] = p[b] * p[b] * rho[b] * f[b] * rho[b];
      l += weighted[b];
    }
    const auto parts = inverse_sqrt(l);
    const Matrix3c complement = Matrix3c::Identity() - parts.support;
    for (int a = 0; a < 3; ++a) {
      f[a] = parts.inv_sqrt * weighted[a] * parts.inv_sqrt + complement / 3.0;
      f[a] = 0.5 * (f[a] + f[a].adjoint());
    }
  }

  res.povm.elements = f;
  double slack = 0.0;
  for (int a = 0; a < 3; ++a) slack = std::max(slack, ((res.dual_k - p[a] * rho[a]) * f[a]).norm());
  res.slackness_residual = slack;
  return res;
}

double pretty_good_measurement_pg(const DiscriminationProblem& problem) {
  problem.validate();
  const auto& p = problem.priors;
  std::array<Matrix3c, 3> rho;
  Matrix3c avg = Matrix3c::Zero();
  for (int a = 0; a < 3; ++a) {
    rho[a] = projector(problem.states[a]);
    avg += p[a] * rho[a];
  }
  const auto parts = inverse_sqrt(avg);
  double pg = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Matrix3c fa = parts.inv_sqrt * (p[a] * rho[a]) * parts.inv_sqrt;
    pg += p[a] * (fa * rho[a]).trace().real();
  }
  return pg;
}

double helstrom_pg(double mu, const HelstromOptions& opts) {
  if (mu == 0.0) return 1.0 / 3.0;
  const auto prob = DiscriminationProblem::from_ensemble(StateEnsemble(mu));
  const auto res = helstrom_solve(prob, opts);
  if (!res.report.converged)
    throw NumericError("Helstrom iteration did not converge at mu=" + std::to_string(mu));
  return res.report.pg_primal;
}

}  // namespace tha
