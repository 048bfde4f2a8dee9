#include "tha/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "tha/error.hpp"

namespace tha {

namespace {

void check_mu(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu))
    throw DomainError("mean photon number must be finite and >= 0, got " + std::to_string(mu));
}

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

StateEnsemble::StateEnsemble(double mu, Priors priors) : mu_(mu), priors_(priors) {
  check_mu(mu);
  double total = 0.0;
  for (double p : priors_) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("prior outside [0,1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("priors must sum to 1");
}

HermitianMatrix3::HermitianMatrix3(const Matrix3c& m, double tol) : m_(m) {
  for (int j = 0; j < 3; ++j)
    for (int k = j; k < 3; ++k)
      if (std::abs(m_(j, k) - std::conj(m_(k, j))) > tol)
        throw DomainError("matrix is not Hermitian");
}

bool HermitianMatrix3::is_density(double tol_trace, double tol_eig) const {
  if (std::abs(m_.trace().real() - 1.0) > tol_trace) return false;
  return numeric_eigenvalues(*this).values[2] >= -tol_eig;
}

Matrix3c overlap_matrix(double mu) {
  check_mu(mu);
  // <sqrt(mu)|0><0|sqrt(mu)> = e^{-mu};
  // <sqrt(mu)|sqrt(mu/2)><0|sqrt(mu/2)> = e^{-mu(1 - 1/sqrt2)}.
  const double c12 = std::exp(-mu);
  const double c13 = std::exp(-mu * (1.0 - 1.0 / std::numbers::sqrt2));
  Matrix3c g;
  g << 1.0, c12, c13,
       c12, 1.0, c13,
       c13, c13, 1.0;
  return g;
}

HermitianMatrix3 gram_matrix(const StateEnsemble& ens) {
  Matrix3c g = overlap_matrix(ens.mu());
  const auto& p = ens.priors();
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) g(j, k) *= std::sqrt(p[j] * p[k]);
  return HermitianMatrix3(g);
}

SpectralTriple closed_form_eigenvalues(double mu) {
  check_mu(mu);
  const double e = std::exp(-mu);
  // e^{-mu} sqrt(1 + 8 e^{sqrt2 mu}) rewritten so nothing overflows.
  const double r = std::sqrt(std::exp(-2.0 * mu) + 8.0 * std::exp((std::numbers::sqrt2 - 2.0) * mu));
  SpectralTriple s{{(1.0 - e) / 3.0,
                    1.0 / 3.0 + (e + r) / 6.0,
                    1.0 / 3.0 + (e - r) / 6.0}};
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  return s;
}

SpectralTriple numeric_eigenvalues(const HermitianMatrix3& m) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolve failed");
  const auto& ev = solver.eigenvalues();  // ascending
  return SpectralTriple{{ev(2), ev(1), ev(0)}};
}

double shannon_entropy_bits(const SpectralTriple& s) {
  double h = 0.0;
  for (double v : s.values) h -= xlog2x(std::max(v, 0.0));
  return h;
}

double von_neumann_entropy(double mu) { return shannon_entropy_bits(closed_form_eigenvalues(mu)); }

double accessible_info_from_pg(double pg) {
  if (!(pg >= 1.0 / 3.0 && pg <= 1.0))
    throw DomainError("guessing probability must lie in [1/3, 1], got " + std::to_string(pg));
  const double q = 1.0 - pg;
  double info = pg * std::log2(3.0 * pg);
  if (q > 0.0) info += q * std::log2(1.5 * q);
  return info;
}

double holevo_pg_upper_bound(double mu, double tol) {
  check_mu(mu);
  if (!(tol > 0.0)) throw DomainError("bisection tolerance must be > 0");
  const double target = std::min(von_neumann_entropy(mu), std::log2(3.0));
  if (target <= 0.0) return 1.0 / 3.0;
  if (target >= std::log2(3.0)) return 1.0;

  double lo = 1.0 / 3.0;
  double hi = 1.0;
  for (int step = 0; step < 200; ++step) {
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (accessible_info_from_pg(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  throw NumericError("Holevo bisection did not converge");
}

}  // namespace tha
