#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace tha {

using Complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;
using Vector3c = Eigen::Vector3cd;
using Priors = std::array<double, 3>;

inline constexpr Priors kUniformPriors{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

/// The three coherent states Eve receives back for Alice's H, V and D
/// settings, |sqrt(mu)>_H|0>_V, |0>_H|sqrt(mu)>_V and
/// |sqrt(mu/2)>_H|sqrt(mu/2)>_V, with their priors.
class StateEnsemble {
 public:
  explicit StateEnsemble(double mu, Priors priors = kUniformPriors);

  double mu() const noexcept { return mu_; }
  const Priors& priors() const noexcept { return priors_; }

 private:
  double mu_;
  Priors priors_;
};

/// 3x3 complex Hermitian matrix. Construction checks Hermiticity.
class HermitianMatrix3 {
 public:
  explicit HermitianMatrix3(const Matrix3c& m, double tol = 1e-12);

  const Matrix3c& matrix() const noexcept { return m_; }
  Complex operator()(int j, int k) const { return m_(j, k); }

  /// Trace 1 and eigenvalues >= -tol_eig.
  bool is_density(double tol_trace = 1e-10, double tol_eig = 1e-10) const;

 private:
  Matrix3c m_;
};

/// Eigenvalues sorted in descending order.
struct SpectralTriple {
  std::array<double, 3> values{};

  double sum() const noexcept { return values[0] + values[1] + values[2]; }
};

/// Overlaps <psi_j|psi_k> of the three states (unit diagonal).
Matrix3c overlap_matrix(double mu);

/// Density matrix of the ensemble expressed on its own span:
/// rho_jk = sqrt(p_j p_k) <psi_j|psi_k>, i.e. G/3 for uniform priors.
HermitianMatrix3 gram_matrix(const StateEnsemble& ens);

/// Analytic spectrum of the uniform-prior ensemble state.
SpectralTriple closed_form_eigenvalues(double mu);

/// Spectrum by numeric Hermitian eigensolve.
SpectralTriple numeric_eigenvalues(const HermitianMatrix3& m);

/// Shannon entropy in bits; negative round-off is clamped to zero.
double shannon_entropy_bits(const SpectralTriple& s);

/// Von Neumann entropy H(mu) of the uniform ensemble, in bits. Equals the
/// Holevo quantity since every signal state is pure.
double von_neumann_entropy(double mu);

/// Accessible information of a symmetric three-outcome channel with
/// guessing probability `pg`, in bits. `pg` must lie in [1/3, 1].
double accessible_info_from_pg(double pg);

/// Largest guessing probability compatible with I(pg) <= H(mu), found by
/// bisection to `tol`.
double holevo_pg_upper_bound(double mu, double tol = 1e-10);

}  // namespace tha
