#pragma once

#include <array>

#include "tha/quantum_core.hpp"

namespace tha {

/// Pure-state minimum-error discrimination problem expressed in an
/// orthonormal basis of the states' span.
struct DiscriminationProblem {
  std::array<Vector3c, 3> states;
  Priors priors = kUniformPriors;

  /// Builds the problem for the coherent-state ensemble by factorizing its
  /// overlap matrix. Throws DegenerateEnsembleError near mu = 0.
  static DiscriminationProblem from_ensemble(const StateEnsemble& ens);

  /// Throws DomainError unless states are unit vectors and priors sum to 1.
  void validate() const;
};

struct PovmSet {
  std::array<Matrix3c, 3> elements;

  /// Frobenius norm of sum(F_a) - I.
  double completeness_error() const;
  /// Smallest eigenvalue over all elements.
  double min_eigenvalue() const;
};

struct SolverReport {
  double pg_primal = 0.0;
  double pg_dual = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct HelstromOptions {
  double tol = 1e-7;
  int max_iter = 10000;
};

struct HelstromResult {
  SolverReport report;
  PovmSet povm;
  /// Dual-feasible certificate: K >= p_a rho_a for every a, Tr K = pg_dual.
  Matrix3c dual_k;
  /// max_a ||(K - p_a rho_a) F_a||_F.
  double slackness_residual = 0.0;
};

/// Coordinates of three unit vectors with <v_j|v_k> = 3 gram_jk, from the
/// Cholesky factor of 3 * gram.
std::array<Vector3c, 3> orthonormalize(const HermitianMatrix3& gram);

/// Minimum-error measurement by the fixed-point POVM iteration
///   F_a <- L^{-1/2} p_a rho_a F_a rho_a p_a L^{-1/2},
///   L   =  sum_b p_b rho_b F_b rho_b p_b,
/// started from F_a = I/3. Each step builds a dual certificate from the
/// Hermitian part of sum_b p_b rho_b F_b, shifted by eps I until it dominates
/// every p_a rho_a; the run stops once Tr K - primal <= tol.
HelstromResult helstrom_solve(const DiscriminationProblem& problem,
                              const HelstromOptions& opts = {});

/// Guessing probability of the square-root measurement
/// F_a = rho^{-1/2} p_a rho_a rho^{-1/2} (pseudo-inverse on the support).
double pretty_good_measurement_pg(const DiscriminationProblem& problem);

/// Helstrom p_g of the uniform coherent ensemble. Returns 1/3 at mu = 0,
/// propagates DegenerateEnsembleError for 0 < mu below the factorization
/// threshold, and NumericError if the solver does not converge.
double helstrom_pg(double mu, const HelstromOptions& opts = {});

}  // namespace tha
