#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "phasecs/linalg.hpp"

namespace phasecs::solver {

using linalg::Matrix;
using linalg::SymMatrix;
using linalg::Vector;

/// B(Z) = (a_i^T Z a_i)_i = (Tr(a_i a_i^T Z))_i for the rows a_i of A.
class LiftedOperator {
 public:
  explicit LiftedOperator(Matrix sensors);

  std::size_t measurements() const noexcept { return sensors_.rows(); }
  std::size_t dim() const noexcept { return sensors_.cols(); }
  const Matrix& sensors() const noexcept { return sensors_; }

  Vector apply(const SymMatrix& z) const;
  void apply(std::span<const double> z_full, std::span<double> out) const;
  /// B^*(y) = sum_i y_i a_i a_i^T.
  SymMatrix adjoint(std::span<const double> y) const;
  /// Accumulates scale * B^*(y) into a full n x n buffer.
  void add_adjoint(std::span<const double> y, double scale, std::span<double> z_full) const;

 private:
  Matrix sensors_;
};

struct SolverConfig {
  double lambda = 1.0;
  double penalty = 1.0;
  bool adapt_penalty = true;
  double tol_abs = 1e-6;
  double tol_rel = 1e-4;
  int max_iter = 5000;
  double epsilon = 0.0;
};

enum class SolveStatus { converged, max_iter, failed };
std::string to_string(SolveStatus s);

struct SolverResult {
  SymMatrix z;  // PSD iterate
  Vector xhat;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  /// max(0, ||B(Z) - b||_2 - epsilon).
  double feasibility = 0.0;
  double min_eigenvalue = 0.0;
  double objective = 0.0;
  double final_penalty = 0.0;
  bool woodbury = true;
  SolveStatus status = SolveStatus::failed;
  std::string diagnostics;
};

/// Proximal map of L -> Tr(L) + lambda ||L||_1 with step 1/penalty:
/// soft-threshold at lambda/penalty after shifting the diagonal by -1/penalty.
SymMatrix weighted_shrink(const SymMatrix& v, double lambda, double penalty);

/// Euclidean projection onto {r : ||r||_2 <= radius}.
Vector ball_project(std::span<const double> v, double radius);

/// Approximate minimizer of Tr(WZW) + lambda ||WZW||_1 subject to
/// ||B(Z) - b||_2 <= epsilon and Z PSD, with W = diag(w), by ADMM over the
/// splitting L = WZW, P = Z, r = B(Z) - b.
SolverResult solve_sdp(const LiftedOperator& op, std::span<const double> b, std::span<const double> w,
                       const SolverConfig& cfg = {});

/// sqrt(max(lambda_1, 0)) v_1 with the first significant entry of v_1 positive.
Vector rank1_extract(const SymMatrix& z);

}  // namespace phasecs::solver
