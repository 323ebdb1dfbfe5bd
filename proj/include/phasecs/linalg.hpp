#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace phasecs::linalg {

using Vector = std::vector<double>;

/// Numerical tolerances shared across the library.
struct Tolerances {
  static constexpr int jacobi_max_sweeps = 100;
  /// Off-diagonal Frobenius norm target relative to ||M||_F.
  static constexpr double jacobi_rel_offdiag = 1e-12;
  /// Null-space threshold factor: tol = factor * max(m, N) * max|A|.
  static constexpr double kernel_factor = 1e-10;
  /// Cholesky pivot floor relative to the largest diagonal entry.
  static constexpr double spd_pivot_rel = 1e-12;
  /// Rank decision for QR of restricted systems, relative to max|R_ii|.
  static constexpr double qr_rank_rel = 1e-11;
};

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  Matrix select_rows(std::span<const std::size_t> idx) const;
  Matrix select_cols(std::span<const std::size_t> idx) const;
  Vector multiply(std::span<const double> x) const;
  Vector multiply_transpose(std::span<const double> y) const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Dense symmetric matrix with full storage; writes keep both triangles equal.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim);
  /// Takes a full n x n row-major buffer and symmetrizes it as (M + M^T)/2.
  SymMatrix(std::size_t dim, std::vector<double> row_major);

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);
  static SymMatrix outer(std::span<const double> x);
  /// G = A^T A.
  static SymMatrix gram(const Matrix& a);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * dim_ + j] = v;
    data_[j * dim_ + i] = v;
  }

  std::span<const double> data() const noexcept { return data_; }
  /// Raw access; callers must keep the buffer symmetric.
  std::span<double> mutable_data() noexcept { return data_; }

  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  Vector multiply(std::span<const double> x) const;
  /// x^T M x.
  double quadratic_form(std::span<const double> x) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Eigenpairs with eigenvalues in descending order; column j of `vectors`
/// is the unit eigenvector for values[j].
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
  int sweeps = 0;

  SymMatrix reconstruct() const;
};

/// Cyclic Jacobi eigensolver. Throws NumericalError if the off-diagonal
/// mass does not fall below tolerance within the sweep cap.
EigenDecomposition eig_sym(const SymMatrix& m);

/// Frobenius-nearest positive semidefinite matrix.
SymMatrix psd_project(const SymMatrix& m);

double default_kernel_tol(const Matrix& a);

/// Orthonormal basis of {h : ||A h|| <= tol}, from the eigendecomposition
/// of A^T A. Each returned h satisfies ||A h||_2 <= tol.
std::vector<Vector> kernel_basis(const Matrix& a, std::optional<double> tol = std::nullopt);

/// Cholesky factor of a symmetric positive definite matrix, reusable across solves.
class Cholesky {
 public:
  /// Throws NumericalError if a pivot falls below the SPD floor.
  explicit Cholesky(const SymMatrix& g);
  std::size_t dim() const noexcept { return dim_; }
  Vector solve(std::span<const double> rhs) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> lower_;
};

Vector solve_spd(const SymMatrix& g, std::span<const double> rhs);

/// Solution of the (square or tall) system A z = y when A has full column
/// rank and the residual is within `feas_tol`; nullopt when rank deficient
/// or inconsistent. Householder QR.
struct RestrictedSolve {
  enum class Outcome { solved, rank_deficient, inconsistent };
  Outcome outcome = Outcome::rank_deficient;
  Vector z;
  double residual = 0.0;
};
RestrictedSolve solve_restricted(const Matrix& a, std::span<const double> y, double feas_tol);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);
double norm1(std::span<const double> x);
double norm_inf(std::span<const double> x);

}  // namespace phasecs::linalg
