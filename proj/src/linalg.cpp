#include "phasecs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "phasecs/error.hpp"

namespace phasecs::linalg {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) throw ParameterError("matrix dimensions must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (rows == 0 || cols == 0) throw ParameterError("matrix dimensions must be positive");
  if (data_.size() != rows * cols) throw ParameterError("matrix entry count does not match shape");
  for (double v : data_)
    if (!std::isfinite(v)) throw ParameterError("matrix entries must be finite");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> idx) const {
  Matrix out(idx.size(), cols_);
  for (std::size_t r = 0; r < idx.size(); ++r)
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(idx[r] * cols_), cols_,
                out.data_.begin() + static_cast<std::ptrdiff_t>(r * cols_));
  return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> idx) const {
  Matrix out(rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t c = 0; c < idx.size(); ++c) out(i, c) = (*this)(i, idx[c]);
  return out;
}

Vector Matrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw ParameterError("matrix-vector shape mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
  return y;
}

Vector Matrix::multiply_transpose(std::span<const double> y) const {
  if (y.size() != rows_) throw ParameterError("matrix-vector shape mismatch");
  Vector x(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double yi = y[i];
    const double* r = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) x[j] += r[j] * yi;
  }
  return x;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
  if (dim == 0) throw ParameterError("matrix dimensions must be positive");
}

SymMatrix::SymMatrix(std::size_t dim, std::vector<double> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  if (dim == 0) throw ParameterError("matrix dimensions must be positive");
  if (data_.size() != dim * dim) throw ParameterError("matrix entry count does not match shape");
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double avg = 0.5 * (data_[i * dim + j] + data_[j * dim + i]);
      data_[i * dim + j] = avg;
      data_[j * dim + i] = avg;
    }
  }
  for (double v : data_)
    if (!std::isfinite(v)) throw ParameterError("matrix entries must be finite");
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) out.data_[i * n + i] = 1.0;
  return out;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out.data_[i * d.size() + i] = d[i];
  return out;
}

SymMatrix SymMatrix::outer(std::span<const double> x) {
  const std::size_t n = x.size();
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.data_[i * n + j] = x[i] * x[j];
  return out;
}

SymMatrix SymMatrix::gram(const Matrix& a) {
  const std::size_t n = a.cols();
  SymMatrix out(n);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto row = a.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      const double ai = row[i];
      if (ai == 0.0) continue;
      for (std::size_t j = i; j < n; ++j) out.data_[i * n + j] += ai * row[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.data_[j * n + i] = out.data_[i * n + j];
  return out;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
  return t;
}

double SymMatrix::frobenius_norm() const { return norm2(data_); }

double SymMatrix::max_abs() const { return norm_inf(data_); }

Vector SymMatrix::multiply(std::span<const double> x) const {
  if (x.size() != dim_) throw ParameterError("matrix-vector shape mismatch");
  Vector y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) y[i] = dot({data_.data() + i * dim_, dim_}, x);
  return y;
}

double SymMatrix::quadratic_form(std::span<const double> x) const { return dot(x, multiply(x)); }

SymMatrix EigenDecomposition::reconstruct() const {
  const std::size_t n = values.size();
  std::vector<double> full(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = values[k];
    if (lam == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = lam * vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) full[i * n + j] += vik * vectors(j, k);
    }
  }
  return SymMatrix(n, std::move(full));
}

namespace {

double offdiag_norm(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += a[i * n + j] * a[i * n + j];
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition eig_sym(const SymMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<double> a(m.data().begin(), m.data().end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double target = Tolerances::jacobi_rel_offdiag * norm2(a);
  int sweep = 0;
  bool converged = false;
  for (; sweep <= Tolerances::jacobi_max_sweeps; ++sweep) {
    if (offdiag_norm(a, n) <= target) {
      converged = true;
      break;
    }
    if (sweep == Tolerances::jacobi_max_sweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- J^T A J with J the (p, q) rotation.
        for (std::size_t k = 0; k < n; ++k) {
          double* row = a.data() + k * n;
          const double akp = row[p];
          const double akq = row[q];
          row[p] = c * akp - s * akq;
          row[q] = s * akp + c * akq;
        }
        double* rp = a.data() + p * n;
        double* rq = a.data() + q * n;
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = rp[k];
          const double aqk = rq[k];
          rp[k] = c * apk - s * aqk;
          rq[k] = s * apk + c * aqk;
        }
        rp[q] = 0.0;
        rq[p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          double* row = v.data() + k * n;
          const double vkp = row[p];
          const double vkq = row[q];
          row[p] = c * vkp - s * vkq;
          row[q] = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged)
    throw NumericalError("Jacobi eigensolver did not converge in " +
                         std::to_string(Tolerances::jacobi_max_sweeps) + " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  out.sweeps = sweep;
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.values[c] = a[src * n + src];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = v[i * n + src];
  }
  return out;
}

SymMatrix psd_project(const SymMatrix& m) {
  const auto eig = eig_sym(m);
  const std::size_t n = m.dim();
  std::vector<double> full(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = eig.values[k];
    if (lam <= 0.0) break;  // descending order
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = lam * eig.vectors(i, k);
      double* row = full.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += vik * eig.vectors(j, k);
    }
  }
  return SymMatrix(n, std::move(full));
}

double default_kernel_tol(const Matrix& a) {
  const double scale = a.max_abs();
  return Tolerances::kernel_factor * static_cast<double>(std::max(a.rows(), a.cols())) *
         (scale > 0.0 ? scale : 1.0);
}

std::vector<Vector> kernel_basis(const Matrix& a, std::optional<double> tol) {
  const double threshold = tol.value_or(default_kernel_tol(a));
  if (!(threshold > 0.0)) throw ParameterError("kernel tolerance must be positive");
  const auto eig = eig_sym(SymMatrix::gram(a));
  const std::size_t n = a.cols();
  std::vector<Vector> basis;
  // Singular values are measured as ||A v|| rather than sqrt(lambda), which
  // keeps the threshold meaningful below sqrt(machine epsilon).
  for (std::size_t k = n; k-- > 0;) {
    Vector h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = eig.vectors(i, k);
    if (norm2(a.multiply(h)) <= threshold)
      basis.push_back(std::move(h));
    else
      break;
  }
  return basis;
}

Cholesky::Cholesky(const SymMatrix& g) : dim_(g.dim()), lower_(g.dim() * g.dim(), 0.0) {
  const std::size_t n = dim_;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(g(i, i)));
  const double floor = Tolerances::spd_pivot_rel * (scale > 0.0 ? scale : 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = g(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= lower_[j * n + k] * lower_[j * n + k];
    if (!(d > floor)) throw NumericalError("matrix is not symmetric positive definite");
    const double ljj = std::sqrt(d);
    lower_[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower_[i * n + k] * lower_[j * n + k];
      lower_[i * n + j] = s / ljj;
    }
  }
}

Vector Cholesky::solve(std::span<const double> rhs) const {
  const std::size_t n = dim_;
  if (rhs.size() != n) throw ParameterError("right-hand side length mismatch");
  Vector y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = y[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower_[i * n + k] * y[k];
    y[i] = s / lower_[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= lower_[k * n + i] * y[k];
    y[i] = s / lower_[i * n + i];
  }
  return y;
}

Vector solve_spd(const SymMatrix& g, std::span<const double> rhs) { return Cholesky(g).solve(rhs); }

RestrictedSolve solve_restricted(const Matrix& a, std::span<const double> y, double feas_tol) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (y.size() != m) throw ParameterError("right-hand side length mismatch");
  RestrictedSolve out;
  if (m < n) return out;

  std::vector<double> r(a.data().begin(), a.data().end());
  Vector qty(y.begin(), y.end());
  std::vector<double> hv(m);
  for (std::size_t j = 0; j < n; ++j) {
    double alpha = 0.0;
    for (std::size_t i = j; i < m; ++i) alpha += r[i * n + j] * r[i * n + j];
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (r[j * n + j] > 0.0) alpha = -alpha;
    for (std::size_t i = j; i < m; ++i) hv[i] = r[i * n + j];
    hv[j] -= alpha;
    double hn = 0.0;
    for (std::size_t i = j; i < m; ++i) hn += hv[i] * hv[i];
    if (hn == 0.0) continue;
    for (std::size_t c = j; c < n; ++c) {
      double s = 0.0;
      for (std::size_t i = j; i < m; ++i) s += hv[i] * r[i * n + c];
      s = 2.0 * s / hn;
      for (std::size_t i = j; i < m; ++i) r[i * n + c] -= s * hv[i];
    }
    double s = 0.0;
    for (std::size_t i = j; i < m; ++i) s += hv[i] * qty[i];
    s = 2.0 * s / hn;
    for (std::size_t i = j; i < m; ++i) qty[i] -= s * hv[i];
  }

  double rmax = 0.0;
  for (std::size_t j = 0; j < n; ++j) rmax = std::max(rmax, std::abs(r[j * n + j]));
  if (rmax == 0.0) return out;
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(r[j * n + j]) <= Tolerances::qr_rank_rel * rmax) return out;

  Vector z(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = qty[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= r[i * n + k] * z[k];
    z[i] = s / r[i * n + i];
  }
  Vector res = a.multiply(z);
  for (std::size_t i = 0; i < m; ++i) res[i] -= y[i];
  out.residual = norm2(res);
  out.z = std::move(z);
  out.outcome = out.residual <= feas_tol ? RestrictedSolve::Outcome::solved
                                         : RestrictedSolve::Outcome::inconsistent;
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double norm1(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

double norm_inf(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace phasecs::linalg
