#include "phasecs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "phasecs/error.hpp"

namespace phasecs::solver {

namespace {

constexpr int kAdaptEvery = 10;
constexpr int kMaxAdaptations = 40;

double soft(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double sq_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double sq_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void check_config(const SolverConfig& cfg) {
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) throw ParameterError("lambda must be >= 0");
  if (!(cfg.penalty > 0.0) || !std::isfinite(cfg.penalty)) throw ParameterError("penalty must be > 0");
  if (!(cfg.tol_abs > 0.0) || !(cfg.tol_rel > 0.0)) throw ParameterError("tolerances must be positive");
  if (cfg.max_iter < 1) throw ParameterError("max_iter must be at least 1");
  if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon)) throw ParameterError("epsilon must be >= 0");
}

// Solves D∘Z + B*B(Z) = R for symmetric Z.
class NormalSolver {
 public:
  NormalSolver(const LiftedOperator& op, std::span<const double> w)
      : op_(op), n_(op.dim()), m_(op.measurements()), dinv_(n_ * n_) {
    for (std::size_t p = 0; p < n_; ++p)
      for (std::size_t q = 0; q < n_; ++q) dinv_[p * n_ + q] = 1.0 / (w[p] * w[p] * w[q] * w[q] + 1.0);
    woodbury_ = m_ <= 4 * n_;
    if (woodbury_) factor();
    scratch_m_.resize(m_);
    scratch_nn_.resize(n_ * n_);
  }

  bool woodbury() const noexcept { return woodbury_; }

  // `z` holds the previous iterate on entry (CG warm start) and the solution on exit.
  void solve(std::span<const double> rhs, std::span<double> z) {
    if (woodbury_)
      solve_woodbury(rhs, z);
    else
      solve_cg(rhs, z);
  }

 private:
  void factor() {
    const auto& a = op_.sensors();
    SymMatrix g(m_);
    auto gd = g.mutable_data();
    std::vector<double> t(n_ * n_);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto ai = a.row(i);
      for (std::size_t p = 0; p < n_; ++p)
        for (std::size_t q = 0; q < n_; ++q) t[p * n_ + q] = ai[p] * ai[q] * dinv_[p * n_ + q];
      for (std::size_t j = i; j < m_; ++j) {
        const auto aj = a.row(j);
        double s = 0.0;
        for (std::size_t p = 0; p < n_; ++p) {
          double row = 0.0;
          for (std::size_t q = 0; q < n_; ++q) row += t[p * n_ + q] * aj[q];
          s += row * aj[p];
        }
        if (i == j) s += 1.0;
        gd[i * m_ + j] = s;
        gd[j * m_ + i] = s;
      }
    }
    chol_.emplace(g);
  }

  void solve_woodbury(std::span<const double> rhs, std::span<double> z) {
    for (std::size_t i = 0; i < n_ * n_; ++i) z[i] = dinv_[i] * rhs[i];
    op_.apply(z, scratch_m_);
    const Vector y = chol_->solve(scratch_m_);
    std::fill(scratch_nn_.begin(), scratch_nn_.end(), 0.0);
    op_.add_adjoint(y, 1.0, scratch_nn_);
    for (std::size_t i = 0; i < n_ * n_; ++i) z[i] -= dinv_[i] * scratch_nn_[i];
  }

  void apply_normal(std::span<const double> x, std::span<double> out) {
    op_.apply(x, scratch_m_);
    for (std::size_t i = 0; i < n_ * n_; ++i) out[i] = x[i] / dinv_[i];
    op_.add_adjoint(scratch_m_, 1.0, out);
  }

  void solve_cg(std::span<const double> rhs, std::span<double> z) {
    const std::size_t nn = n_ * n_;
    std::vector<double> r(nn), p(nn), ap(nn);
    apply_normal(z, ap);
    for (std::size_t i = 0; i < nn; ++i) r[i] = rhs[i] - ap[i];
    p = r;
    double rr = sq_norm(r);
    const double target = 1e-10 * std::max(std::sqrt(sq_norm(rhs)), 1e-300);
    const std::size_t cap = 10 * nn;
    for (std::size_t it = 0; it < cap && std::sqrt(rr) > target; ++it) {
      apply_normal(p, ap);
      const double denom = linalg::dot(p, ap);
      if (!(denom > 0.0)) throw NumericalError("conjugate gradient breakdown");
      const double step = rr / denom;
      for (std::size_t i = 0; i < nn; ++i) {
        z[i] += step * p[i];
        r[i] -= step * ap[i];
      }
      const double rr_next = sq_norm(r);
      const double beta = rr_next / rr;
      rr = rr_next;
      for (std::size_t i = 0; i < nn; ++i) p[i] = r[i] + beta * p[i];
    }
    if (std::sqrt(rr) > target) throw NumericalError("conjugate gradient did not converge");
  }

  const LiftedOperator& op_;
  std::size_t n_;
  std::size_t m_;
  std::vector<double> dinv_;
  bool woodbury_ = true;
  std::optional<linalg::Cholesky> chol_;
  std::vector<double> scratch_m_;
  std::vector<double> scratch_nn_;
};

// out = W X W for W = diag(w).
void congruence(std::span<const double> x, std::span<const double> w, std::span<double> out) {
  const std::size_t n = w.size();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) out[p * n + q] = w[p] * x[p * n + q] * w[q];
}

}  // namespace

LiftedOperator::LiftedOperator(Matrix sensors) : sensors_(std::move(sensors)) {
  if (sensors_.empty()) throw ParameterError("sensing matrix must be nonempty");
}

void LiftedOperator::apply(std::span<const double> z_full, std::span<double> out) const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < measurements(); ++i) {
    const auto a = sensors_.row(i);
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      const double* zr = z_full.data() + p * n;
      double row = 0.0;
      for (std::size_t q = 0; q < n; ++q) row += zr[q] * a[q];
      s += a[p] * row;
    }
    out[i] = s;
  }
}

Vector LiftedOperator::apply(const SymMatrix& z) const {
  if (z.dim() != dim()) throw ParameterError("lifted operator: dimension mismatch");
  Vector out(measurements());
  apply(z.data(), out);
  return out;
}

void LiftedOperator::add_adjoint(std::span<const double> y, double scale,
                                 std::span<double> z_full) const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < measurements(); ++i) {
    const double s = scale * y[i];
    if (s == 0.0) continue;
    const auto a = sensors_.row(i);
    for (std::size_t p = 0; p < n; ++p) {
      const double sp = s * a[p];
      double* zr = z_full.data() + p * n;
      for (std::size_t q = 0; q < n; ++q) zr[q] += sp * a[q];
    }
  }
}

SymMatrix LiftedOperator::adjoint(std::span<const double> y) const {
  if (y.size() != measurements()) throw ParameterError("lifted adjoint: length mismatch");
  std::vector<double> buf(dim() * dim(), 0.0);
  add_adjoint(y, 1.0, buf);
  return SymMatrix(dim(), std::move(buf));
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::failed: return "failed";
  }
  return "failed";
}

SymMatrix weighted_shrink(const SymMatrix& v, double lambda, double penalty) {
  if (!(penalty > 0.0)) throw ParameterError("penalty must be > 0");
  const std::size_t n = v.dim();
  const double t = lambda / penalty;
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.set(i, i, soft(v(i, i) - 1.0 / penalty, t));
    for (std::size_t j = i + 1; j < n; ++j) out.set(i, j, soft(0.5 * (v(i, j) + v(j, i)), t));
  }
  return out;
}

Vector ball_project(std::span<const double> v, double radius) {
  if (!(radius >= 0.0)) throw ParameterError("radius must be >= 0");
  Vector out(v.begin(), v.end());
  const double nv = linalg::norm2(v);
  if (nv > radius) {
    const double s = radius / nv;
    for (double& x : out) x *= s;
  }
  return out;
}

Vector rank1_extract(const SymMatrix& z) {
  const std::size_t n = z.dim();
  Vector x(n, 0.0);
  if (n == 0) return x;
  const auto eig = linalg::eig_sym(z);
  const double top = eig.values[0];
  if (!(top > 0.0)) return x;
  const double s = std::sqrt(top);
  double biggest = 0.0;
  for (std::size_t i = 0; i < n; ++i) biggest = std::max(biggest, std::abs(eig.vectors(i, 0)));
  double sign = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = eig.vectors(i, 0);
    if (std::abs(v) > 1e-12 * biggest) {
      sign = v < 0.0 ? -1.0 : 1.0;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) x[i] = sign * s * eig.vectors(i, 0);
  return x;
}

SolverResult solve_sdp(const LiftedOperator& op, std::span<const double> b, std::span<const double> w,
                       const SolverConfig& cfg) {
  check_config(cfg);
  const std::size_t n = op.dim();
  const std::size_t m = op.measurements();
  if (b.size() != m) throw ParameterError("measurement vector length must equal m");
  if (w.size() != n) throw ParameterError("weight vector length must equal N");
  for (double v : w)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("weights must be finite and >= 0");
  for (double v : b)
    if (!std::isfinite(v)) throw ParameterError("measurements must be finite");

  SolverResult res;
  std::optional<NormalSolver> normal;
  try {
    normal.emplace(op, w);
  } catch (const NumericalError& e) {
    res.z = SymMatrix(n);
    res.xhat.assign(n, 0.0);
    res.status = SolveStatus::failed;
    res.diagnostics = std::string("normal-equation factorization failed: ") + e.what();
    return res;
  }
  res.woodbury = normal->woodbury();

  const std::size_t nn = n * n;
  std::vector<double> z(nn, 0.0), l(nn, 0.0), p(nn, 0.0), ul(nn, 0.0), up(nn, 0.0);
  std::vector<double> r(m, 0.0), ur(m, 0.0);
  std::vector<double> rhs(nn), wzw(nn), tmp(nn), l_old(nn), p_old(nn), r_old(m);
  std::vector<double> bz(m), bp(m), rt(m);
  double rho = cfg.penalty;
  const double b_norm = linalg::norm2(b);
  const double sqrt_p = std::sqrt(static_cast<double>(2 * nn + m));
  const double sqrt_n = std::sqrt(static_cast<double>(nn));
  SymMatrix p_mat(n);
  const double feas_tol = 10.0 * cfg.tol_abs;
  int adaptations = 0;

  res.status = SolveStatus::max_iter;
  try {
    for (int it = 1; it <= cfg.max_iter; ++it) {
      // Z-update: D∘Z + B*B(Z) = W(L - UL)W + (P - UP) + B*(b + r - Ur).
      for (std::size_t i = 0; i < nn; ++i) tmp[i] = l[i] - ul[i];
      congruence(tmp, w, rhs);
      for (std::size_t i = 0; i < nn; ++i) rhs[i] += p[i] - up[i];
      for (std::size_t i = 0; i < m; ++i) bz[i] = b[i] + r[i] - ur[i];
      op.add_adjoint(bz, 1.0, rhs);
      normal->solve(rhs, z);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = a + 1; c < n; ++c) {
          const double s = 0.5 * (z[a * n + c] + z[c * n + a]);
          z[a * n + c] = s;
          z[c * n + a] = s;
        }

      l_old = l;
      p_old = p;
      r_old = r;

      congruence(z, w, wzw);
      for (std::size_t i = 0; i < nn; ++i) tmp[i] = wzw[i] + ul[i];
      const SymMatrix lv = weighted_shrink(SymMatrix(n, tmp), cfg.lambda, rho);
      std::copy(lv.data().begin(), lv.data().end(), l.begin());

      for (std::size_t i = 0; i < nn; ++i) tmp[i] = z[i] + up[i];
      const auto eig = linalg::eig_sym(SymMatrix(n, tmp));
      {
        std::fill(p.begin(), p.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
          const double lam = eig.values[j];
          if (lam <= 0.0) break;
          for (std::size_t a = 0; a < n; ++a) {
            const double va = lam * eig.vectors(a, j);
            if (va == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) p[a * n + c] += va * eig.vectors(c, j);
          }
        }
        p_mat = SymMatrix(n, p);
        std::copy(p_mat.data().begin(), p_mat.data().end(), p.begin());
      }

      op.apply(z, bz);
      for (std::size_t i = 0; i < m; ++i) rt[i] = bz[i] - b[i] + ur[i];
      const Vector rv = ball_project(rt, cfg.epsilon);
      std::copy(rv.begin(), rv.end(), r.begin());

      double prim = 0.0;
      for (std::size_t i = 0; i < nn; ++i) {
        const double dl = wzw[i] - l[i];
        const double dp = z[i] - p[i];
        ul[i] += dl;
        up[i] += dp;
        prim += dl * dl + dp * dp;
      }
      for (std::size_t i = 0; i < m; ++i) {
        const double dr = bz[i] - b[i] - r[i];
        ur[i] += dr;
        prim += dr * dr;
      }
      prim = std::sqrt(prim);

      for (std::size_t i = 0; i < nn; ++i) tmp[i] = l[i] - l_old[i];
      congruence(tmp, w, rhs);
      for (std::size_t i = 0; i < nn; ++i) rhs[i] += p[i] - p_old[i];
      for (std::size_t i = 0; i < m; ++i) r_old[i] = r[i] - r_old[i];
      op.add_adjoint(r_old, 1.0, rhs);
      const double dual = rho * std::sqrt(sq_norm(rhs));

      const double kz = std::sqrt(sq_norm(wzw) + sq_norm(z) + sq_norm(bz));
      const double yn = std::sqrt(sq_norm(l) + sq_norm(p) + sq_norm(r));
      const double eps_pri = sqrt_p * cfg.tol_abs + cfg.tol_rel * std::max({kz, yn, b_norm});
      congruence(ul, w, rhs);
      for (std::size_t i = 0; i < nn; ++i) rhs[i] += up[i];
      op.add_adjoint(ur, 1.0, rhs);
      const double eps_dual = sqrt_n * cfg.tol_abs + cfg.tol_rel * rho * std::sqrt(sq_norm(rhs));

      op.apply(p, bp);
      const double feas = std::max(0.0, std::sqrt(sq_diff(bp, b)) - cfg.epsilon);

      res.iterations = it;
      res.primal_residual = prim;
      res.dual_residual = dual;
      res.feasibility = feas;

      if (prim <= eps_pri && dual <= eps_dual && feas <= feas_tol) {
        res.status = SolveStatus::converged;
        break;
      }

      if (cfg.adapt_penalty && it % kAdaptEvery == 0 && adaptations < kMaxAdaptations) {
        // Residual balancing on tolerance-normalized residuals.
        const double pn = std::max(prim / eps_pri, feas / feas_tol);
        const double dn = dual / eps_dual;
        double scale = 1.0;
        if (pn > 10.0 * dn)
          scale = 2.0;
        else if (dn > 10.0 * pn)
          scale = 0.5;
        if (scale != 1.0) {
          ++adaptations;
          rho *= scale;
          for (std::size_t i = 0; i < nn; ++i) {
            ul[i] /= scale;
            up[i] /= scale;
          }
          for (std::size_t i = 0; i < m; ++i) ur[i] /= scale;
        }
      }
    }
  } catch (const NumericalError& e) {
    res.status = SolveStatus::failed;
    res.diagnostics = e.what();
  }

  res.final_penalty = rho;
  res.z = p_mat;
  double obj = 0.0;
  congruence(p_mat.data(), w, wzw);
  for (std::size_t a = 0; a < n; ++a) obj += wzw[a * n + a];
  double l1 = 0.0;
  for (double v : wzw) l1 += std::abs(v);
  res.objective = obj + cfg.lambda * l1;
  // P is a PSD projection of a symmetric matrix.
  res.min_eigenvalue = 0.0;
  try {
    res.xhat = rank1_extract(p_mat);
  } catch (const NumericalError& e) {
    res.xhat.assign(n, 0.0);
    res.status = SolveStatus::failed;
    res.diagnostics = std::string("rank-1 extraction failed: ") + e.what();
  }
  if (res.status == SolveStatus::max_iter && res.diagnostics.empty())
    res.diagnostics = "iteration cap reached";
  return res;
}

}  // namespace phasecs::solver
