#include "phasecs/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "phasecs/error.hpp"

namespace phasecs::theory {

namespace {

void check_support_params(double omega, double rho, double alpha) {
  if (!(omega >= 0.0 && omega <= 1.0)) throw ParameterError("omega must lie in [0, 1]");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw ParameterError("rho must be non-negative");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
}

double strong_rip_branch(double d, double g, double theta) {
  if (!(theta > 0.0 && theta < 2.0)) throw ParameterError("strong RIP bounds must lie in (0, 2)");
  const double gap = 1.0 - theta;
  return d + g * g * gap * gap / (2.0 * theta - theta * theta);
}

}  // namespace

double gamma(double omega, double rho, double alpha) {
  check_support_params(omega, rho, alpha);
  const double radicand = std::max(0.0, 1.0 + rho - 2.0 * alpha * rho);
  return omega + (1.0 - omega) * std::sqrt(radicand);
}

double a_const(double rho, double alpha) { return std::max(alpha, 1.0 - alpha) * rho; }

double d_const(double omega, double rho, double alpha) {
  check_support_params(omega, rho, alpha);
  if (omega == 1.0) return 1.0;
  return 1.0 - alpha * rho + a_const(rho, alpha);
}

double delta_threshold(double t, double d, double g) {
  if (!(t > d)) throw ParameterError("delta threshold requires t > d");
  return std::sqrt((t - d) / (t - d + g * g));
}

double t_omega(double omega, double rho, double alpha, double theta_minus, double theta_plus) {
  const double g = gamma(omega, rho, alpha);
  const double d = d_const(omega, rho, alpha);
  return std::max(strong_rip_branch(d, g, theta_minus), strong_rip_branch(d, g, theta_plus));
}

ErrorConstants error_constants(double t, double delta_tk, double omega, double rho, double alpha) {
  if (!(delta_tk >= 0.0)) throw ParameterError("delta_tk must be non-negative");
  const double g = gamma(omega, rho, alpha);
  const double d = d_const(omega, rho, alpha);
  const double thr = delta_threshold(t, d, g);
  if (!(delta_tk < thr)) throw ParameterError("bound not applicable: delta_tk >= threshold");
  const double span = t - d + g * g;
  const double denom = span * (thr - delta_tk);
  ErrorConstants out;
  out.c1 = std::sqrt(2.0 * (t - d) * span * (1.0 + delta_tk)) / denom;
  out.c2 = (std::sqrt(2.0) * delta_tk * g + std::sqrt(denom * delta_tk)) / denom + 1.0 / std::sqrt(d);
  return out;
}

double unweighted_c1(double t, double delta_tk) {
  if (!(t > 1.0)) throw ParameterError("unweighted constants require t > 1");
  return std::sqrt(2.0 * (1.0 + delta_tk)) / (1.0 - std::sqrt(t / (t - 1.0)) * delta_tk);
}

double unweighted_c2(double t, double delta_tk) {
  if (!(t > 1.0)) throw ParameterError("unweighted constants require t > 1");
  const double denom = std::sqrt(t * (t - 1.0)) - delta_tk * t;
  return (std::sqrt(2.0) * delta_tk + std::sqrt(denom * delta_tk)) / denom;
}

double error_bound(double c1, double c2, double zeta, double eps, double eta, std::size_t k,
                   double omega, double tail1, double tail2) {
  if (k < 1) throw ParameterError("k must be at least 1");
  if (c1 < 0.0 || c2 < 0.0 || zeta < 0.0 || eps < 0.0 || eta < 0.0 || tail1 < 0.0 || tail2 < 0.0)
    throw ParameterError("error bound inputs must be non-negative");
  const double rk = std::sqrt(static_cast<double>(k));
  return c1 * (zeta + eps) + c2 * 2.0 * (omega * tail1 + (1.0 - omega) * tail2) / rk + c2 * eta / rk;
}

BoundConstants bound_constants(const TheoryParams& p) {
  BoundConstants out;
  out.gamma = gamma(p.omega, p.rho, p.alpha);
  out.a = a_const(p.rho, p.alpha);
  out.d = d_const(p.omega, p.rho, p.alpha);
  out.t_omega = t_omega(p.omega, p.rho, p.alpha, p.theta_minus, p.theta_plus);
  if (p.t > out.d) {
    out.delta_threshold = delta_threshold(p.t, out.d, out.gamma);
    if (p.delta_tk >= 0.0 && p.delta_tk < out.delta_threshold) {
      const auto c = error_constants(p.t, p.delta_tk, p.omega, p.rho, p.alpha);
      out.c1 = c.c1;
      out.c2 = c.c2;
      out.applicable = true;
    }
  }
  return out;
}

std::vector<SweepRow> constants_sweep(double rho, double theta_minus, double theta_plus, double t,
                                      double delta_tk, std::span<const double> alphas,
                                      std::span<const double> omegas) {
  if (alphas.empty() || omegas.empty()) throw ParameterError("sweep grids must be nonempty");
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size() * omegas.size());
  for (double alpha : alphas) {
    for (double omega : omegas) {
      const auto bc = bound_constants({omega, rho, alpha, t, delta_tk, theta_minus, theta_plus});
      rows.push_back({alpha, omega, bc.t_omega, bc.c1, bc.c2, bc.applicable});
    }
  }
  return rows;
}

std::string constants_csv(const std::vector<SweepRow>& rows) {
  std::string out = "alpha,omega,t_omega,C1,C2,applicable\n";
  char buf[256];
  for (const auto& r : rows) {
    if (r.applicable)
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%.10g,1\n", r.alpha, r.omega,
                    r.t_omega, r.c1, r.c2);
    else
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,na,na,0\n", r.alpha, r.omega, r.t_omega);
    out += buf;
  }
  return out;
}

}  // namespace phasecs::theory
