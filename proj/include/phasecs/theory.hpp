#pragma once

#include <span>
#include <string>
#include <vector>

namespace phasecs::theory {

/// Inputs of the weighted recovery bounds.
struct TheoryParams {
  double omega = 1.0;        // weight on the support estimate, in [0, 1]
  double rho = 1.0;          // |T~| / k
  double alpha = 0.5;        // |T~ ∩ T0| / |T~|
  double t = 4.0;            // RIP order multiplier (order t*k)
  double delta_tk = 0.3;     // RIP constant of order t*k
  double theta_minus = 0.5;  // strong RIP lower bound
  double theta_plus = 1.5;   // strong RIP upper bound
};

struct BoundConstants {
  double gamma = 0.0;
  double a = 0.0;
  double d = 0.0;
  double t_omega = 0.0;
  double delta_threshold = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  bool applicable = false;  // c1 and c2 are only defined when delta_tk < delta_threshold
};

struct ErrorConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// omega + (1 - omega) sqrt(1 + rho - 2 alpha rho).
double gamma(double omega, double rho, double alpha);
/// max(alpha, 1 - alpha) rho.
double a_const(double rho, double alpha);
/// 1 when omega = 1, otherwise 1 - alpha rho + a.
double d_const(double omega, double rho, double alpha);
/// sqrt((t - d) / (t - d + gamma^2)); requires t > d.
double delta_threshold(double t, double d, double gamma);

/// Smallest admissible order multiplier under strong RIP bounds
/// (theta_minus, theta_plus): max over both bounds of d + gamma^2 (1-theta)^2 / (2 theta - theta^2).
double t_omega(double omega, double rho, double alpha, double theta_minus, double theta_plus);

/// Stability constants of the weighted recovery error bound. C2 carries the
/// additive 1/sqrt(d) term. Throws ParameterError if t <= d or
/// delta_tk >= delta_threshold.
ErrorConstants error_constants(double t, double delta_tk, double omega, double rho, double alpha);

/// Unweighted reference constants: c1 = sqrt(2(1+delta)) / (1 - sqrt(t/(t-1)) delta) and
/// c2 = (sqrt2 delta + sqrt((sqrt(t(t-1)) - delta t) delta)) / (sqrt(t(t-1)) - delta t).
double unweighted_c1(double t, double delta_tk);
double unweighted_c2(double t, double delta_tk);

/// C1 (zeta + eps) + C2 * 2 (omega tail1 + (1-omega) tail2) / sqrt(k) + C2 eta / sqrt(k),
/// where tail1 = ||x_{T0^c}||_1, tail2 = ||x_{T~^c ∩ T0^c}||_1.
double error_bound(double c1, double c2, double zeta, double eps, double eta, std::size_t k,
                   double omega, double tail1, double tail2);

BoundConstants bound_constants(const TheoryParams& p);

struct SweepRow {
  double alpha = 0.0;
  double omega = 0.0;
  double t_omega = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  bool applicable = false;
};

/// Grid of (t^omega, C1, C2) over alphas x omegas. Points where the bound is
/// not applicable are kept with applicable = false.
std::vector<SweepRow> constants_sweep(double rho, double theta_minus, double theta_plus, double t,
                                      double delta_tk, std::span<const double> alphas,
                                      std::span<const double> omegas);

/// CSV with columns alpha,omega,t_omega,C1,C2,applicable; "na" where not applicable.
std::string constants_csv(const std::vector<SweepRow>& rows);

}  // namespace phasecs::theory
