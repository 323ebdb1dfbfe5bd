#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phasecs/linalg.hpp"
#include "phasecs/rng.hpp"

namespace phasecs::model {

using linalg::Matrix;
using linalg::Vector;
using IndexSet = std::vector<std::size_t>;  // sorted ascending, 0-based

/// Prior support estimate and the weights it induces:
/// w_i = omega on the estimate, 1 elsewhere.
struct SupportEstimate {
  IndexSet indices;
  double omega = 1.0;
  double rho = 0.0;
  double alpha = 0.0;

  Vector weights(std::size_t n) const;
};

/// Squared-magnitude measurements b_i = (a_i^T x)^2 + e_i with eps = ||e||_2.
struct PhaselessInstance {
  Matrix a;
  Vector x;
  Vector e;
  double sigma = 0.0;
  double epsilon = 0.0;
  Vector b;
};

/// Nearest integer, halves rounded up.
std::size_t round_count(double v);

Vector gen_sparse_signal(Rng& rng, std::size_t n, std::size_t k);

/// Magnitudes j^{-theta}, j = 1..N, placed by a random permutation with
/// random signs.
Vector gen_compressible_signal(std::size_t n, double theta, Rng& rng);

/// Indices of the k largest |x_i|; ties go to the lower index.
IndexSet best_k_support(std::span<const double> x, std::size_t k);

/// Draws round(alpha*rho*k) indices from T0 and the remainder of
/// round(rho*k) from its complement.
SupportEstimate gen_support_estimate(Rng& rng, const IndexSet& t0, std::size_t n, std::size_t k,
                                     double rho, double alpha, double omega);

/// i.i.d. N(0, 1/m) entries.
Matrix gen_gaussian_matrix(Rng& rng, std::size_t m, std::size_t n);

PhaselessInstance make_instance(const Matrix& a, std::span<const double> x, double sigma, Rng& rng);

/// 20 log10(||x|| / min(||xhat - x||, ||xhat + x||)); +infinity on exact recovery.
double snr_db(std::span<const double> x, std::span<const double> xhat);

double weighted_l1(std::span<const double> x, std::span<const double> w);

struct TailNorms {
  double outside_t0 = 0.0;           // ||x_{T0^c}||_1
  double outside_t0_and_est = 0.0;   // ||x_{T~^c ∩ T0^c}||_1
};
TailNorms tail_norms(std::span<const double> x, const IndexSet& t0, const IndexSet& estimate);

/// min(||a - b||_2, ||a + b||_2).
double sign_invariant_distance(std::span<const double> a, std::span<const double> b);

}  // namespace phasecs::model
