#include "phasecs/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "phasecs/error.hpp"

namespace phasecs::model {

namespace {

// First `count` entries of a Fisher-Yates shuffle of `pool`.
IndexSet sample_without_replacement(Rng& rng, IndexSet pool, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

bool contains(const IndexSet& s, std::size_t i) { return std::binary_search(s.begin(), s.end(), i); }

}  // namespace

Vector SupportEstimate::weights(std::size_t n) const {
  Vector w(n, 1.0);
  for (std::size_t i : indices) {
    if (i >= n) throw ParameterError("support estimate index out of range");
    w[i] = omega;
  }
  return w;
}

std::size_t round_count(double v) {
  if (!(v >= 0.0)) throw ParameterError("count must be non-negative");
  // The slack keeps products such as 0.3 * 5 on the "half" side.
  return static_cast<std::size_t>(std::floor(v + 0.5 + 1e-9));
}

Vector gen_sparse_signal(Rng& rng, std::size_t n, std::size_t k) {
  if (n == 0) throw ParameterError("signal length must be positive");
  if (k < 1 || k > n) throw ParameterError("sparsity k must satisfy 1 <= k <= N");
  IndexSet all(n);
  std::iota(all.begin(), all.end(), 0);
  const IndexSet support = sample_without_replacement(rng, std::move(all), k);
  Vector x(n, 0.0);
  for (std::size_t i : support) {
    double v = rng.normal();
    while (v == 0.0) v = rng.normal();
    x[i] = v;
  }
  return x;
}

Vector gen_compressible_signal(std::size_t n, double theta, Rng& rng) {
  if (n == 0) throw ParameterError("signal length must be positive");
  if (!(theta > 0.0)) throw ParameterError("decay exponent theta must be positive");
  IndexSet all(n);
  std::iota(all.begin(), all.end(), 0);
  const IndexSet placement = sample_without_replacement(rng, std::move(all), n);
  Vector x(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    x[placement[j]] = rng.sign() * std::pow(static_cast<double>(j + 1), -theta);
  return x;
}

IndexSet best_k_support(std::span<const double> x, std::size_t k) {
  if (k < 1 || k > x.size()) throw ParameterError("k must satisfy 1 <= k <= N");
  IndexSet order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(x[a]) > std::abs(x[b]); });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

SupportEstimate gen_support_estimate(Rng& rng, const IndexSet& t0_in, std::size_t n, std::size_t k,
                                     double rho, double alpha, double omega) {
  IndexSet t0 = t0_in;
  std::sort(t0.begin(), t0.end());
  if (!(rho >= 0.0)) throw ParameterError("rho must be non-negative");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
  if (!(omega >= 0.0 && omega <= 1.0)) throw ParameterError("omega must lie in [0, 1]");
  for (std::size_t i : t0)
    if (i >= n) throw ParameterError("support index out of range");

  const std::size_t size = round_count(rho * static_cast<double>(k));
  const std::size_t inside = round_count(alpha * rho * static_cast<double>(k));
  if (inside > std::min(t0.size(), size))
    throw ParameterError("infeasible support estimate: too many indices requested inside T0");
  const std::size_t outside = size - inside;
  if (outside > n - t0.size())
    throw ParameterError("infeasible support estimate: too many indices requested outside T0");

  IndexSet complement;
  for (std::size_t i = 0; i < n; ++i)
    if (!contains(t0, i)) complement.push_back(i);

  IndexSet chosen = sample_without_replacement(rng, t0, inside);
  IndexSet rest = sample_without_replacement(rng, std::move(complement), outside);
  chosen.insert(chosen.end(), rest.begin(), rest.end());
  std::sort(chosen.begin(), chosen.end());
  return SupportEstimate{std::move(chosen), omega, rho, alpha};
}

Matrix gen_gaussian_matrix(Rng& rng, std::size_t m, std::size_t n) {
  Matrix a(m, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (double& v : a.data()) v = scale * rng.normal();
  return a;
}

PhaselessInstance make_instance(const Matrix& a, std::span<const double> x, double sigma, Rng& rng) {
  if (x.size() != a.cols()) throw ParameterError("signal length does not match matrix columns");
  if (!(sigma >= 0.0)) throw ParameterError("noise level sigma must be non-negative");
  PhaselessInstance inst{a, Vector(x.begin(), x.end()), Vector(a.rows(), 0.0), sigma, 0.0, {}};
  if (sigma > 0.0)
    for (double& v : inst.e) v = sigma * rng.normal();
  inst.epsilon = linalg::norm2(inst.e);
  inst.b = a.multiply(x);
  for (std::size_t i = 0; i < inst.b.size(); ++i) inst.b[i] = inst.b[i] * inst.b[i] + inst.e[i];
  return inst;
}

double sign_invariant_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("length mismatch");
  double minus = 0.0;
  double plus = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    minus += (a[i] - b[i]) * (a[i] - b[i]);
    plus += (a[i] + b[i]) * (a[i] + b[i]);
  }
  return std::sqrt(std::min(minus, plus));
}

double snr_db(std::span<const double> x, std::span<const double> xhat) {
  if (x.size() != xhat.size()) throw ParameterError("length mismatch");
  const double nx = linalg::norm2(x);
  if (nx == 0.0) throw ParameterError("SNR is undefined for the zero signal");
  const double err = sign_invariant_distance(xhat, x);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(nx / err);
}

double weighted_l1(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size()) throw ParameterError("weight length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::abs(x[i]);
  return s;
}

TailNorms tail_norms(std::span<const double> x, const IndexSet& t0_in, const IndexSet& est_in) {
  IndexSet t0 = t0_in;
  IndexSet estimate = est_in;
  std::sort(t0.begin(), t0.end());
  std::sort(estimate.begin(), estimate.end());
  TailNorms out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (contains(t0, i)) continue;
    out.outside_t0 += std::abs(x[i]);
    if (!contains(estimate, i)) out.outside_t0_and_est += std::abs(x[i]);
  }
  return out;
}

}  // namespace phasecs::model
