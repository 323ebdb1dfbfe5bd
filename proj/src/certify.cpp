#include "phasecs/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "phasecs/error.hpp"
#include "phasecs/rng.hpp"

namespace phasecs::certify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

/// Calls fn(indices) for every k-subset of [0, n) in lexicographic order.
void for_each_combination(std::size_t n, std::size_t k, const std::function<void(const IndexSet&)>& fn) {
  if (k > n) return;
  IndexSet c(k);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    fn(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

IndexSet mask_to_set(std::uint64_t mask, std::size_t n) {
  IndexSet s;
  for (std::size_t i = 0; i < n; ++i)
    if ((mask >> i) & 1u) s.push_back(i);
  return s;
}

void check_weights(std::span<const double> w, std::size_t n) {
  if (w.size() != n) throw ParameterError("weight vector length must equal the number of columns");
  for (double v : w)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("weights must be finite and non-negative");
}

void check_order(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) throw ParameterError("order k must satisfy 1 <= k <= N");
}

void require_enumeration(std::uint64_t count, const Caps& caps, const std::string& what) {
  if (count > caps.max_enumeration)
    throw CapExceeded("max_enumeration", what + " enumeration of " + std::to_string(count) +
                                             " items exceeds cap " +
                                             std::to_string(caps.max_enumeration));
}

/// Indices of the k largest w_i |h_i| (ties to the lower index), sorted.
IndexSet weighted_top_k(std::span<const double> h, std::span<const double> w, std::size_t k) {
  IndexSet order(h.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return w[a] * std::abs(h[a]) > w[b] * std::abs(h[b]);
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

double worst_nsp_slack(std::span<const double> h, std::span<const double> w, std::size_t k) {
  return nsp_slack(h, weighted_top_k(h, w, k), w);
}

std::size_t count_nonzero(std::span<const double> x, double zero) {
  return static_cast<std::size_t>(
      std::count_if(x.begin(), x.end(), [&](double v) { return std::abs(v) > zero; }));
}

Vector combine(double ca, std::span<const double> a, double cb, std::span<const double> b) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ca * a[i] + cb * b[i];
  return out;
}

double wrap_pi(double phi) {
  double r = std::fmod(phi, kPi);
  if (r < 0.0) r += kPi;
  return r;
}

/// Zero of cos(phi) a + sin(phi) b in [0, pi).
double zero_angle(double a, double b) { return wrap_pi(std::atan2(-a, b)); }

/// Candidate angles that contain the minimum over [0, pi] of any function of
/// the form sum_i c_i |cos(phi) p_i + sin(phi) q_i|: arc endpoints (zeros of
/// the terms) and per-arc troughs of the piecewise sinusoid.
std::vector<double> sinusoid_candidates(const std::vector<std::pair<Vector, Vector>>& terms,
                                        const std::vector<Vector>& coeff_sets) {
  std::vector<double> cuts{0.0, kPi};
  for (const auto& [p, q] : terms)
    for (std::size_t i = 0; i < p.size(); ++i)
      if (std::abs(p[i]) > MarginPolicy::zero || std::abs(q[i]) > MarginPolicy::zero)
        cuts.push_back(zero_angle(p[i], q[i]));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> out(cuts);
  for (std::size_t a = 0; a + 1 < cuts.size(); ++a) {
    const double lo = cuts[a];
    const double hi = cuts[a + 1];
    if (hi - lo < 1e-15) continue;
    const double mid = 0.5 * (lo + hi);
    const double cm = std::cos(mid);
    const double sm = std::sin(mid);
    for (const auto& coeffs : coeff_sets) {
      double ac = 0.0;
      double bc = 0.0;
      std::size_t idx = 0;
      for (const auto& [p, q] : terms) {
        for (std::size_t i = 0; i < p.size(); ++i, ++idx) {
          const double val = cm * p[i] + sm * q[i];
          const double s = val > 0.0 ? 1.0 : (val < 0.0 ? -1.0 : 0.0);
          ac += coeffs[idx] * s * p[i];
          bc += coeffs[idx] * s * q[i];
        }
      }
      if (std::hypot(ac, bc) == 0.0) continue;
      double trough = std::atan2(bc, ac) + kPi;
      trough = std::fmod(trough, 2.0 * kPi);
      if (trough < 0.0) trough += 2.0 * kPi;
      if (trough >= lo && trough <= hi) out.push_back(trough);
    }
  }
  return out;
}

/// Merges per-item findings into a verdict. Items rank as: strict
/// violation, then structural tie, then everything else; the lowest rank
/// (then smallest slack) supplies the witness.
struct Aggregate {
  double min_margin = kInf;
  double margin = kInf;
  int rank = 3;
  bool structural = false;
  std::optional<NspWitness> nsp;
  std::optional<PairWitness> pair;

  static int rank_of(double m, bool is_structural) {
    if (m < -MarginPolicy::band) return 0;
    if (is_structural && m <= MarginPolicy::band) return 1;
    return 2;
  }

  void offer(double m, bool is_structural, std::optional<NspWitness> hw, std::optional<PairWitness> pw) {
    min_margin = std::min(min_margin, m);
    const int r = rank_of(m, is_structural);
    if (r < rank || (r == rank && m < margin)) {
      rank = r;
      margin = m;
      structural = is_structural && r <= 1;
      nsp = std::move(hw);
      pair = std::move(pw);
    }
  }

  void finish(NspVerdict& v, bool exact) const {
    v.margin = min_margin;
    if (rank <= 1) {
      v.status = Status::fails;
      v.margin = margin;
      v.structural = structural;
      v.nsp_witness = nsp;
      v.pair_witness = pair;
      return;
    }
    v.status = (exact && min_margin > MarginPolicy::band) ? Status::holds_exact : Status::indeterminate;
  }
};

/// Slack, witness and tie structure of the weighted NSP at kernel vector h.
void offer_nsp_point(Aggregate& agg, const Vector& h, std::span<const double> w, std::size_t k) {
  const IndexSet t = weighted_top_k(h, w, k);
  const double slack = nsp_slack(h, t, w);
  bool structural = false;
  IndexSet witness_t = t;
  double witness_slack = slack;
  if (std::abs(slack) <= MarginPolicy::band) {
    // With the remaining weighted mass on at most k indices, that set is
    // itself admissible and its slack is the negation of this one.
    IndexSet rest;
    for (std::size_t i = 0; i < h.size(); ++i)
      if (w[i] * std::abs(h[i]) > MarginPolicy::zero && !std::binary_search(t.begin(), t.end(), i))
        rest.push_back(i);
    if (rest.size() <= k) {
      structural = true;
      const double rest_slack = nsp_slack(h, rest, w);
      if (rest_slack < slack) {
        witness_t = rest;
        witness_slack = rest_slack;
      }
    }
  }
  agg.offer(witness_slack, structural, NspWitness{h, witness_t}, std::nullopt);
}

std::vector<Vector> kernel_of_rows(const Matrix& a, const IndexSet& rows, double tol) {
  if (rows.empty()) {
    std::vector<Vector> basis;
    for (std::size_t i = 0; i < a.cols(); ++i) {
      Vector e(a.cols(), 0.0);
      e[i] = 1.0;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  return linalg::kernel_basis(a.select_rows(rows), tol);
}

/// A nonzero vector in span(basis) with at most k nonzeros, if one exists.
std::optional<Vector> sparse_vector_in_span(const std::vector<Vector>& basis, std::size_t k,
                                            const Caps& caps) {
  if (basis.empty()) return std::nullopt;
  const std::size_t n = basis.front().size();
  const std::size_t d = basis.size();
  if (k >= n) return basis.front();
  require_enumeration(binomial(n, n - k), caps, "sparse kernel vector");
  std::optional<Vector> found;
  for_each_combination(n, n - k, [&](const IndexSet& zero_rows) {
    if (found) return;
    Matrix sub(zero_rows.size(), d);
    for (std::size_t r = 0; r < zero_rows.size(); ++r)
      for (std::size_t c = 0; c < d; ++c) sub(r, c) = basis[c][zero_rows[r]];
    const auto coeffs = linalg::kernel_basis(sub);
    if (coeffs.empty()) return;
    Vector h(n, 0.0);
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t i = 0; i < n; ++i) h[i] += coeffs.front()[c] * basis[c][i];
    for (std::size_t r : zero_rows) h[r] = 0.0;
    const double nh = linalg::norm2(h);
    if (nh <= MarginPolicy::zero) return;
    for (double& v : h) v /= nh;
    found = std::move(h);
  });
  return found;
}

/// Exact phaseless NSP analysis for one-dimensional kernels u0 of A_S and
/// v0 of A_{S^c} (both unit). Pairs are (cos(phi) u0, sin(phi) v0) with
/// phi in (0, pi) minus {pi/2}.
void offer_pair(Aggregate& agg, const Vector& u0, const Vector& v0, const IndexSet& s_rows,
                std::span<const double> w, std::size_t k) {
  const std::size_t n = u0.size();
  const double zero = 10.0 * MarginPolicy::zero;
  auto excluded = [](double phi) {
    return phi < 1e-9 || std::abs(phi - 0.5 * kPi) < 1e-9 || phi > kPi - 1e-9;
  };
  // Offers the pair at phi; when the mirrored pair (u, -v) is admissible
  // too, the orientation with the smaller slack is kept and the point is a
  // structural tie.
  auto offer_at = [&](double phi, bool mirrored) {
    Vector u = combine(std::cos(phi), u0, 0.0, v0);
    Vector v = combine(0.0, u0, std::sin(phi), v0);
    double s = pair_slack(u, v, w);
    if (mirrored && s > 0.0) {
      for (double& x : v) x = -x;
      s = -s;
    }
    agg.offer(s, mirrored, std::nullopt, PairWitness{std::move(u), std::move(v), s_rows});
  };

  std::size_t support = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(u0[i]) > MarginPolicy::zero || std::abs(v0[i]) > MarginPolicy::zero) ++support;

  if (support <= k) {
    // Every phi is admissible for both (u, v) and (u, -v).
    Vector neg_v0(v0);
    for (double& x : neg_v0) x = -x;
    std::vector<Vector> coeffs{Vector(2 * n)};
    for (std::size_t i = 0; i < n; ++i) {
      coeffs[0][i] = w[i];
      coeffs[0][n + i] = -w[i];
    }
    offer_at(0.25 * kPi, true);
    for (double phi : sinusoid_candidates({{u0, neg_v0}, {u0, v0}}, coeffs))
      if (!excluded(phi)) offer_at(phi, true);
    return;
  }

  // Otherwise u + v is k-sparse only where enough coordinates vanish at once.
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(u0[i]) <= MarginPolicy::zero && std::abs(v0[i]) <= MarginPolicy::zero) continue;
    const double phi = zero_angle(u0[i], v0[i]);
    if (excluded(phi)) continue;
    if (count_nonzero(combine(std::cos(phi), u0, std::sin(phi), v0), zero) > k) continue;
    const bool mirrored = count_nonzero(combine(std::cos(phi), u0, -std::sin(phi), v0), zero) <= k;
    offer_at(phi, mirrored);
  }
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::holds_exact: return "holds-exact";
    case Status::fails: return "fails";
    case Status::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

RipReport rip_constant(const Matrix& a, std::size_t k, const Caps& caps) {
  check_order(k, a.cols());
  require_enumeration(binomial(a.cols(), k), caps, "support");
  RipReport rep;
  rep.k = k;
  rep.delta_k = -kInf;
  rep.theta_minus = kInf;
  rep.theta_plus = -kInf;
  for_each_combination(a.cols(), k, [&](const IndexSet& t) {
    const auto eig = linalg::eig_sym(linalg::SymMatrix::gram(a.select_cols(t)));
    const double hi = eig.values.front();
    const double lo = eig.values.back();
    const double delta = std::max(hi - 1.0, 1.0 - lo);
    if (delta > rep.delta_k) {
      rep.delta_k = delta;
      rep.delta_support = t;
    }
    if (lo < rep.theta_minus) {
      rep.theta_minus = lo;
      rep.theta_minus_support = t;
    }
    if (hi > rep.theta_plus) {
      rep.theta_plus = hi;
      rep.theta_plus_support = t;
    }
    ++rep.enumerated;
  });
  rep.delta_k = std::max(rep.delta_k, 0.0);
  return rep;
}

RipReport srip_bounds(const Matrix& a, std::size_t k, const Caps& caps) {
  check_order(k, a.cols());
  const std::size_t m = a.rows();
  if (m > caps.srip_max_rows)
    throw CapExceeded("srip_max_rows", "strong RIP enumeration needs m <= " +
                                           std::to_string(caps.srip_max_rows));
  const std::size_t half = (m + 1) / 2;
  const std::uint64_t supports = binomial(a.cols(), k);
  const std::uint64_t subsets = binomial(m, half);
  const std::uint64_t total =
      supports > caps.max_enumeration / std::max<std::uint64_t>(subsets, 1) ? UINT64_MAX
                                                                            : supports * subsets;
  require_enumeration(total, caps, "support x row subset");

  RipReport rep = rip_constant(a, k, caps);
  rep.theta_minus = kInf;
  for_each_combination(m, half, [&](const IndexSet& rows) {
    const Matrix ai = a.select_rows(rows);
    for_each_combination(a.cols(), k, [&](const IndexSet& t) {
      const auto eig = linalg::eig_sym(linalg::SymMatrix::gram(ai.select_cols(t)));
      const double lo = eig.values.back();
      if (lo < rep.theta_minus) {
        rep.theta_minus = lo;
        rep.theta_minus_support = t;
        rep.theta_minus_rows = rows;
      }
      ++rep.enumerated;
    });
  });
  return rep;
}

double nsp_slack(std::span<const double> h, const IndexSet& t, std::span<const double> w) {
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) total += w[i] * std::abs(h[i]);
  for (std::size_t i : t) inside += w[i] * std::abs(h[i]);
  return (total - inside) - inside;
}

double pair_slack(std::span<const double> u, std::span<const double> v, std::span<const double> w) {
  double minus = 0.0;
  double plus = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    minus += w[i] * std::abs(u[i] - v[i]);
    plus += w[i] * std::abs(u[i] + v[i]);
  }
  return minus - plus;
}

NspVerdict weighted_nsp_check(const Matrix& a, std::size_t k, std::span<const double> w,
                              const NspOptions& opts, const Caps& caps) {
  const std::size_t n = a.cols();
  check_order(k, n);
  check_weights(w, n);
  const auto basis = linalg::kernel_basis(a, opts.kernel_tol);
  NspVerdict v;
  v.kernel_dim = basis.size();
  Aggregate agg;

  if (basis.empty()) {
    v.vacuous = true;
    v.margin = kInf;
    v.status = opts.mode == Mode::exact ? Status::holds_exact : Status::indeterminate;
    return v;
  }

  if (opts.mode == Mode::exact) {
    if (basis.size() > 2)
      throw CapExceeded("nsp_exact_kernel_dim", "exact weighted NSP check supports kernel dimension <= 2, got " +
                                                    std::to_string(basis.size()));
    if (basis.size() == 1) {
      offer_nsp_point(agg, basis[0], w, k);
      v.enumerated = 1;
    } else {
      require_enumeration(binomial(n, k), caps, "support");
      const Vector& h1 = basis[0];
      const Vector& h2 = basis[1];
      std::vector<Vector> coeff_sets;
      for_each_combination(n, k, [&](const IndexSet& t) {
        Vector c(w.begin(), w.end());
        for (std::size_t i : t) c[i] = -c[i];
        coeff_sets.push_back(std::move(c));
      });
      const auto candidates = sinusoid_candidates({{h1, h2}}, coeff_sets);
      for (double phi : candidates) offer_nsp_point(agg, combine(std::cos(phi), h1, std::sin(phi), h2), w, k);
      v.enumerated = candidates.size() * coeff_sets.size();
    }
    agg.finish(v, true);
    return v;
  }

  // Falsification: random restarts with normalized descent on the slack,
  // which is linear on each (support, sign pattern) cell.
  Rng rng(opts.seed);
  const std::size_t d = basis.size();
  auto lift = [&](const Vector& c) {
    Vector h(n, 0.0);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < n; ++i) h[i] += c[j] * basis[j][i];
    return h;
  };
  auto normalize = [](Vector& c) {
    const double nc = linalg::norm2(c);
    for (double& x : c) x /= nc;
  };
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    Vector c(d);
    for (double& x : c) x = rng.normal();
    normalize(c);
    Vector h = lift(c);
    double g = worst_nsp_slack(h, w, k);
    double step = 0.5;
    for (int it = 0; it < 80 && step > 1e-10; ++it) {
      const IndexSet t = weighted_top_k(h, w, k);
      Vector grad_h(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double s = h[i] > 0.0 ? 1.0 : (h[i] < 0.0 ? -1.0 : 0.0);
        grad_h[i] = (std::binary_search(t.begin(), t.end(), i) ? -w[i] : w[i]) * s;
      }
      Vector grad(d, 0.0);
      for (std::size_t j = 0; j < d; ++j) grad[j] = linalg::dot(basis[j], grad_h);
      const double radial = linalg::dot(grad, c);
      for (std::size_t j = 0; j < d; ++j) grad[j] -= radial * c[j];
      const double gn = linalg::norm2(grad);
      if (gn < 1e-14) break;
      Vector trial(d);
      for (std::size_t j = 0; j < d; ++j) trial[j] = c[j] - step * grad[j] / gn;
      normalize(trial);
      Vector ht = lift(trial);
      const double gt = worst_nsp_slack(ht, w, k);
      if (gt < g) {
        c = std::move(trial);
        h = std::move(ht);
        g = gt;
        step *= 1.2;
      } else {
        step *= 0.5;
      }
    }
    offer_nsp_point(agg, h, w, k);
    ++v.enumerated;
  }
  agg.finish(v, false);
  return v;
}

NspVerdict phaseless_nsp_check(const Matrix& a, std::size_t k, std::span<const double> w,
                               const NspOptions& opts, const Caps& caps) {
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  check_order(k, n);
  check_weights(w, n);
  if (m > caps.pnsp_max_rows)
    throw CapExceeded("pnsp_max_rows", "phaseless NSP enumeration needs m <= " +
                                           std::to_string(caps.pnsp_max_rows));
  const double tol = opts.kernel_tol.value_or(linalg::default_kernel_tol(a));
  const bool exact = opts.mode == Mode::exact;
  NspVerdict v;
  v.kernel_dim = linalg::kernel_basis(a, tol).size();
  Aggregate agg;
  Rng rng(opts.seed);
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;

  // S and S^c play symmetric roles, so only S not containing row 0 is visited.
  for (std::uint64_t mask = 0; mask <= full; mask += 2) {
    const IndexSet s_rows = mask_to_set(mask, m);
    const IndexSet c_rows = mask_to_set(full & ~mask, m);
    const auto ku = kernel_of_rows(a, s_rows, tol);
    const auto kv = kernel_of_rows(a, c_rows, tol);
    ++v.enumerated;

    if (!opts.require_both_nonzero) {
      // v = 0 is admitted: any k-sparse nonzero u gives ||u|| < ||u|| false.
      if (auto u = sparse_vector_in_span(ku, k, caps))
        agg.offer(0.0, true, std::nullopt, PairWitness{*u, Vector(n, 0.0), s_rows});
      if (auto u = sparse_vector_in_span(kv, k, caps))
        agg.offer(0.0, true, std::nullopt, PairWitness{*u, Vector(n, 0.0), c_rows});
    }
    if (ku.empty() || kv.empty()) continue;

    if (exact) {
      if (ku.size() != 1 || kv.size() != 1)
        throw CapExceeded("pnsp_exact_kernel_dim",
                          "exact phaseless NSP check needs one-dimensional kernels; S = {" +
                              std::to_string(s_rows.size()) + " rows} gives dimensions " +
                              std::to_string(ku.size()) + " and " + std::to_string(kv.size()));
      offer_pair(agg, ku[0], kv[0], s_rows, w, k);
      continue;
    }

    // Falsification: force N - k coordinates of u + v to vanish and sample
    // the remaining pairs.
    const std::size_t du = ku.size();
    const std::size_t dv = kv.size();
    const std::size_t zeros = n - k;
    const std::uint64_t zero_sets = binomial(n, zeros);
    const bool enumerate_all = zero_sets <= opts.restarts;
    const std::size_t draws = enumerate_all ? static_cast<std::size_t>(zero_sets) : opts.restarts;
    std::vector<IndexSet> zsets;
    if (enumerate_all) {
      for_each_combination(n, zeros, [&](const IndexSet& z) { zsets.push_back(z); });
    } else {
      for (std::size_t r = 0; r < draws; ++r) {
        IndexSet pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        for (std::size_t i = 0; i < zeros; ++i)
          std::swap(pool[i], pool[i + rng.uniform_index(n - i)]);
        pool.resize(zeros);
        std::sort(pool.begin(), pool.end());
        zsets.push_back(std::move(pool));
      }
    }
    for (const auto& z : zsets) {
      std::vector<Vector> coeff_basis;
      if (z.empty()) {
        for (std::size_t j = 0; j < du + dv; ++j) {
          Vector e(du + dv, 0.0);
          e[j] = 1.0;
          coeff_basis.push_back(std::move(e));
        }
      } else {
        Matrix sub(z.size(), du + dv);
        for (std::size_t r = 0; r < z.size(); ++r) {
          for (std::size_t j = 0; j < du; ++j) sub(r, j) = ku[j][z[r]];
          for (std::size_t j = 0; j < dv; ++j) sub(r, du + j) = kv[j][z[r]];
        }
        coeff_basis = linalg::kernel_basis(sub);
      }
      if (coeff_basis.empty()) continue;
      for (int draw = 0; draw < 4; ++draw) {
        Vector c(du + dv, 0.0);
        for (const auto& b : coeff_basis) {
          const double g = rng.normal();
          for (std::size_t j = 0; j < c.size(); ++j) c[j] += g * b[j];
        }
        Vector u(n, 0.0);
        Vector vv(n, 0.0);
        for (std::size_t j = 0; j < du; ++j)
          for (std::size_t i = 0; i < n; ++i) u[i] += c[j] * ku[j][i];
        for (std::size_t j = 0; j < dv; ++j)
          for (std::size_t i = 0; i < n; ++i) vv[i] += c[du + j] * kv[j][i];
        for (std::size_t i : z) {
          const double mid = 0.5 * (u[i] - vv[i]);
          u[i] = mid;
          vv[i] = -mid;
        }
        const double scale = std::hypot(linalg::norm2(u), linalg::norm2(vv));
        if (linalg::norm2(u) <= 1e-8 * scale || linalg::norm2(vv) <= 1e-8 * scale) continue;
        for (double& x : u) x /= scale;
        for (double& x : vv) x /= scale;
        if (count_nonzero(combine(1.0, u, 1.0, vv), 10.0 * MarginPolicy::zero) > k) continue;
        double s = pair_slack(u, vv, w);
        const bool mirrored = count_nonzero(combine(1.0, u, -1.0, vv), 10.0 * MarginPolicy::zero) <= k;
        if (mirrored && s > 0.0) {
          for (double& x : vv) x = -x;
          s = -s;
        }
        agg.offer(s, mirrored, std::nullopt, PairWitness{u, vv, s_rows});
      }
    }
    v.caps_hit = v.caps_hit || !enumerate_all;
  }
  if (agg.min_margin == kInf) v.vacuous = true;
  agg.finish(v, exact);
  return v;
}

OracleResult brute_force_weighted_l1(const Matrix& a, std::span<const double> y,
                                     std::span<const double> w, const Caps& caps) {
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  check_weights(w, n);
  if (y.size() != m) throw ParameterError("measurement length must equal the number of rows");
  if (n > caps.oracle_max_cols)
    throw CapExceeded("oracle_max_cols", "brute-force oracle needs N <= " +
                                             std::to_string(caps.oracle_max_cols));
  OracleResult out;
  const double ynorm = linalg::norm2(y);
  if (ynorm == 0.0) {
    out.minimizers.push_back(Vector(n, 0.0));
    out.feasible = true;
    return out;
  }

  struct Candidate {
    Vector z;
    double cost;
  };
  std::vector<Candidate> cands;
  const double feas_tol = 1e-9 * (1.0 + ynorm);
  const std::size_t max_support = std::min(m, n);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const IndexSet t = mask_to_set(mask, n);
    if (t.size() > max_support) continue;
    ++out.enumerated;
    const auto sol = linalg::solve_restricted(a.select_cols(t), y, feas_tol);
    if (sol.outcome == linalg::RestrictedSolve::Outcome::rank_deficient) {
      out.degenerate = true;
      continue;
    }
    if (sol.outcome != linalg::RestrictedSolve::Outcome::solved) continue;
    Vector z(n, 0.0);
    for (std::size_t j = 0; j < t.size(); ++j) z[t[j]] = sol.z[j];
    const double zmax = linalg::norm_inf(z);
    for (double& x : z)
      if (std::abs(x) <= 1e-12 * zmax) x = 0.0;
    cands.push_back({z, model::weighted_l1(z, w)});
  }
  if (cands.empty()) return out;

  double best = kInf;
  for (const auto& c : cands) best = std::min(best, c.cost);
  out.optimal_value = best;
  out.feasible = true;
  const double cost_tol = 1e-9 * (1.0 + std::abs(best));
  for (const auto& c : cands) {
    if (c.cost > best + cost_tol) continue;
    const bool dup = std::any_of(out.minimizers.begin(), out.minimizers.end(), [&](const Vector& z) {
      Vector d = combine(1.0, z, -1.0, c.z);
      return linalg::norm_inf(d) <= 1e-9 * (1.0 + std::max(linalg::norm_inf(z), linalg::norm_inf(c.z)));
    });
    if (!dup) out.minimizers.push_back(c.z);
  }
  return out;
}

std::size_t PhaselessOracleResult::count_with_sign() const {
  std::size_t c = 0;
  for (const auto& z : canonical) c += linalg::norm_inf(z) == 0.0 ? 1 : 2;
  return c;
}

Vector canonical_sign(Vector z) {
  const double zmax = linalg::norm_inf(z);
  if (zmax == 0.0) return z;
  for (double x : z) {
    if (std::abs(x) > 1e-12 * zmax) {
      if (x < 0.0)
        for (double& y : z) y = -y;
      break;
    }
  }
  return z;
}

PhaselessOracleResult brute_force_phaseless(const Matrix& a, std::span<const double> b_abs,
                                            std::span<const double> w, const Caps& caps) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b_abs.size() != m) throw ParameterError("measurement length must equal the number of rows");
  for (double b : b_abs)
    if (!(b >= 0.0)) throw ParameterError("magnitude measurements must be non-negative");
  if (m > caps.phaseless_oracle_max_rows)
    throw CapExceeded("phaseless_oracle_max_rows", "phaseless oracle needs m <= " +
                                                      std::to_string(caps.phaseless_oracle_max_rows));
  check_weights(w, n);
  PhaselessOracleResult out;
  if (linalg::norm2(b_abs) == 0.0) {
    out.canonical.push_back(Vector(n, 0.0));
    out.feasible = true;
    return out;
  }

  std::vector<std::pair<Vector, double>> cands;
  // sigma and -sigma give negated solution sets; fix sigma_0 = +1.
  Vector y(m);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (m - 1)); ++mask) {
    for (std::size_t i = 0; i < m; ++i)
      y[i] = (i > 0 && ((mask >> (i - 1)) & 1u)) ? -b_abs[i] : b_abs[i];
    ++out.patterns;
    const auto r = brute_force_weighted_l1(a, y, w, caps);
    out.degenerate = out.degenerate || r.degenerate;
    if (!r.feasible) continue;
    for (const auto& z : r.minimizers) cands.emplace_back(canonical_sign(z), r.optimal_value);
  }
  if (cands.empty()) return out;
  double best = kInf;
  for (const auto& c : cands) best = std::min(best, c.second);
  out.optimal_value = best;
  out.feasible = true;
  const double cost_tol = 1e-9 * (1.0 + std::abs(best));
  for (const auto& [z, cost] : cands) {
    if (cost > best + cost_tol) continue;
    const bool dup = std::any_of(out.canonical.begin(), out.canonical.end(), [&](const Vector& c) {
      Vector d = combine(1.0, z, -1.0, c);
      return linalg::norm_inf(d) <= 1e-9 * (1.0 + std::max(linalg::norm_inf(z), linalg::norm_inf(c)));
    });
    if (!dup) out.canonical.push_back(z);
  }
  return out;
}

namespace {

bool close_to(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  return diff <= 1e-7 * (1.0 + std::max(linalg::norm_inf(a), linalg::norm_inf(b)));
}

}  // namespace

bool recovers_uniquely(const OracleResult& r, std::span<const double> x) {
  return r.minimizers.size() == 1 && close_to(r.minimizers.front(), x);
}

bool recovers_up_to_sign(const PhaselessOracleResult& r, std::span<const double> x) {
  if (r.canonical.size() != 1) return false;
  const Vector cx = canonical_sign(Vector(x.begin(), x.end()));
  return close_to(r.canonical.front(), cx);
}

}  // namespace phasecs::certify
