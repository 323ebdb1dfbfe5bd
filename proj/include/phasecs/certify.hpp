#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phasecs/linalg.hpp"
#include "phasecs/model.hpp"

namespace phasecs::certify {

using linalg::Matrix;
using linalg::Vector;
using model::IndexSet;

/// Size caps for the exhaustive paths. Exceeding one throws CapExceeded.
struct Caps {
  std::uint64_t max_enumeration = 2'000'000;  // supports (or support x row-subset pairs)
  std::size_t srip_max_rows = 14;
  std::size_t pnsp_max_rows = 12;
  std::size_t oracle_max_cols = 12;
  std::size_t phaseless_oracle_max_rows = 14;
};

/// Margins are measured on unit-norm kernel vectors (or unit (u, v) pairs).
/// A margin inside (-band, band] is a boundary case.
struct MarginPolicy {
  static constexpr double band = 1e-9;
  /// Entries below this (on unit vectors) count as structurally zero.
  static constexpr double zero = 1e-10;
};

enum class Status { holds_exact, fails, indeterminate };
enum class Mode { exact, falsify };

std::string to_string(Status s);

/// A violating kernel vector h and index set T of the weighted NSP.
struct NspWitness {
  Vector h;
  IndexSet support;
};

/// A violating pair u in N(A_S), v in N(A_{S^c}) of the phaseless NSP.
struct PairWitness {
  Vector u;
  Vector v;
  IndexSet rows;  // S
};

struct NspVerdict {
  Status status = Status::indeterminate;
  double margin = 0.0;  // smallest slack found; +inf when vacuous
  std::optional<NspWitness> nsp_witness;
  std::optional<PairWitness> pair_witness;
  /// The violation follows from a symmetric tie: both the witness and its
  /// mirrored counterpart are admissible, so strict inequality cannot hold
  /// for both regardless of the sign of the computed margin.
  bool structural = false;
  bool vacuous = false;
  std::size_t kernel_dim = 0;
  std::uint64_t enumerated = 0;
  bool caps_hit = false;
};

struct NspOptions {
  Mode mode = Mode::exact;
  std::optional<double> kernel_tol;
  std::uint64_t seed = 1;
  std::size_t restarts = 200;
  /// Phaseless NSP: require both u and v nonzero (false admits v = 0).
  bool require_both_nonzero = true;
};

struct RipReport {
  std::size_t k = 0;
  double delta_k = 0.0;
  double theta_minus = 0.0;
  double theta_plus = 0.0;
  IndexSet delta_support;        // support attaining delta_k
  IndexSet theta_minus_support;  // support attaining theta_minus
  IndexSet theta_minus_rows;     // row subset attaining theta_minus (strong bounds only)
  IndexSet theta_plus_support;
  std::uint64_t enumerated = 0;
};

/// Exact RIP constant of order k by enumeration of all column supports.
RipReport rip_constant(const Matrix& a, std::size_t k, const Caps& caps = {});

/// Exact strong RIP bounds of order k. The inner minimum over row subsets
/// with |I| >= m/2 is attained at |I| = ceil(m/2) and the maximum at I = [m]
/// since removing rows cannot increase ||A_I x||.
RipReport srip_bounds(const Matrix& a, std::size_t k, const Caps& caps = {});

/// ||h_{T^c}||_{1,w} - ||h_T||_{1,w}.
double nsp_slack(std::span<const double> h, const IndexSet& t, std::span<const double> w);
/// ||u - v||_{1,w} - ||u + v||_{1,w}.
double pair_slack(std::span<const double> u, std::span<const double> v, std::span<const double> w);

NspVerdict weighted_nsp_check(const Matrix& a, std::size_t k, std::span<const double> w,
                              const NspOptions& opts = {}, const Caps& caps = {});

NspVerdict phaseless_nsp_check(const Matrix& a, std::size_t k, std::span<const double> w,
                               const NspOptions& opts = {}, const Caps& caps = {});

struct OracleResult {
  std::vector<Vector> minimizers;
  double optimal_value = 0.0;
  bool feasible = false;
  /// Some restricted system was rank deficient and skipped.
  bool degenerate = false;
  std::uint64_t enumerated = 0;
};

/// All minimizers of ||z||_{1,w} subject to A z = y among basic solutions
/// (supports of size <= min(m, N)).
OracleResult brute_force_weighted_l1(const Matrix& a, std::span<const double> y,
                                     std::span<const double> w, const Caps& caps = {});

struct PhaselessOracleResult {
  /// Minimizers of ||z||_{1,w} subject to |Az| = b, one representative per
  /// +/- pair (first significant coordinate positive).
  std::vector<Vector> canonical;
  double optimal_value = 0.0;
  bool feasible = false;
  bool degenerate = false;
  std::uint64_t patterns = 0;

  /// Minimizer count with both signs (the zero vector counts once).
  std::size_t count_with_sign() const;
};

PhaselessOracleResult brute_force_phaseless(const Matrix& a, std::span<const double> b_abs,
                                            std::span<const double> w, const Caps& caps = {});

/// Flip the sign so that the first significant coordinate is positive.
Vector canonical_sign(Vector z);

bool recovers_uniquely(const OracleResult& r, std::span<const double> x);
bool recovers_up_to_sign(const PhaselessOracleResult& r, std::span<const double> x);

/// Number of k-subsets of n, saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k);

}  // namespace phasecs::certify
