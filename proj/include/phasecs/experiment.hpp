#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "phasecs/model.hpp"
#include "phasecs/solver.hpp"

namespace phasecs::experiment {

enum class SignalKind { sparse, compressible };
std::string to_string(SignalKind kind);

struct SweepConfig {
  SignalKind kind = SignalKind::sparse;
  std::size_t n = 32;
  std::size_t k = 4;
  double theta = 4.5;  // compressible decay exponent
  double rho = 1.0;
  std::vector<double> alphas{0.5};
  std::vector<double> omegas{1.0};
  std::vector<std::size_t> ms{40};
  std::vector<double> sigmas{0.0};
  std::size_t trials = 1;
  std::uint64_t master_seed = 1;
  solver::SolverConfig solver;  // epsilon is set per instance
  /// Worker threads; does not affect results.
  std::size_t threads = 1;
};

/// "fig2-sparse" or "fig3-compressible".
SweepConfig preset(std::string_view name);

/// Flat `key = value` text, lists comma separated, `#` starts a comment.
/// Keys: kind, N, k, theta, rho, alpha, omega, m, sigma, trials, seed,
/// lambda, penalty, tol_abs, tol_rel, max_iter, threads.
SweepConfig parse_config(std::string_view text);
/// Canonical text form; parse_config(format_config(c)) reproduces c.
std::string format_config(const SweepConfig& c);
/// FNV-1a of the canonical form without `threads`.
std::uint64_t config_hash(const SweepConfig& c);
/// Throws ParameterError for empty grids or infeasible (alpha, rho, k, N).
void validate(const SweepConfig& c);

/// One end-to-end recovery.
struct TrialSpec {
  SignalKind kind = SignalKind::sparse;
  std::size_t n = 32;
  std::size_t k = 4;
  double theta = 4.5;
  double rho = 1.0;
  double alpha = 0.5;
  double omega = 1.0;
  std::size_t m = 40;
  double sigma = 0.0;
  /// Instance seed. The signal comes from it directly, the support
  /// estimate from (seed, alpha, rho), A from (seed, m), noise from (seed, m).
  std::uint64_t seed = 1;
};

struct TrialOutcome {
  model::PhaselessInstance instance;
  model::IndexSet t0;
  model::SupportEstimate estimate;
  solver::SolverResult result;
  double snr_db = 0.0;
  double wall_ms = 0.0;
};

TrialOutcome run_trial(const TrialSpec& spec, const solver::SolverConfig& cfg);

/// Instance seed of a sweep trial: depends on the master seed, the signal
/// class and the trial index only, so every grid point of a trial sees the
/// same signal and related draws.
std::uint64_t trial_seed(const SweepConfig& c, std::size_t trial);

struct SweepRecord {
  SignalKind kind = SignalKind::sparse;
  std::size_t n = 0;
  std::size_t k = 0;
  double theta = 0.0;
  double rho = 0.0;
  double alpha = 0.0;
  double omega = 0.0;
  std::size_t m = 0;
  double sigma = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  int iterations = 0;
  std::string status;
  double wall_ms = 0.0;
};

/// Every (alpha, omega, m, sigma, trial) in key order. Solver failures and
/// cap hits are recorded in the status column.
std::vector<SweepRecord> run_sweep(const SweepConfig& c);

inline constexpr int kSweepSchema = 1;
inline constexpr std::string_view kSweepHeader =
    "signal_kind,N,k,theta,rho,alpha,omega,m,sigma,trial,seed,snr_db,iterations,status,wall_ms";

/// Schema comment line, header, then one row per record.
std::string sweep_csv(const SweepConfig& c, const std::vector<SweepRecord>& rows);
/// Inverse of sweep_csv; throws ParameterError on schema violations.
std::vector<SweepRecord> parse_sweep_csv(std::string_view text);

/// Mean of snr_db over records matching the grid point; +inf terms are
/// clamped to `inf_cap` dB.
double mean_snr(const std::vector<SweepRecord>& rows, double alpha, double omega, std::size_t m,
                double sigma, double inf_cap = 300.0);

}  // namespace phasecs::experiment
