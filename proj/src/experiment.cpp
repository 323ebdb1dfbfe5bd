#include "phasecs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>
#include <tuple>

#include "phasecs/error.hpp"
#include "phasecs/rng.hpp"

namespace phasecs::experiment {

namespace {

constexpr std::uint64_t kTagSupport = 0x5355'5050'4f52'5400ULL;
constexpr std::uint64_t kTagMatrix = 0x4d41'5452'4958'0000ULL;
constexpr std::uint64_t kTagNoise = 0x4e4f'4953'4500'0000ULL;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParameterError("bad number for " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParameterError("bad integer for " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

std::vector<double> parse_double_list(std::string_view s, std::string_view what) {
  std::vector<double> out;
  for (auto item : split(s, ',')) out.push_back(parse_double(item, what));
  return out;
}

std::vector<std::size_t> parse_size_list(std::string_view s, std::string_view what) {
  std::vector<std::size_t> out;
  for (auto item : split(s, ',')) out.push_back(static_cast<std::size_t>(parse_u64(item, what)));
  return out;
}

SignalKind parse_kind(std::string_view s) {
  s = trim(s);
  if (s == "sparse") return SignalKind::sparse;
  if (s == "compressible") return SignalKind::compressible;
  throw ParameterError("unknown signal kind '" + std::string(s) + "'");
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += f(xs[i]);
  }
  return out;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string canonical(const SweepConfig& c, bool with_threads) {
  std::string out;
  out += "kind = " + to_string(c.kind) + "\n";
  out += "N = " + std::to_string(c.n) + "\n";
  out += "k = " + std::to_string(c.k) + "\n";
  out += "theta = " + fmt(c.theta) + "\n";
  out += "rho = " + fmt(c.rho) + "\n";
  out += "alpha = " + join(c.alphas, fmt) + "\n";
  out += "omega = " + join(c.omegas, fmt) + "\n";
  out += "m = " + join(c.ms, [](std::size_t v) { return std::to_string(v); }) + "\n";
  out += "sigma = " + join(c.sigmas, fmt) + "\n";
  out += "trials = " + std::to_string(c.trials) + "\n";
  out += "seed = " + std::to_string(c.master_seed) + "\n";
  out += "lambda = " + fmt(c.solver.lambda) + "\n";
  out += "penalty = " + fmt(c.solver.penalty) + "\n";
  out += "tol_abs = " + fmt(c.solver.tol_abs) + "\n";
  out += "tol_rel = " + fmt(c.solver.tol_rel) + "\n";
  out += "max_iter = " + std::to_string(c.solver.max_iter) + "\n";
  if (with_threads) out += "threads = " + std::to_string(c.threads) + "\n";
  return out;
}

void check_sparse_params(std::size_t n, std::size_t k, double rho, double alpha) {
  if (n < 1) throw ParameterError("N must be at least 1");
  if (k < 1 || k > n) throw ParameterError("k must lie in [1, N]");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw ParameterError("rho must be non-negative");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
  const auto size = model::round_count(rho * static_cast<double>(k));
  const auto inside = model::round_count(alpha * rho * static_cast<double>(k));
  if (inside > std::min(k, size) || size - inside > n - k)
    throw ParameterError("infeasible support estimate for alpha=" + fmt_short(alpha) +
                         ", rho=" + fmt_short(rho));
}

}  // namespace

std::string to_string(SignalKind kind) {
  return kind == SignalKind::sparse ? "sparse" : "compressible";
}

SweepConfig preset(std::string_view name) {
  SweepConfig c;
  c.n = 32;
  c.k = 4;
  c.rho = 1.0;
  c.alphas = {0.25, 0.5, 0.75};
  c.omegas = {0.0, 0.3, 0.5, 0.7, 1.0};
  c.ms = {20, 28, 36, 44, 52, 60};
  c.sigmas = {0.0, 0.1};
  c.trials = 10;
  c.master_seed = 1;
  if (name == "fig2-sparse") {
    c.kind = SignalKind::sparse;
  } else if (name == "fig3-compressible") {
    c.kind = SignalKind::compressible;
    c.theta = 4.5;
  } else {
    throw ParameterError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

SweepConfig parse_config(std::string_view text) {
  SweepConfig c;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "kind") c.kind = parse_kind(value);
    else if (key == "N") c.n = parse_u64(value, key);
    else if (key == "k") c.k = parse_u64(value, key);
    else if (key == "theta") c.theta = parse_double(value, key);
    else if (key == "rho") c.rho = parse_double(value, key);
    else if (key == "alpha") c.alphas = parse_double_list(value, key);
    else if (key == "omega") c.omegas = parse_double_list(value, key);
    else if (key == "m") c.ms = parse_size_list(value, key);
    else if (key == "sigma") c.sigmas = parse_double_list(value, key);
    else if (key == "trials") c.trials = parse_u64(value, key);
    else if (key == "seed") c.master_seed = parse_u64(value, key);
    else if (key == "lambda") c.solver.lambda = parse_double(value, key);
    else if (key == "penalty") c.solver.penalty = parse_double(value, key);
    else if (key == "tol_abs") c.solver.tol_abs = parse_double(value, key);
    else if (key == "tol_rel") c.solver.tol_rel = parse_double(value, key);
    else if (key == "max_iter") c.solver.max_iter = static_cast<int>(parse_u64(value, key));
    else if (key == "threads") c.threads = parse_u64(value, key);
    else throw ParameterError("unknown config key '" + std::string(key) + "'");
  }
  return c;
}

std::string format_config(const SweepConfig& c) { return canonical(c, true); }

std::uint64_t config_hash(const SweepConfig& c) { return fnv1a(canonical(c, false)); }

void validate(const SweepConfig& c) {
  if (c.trials < 1) throw ParameterError("trials must be at least 1");
  if (c.alphas.empty() || c.omegas.empty() || c.ms.empty() || c.sigmas.empty())
    throw ParameterError("sweep lists must be nonempty");
  if (c.kind == SignalKind::compressible && !(c.theta > 0.0))
    throw ParameterError("theta must be positive");
  for (double a : c.alphas) check_sparse_params(c.n, c.k, c.rho, a);
  for (double w : c.omegas)
    if (!(w >= 0.0 && w <= 1.0)) throw ParameterError("omega must lie in [0, 1]");
  for (std::size_t m : c.ms)
    if (m < 1) throw ParameterError("m must be at least 1");
  for (double s : c.sigmas)
    if (!(s >= 0.0) || !std::isfinite(s)) throw ParameterError("sigma must be non-negative");
  if (c.threads < 1) throw ParameterError("threads must be at least 1");
  auto probe = c.solver;
  probe.epsilon = 0.0;
  if (!(probe.lambda >= 0.0) || !(probe.penalty > 0.0) || !(probe.tol_abs > 0.0) ||
      !(probe.tol_rel > 0.0) || probe.max_iter < 1)
    throw ParameterError("invalid solver settings");
}

TrialOutcome run_trial(const TrialSpec& s, const solver::SolverConfig& cfg) {
  check_sparse_params(s.n, s.k, s.rho, s.alpha);
  if (s.m < 1) throw ParameterError("m must be at least 1");
  TrialOutcome out;
  Rng signal_rng(s.seed);
  linalg::Vector x = s.kind == SignalKind::sparse ? model::gen_sparse_signal(signal_rng, s.n, s.k)
                                          : model::gen_compressible_signal(s.n, s.theta, signal_rng);
  out.t0 = model::best_k_support(x, s.k);

  Rng support_rng(hash_seed({s.seed, kTagSupport, double_bits(s.alpha), double_bits(s.rho)}));
  out.estimate = model::gen_support_estimate(support_rng, out.t0, s.n, s.k, s.rho, s.alpha, s.omega);

  Rng matrix_rng(hash_seed({s.seed, kTagMatrix, s.m}));
  const linalg::Matrix a = model::gen_gaussian_matrix(matrix_rng, s.m, s.n);
  Rng noise_rng(hash_seed({s.seed, kTagNoise, s.m}));
  out.instance = model::make_instance(a, x, s.sigma, noise_rng);

  auto solver_cfg = cfg;
  solver_cfg.epsilon = out.instance.epsilon;
  const auto start = std::chrono::steady_clock::now();
  const solver::LiftedOperator op(out.instance.a);
  out.result = solver::solve_sdp(op, out.instance.b, out.estimate.weights(s.n), solver_cfg);
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out.snr_db = model::snr_db(out.instance.x, out.result.xhat);
  return out;
}

std::uint64_t trial_seed(const SweepConfig& c, std::size_t trial) {
  return hash_seed({c.master_seed, static_cast<std::uint64_t>(c.kind), c.n, c.k,
                    c.kind == SignalKind::compressible ? double_bits(c.theta) : 0ULL, trial});
}

std::vector<SweepRecord> run_sweep(const SweepConfig& c) {
  validate(c);
  struct Task {
    double alpha, omega;
    std::size_t m;
    double sigma;
    std::size_t trial;
  };
  std::vector<Task> tasks;
  for (double alpha : c.alphas)
    for (double omega : c.omegas)
      for (std::size_t m : c.ms)
        for (double sigma : c.sigmas)
          for (std::size_t t = 0; t < c.trials; ++t) tasks.push_back({alpha, omega, m, sigma, t});

  std::vector<SweepRecord> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      const auto& t = tasks[i];
      SweepRecord& r = rows[i];
      r.kind = c.kind;
      r.n = c.n;
      r.k = c.k;
      r.theta = c.kind == SignalKind::compressible ? c.theta : 0.0;
      r.rho = c.rho;
      r.alpha = t.alpha;
      r.omega = t.omega;
      r.m = t.m;
      r.sigma = t.sigma;
      r.trial = t.trial;
      r.seed = trial_seed(c, t.trial);
      TrialSpec spec{c.kind, c.n, c.k, c.theta, c.rho, t.alpha, t.omega, t.m, t.sigma, r.seed};
      try {
        const auto o = run_trial(spec, c.solver);
        r.snr_db = o.snr_db;
        r.iterations = o.result.iterations;
        r.status = solver::to_string(o.result.status);
        r.wall_ms = o.wall_ms;
      } catch (const std::exception&) {
        r.snr_db = std::numeric_limits<double>::quiet_NaN();
        r.status = "failed";
      }
    }
  };
  const std::size_t nthreads = std::min(c.threads, std::max<std::size_t>(1, tasks.size()));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return std::tie(a.alpha, a.omega, a.m, a.sigma, a.trial) <
           std::tie(b.alpha, b.omega, b.m, b.sigma, b.trial);
  });
  return rows;
}

std::string sweep_csv(const SweepConfig& c, const std::vector<SweepRecord>& rows) {
  char head[96];
  std::snprintf(head, sizeof head, "# phasecs-sweep schema=%d config=%016llx\n", kSweepSchema,
                static_cast<unsigned long long>(config_hash(c)));
  std::string out = head;
  out += kSweepHeader;
  out += "\n";
  for (const auto& r : rows) {
    out += to_string(r.kind) + "," + std::to_string(r.n) + "," + std::to_string(r.k) + ",";
    out += (r.kind == SignalKind::compressible ? fmt_short(r.theta) : std::string("na")) + ",";
    out += fmt_short(r.rho) + "," + fmt_short(r.alpha) + "," + fmt_short(r.omega) + ",";
    out += std::to_string(r.m) + "," + fmt_short(r.sigma) + "," + std::to_string(r.trial) + ",";
    out += std::to_string(r.seed) + ",";
    out += (std::isnan(r.snr_db) ? std::string("nan") : fmt_short(r.snr_db)) + ",";
    out += std::to_string(r.iterations) + "," + r.status + ",";
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
    out += ms;
    out += "\n";
  }
  return out;
}

std::vector<SweepRecord> parse_sweep_csv(std::string_view text) {
  auto lines = split(text, '\n');
  std::size_t i = 0;
  if (i >= lines.size() || trim(lines[i]).rfind("# phasecs-sweep schema=", 0) != 0)
    throw ParameterError("missing sweep schema line");
  const auto schema_line = trim(lines[i]);
  const auto schema_pos = schema_line.find("schema=") + 7;
  const auto schema_end = schema_line.find(' ', schema_pos);
  if (parse_u64(schema_line.substr(schema_pos, schema_end - schema_pos), "schema") !=
      static_cast<std::uint64_t>(kSweepSchema))
    throw ParameterError("unsupported sweep schema");
  ++i;
  if (i >= lines.size() || trim(lines[i]) != kSweepHeader) throw ParameterError("bad sweep header");
  ++i;
  std::vector<SweepRecord> rows;
  for (; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 15)
      throw ParameterError("sweep row " + std::to_string(i + 1) + ": expected 15 fields");
    SweepRecord r;
    r.kind = parse_kind(f[0]);
    r.n = parse_u64(f[1], "N");
    r.k = parse_u64(f[2], "k");
    r.theta = trim(f[3]) == "na" ? 0.0 : parse_double(f[3], "theta");
    r.rho = parse_double(f[4], "rho");
    r.alpha = parse_double(f[5], "alpha");
    r.omega = parse_double(f[6], "omega");
    r.m = parse_u64(f[7], "m");
    r.sigma = parse_double(f[8], "sigma");
    r.trial = parse_u64(f[9], "trial");
    r.seed = parse_u64(f[10], "seed");
    r.snr_db = trim(f[11]) == "nan" ? std::numeric_limits<double>::quiet_NaN()
                                    : parse_double(f[11], "snr_db");
    r.iterations = static_cast<int>(parse_u64(f[12], "iterations"));
    r.status = std::string(trim(f[13]));
    if (r.status != "converged" && r.status != "max-iter" && r.status != "failed")
      throw ParameterError("bad status '" + r.status + "'");
    r.wall_ms = parse_double(f[14], "wall_ms");
    rows.push_back(std::move(r));
  }
  return rows;
}

double mean_snr(const std::vector<SweepRecord>& rows, double alpha, double omega, std::size_t m,
                double sigma, double inf_cap) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : rows) {
    if (r.alpha != alpha || r.omega != omega || r.m != m || r.sigma != sigma) continue;
    if (std::isnan(r.snr_db)) continue;
    sum += std::min(r.snr_db, inf_cap);
    ++count;
  }
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  return sum / static_cast<double>(count);
}

}  // namespace phasecs::experiment
