// phasecs command-line front end. Talks to the library through the C API only.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phasecs/phasecs.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitCap = 3;

struct Text {
  phasecs_text* p = nullptr;
  ~Text() { phasecs_text_free(p); }
  std::string str() const { return {phasecs_text_data(p), phasecs_text_size(p)}; }
};

struct MatrixHandle {
  phasecs_matrix* p = nullptr;
  ~MatrixHandle() { phasecs_matrix_free(p); }
};

struct SweepHandle {
  phasecs_sweep* p = nullptr;
  ~SweepHandle() { phasecs_sweep_free(p); }
};

int exit_code(phasecs_status s) {
  switch (s) {
    case PHASECS_OK: return kExitOk;
    case PHASECS_ERR_INVALID_ARG:
    case PHASECS_ERR_IO: return kExitUsage;
    case PHASECS_ERR_CAP: return kExitCap;
    default: return kExitSolver;
  }
}

int report(phasecs_status s) {
  if (s == PHASECS_OK) return kExitOk;
  std::cerr << "phasecs: " << phasecs_status_name(s) << ": " << phasecs_last_error();
  if (s == PHASECS_ERR_CAP) std::cerr << " (cap: " << phasecs_last_cap() << ")";
  std::cerr << "\n";
  return exit_code(s);
}

bool write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "phasecs: cannot write '" << path << "'\n";
    return false;
  }
  out << content;
  return static_cast<bool>(out);
}

// "results.csv" -> "results"; "" -> fallback.
std::string plot_stem(const std::string& out, const std::string& fallback) {
  if (out.empty() || out == "-") return fallback;
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return out.substr(0, dot);
  return out;
}

const CLI::Validator kNonEmpty(
    [](std::string& s) { return s.empty() ? std::string("empty grid") : std::string(); }, "NONEMPTY");

std::vector<double> omega_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(i / 20.0);
  return g;
}

struct MatrixSource {
  std::string file;
  std::string example;
  std::size_t identity = 0;
  std::vector<std::size_t> gaussian;  // m, N
  std::uint64_t seed = 1;

  void add(CLI::App* cmd) {
    auto* g = cmd->add_option_group("matrix", "Sensing matrix source");
    g->add_option("--matrix", file, "Matrix file (first line \"m N\", then m rows)");
    g->add_option("--example", example, "Built-in matrix: failure-2x2, identity-2, vacuous-4x2");
    g->add_option("--identity", identity, "Identity matrix of the given size");
    g->add_option("--gaussian", gaussian, "Seeded Gaussian matrix: m N")->expected(2);
    g->require_option(1);
    cmd->add_option("--seed", seed, "Seed for --gaussian");
  }

  phasecs_status load(MatrixHandle& out) const {
    if (!file.empty()) return phasecs_matrix_load(file.c_str(), &out.p);
    if (!example.empty()) return phasecs_matrix_example(example.c_str(), &out.p);
    if (identity > 0) return phasecs_matrix_identity(identity, &out.p);
    return phasecs_matrix_gaussian(gaussian.at(0), gaussian.at(1), seed, &out.p);
  }
};

struct WeightArgs {
  std::vector<double> weights;
  std::vector<std::size_t> estimate;
  double omega = 1.0;

  void add(CLI::App* cmd) {
    cmd->add_option("--weights", weights, "Explicit weight vector")->delimiter(',');
    cmd->add_option("--estimate", estimate, "Support estimate indices (0-based) weighted by --omega")->delimiter(',');
    cmd->add_option("--omega", omega, "Weight on the support estimate")->check(CLI::Range(0.0, 1.0));
  }

  // Empty result means w = 1.
  std::optional<std::vector<double>> resolve(std::size_t n, std::string& error) const {
    if (!weights.empty()) {
      if (weights.size() != n) {
        error = "--weights needs exactly N entries";
        return std::nullopt;
      }
      return weights;
    }
    std::vector<double> w(n, 1.0);
    for (std::size_t i : estimate) {
      if (i >= n) {
        error = "--estimate index out of range";
        return std::nullopt;
      }
      w[i] = omega;
    }
    return w;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted l1 phaseless compressive sensing with partial support information"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(phasecs_version()));

  // constants
  auto* constants = app.add_subcommand("constants", "Recovery constants t^omega, C1, C2 over a grid");
  double c_rho = 1.0, c_tm = 0.5, c_tp = 1.5, c_t = 4.0, c_delta = 0.3;
  std::vector<double> c_alpha{0.3, 0.5, 0.7, 0.9};
  std::vector<double> c_omega = omega_grid();
  std::string c_out, c_preset;
  bool c_plot = false;
  constants->add_option("--rho", c_rho, "|estimate| / k");
  constants->add_option("--theta-minus", c_tm, "Strong RIP lower bound");
  constants->add_option("--theta-plus", c_tp, "Strong RIP upper bound");
  constants->add_option("--t", c_t, "RIP order multiplier");
  constants->add_option("--delta", c_delta, "RIP constant of order t*k");
  constants->add_option("--alpha", c_alpha, "Support estimate accuracies")->delimiter(',')->check(kNonEmpty);
  constants->add_option("--omega", c_omega, "Weights")->delimiter(',')->check(kNonEmpty);
  constants->add_option("--preset", c_preset, "fig1 (the default grid)");
  constants->add_option("--out", c_out, "CSV path (default stdout)");
  constants->add_flag("--plot", c_plot, "Also write <stem>_t_omega.svg, <stem>_C1.svg, <stem>_C2.svg");

  // recover
  auto* recover = app.add_subcommand("recover", "Generate and solve one instance");
  phasecs_recover_spec r_spec;
  phasecs_recover_defaults(&r_spec);
  r_spec.n = 16;
  r_spec.k = 2;
  r_spec.m = 40;
  r_spec.seed = 7;
  phasecs_solver_options r_opts;
  phasecs_solver_defaults(&r_opts);
  std::string r_kind = "sparse", r_out;
  recover->add_option("--kind", r_kind, "sparse or compressible")
      ->check(CLI::IsMember({"sparse", "compressible"}));
  recover->add_option("--N", r_spec.n, "Signal length");
  recover->add_option("--k", r_spec.k, "Sparsity");
  recover->add_option("--theta", r_spec.theta, "Compressible decay exponent");
  recover->add_option("--m", r_spec.m, "Number of measurements");
  recover->add_option("--rho", r_spec.rho, "|estimate| / k");
  recover->add_option("--alpha", r_spec.alpha, "Estimate accuracy");
  recover->add_option("--omega", r_spec.omega, "Weight on the estimate");
  recover->add_option("--sigma", r_spec.sigma, "Noise standard deviation");
  recover->add_option("--seed", r_spec.seed, "Instance seed");
  recover->add_option("--lambda", r_opts.lambda, "Sparsity weight in the lifted objective");
  recover->add_option("--penalty", r_opts.penalty, "Initial augmented-Lagrangian penalty");
  recover->add_option("--tol-abs", r_opts.tol_abs, "Absolute stopping tolerance");
  recover->add_option("--tol-rel", r_opts.tol_rel, "Relative stopping tolerance");
  recover->add_option("--max-iter", r_opts.max_iter, "Iteration cap");
  recover->add_option("--out", r_out, "JSON report path (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "SNR sweep over a grid of (alpha, omega, m, sigma)");
  std::string s_config, s_preset, s_out;
  std::optional<std::uint64_t> s_seed;
  std::size_t s_threads = 1;
  bool s_plot = false;
  auto* s_cfg_opt = sweep->add_option("--config", s_config, "Config file (key = value)");
  sweep->add_option("--preset", s_preset, "fig2-sparse or fig3-compressible")->excludes(s_cfg_opt);
  sweep->add_option("--seed", s_seed, "Master seed override");
  sweep->add_option("--threads", s_threads, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", s_out, "CSV path (default stdout)");
  sweep->add_flag("--plot", s_plot, "Also write one SVG per (alpha, sigma)");

  // certify
  auto* certify = app.add_subcommand("certify", "NSP, phaseless NSP, RIP or strong RIP of a matrix");
  MatrixSource cert_src;
  cert_src.add(certify);
  WeightArgs cert_w;
  cert_w.add(certify);
  std::string cert_check = "nsp", cert_out;
  std::size_t cert_k = 1;
  bool cert_falsify = false, cert_allow_zero_v = false;
  double cert_tol = 0.0;
  std::size_t cert_restarts = 200;
  certify->add_option("--check", cert_check, "nsp, pnsp, rip or srip")
      ->check(CLI::IsMember({"nsp", "pnsp", "rip", "srip"}));
  certify->add_option("--k", cert_k, "Order");
  certify->add_flag("--falsify", cert_falsify, "Randomized search instead of exact analysis");
  certify->add_option("--restarts", cert_restarts, "Restarts for --falsify");
  certify->add_option("--kernel-tol", cert_tol, "Null-space tolerance");
  certify->add_flag("--allow-zero-v", cert_allow_zero_v, "Phaseless check: admit v = 0");
  certify->add_option("--out", cert_out, "JSON path (default stdout)");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute-force minimizers for a planted signal");
  MatrixSource or_src;
  or_src.add(oracle);
  WeightArgs or_w;
  or_w.add(oracle);
  std::string or_program = "phaseless", or_out;
  std::vector<double> or_x;
  oracle->add_option("--program", or_program, "l1 (A z = A x) or phaseless (|A z| = |A x|)")
      ->check(CLI::IsMember({"l1", "phaseless"}));
  oracle->add_option("--x", or_x, "Planted signal")->delimiter(',')->required();
  oracle->add_option("--out", or_out, "JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (constants->parsed()) {
    if (!c_preset.empty() && c_preset != "fig1") {
      std::cerr << "phasecs: constants supports only --preset fig1\n";
      return kExitUsage;
    }
    const phasecs_constants_grid grid{c_rho, c_tm, c_tp, c_t, c_delta,
                                      c_alpha.data(), c_alpha.size(), c_omega.data(), c_omega.size()};
    Text csv;
    if (auto s = phasecs_constants_csv(&grid, &csv.p); s != PHASECS_OK) return report(s);
    if (!write_output(c_out, csv.str())) return kExitUsage;
    if (c_plot) {
      const std::string stem = plot_stem(c_out, "constants");
      const char* names[] = {"_t_omega.svg", "_C1.svg", "_C2.svg"};
      for (int panel = 0; panel < 3; ++panel) {
        Text svg;
        if (auto s = phasecs_constants_svg(&grid, panel, &svg.p); s != PHASECS_OK) return report(s);
        if (!write_output(stem + names[panel], svg.str())) return kExitUsage;
      }
    }
    return kExitOk;
  }

  if (recover->parsed()) {
    r_spec.kind = r_kind == "sparse" ? PHASECS_SPARSE : PHASECS_COMPRESSIBLE;
    phasecs_recover_result res;
    Text json;
    if (auto s = phasecs_recover(&r_spec, &r_opts, &res, &json.p); s != PHASECS_OK) return report(s);
    if (!write_output(r_out, json.str())) return kExitUsage;
    char line[160];
    std::snprintf(line, sizeof line, "snr_db=%.4f iterations=%d status=%s\n", res.snr_db, res.iterations,
                  res.solve_status == PHASECS_SOLVE_CONVERGED  ? "converged"
                  : res.solve_status == PHASECS_SOLVE_MAX_ITER ? "max-iter"
                                                               : "failed");
    std::cerr << line;
    return res.solve_status == PHASECS_SOLVE_CONVERGED ? kExitOk : kExitSolver;
  }

  if (sweep->parsed()) {
    SweepHandle h;
    phasecs_status s;
    if (!s_config.empty())
      s = phasecs_sweep_load(s_config.c_str(), &h.p);
    else if (!s_preset.empty())
      s = phasecs_sweep_preset(s_preset.c_str(), &h.p);
    else {
      std::cerr << "phasecs: sweep needs --config or --preset\n";
      return kExitUsage;
    }
    if (s != PHASECS_OK) return report(s);
    if (s_seed) phasecs_sweep_set_seed(h.p, *s_seed);
    if (auto st = phasecs_sweep_set_threads(h.p, s_threads); st != PHASECS_OK) return report(st);
    Text csv;
    if (auto st = phasecs_sweep_run(h.p, &csv.p); st != PHASECS_OK) return report(st);
    if (!write_output(s_out, csv.str())) return kExitUsage;
    if (s_plot) {
      const std::string stem = plot_stem(s_out, "sweep");
      std::size_t count = 0;
      if (auto st = phasecs_sweep_chart_count(phasecs_text_data(csv.p), &count); st != PHASECS_OK)
        return report(st);
      for (std::size_t i = 0; i < count; ++i) {
        Text svg;
        if (auto st = phasecs_sweep_chart(phasecs_text_data(csv.p), i, &svg.p); st != PHASECS_OK)
          return report(st);
        if (!write_output(stem + "_" + std::to_string(i) + ".svg", svg.str())) return kExitUsage;
      }
    }
    return kExitOk;
  }

  if (certify->parsed()) {
    MatrixHandle a;
    if (auto s = cert_src.load(a); s != PHASECS_OK) return report(s);
    std::string err;
    const auto w = cert_w.resolve(phasecs_matrix_cols(a.p), err);
    if (!w) {
      std::cerr << "phasecs: " << err << "\n";
      return kExitUsage;
    }
    phasecs_certify_options opts;
    phasecs_certify_defaults(&opts);
    opts.falsify = cert_falsify ? 1 : 0;
    opts.kernel_tol = cert_tol;
    opts.seed = cert_src.seed;
    opts.restarts = cert_restarts;
    opts.require_both_nonzero = cert_allow_zero_v ? 0 : 1;
    const phasecs_check check = cert_check == "nsp"    ? PHASECS_CHECK_NSP
                                : cert_check == "pnsp" ? PHASECS_CHECK_PNSP
                                : cert_check == "rip"  ? PHASECS_CHECK_RIP
                                                       : PHASECS_CHECK_SRIP;
    Text json;
    if (auto s = phasecs_certify(a.p, check, cert_k, w->data(), w->size(), &opts, &json.p, nullptr);
        s != PHASECS_OK)
      return report(s);
    return write_output(cert_out, json.str()) ? kExitOk : kExitUsage;
  }

  if (oracle->parsed()) {
    MatrixHandle a;
    if (auto s = or_src.load(a); s != PHASECS_OK) return report(s);
    std::string err;
    const auto w = or_w.resolve(phasecs_matrix_cols(a.p), err);
    if (!w) {
      std::cerr << "phasecs: " << err << "\n";
      return kExitUsage;
    }
    Text json;
    const auto program = or_program == "l1" ? PHASECS_PROGRAM_L1 : PHASECS_PROGRAM_PHASELESS;
    if (auto s = phasecs_oracle(a.p, program, or_x.data(), or_x.size(), w->data(), w->size(), &json.p,
                                nullptr);
        s != PHASECS_OK)
      return report(s);
    return write_output(or_out, json.str()) ? kExitOk : kExitUsage;
  }
  return kExitUsage;
}
