#include "phasecs/phasecs.h"

#include <cmath>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "phasecs/certify.hpp"
#include "phasecs/error.hpp"
#include "phasecs/experiment.hpp"
#include "phasecs/model.hpp"
#include "phasecs/reports.hpp"
#include "phasecs/rng.hpp"
#include "phasecs/svg.hpp"
#include "phasecs/theory.hpp"

struct phasecs_matrix {
  phasecs::linalg::Matrix m;
};

struct phasecs_text {
  std::string s;
};

struct phasecs_sweep {
  phasecs::experiment::SweepConfig c;
};

namespace {

using namespace phasecs;

thread_local std::string g_last_error;
thread_local std::string g_last_cap;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
phasecs_status guarded(F&& f) {
  g_last_error.clear();
  g_last_cap.clear();
  try {
    f();
    return PHASECS_OK;
  } catch (const CapExceeded& e) {
    g_last_error = e.what();
    g_last_cap = e.cap();
    return PHASECS_ERR_CAP;
  } catch (const ParameterError& e) {
    g_last_error = e.what();
    return PHASECS_ERR_INVALID_ARG;
  } catch (const NumericalError& e) {
    g_last_error = e.what();
    return PHASECS_ERR_NUMERIC;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return PHASECS_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PHASECS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PHASECS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PHASECS_ERR_INTERNAL;
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw ParameterError(message);
}

std::string read_file(const char* path) {
  require(path != nullptr, "path must not be null");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open '") + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

phasecs_text* make_text(std::string s) { return new phasecs_text{std::move(s)}; }

linalg::Matrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  long long rows = 0, cols = 0;
  if (!(in >> rows >> cols)) throw ParameterError("matrix text must start with \"m N\"");
  require(rows > 0 && cols > 0, "matrix dimensions must be positive");
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(rows * cols));
  for (long long i = 0; i < rows * cols; ++i) {
    std::string tok;
    if (!(in >> tok)) throw ParameterError("matrix text has fewer entries than m*N");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ParameterError("bad matrix entry '" + tok + "'");
    }
    if (used != tok.size()) throw ParameterError("bad matrix entry '" + tok + "'");
    data.push_back(v);
  }
  std::string extra;
  if (in >> extra) throw ParameterError("matrix text has more entries than m*N");
  return linalg::Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(data));
}

linalg::Vector weight_vector(const double* w, std::size_t count, std::size_t n) {
  if (w == nullptr) return linalg::Vector(n, 1.0);
  require(count == n, "weight count must equal the number of columns");
  return linalg::Vector(w, w + count);
}

solver::SolverConfig solver_config(const phasecs_solver_options* o) {
  solver::SolverConfig cfg;
  if (o) {
    cfg.lambda = o->lambda;
    cfg.penalty = o->penalty;
    cfg.tol_abs = o->tol_abs;
    cfg.tol_rel = o->tol_rel;
    cfg.max_iter = o->max_iter;
    cfg.adapt_penalty = o->adapt_penalty != 0;
  }
  return cfg;
}

std::vector<theory::SweepRow> constants_rows(const phasecs_constants_grid* g) {
  require(g != nullptr, "grid must not be null");
  require(g->alpha_count == 0 || g->alphas != nullptr, "alphas must not be null");
  require(g->omega_count == 0 || g->omegas != nullptr, "omegas must not be null");
  return theory::constants_sweep(g->rho, g->theta_minus, g->theta_plus, g->t, g->delta_tk,
                                 {g->alphas, g->alpha_count}, {g->omegas, g->omega_count});
}

phasecs_solve_status solve_status(solver::SolveStatus s) {
  switch (s) {
    case solver::SolveStatus::converged: return PHASECS_SOLVE_CONVERGED;
    case solver::SolveStatus::max_iter: return PHASECS_SOLVE_MAX_ITER;
    case solver::SolveStatus::failed: return PHASECS_SOLVE_FAILED;
  }
  return PHASECS_SOLVE_FAILED;
}

phasecs_verdict verdict_code(certify::Status s) {
  switch (s) {
    case certify::Status::holds_exact: return PHASECS_HOLDS_EXACT;
    case certify::Status::fails: return PHASECS_FAILS;
    case certify::Status::indeterminate: return PHASECS_INDETERMINATE;
  }
  return PHASECS_INDETERMINATE;
}

}  // namespace

extern "C" {

const char* phasecs_version(void) { return "0.1.0"; }

const char* phasecs_last_error(void) { return g_last_error.c_str(); }

const char* phasecs_last_cap(void) { return g_last_cap.c_str(); }

const char* phasecs_status_name(phasecs_status status) {
  switch (status) {
    case PHASECS_OK: return "ok";
    case PHASECS_ERR_INVALID_ARG: return "invalid-argument";
    case PHASECS_ERR_SOLVER: return "solver-failure";
    case PHASECS_ERR_CAP: return "cap-exceeded";
    case PHASECS_ERR_NUMERIC: return "numerical-failure";
    case PHASECS_ERR_IO: return "io-error";
    case PHASECS_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* phasecs_text_data(const phasecs_text* text) { return text ? text->s.c_str() : ""; }

size_t phasecs_text_size(const phasecs_text* text) { return text ? text->s.size() : 0; }

void phasecs_text_free(phasecs_text* text) { delete text; }

phasecs_status phasecs_matrix_create(size_t rows, size_t cols, const double* row_major,
                                     phasecs_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    require(rows > 0 && cols > 0, "matrix dimensions must be positive");
    require(row_major != nullptr, "data must not be null");
    *out = new phasecs_matrix{linalg::Matrix(rows, cols, std::vector<double>(row_major, row_major + rows * cols))};
  });
}

phasecs_status phasecs_matrix_identity(size_t n, phasecs_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    require(n > 0, "identity dimension must be positive");
    *out = new phasecs_matrix{linalg::Matrix::identity(n)};
  });
}

phasecs_status phasecs_matrix_gaussian(size_t rows, size_t cols, uint64_t seed, phasecs_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    require(rows > 0 && cols > 0, "matrix dimensions must be positive");
    Rng rng(seed);
    *out = new phasecs_matrix{model::gen_gaussian_matrix(rng, rows, cols)};
  });
}

phasecs_status phasecs_matrix_parse(const char* text, phasecs_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    require(text != nullptr, "text must not be null");
    *out = new phasecs_matrix{parse_matrix(text)};
  });
}

phasecs_status phasecs_matrix_load(const char* path, phasecs_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = new phasecs_matrix{parse_matrix(read_file(path))};
  });
}

phasecs_status phasecs_matrix_example(const char* name, phasecs_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    require(name != nullptr, "name must not be null");
    const std::string n = name;
    if (n == "failure-2x2")
      *out = new phasecs_matrix{linalg::Matrix(2, 2, {1, 1, 1, -1})};
    else if (n == "identity-2")
      *out = new phasecs_matrix{linalg::Matrix::identity(2)};
    else if (n == "vacuous-4x2")
      *out = new phasecs_matrix{linalg::Matrix(4, 2, {1, 0, 0, 1, 1, 1, 1, -1})};
    else
      throw ParameterError("unknown example '" + n + "'");
  });
}

size_t phasecs_matrix_rows(const phasecs_matrix* a) { return a ? a->m.rows() : 0; }

size_t phasecs_matrix_cols(const phasecs_matrix* a) { return a ? a->m.cols() : 0; }

phasecs_status phasecs_matrix_get(const phasecs_matrix* a, size_t i, size_t j, double* out) {
  return guarded([&] {
    require(a != nullptr && out != nullptr, "arguments must not be null");
    require(i < a->m.rows() && j < a->m.cols(), "index out of range");
    *out = a->m(i, j);
  });
}

void phasecs_matrix_free(phasecs_matrix* a) { delete a; }

void phasecs_theory_defaults(phasecs_theory_params* p) {
  if (!p) return;
  const theory::TheoryParams d;
  *p = {d.omega, d.rho, d.alpha, d.t, d.delta_tk, d.theta_minus, d.theta_plus};
}

phasecs_status phasecs_bound_constants_eval(const phasecs_theory_params* p, phasecs_bound_constants* out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "arguments must not be null");
    const auto bc = theory::bound_constants(
        {p->omega, p->rho, p->alpha, p->t, p->delta_tk, p->theta_minus, p->theta_plus});
    *out = {bc.gamma, bc.a, bc.d, bc.t_omega, bc.delta_threshold, bc.c1, bc.c2, bc.applicable ? 1 : 0};
  });
}

phasecs_status phasecs_unweighted_constants(double t, double delta_tk, double* c1, double* c2) {
  return guarded([&] {
    require(c1 != nullptr && c2 != nullptr, "arguments must not be null");
    *c1 = theory::unweighted_c1(t, delta_tk);
    *c2 = theory::unweighted_c2(t, delta_tk);
  });
}

phasecs_status phasecs_constants_csv(const phasecs_constants_grid* grid, phasecs_text** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = make_text(theory::constants_csv(constants_rows(grid)));
  });
}

phasecs_status phasecs_constants_svg(const phasecs_constants_grid* grid, int panel, phasecs_text** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    require(panel >= 0 && panel <= 2, "panel must be 0, 1 or 2");
    const auto charts = svg::constants_charts(constants_rows(grid));
    *out = make_text(svg::line_chart(charts[static_cast<std::size_t>(panel)]));
  });
}

void phasecs_solver_defaults(phasecs_solver_options* o) {
  if (!o) return;
  const solver::SolverConfig d;
  *o = {d.lambda, d.penalty, d.tol_abs, d.tol_rel, d.max_iter, d.adapt_penalty ? 1 : 0};
}

void phasecs_recover_defaults(phasecs_recover_spec* s) {
  if (!s) return;
  const experiment::TrialSpec d;
  *s = {PHASECS_SPARSE, d.n, d.k, d.theta, d.rho, d.alpha, d.omega, d.m, d.sigma, d.seed};
}

phasecs_status phasecs_recover(const phasecs_recover_spec* spec, const phasecs_solver_options* opts,
                               phasecs_recover_result* out, phasecs_text** json) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "arguments must not be null");
    require(spec->kind == PHASECS_SPARSE || spec->kind == PHASECS_COMPRESSIBLE, "unknown signal kind");
    experiment::TrialSpec t;
    t.kind = spec->kind == PHASECS_SPARSE ? experiment::SignalKind::sparse
                                          : experiment::SignalKind::compressible;
    t.n = spec->n;
    t.k = spec->k;
    t.theta = spec->theta;
    t.rho = spec->rho;
    t.alpha = spec->alpha;
    t.omega = spec->omega;
    t.m = spec->m;
    t.sigma = spec->sigma;
    t.seed = spec->seed;
    require(std::isfinite(t.sigma) && t.sigma >= 0.0, "sigma must be non-negative");
    const auto o = experiment::run_trial(t, solver_config(opts));
    *out = {o.snr_db,
            o.result.iterations,
            solve_status(o.result.status),
            o.result.primal_residual,
            o.result.dual_residual,
            o.result.feasibility,
            o.instance.epsilon,
            o.wall_ms};
    if (json) *json = make_text(reports::solver_json(o.result, o.snr_db));
  });
}

phasecs_status phasecs_sweep_preset(const char* name, phasecs_sweep** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "arguments must not be null");
    *out = new phasecs_sweep{experiment::preset(name)};
  });
}

phasecs_status phasecs_sweep_parse(const char* text, phasecs_sweep** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "arguments must not be null");
    auto c = experiment::parse_config(text);
    experiment::validate(c);
    *out = new phasecs_sweep{std::move(c)};
  });
}

phasecs_status phasecs_sweep_load(const char* path, phasecs_sweep** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    auto c = experiment::parse_config(read_file(path));
    experiment::validate(c);
    *out = new phasecs_sweep{std::move(c)};
  });
}

phasecs_status phasecs_sweep_set_seed(phasecs_sweep* sweep, uint64_t seed) {
  return guarded([&] {
    require(sweep != nullptr, "sweep must not be null");
    sweep->c.master_seed = seed;
  });
}

phasecs_status phasecs_sweep_set_threads(phasecs_sweep* sweep, size_t threads) {
  return guarded([&] {
    require(sweep != nullptr, "sweep must not be null");
    require(threads >= 1, "threads must be at least 1");
    sweep->c.threads = threads;
  });
}

phasecs_status phasecs_sweep_format(const phasecs_sweep* sweep, phasecs_text** out) {
  return guarded([&] {
    require(sweep != nullptr && out != nullptr, "arguments must not be null");
    *out = make_text(experiment::format_config(sweep->c));
  });
}

phasecs_status phasecs_sweep_run(const phasecs_sweep* sweep, phasecs_text** csv) {
  return guarded([&] {
    require(sweep != nullptr && csv != nullptr, "arguments must not be null");
    const auto rows = experiment::run_sweep(sweep->c);
    *csv = make_text(experiment::sweep_csv(sweep->c, rows));
  });
}

void phasecs_sweep_free(phasecs_sweep* sweep) { delete sweep; }

phasecs_status phasecs_sweep_chart_count(const char* csv, size_t* count) {
  return guarded([&] {
    require(csv != nullptr && count != nullptr, "arguments must not be null");
    *count = svg::sweep_charts(experiment::parse_sweep_csv(csv)).size();
  });
}

phasecs_status phasecs_sweep_chart(const char* csv, size_t index, phasecs_text** out) {
  return guarded([&] {
    require(csv != nullptr && out != nullptr, "arguments must not be null");
    const auto charts = svg::sweep_charts(experiment::parse_sweep_csv(csv));
    require(index < charts.size(), "chart index out of range");
    *out = make_text(svg::line_chart(charts[index]));
  });
}

void phasecs_certify_defaults(phasecs_certify_options* o) {
  if (!o) return;
  const certify::NspOptions d;
  *o = {0, 0.0, d.seed, d.restarts, d.require_both_nonzero ? 1 : 0};
}

phasecs_status phasecs_certify(const phasecs_matrix* a, phasecs_check check, size_t k,
                               const double* weights, size_t weight_count,
                               const phasecs_certify_options* opts, phasecs_text** json,
                               phasecs_verdict* verdict) {
  return guarded([&] {
    require(a != nullptr, "matrix must not be null");
    certify::NspOptions nopts;
    if (opts) {
      nopts.mode = opts->falsify ? certify::Mode::falsify : certify::Mode::exact;
      if (opts->kernel_tol > 0.0) nopts.kernel_tol = opts->kernel_tol;
      nopts.seed = opts->seed;
      nopts.restarts = opts->restarts;
      nopts.require_both_nonzero = opts->require_both_nonzero != 0;
    }
    switch (check) {
      case PHASECS_CHECK_NSP:
      case PHASECS_CHECK_PNSP: {
        const auto w = weight_vector(weights, weight_count, a->m.cols());
        const auto v = check == PHASECS_CHECK_NSP ? certify::weighted_nsp_check(a->m, k, w, nopts)
                                                  : certify::phaseless_nsp_check(a->m, k, w, nopts);
        if (json) *json = make_text(reports::verdict_json(check == PHASECS_CHECK_NSP ? "nsp" : "pnsp", v));
        if (verdict) *verdict = verdict_code(v.status);
        break;
      }
      case PHASECS_CHECK_RIP:
        if (json) *json = make_text(reports::rip_json("rip", certify::rip_constant(a->m, k)));
        break;
      case PHASECS_CHECK_SRIP:
        if (json) *json = make_text(reports::rip_json("srip", certify::srip_bounds(a->m, k)));
        break;
      default:
        throw ParameterError("unknown check");
    }
  });
}

phasecs_status phasecs_oracle(const phasecs_matrix* a, phasecs_program program, const double* x,
                              size_t n, const double* weights, size_t weight_count, phasecs_text** json,
                              int* recovered) {
  return guarded([&] {
    require(a != nullptr && x != nullptr, "arguments must not be null");
    require(n == a->m.cols(), "signal length must equal the number of columns");
    const auto w = weight_vector(weights, weight_count, n);
    const std::span<const double> xs(x, n);
    auto y = a->m.multiply(xs);
    if (program == PHASECS_PROGRAM_L1) {
      const auto r = certify::brute_force_weighted_l1(a->m, y, w);
      if (json) *json = make_text(reports::oracle_json(r, xs));
      if (recovered) *recovered = certify::recovers_uniquely(r, xs) ? 1 : 0;
    } else if (program == PHASECS_PROGRAM_PHASELESS) {
      for (double& v : y) v = std::abs(v);
      const auto r = certify::brute_force_phaseless(a->m, y, w);
      if (json) *json = make_text(reports::phaseless_oracle_json(r, xs));
      if (recovered) *recovered = certify::recovers_up_to_sign(r, xs) ? 1 : 0;
    } else {
      throw ParameterError("unknown program");
    }
  });
}

}  // extern "C"
