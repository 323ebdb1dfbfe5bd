#include "phasecs/reports.hpp"

#include <cmath>
#include <vector>

#include "json.hpp"

namespace phasecs::reports {

namespace {

using nlohmann::json;

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json vec(std::span<const double> x) {
  json out = json::array();
  for (double v : x) out.push_back(number(v));
  return out;
}

json indices(const certify::IndexSet& s) { return json(std::vector<std::size_t>(s.begin(), s.end())); }

}  // namespace

std::string verdict_json(std::string_view check, const certify::NspVerdict& v) {
  json j;
  j["check"] = check;
  j["status"] = certify::to_string(v.status);
  j["margin"] = number(v.margin);
  j["structural"] = v.structural;
  j["vacuous"] = v.vacuous;
  j["kernel_dim"] = v.kernel_dim;
  j["enumerated_count"] = v.enumerated;
  j["caps_hit"] = v.caps_hit;
  if (v.nsp_witness) {
    j["witness"] = {{"h", vec(v.nsp_witness->h)}, {"T", indices(v.nsp_witness->support)}};
  } else if (v.pair_witness) {
    j["witness"] = {{"u", vec(v.pair_witness->u)},
                    {"v", vec(v.pair_witness->v)},
                    {"S", indices(v.pair_witness->rows)}};
  } else {
    j["witness"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string rip_json(std::string_view check, const certify::RipReport& r) {
  json j;
  j["check"] = check;
  j["k"] = r.k;
  j["enumerated_count"] = r.enumerated;
  if (check == "rip") {
    j["delta_k"] = number(r.delta_k);
    j["support"] = indices(r.delta_support);
  } else {
    j["theta_minus"] = number(r.theta_minus);
    j["theta_plus"] = number(r.theta_plus);
    j["theta_minus_support"] = indices(r.theta_minus_support);
    j["theta_minus_rows"] = indices(r.theta_minus_rows);
    j["theta_plus_support"] = indices(r.theta_plus_support);
  }
  return j.dump(2) + "\n";
}

std::string oracle_json(const certify::OracleResult& r, std::optional<std::span<const double>> x) {
  json j;
  j["program"] = "weighted-l1";
  j["feasible"] = r.feasible;
  j["optimal_value"] = number(r.optimal_value);
  j["degenerate"] = r.degenerate;
  j["enumerated_count"] = r.enumerated;
  j["minimizer_count"] = r.minimizers.size();
  json mins = json::array();
  for (const auto& z : r.minimizers) mins.push_back(vec(z));
  j["minimizers"] = mins;
  if (x) j["recovery"] = certify::recovers_uniquely(r, *x);
  return j.dump(2) + "\n";
}

std::string phaseless_oracle_json(const certify::PhaselessOracleResult& r,
                                  std::optional<std::span<const double>> x) {
  json j;
  j["program"] = "phaseless-weighted-l1";
  j["feasible"] = r.feasible;
  j["optimal_value"] = number(r.optimal_value);
  j["degenerate"] = r.degenerate;
  j["sign_patterns"] = r.patterns;
  j["minimizer_count"] = r.count_with_sign();
  json mins = json::array();
  for (const auto& z : r.canonical) mins.push_back(vec(z));
  j["minimizers_up_to_sign"] = mins;
  if (x) j["recovery"] = certify::recovers_up_to_sign(r, *x);
  return j.dump(2) + "\n";
}

std::string solver_json(const solver::SolverResult& r, double snr_db) {
  json j;
  j["status"] = solver::to_string(r.status);
  j["iterations"] = r.iterations;
  j["snr_db"] = number(snr_db);
  j["primal_residual"] = number(r.primal_residual);
  j["dual_residual"] = number(r.dual_residual);
  j["feasibility"] = number(r.feasibility);
  j["objective"] = number(r.objective);
  j["final_penalty"] = number(r.final_penalty);
  j["linear_solver"] = r.woodbury ? "woodbury" : "cg";
  j["xhat"] = vec(r.xhat);
  if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
  return j.dump(2) + "\n";
}

}  // namespace phasecs::reports
