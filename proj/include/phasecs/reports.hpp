#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "phasecs/certify.hpp"
#include "phasecs/solver.hpp"

namespace phasecs::reports {

/// JSON documents for the command-line front end. Non-finite numbers are
/// written as the strings "inf", "-inf" and "nan".

std::string verdict_json(std::string_view check, const certify::NspVerdict& v);
std::string rip_json(std::string_view check, const certify::RipReport& r);
/// `x` is the planted signal when one is known.
std::string oracle_json(const certify::OracleResult& r, std::optional<std::span<const double>> x);
std::string phaseless_oracle_json(const certify::PhaselessOracleResult& r,
                                  std::optional<std::span<const double>> x);
std::string solver_json(const solver::SolverResult& r, double snr_db);

}  // namespace phasecs::reports
