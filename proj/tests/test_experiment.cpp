#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "json.hpp"

#include "phasecs/certify.hpp"
#include "phasecs/error.hpp"
#include "phasecs/experiment.hpp"
#include "phasecs/reports.hpp"
#include "phasecs/svg.hpp"
#include "phasecs/theory.hpp"

using namespace phasecs;
using namespace phasecs::experiment;

namespace {

SweepConfig tiny() {
  SweepConfig c;
  c.n = 8;
  c.k = 1;
  c.alphas = {0.0, 1.0};
  c.omegas = {0.5, 1.0};
  c.ms = {10, 12};
  c.sigmas = {0.0, 0.1};
  c.trials = 2;
  c.master_seed = 5;
  return c;
}

std::string strip_wall(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line.rfind("signal_kind", 0) != 0)
      line = line.substr(0, line.rfind(','));
    out += line + "\n";
  }
  return out;
}

}  // namespace

TEST(Config, PresetsMatchProtocol) {
  const auto s = preset("fig2-sparse");
  EXPECT_EQ(s.kind, SignalKind::sparse);
  EXPECT_EQ(s.n, 32u);
  EXPECT_EQ(s.k, 4u);
  EXPECT_EQ(s.trials, 10u);
  EXPECT_EQ(s.alphas, (std::vector<double>{0.25, 0.5, 0.75}));
  EXPECT_EQ(s.omegas, (std::vector<double>{0.0, 0.3, 0.5, 0.7, 1.0}));
  EXPECT_EQ(s.sigmas, (std::vector<double>{0.0, 0.1}));
  EXPECT_EQ(s.ms.back(), 60u);
  const auto c = preset("fig3-compressible");
  EXPECT_EQ(c.kind, SignalKind::compressible);
  EXPECT_EQ(c.theta, 4.5);
  EXPECT_THROW(preset("fig9"), ParameterError);
}

TEST(Config, ParseFormatRoundTrip) {
  const auto text =
      "# comment\nkind = compressible\nN = 12\nk = 3  # inline\ntheta = 2.5\nrho = 1\n"
      "alpha = 0.25, 0.75\nomega = 0,0.3,1\nm = 20,30\nsigma = 0,0.1\ntrials = 4\nseed = 99\n"
      "lambda = 0.5\npenalty = 2\ntol_abs = 1e-7\ntol_rel = 1e-5\nmax_iter = 300\nthreads = 3\n";
  const auto c = parse_config(text);
  EXPECT_EQ(c.kind, SignalKind::compressible);
  EXPECT_EQ(c.n, 12u);
  EXPECT_EQ(c.k, 3u);
  EXPECT_EQ(c.omegas, (std::vector<double>{0.0, 0.3, 1.0}));
  EXPECT_EQ(c.ms, (std::vector<std::size_t>{20, 30}));
  EXPECT_EQ(c.solver.max_iter, 300);
  EXPECT_EQ(c.threads, 3u);
  const auto again = parse_config(format_config(c));
  EXPECT_EQ(format_config(again), format_config(c));
  EXPECT_EQ(again.solver.tol_abs, 1e-7);
  EXPECT_EQ(again.alphas, c.alphas);
}

TEST(Config, HashIgnoresThreads) {
  auto a = tiny();
  auto b = tiny();
  b.threads = 4;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.master_seed = 6;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("bogus = 1\n"), ParameterError);
  EXPECT_THROW(parse_config("N 12\n"), ParameterError);
  EXPECT_THROW(parse_config("N = -3\n"), ParameterError);
  EXPECT_THROW(parse_config("alpha = 0.5,x\n"), ParameterError);
  EXPECT_THROW(parse_config("kind = dense\n"), ParameterError);
  auto c = tiny();
  c.omegas.clear();
  EXPECT_THROW(validate(c), ParameterError);
  c = tiny();
  c.trials = 0;
  EXPECT_THROW(validate(c), ParameterError);
  c = tiny();
  c.rho = 9.0;  // estimate larger than N
  EXPECT_THROW(validate(c), ParameterError);
  c = tiny();
  c.omegas = {1.2};
  EXPECT_THROW(validate(c), ParameterError);
  EXPECT_NO_THROW(validate(tiny()));
  EXPECT_NO_THROW(validate(preset("fig2-sparse")));
}

TEST(Seeds, MatchedAcrossGridPoints) {
  const auto c = tiny();
  EXPECT_NE(trial_seed(c, 0), trial_seed(c, 1));
  auto d = c;
  d.omegas = {0.1};
  d.sigmas = {0.3};
  d.ms = {40};
  d.alphas = {0.5};
  EXPECT_EQ(trial_seed(c, 1), trial_seed(d, 1));
  d.master_seed = 6;
  EXPECT_NE(trial_seed(c, 1), trial_seed(d, 1));
  d = c;
  d.kind = SignalKind::compressible;
  EXPECT_NE(trial_seed(c, 0), trial_seed(d, 0));
}

TEST(Trial, NoiseOnlyChangesMeasurements) {
  TrialSpec s;
  s.n = 8;
  s.k = 1;
  s.m = 12;
  s.alpha = 1.0;
  s.omega = 0.3;
  s.seed = 11;
  const auto clean = run_trial(s, {});
  s.sigma = 0.1;
  const auto noisy = run_trial(s, {});
  EXPECT_EQ(clean.instance.x, noisy.instance.x);
  EXPECT_EQ(clean.instance.a.data()[0], noisy.instance.a.data()[0]);
  EXPECT_EQ(clean.estimate.indices, noisy.estimate.indices);
  EXPECT_EQ(clean.instance.epsilon, 0.0);
  EXPECT_GT(noisy.instance.epsilon, 0.0);
  EXPECT_EQ(clean.result.status, solver::SolveStatus::converged);
  EXPECT_GE(clean.snr_db, 40.0);
  EXPECT_EQ(clean.t0, model::best_k_support(clean.instance.x, 1));
}

TEST(Sweep, RowsCsvRoundTripAndOrder) {
  const auto c = tiny();
  const auto rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 2u * 2u * 2u * 2u * 2u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& p = rows[i - 1];
    const auto& q = rows[i];
    EXPECT_TRUE(std::tie(p.alpha, p.omega, p.m, p.sigma, p.trial) <
                std::tie(q.alpha, q.omega, q.m, q.sigma, q.trial));
  }
  const auto csv = sweep_csv(c, rows);
  EXPECT_EQ(csv.rfind("# phasecs-sweep schema=1 config=", 0), 0u);
  const auto back = parse_sweep_csv(csv);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].seed, rows[i].seed);
    EXPECT_EQ(back[i].status, rows[i].status);
    EXPECT_EQ(back[i].iterations, rows[i].iterations);
    EXPECT_EQ(back[i].m, rows[i].m);
    if (std::isfinite(rows[i].snr_db)) {
      EXPECT_NEAR(back[i].snr_db, rows[i].snr_db, 1e-8 * (1 + std::abs(rows[i].snr_db)));
    }
  }
  EXPECT_NE(csv.find(",na,"), std::string::npos);
  EXPECT_GT(mean_snr(rows, 1.0, 0.5, 12, 0.0), mean_snr(rows, 1.0, 0.5, 12, 0.1));
  EXPECT_TRUE(std::isnan(mean_snr(rows, 0.3, 0.5, 12, 0.0)));
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
  auto c = tiny();
  c.sigmas = {0.0};
  const auto one = sweep_csv(c, run_sweep(c));
  c.threads = 3;
  const auto three = sweep_csv(c, run_sweep(c));
  EXPECT_EQ(strip_wall(one), strip_wall(three));
  EXPECT_EQ(strip_wall(one), strip_wall(sweep_csv(c, run_sweep(c))));
}

TEST(Sweep, SingleRow) {
  auto c = tiny();
  c.alphas = {1.0};
  c.omegas = {1.0};
  c.ms = {12};
  c.sigmas = {0.0};
  c.trials = 1;
  EXPECT_EQ(run_sweep(c).size(), 1u);
}

TEST(Sweep, FailuresAreRecordedInRow) {
  auto c = tiny();
  c.alphas = {1.0};
  c.omegas = {1.0};
  c.ms = {12};
  c.sigmas = {0.0};
  c.solver.max_iter = 2;
  const auto rows = run_sweep(c);
  for (const auto& r : rows) EXPECT_EQ(r.status, "max-iter");
}

TEST(SweepCsv, SchemaViolations) {
  const auto c = tiny();
  const std::string header = std::string(kSweepHeader) + "\n";
  EXPECT_THROW(parse_sweep_csv(header), ParameterError);
  EXPECT_THROW(parse_sweep_csv("# phasecs-sweep schema=2 config=0\n" + header), ParameterError);
  EXPECT_THROW(parse_sweep_csv("# phasecs-sweep schema=1 config=0\nsignal_kind,N\n"), ParameterError);
  const std::string ok = "# phasecs-sweep schema=1 config=0\n" + header;
  EXPECT_TRUE(parse_sweep_csv(ok).empty());
  EXPECT_THROW(parse_sweep_csv(ok + "sparse,8,1,na,1,0,1,12,0,0,3,inf,10,converged\n"), ParameterError);
  EXPECT_THROW(parse_sweep_csv(ok + "sparse,8,1,na,1,0,1,12,0,0,3,inf,10,done,1.0\n"), ParameterError);
  const auto rows = parse_sweep_csv(ok + "sparse,8,1,na,1,0,1,12,0,0,3,inf,10,converged,1.000\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(std::isinf(rows[0].snr_db));
  EXPECT_EQ(mean_snr(rows, 0.0, 1.0, 12, 0.0, 250.0), 250.0);
}

TEST(Reports, VerdictJson) {
  const linalg::Matrix a(2, 2, {1, 1, 1, -1});
  const auto v = certify::phaseless_nsp_check(a, 2, std::vector<double>(2, 1.0));
  const auto j = nlohmann::json::parse(reports::verdict_json("pnsp", v));
  EXPECT_EQ(j["status"], "fails");
  EXPECT_EQ(j["check"], "pnsp");
  EXPECT_TRUE(j["witness"].contains("u"));
  EXPECT_TRUE(j["witness"].contains("S"));
  EXPECT_TRUE(j.contains("enumerated_count"));
  EXPECT_TRUE(j.contains("caps_hit"));
  const auto vac = certify::weighted_nsp_check(linalg::Matrix::identity(2), 1, std::vector<double>(2, 1.0));
  const auto jv = nlohmann::json::parse(reports::verdict_json("nsp", vac));
  EXPECT_EQ(jv["margin"], "inf");
  EXPECT_TRUE(jv["witness"].is_null());
}

TEST(Svg, ChartsAreWellFormed) {
  const std::vector<double> alphas{0.3, 0.9};
  const std::vector<double> omegas{0.0, 0.5, 1.0};
  const auto rows = theory::constants_sweep(1.0, 0.5, 1.5, 4.0, 0.3, alphas, omegas);
  const auto charts = svg::constants_charts(rows);
  ASSERT_EQ(charts.size(), 3u);
  for (const auto& ch : charts) {
    EXPECT_EQ(ch.series.size(), 2u);
    const auto text = svg::line_chart(ch);
    EXPECT_EQ(text.rfind("<?xml", 0), 0u);
    EXPECT_NE(text.find("<svg"), std::string::npos);
    EXPECT_NE(text.find("</svg>"), std::string::npos);
    EXPECT_NE(text.find("polyline"), std::string::npos);
    EXPECT_EQ(text.find("nan"), std::string::npos);
  }
  auto c = tiny();
  c.trials = 1;
  const auto sc = svg::sweep_charts(run_sweep(c));
  EXPECT_EQ(sc.size(), 4u);  // (sigma, alpha) panels
  svg::Chart odd{"a < b & \"c\"", "x", "y", {{"s", {0.0, 1.0, 2.0}, {1.0, NAN, 3.0}}}};
  const auto t = svg::line_chart(odd);
  EXPECT_NE(t.find("&lt;"), std::string::npos);
  EXPECT_NE(t.find("&amp;"), std::string::npos);
}
