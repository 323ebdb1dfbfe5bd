#pragma once

#include <string>
#include <vector>

#include "phasecs/experiment.hpp"
#include "phasecs/theory.hpp"

namespace phasecs::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // non-finite points break the polyline
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Standalone SVG document with axes, ticks and a legend.
std::string line_chart(const Chart& chart);

/// t^omega, C1 and C2 against omega, one curve per alpha.
std::vector<Chart> constants_charts(const std::vector<theory::SweepRow>& rows);

/// Mean SNR against m, one chart per (alpha, sigma) and one curve per omega.
std::vector<Chart> sweep_charts(const std::vector<experiment::SweepRecord>& rows);

}  // namespace phasecs::svg
