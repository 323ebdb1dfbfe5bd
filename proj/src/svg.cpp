#include "phasecs/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

namespace phasecs::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

// Roughly five ticks at 1, 2 or 5 times a power of ten.
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    step = f * mag;
    if (span / step <= 6.0) break;
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) out.push_back(t);
  return out;
}

std::string label_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string line_chart(const Chart& chart) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : chart.series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12 * std::max(1.0, std::abs(ymax))) {
    const double pad = std::max(0.5, 0.05 * std::abs(ymax));
    ymin -= pad;
    ymax += pad;
  } else {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(chart.title) + "</text>\n";
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" +
         num(ph) + "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (double t : ticks(xmin, xmax)) {
    const double x = sx(t);
    out += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(x) + "\" y2=\"" +
           num(kTop + ph + 5) + "\" stroke=\"#333\"/>\n";
    out += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
           tick_label(t) + "</text>\n";
  }
  for (double t : ticks(ymin, ymax)) {
    const double y = sy(t);
    out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft + pw) +
           "\" y2=\"" + num(y) + "\" stroke=\"#ddd\"/>\n";
    out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
           tick_label(t) + "</text>\n";
  }
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 12) +
         "\" text-anchor=\"middle\">" + escape(chart.x_label) + "</text>\n";
  out += "<text transform=\"translate(18 " + num(kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(chart.y_label) + "</text>\n";

  for (std::size_t si = 0; si < chart.series.size(); ++si) {
    const auto& s = chart.series[si];
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    std::string points;
    auto flush = [&] {
      if (!points.empty())
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
      points.clear();
    };
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      if (!points.empty()) points += " ";
      points += num(sx(s.x[i])) + "," + num(sy(s.y[i]));
    }
    flush();
    const double ly = kTop + 14 + 18 * static_cast<double>(si);
    const double lx = kLeft + pw + 12;
    out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 22) + "\" y2=\"" +
           num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(lx + 28) + "\" y=\"" + num(ly) + "\">" + escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::vector<Chart> constants_charts(const std::vector<theory::SweepRow>& rows) {
  std::map<double, std::vector<const theory::SweepRow*>> by_alpha;
  for (const auto& r : rows) by_alpha[r.alpha].push_back(&r);
  std::vector<Chart> charts(3);
  charts[0] = {"t^omega", "omega", "t^omega", {}};
  charts[1] = {"C1", "omega", "C1", {}};
  charts[2] = {"C2", "omega", "C2", {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [alpha, group] : by_alpha) {
    Series t{"alpha=" + label_value(alpha), {}, {}}, c1 = t, c2 = t;
    for (const auto* r : group) {
      t.x.push_back(r->omega);
      t.y.push_back(r->t_omega);
      c1.x.push_back(r->omega);
      c1.y.push_back(r->applicable ? r->c1 : nan);
      c2.x.push_back(r->omega);
      c2.y.push_back(r->applicable ? r->c2 : nan);
    }
    charts[0].series.push_back(std::move(t));
    charts[1].series.push_back(std::move(c1));
    charts[2].series.push_back(std::move(c2));
  }
  return charts;
}

std::vector<Chart> sweep_charts(const std::vector<experiment::SweepRecord>& rows) {
  std::set<double> alphas, omegas, sigmas;
  std::set<std::size_t> ms;
  for (const auto& r : rows) {
    alphas.insert(r.alpha);
    omegas.insert(r.omega);
    sigmas.insert(r.sigma);
    ms.insert(r.m);
  }
  std::vector<Chart> charts;
  for (double sigma : sigmas) {
    for (auto it = alphas.rbegin(); it != alphas.rend(); ++it) {
      const double alpha = *it;
      Chart c{"alpha=" + label_value(alpha) + ", sigma=" + label_value(sigma), "m", "mean SNR (dB)", {}};
      for (double omega : omegas) {
        Series s{"omega=" + label_value(omega), {}, {}};
        for (std::size_t m : ms) {
          s.x.push_back(static_cast<double>(m));
          s.y.push_back(experiment::mean_snr(rows, alpha, omega, m, sigma));
        }
        c.series.push_back(std::move(s));
      }
      charts.push_back(std::move(c));
    }
  }
  return charts;
}

}  // namespace phasecs::svg
