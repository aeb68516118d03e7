#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "kendall/cli.hpp"

namespace kendall::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_spread_svg(const std::vector<SpreadPoint>& points, double reference,
                              const std::string& title) {
  double lo = reference, hi = reference;
  double log_min = 0.0, log_max = 1.0;
  if (!points.empty()) {
    log_min = log_max = std::log10(static_cast<double>(points.front().n));
  }
  for (const SpreadPoint& p : points) {
    lo = std::min(lo, p.mean - p.sd);
    hi = std::max(hi, p.mean + p.sd);
    const double lx = std::log10(static_cast<double>(p.n));
    log_min = std::min(log_min, lx);
    log_max = std::max(log_max, lx);
  }
  const double pad = std::max(0.05, 0.1 * (hi - lo));
  lo = std::max(-1.0, lo - pad);
  hi = std::min(1.0, hi + pad);
  if (log_max - log_min < 1e-9) {
    log_min -= 0.5;
    log_max += 0.5;
  } else {
    const double margin = 0.08 * (log_max - log_min);
    log_min -= margin;
    log_max += margin;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double n) {
    return kLeft + (std::log10(n) - log_min) / (log_max - log_min) * plot_w;
  };
  auto py = [&](double v) { return kTop + (hi - std::clamp(v, lo, hi)) / (hi - lo) * plot_h; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2, escape(title));
  svg += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n",
      kLeft, kTop, plot_w, plot_h);

  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4.0;
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3f}</text>\n", kLeft - 6,
        py(v) + 4, v);
  }
  for (const SpreadPoint& p : points) {
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                       px(static_cast<double>(p.n)), kHeight - kBottom + 18, p.n);
  }
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">n (log scale)</text>\n",
      kLeft + plot_w / 2, kHeight - 10);

  svg += fmt::format(
      "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#c0392b\" "
      "stroke-dasharray=\"6 4\"/>\n"
      "<text x=\"{:.1f}\" y=\"{:.1f}\" fill=\"#c0392b\" text-anchor=\"end\">tau = {:.4f}</text>\n",
      kLeft, py(reference), kLeft + plot_w, py(reference), kLeft + plot_w - 4,
      py(reference) - 6, reference);

  for (const SpreadPoint& p : points) {
    const double x = px(static_cast<double>(p.n));
    svg += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"#2c3e50\"/>\n"
        "<line x1=\"{3:.1f}\" y1=\"{1:.1f}\" x2=\"{4:.1f}\" y2=\"{1:.1f}\" stroke=\"#2c3e50\"/>\n"
        "<line x1=\"{3:.1f}\" y1=\"{2:.1f}\" x2=\"{4:.1f}\" y2=\"{2:.1f}\" stroke=\"#2c3e50\"/>\n"
        "<circle cx=\"{0:.1f}\" cy=\"{5:.1f}\" r=\"4\" fill=\"#2980b9\"/>\n",
        x, py(p.mean - p.sd), py(p.mean + p.sd), x - 6, x + 6, py(p.mean));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace kendall::cli
