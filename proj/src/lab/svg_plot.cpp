#include "kglab/lab/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "kglab/errors.hpp"
#include "kglab/lab/persist.hpp"

namespace kglab::lab {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace

std::string render_plot(const std::vector<Series>& series, const PlotStyle& st) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  size_t points = 0;
  auto ty = [&](double y) { return st.log_y ? std::log10(y) : y; };
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw IoError("series '" + s.name + "' has mismatched x/y lengths");
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (st.log_y && !(s.y[i] > 0.0))) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
      ++points;
    }
  }
  if (points == 0) throw IoError("plot '" + st.title + "' has no data");
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double L = 80, R = 20, T = 36, B = 48;
  const double W = st.width - L - R, H = st.height - T - B;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * W; };
  auto py = [&](double y) { return T + (1.0 - (ty(y) - y0) / (y1 - y0)) * H; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(st.width) + "\" height=\"" +
       std::to_string(st.height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(L + W / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" + escape(st.title) +
       "</text>\n";
  o += "<rect x=\"" + num(L) + "\" y=\"" + num(T) + "\" width=\"" + num(W) + "\" height=\"" + num(H) +
       "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0;
    const double fy = y0 + (y1 - y0) * k / 4.0;
    const double gx = px(fx), gy = T + (1.0 - k / 4.0) * H;
    o += "<line x1=\"" + num(gx) + "\" y1=\"" + num(T + H) + "\" x2=\"" + num(gx) + "\" y2=\"" + num(T + H + 4) +
         "\" stroke=\"#444\"/>\n";
    o += "<text x=\"" + num(gx) + "\" y=\"" + num(T + H + 16) + "\" text-anchor=\"middle\">" + tick_label(fx) +
         "</text>\n";
    o += "<line x1=\"" + num(L - 4) + "\" y1=\"" + num(gy) + "\" x2=\"" + num(L) + "\" y2=\"" + num(gy) +
         "\" stroke=\"#444\"/>\n";
    o += "<text x=\"" + num(L - 6) + "\" y=\"" + num(gy + 4) + "\" text-anchor=\"end\">" +
         (st.log_y ? "1e" + tick_label(fy) : tick_label(fy)) + "</text>\n";
  }
  o += "<text x=\"" + num(L + W / 2) + "\" y=\"" + num(st.height - 10.0) + "\" text-anchor=\"middle\">" +
       escape(st.x_label) + "</text>\n";
  o += "<text x=\"14\" y=\"" + num(T + H / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
       num(T + H / 2) + ")\">" + escape(st.y_label) + "</text>\n";

  for (size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    std::string pts;
    auto flush = [&] {
      if (!pts.empty())
        o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.4\" points=\"" + pts +
             "\"/>\n";
      pts.clear();
    };
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (st.log_y && !(s.y[i] > 0.0))) {
        flush();
        continue;
      }
      if (!pts.empty()) pts += ' ';
      pts += num(px(s.x[i])) + "," + num(py(s.y[i]));
    }
    flush();
    const double ly = T + 14.0 + 14.0 * static_cast<double>(k);
    o += "<line x1=\"" + num(L + W - 130) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(L + W - 110) + "\" y2=\"" +
         num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + num(L + W - 105) + "\" y=\"" + num(ly) + "\">" + escape(s.name) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

void emit_plot(const std::vector<Series>& series, const PlotStyle& style, const std::string& path) {
  write_text(path, render_plot(series, style));
}

}  // namespace kglab::lab
