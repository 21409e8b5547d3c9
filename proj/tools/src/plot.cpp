#include "emt/plot.hpp"

#include "emt/csv.hpp"
#include "emt/error.hpp"
#include "emt/output.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace emt::cli {

namespace {

constexpr double kWidth = 800, kHeight = 480;
constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 60;

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

std::string num(double v) { return format_fixed(v, 2); }

// "Nice" tick step covering span in about five steps.
double tick_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0})
    if (raw <= m * mag)
      return m * mag;
  return 10.0 * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (hi - lo < 1e-12) {
      lo -= 1.0;
      hi += 1.0;
    }
  }
};

const char* const kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

} // namespace

char marker_glyph(std::size_t i) {
  static constexpr char glyphs[] = {'o', '+', '*'};
  return glyphs[i % 3];
}

std::string render_svg(const PlotTable& table, PlotKind kind) {
  Range xr, yr;
  std::size_t points = 0;
  for (const PlotSeries& s : table.series) {
    if (s.x.size() != s.y.size())
      throw Error(ErrorCode::LengthMismatch, "plot series '" + s.label + "' has unequal x and y");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xr.add(s.x[i]);
      yr.add(s.y[i]);
      ++points;
    }
  }
  if (points == 0 || !(xr.lo <= xr.hi))
    throw Error(ErrorCode::EmptyTable, "nothing to plot");
  xr.pad();
  yr.pad();

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!table.title.empty())
    o << "<text class=\"title\" x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(table.title) << "</text>\n";

  o << "<g class=\"axes\" stroke=\"black\">\n"
    << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph << "\"/>\n"
    << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph << "\"/>\n"
    << "</g>\n<g class=\"ticks\">\n";
  const double xs = tick_step(xr.hi - xr.lo), ys = tick_step(yr.hi - yr.lo);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi + 1e-9 * xs; t += xs)
    o << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << kTop + ph << "\" x2=\"" << num(sx(t)) << "\" y2=\""
      << kTop + ph + 5 << "\" stroke=\"black\"/><text x=\"" << num(sx(t)) << "\" y=\"" << kTop + ph + 18
      << "\" text-anchor=\"middle\">" << format_number(t) << "</text>\n";
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi + 1e-9 * ys; t += ys)
    o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << kLeft << "\" y2=\""
      << num(sy(t)) << "\" stroke=\"black\"/><text x=\"" << kLeft - 8 << "\" y=\"" << num(sy(t) + 4)
      << "\" text-anchor=\"end\">" << format_number(t) << "</text>\n";
  o << "</g>\n";
  o << "<text class=\"xlabel\" x=\"" << num(kLeft + pw / 2) << "\" y=\"" << kHeight - 15
    << "\" text-anchor=\"middle\">" << escape(table.x_label) << "</text>\n"
    << "<text class=\"ylabel\" transform=\"translate(20," << num(kTop + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(table.y_label) << "</text>\n";

  for (std::size_t k = 0; k < table.series.size(); ++k) {
    const PlotSeries& s = table.series[k];
    const char* colour = kColours[k % std::size(kColours)];
    const char glyph = marker_glyph(k);
    o << "<g class=\"series\" data-label=\"" << escape(s.label) << "\" fill=\"" << colour << "\">\n";
    if (kind == PlotKind::line) {
      o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\" points=\"";
      bool first = true;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
          continue;
        o << (first ? "" : " ") << num(sx(s.x[i])) << ',' << num(sy(s.y[i]));
        first = false;
      }
      o << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
          o << "<text class=\"marker\" x=\"" << num(sx(s.x[i])) << "\" y=\"" << num(sy(s.y[i]) + 4)
            << "\" text-anchor=\"middle\">" << glyph << "</text>\n";
    }
    o << "</g>\n";
    const double ly = kTop + 20.0 * static_cast<double>(k);
    o << "<g class=\"legend\" fill=\"" << colour << "\"><text x=\"" << kLeft + pw + 20 << "\" y=\""
      << num(ly + 4) << "\">" << glyph << "</text><text x=\"" << kLeft + pw + 36 << "\" y=\""
      << num(ly + 4) << "\" fill=\"black\">" << escape(s.label) << "</text></g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void emit_plot(const PlotTable& table, PlotKind kind, const std::filesystem::path& path) {
  const std::string svg = render_svg(table, kind);
  write_atomic(path, [&](std::ostream& out) { out << svg; });
}

} // namespace emt::cli
