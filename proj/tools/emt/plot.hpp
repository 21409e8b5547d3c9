#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace emt::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotTable {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

enum class PlotKind { line, points };

/// Glyph of the i-th series: o, + and * in turn.
char marker_glyph(std::size_t series_index);

/// Static SVG with axes, ticks and a legend. Point plots draw one
/// `<text class="marker">` per data point; line plots draw one polyline per
/// series. Throws Error(EmptyTable) when no series has a point.
std::string render_svg(const PlotTable& table, PlotKind kind);

void emit_plot(const PlotTable& table, PlotKind kind, const std::filesystem::path& path);

} // namespace emt::cli
