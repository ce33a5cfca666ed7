#pragma once

#include <string>
#include <vector>

#include "smspace/geometry.hpp"

namespace smspace::svg {

struct Series {
  enum class Kind { kLine, kScatter, kArrows };
  Kind kind = Kind::kLine;
  std::string label;
  std::string color = "#1f77b4";
  std::vector<Vec2> points;
  std::vector<Vec2> heads;  // arrow tips, kArrows only
};

/// Cell values laid over `box`, row-major from the bottom row.
struct Heatmap {
  std::size_t nx = 0;
  std::size_t ny = 0;
  Box box;
  std::vector<double> values;
};

/// One set of axes.
struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<Heatmap> heatmaps;
  bool equal_aspect = false;
  /// Fixed y range; auto when lo >= hi.
  double y_lo = 0.0;
  double y_hi = 0.0;

  Panel &line(std::vector<Vec2> pts, std::string label = {}, std::string color = {});
  Panel &scatter(std::vector<Vec2> pts, std::string label = {}, std::string color = {});
  Panel &arrows(std::vector<Vec2> tails, std::vector<Vec2> heads, std::string label = {}, std::string color = {});
  Panel &heatmap(Heatmap h);
};

struct Figure {
  std::string title;
  std::size_t columns = 2;
  double panel_width = 360;
  double panel_height = 300;
  std::vector<Panel> panels;

  /// Self-contained SVG document. A generation-time comment is added when
  /// `timestamp` is set; everything else depends only on the data.
  std::string render(bool timestamp = false) const;
};

}  // namespace smspace::svg
