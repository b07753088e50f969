#pragma once

#include <string>
#include <vector>

namespace symris::svg {

// One polyline; points with non-finite coordinates break the line.
struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#2c3e50";
  std::string label;
  double width = 1.6;
  bool dashed = false;
};

// Shaded vertical band between x0 and x1 (phase regions).
struct Band {
  double x0 = 0.0;
  double x1 = 0.0;
  std::string color = "#eeeeee";
};

struct Marker {
  double x = 0.0;
  double y = 0.0;
  std::string color = "#2c3e50";
  double size = 3.5;
};

// Filled data-space polygon, drawn under the grid (phase regions).
struct Polygon {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#eeeeee";
  double opacity = 0.35;
};

struct Figure {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<Band> bands;
  std::vector<Polygon> polygons;
  std::vector<Series> series;
  std::vector<Marker> markers;
  bool logx = false;
  bool logy = false;
};

// Render a self-contained SVG document (860x520 canvas).
std::string render(const Figure& fig);

void write_figure(const Figure& fig, const std::string& path);

// Small-multiples grid: one density trace per panel with a reference
// abscissa marked by a dashed vertical line (Dicke-projector PDF layout).
struct Panel {
  std::vector<double> x;
  std::vector<double> y;
  double ref_x = 0.0;
  std::string label;
};

std::string render_panel_grid(const std::string& title, const std::vector<Panel>& panels,
                              int cols);

void write_panel_grid(const std::string& title, const std::vector<Panel>& panels, int cols,
                      const std::string& path);

}  // namespace symris::svg
