#include "symris/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "symris/stateio.hpp"

namespace symris::svg {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 56.0;

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

// Nice tick positions with a 1/2/5 mantissa; at most ~8 ticks.
std::vector<double> linear_ticks(const Range& r) {
  const double span = r.hi - r.lo;
  if (!(span > 0.0)) return {r.lo};
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step = 10.0 * mag;
  if (frac <= 1.0) step = mag;
  else if (frac <= 2.0) step = 2.0 * mag;
  else if (frac <= 5.0) step = 5.0 * mag;
  std::vector<double> ticks;
  const double start = std::ceil(r.lo / step - 1e-9) * step;
  for (double t = start; t <= r.hi + 1e-9 * span; t += step)
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  return ticks;
}

std::vector<double> log_ticks(const Range& r) {
  std::vector<double> ticks;
  const int lo = static_cast<int>(std::floor(r.lo));
  const int hi = static_cast<int>(std::ceil(r.hi));
  for (int e = lo; e <= hi; ++e) {
    const double t = static_cast<double>(e);
    if (t >= r.lo - 1e-9 && t <= r.hi + 1e-9) ticks.push_back(t);
  }
  if (ticks.empty()) ticks.push_back(r.lo);
  return ticks;
}

}  // namespace

std::string render(const Figure& fig) {
  // Data ranges (in transformed space when log-scaled).
  auto tx = [&](double x) { return fig.logx ? std::log10(x) : x; };
  auto ty = [&](double y) { return fig.logy ? std::log10(y) : y; };
  auto usable = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    if (fig.logx && !(x > 0.0)) return false;
    if (fig.logy && !(y > 0.0)) return false;
    return true;
  };

  Range rx, ry;
  bool any = false;
  auto grow = [&](double x, double y) {
    const double u = tx(x), v = ty(y);
    if (!any) {
      rx = {u, u};
      ry = {v, v};
      any = true;
    } else {
      rx.lo = std::min(rx.lo, u);
      rx.hi = std::max(rx.hi, u);
      ry.lo = std::min(ry.lo, v);
      ry.hi = std::max(ry.hi, v);
    }
  };
  for (const auto& s : fig.series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      if (usable(s.x[i], s.y[i])) grow(s.x[i], s.y[i]);
  for (const auto& p : fig.polygons)
    for (std::size_t i = 0; i < p.x.size() && i < p.y.size(); ++i)
      if (usable(p.x[i], p.y[i])) grow(p.x[i], p.y[i]);
  for (const auto& m : fig.markers)
    if (usable(m.x, m.y)) grow(m.x, m.y);
  if (!any) {
    rx = {0.0, 1.0};
    ry = {0.0, 1.0};
  }
  auto pad = [](Range& r) {
    if (r.hi - r.lo < 1e-12) {
      r.lo -= 0.5;
      r.hi += 0.5;
    } else {
      const double p = 0.04 * (r.hi - r.lo);
      r.lo -= p;
      r.hi += p;
    }
  };
  pad(rx);
  pad(ry);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (tx(x) - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (ty(y) - ry.lo) / (ry.hi - ry.lo) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"#ffffff\"/>\n";

  // Phase bands go under everything else.
  for (const auto& b : fig.bands) {
    if (fig.logx && (!(b.x0 > 0.0) || !(b.x1 > 0.0))) continue;
    double x0 = std::clamp(px(b.x0), kLeft, kLeft + pw);
    double x1 = std::clamp(px(b.x1), kLeft, kLeft + pw);
    if (x1 < x0) std::swap(x0, x1);
    out << "<rect x=\"" << num(x0) << "\" y=\"" << num(kTop) << "\" width=\""
        << num(x1 - x0) << "\" height=\"" << num(ph) << "\" fill=\"" << escape_xml(b.color)
        << "\" fill-opacity=\"0.35\"/>\n";
  }
  for (const auto& p : fig.polygons) {
    std::string pts;
    for (std::size_t i = 0; i < p.x.size() && i < p.y.size(); ++i) {
      if (!usable(p.x[i], p.y[i])) continue;
      if (!pts.empty()) pts += " ";
      pts += num(std::clamp(px(p.x[i]), kLeft, kLeft + pw)) + "," +
             num(std::clamp(py(p.y[i]), kTop, kTop + ph));
    }
    if (pts.empty()) continue;
    out << "<polygon points=\"" << pts << "\" fill=\"" << escape_xml(p.color)
        << "\" fill-opacity=\"" << p.opacity << "\"/>\n";
  }

  // Grid + ticks.
  const std::vector<double> xticks = fig.logx ? log_ticks(rx) : linear_ticks(rx);
  const std::vector<double> yticks = fig.logy ? log_ticks(ry) : linear_ticks(ry);
  out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double t : xticks) {
    const double x = kLeft + (t - rx.lo) / (rx.hi - rx.lo) * pw;
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(kTop + ph) << "\"/>\n";
  }
  for (double t : yticks) {
    const double y = kTop + ph - (t - ry.lo) / (ry.hi - ry.lo) * ph;
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(kLeft + pw) << "\" y2=\"" << num(y) << "\"/>\n";
  }
  out << "</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
  for (double t : xticks) {
    const double x = kLeft + (t - rx.lo) / (rx.hi - rx.lo) * pw;
    const double v = fig.logx ? std::pow(10.0, t) : t;
    out << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + ph + 18.0)
        << "\" text-anchor=\"middle\">" << escape_xml(tick_label(v)) << "</text>\n";
  }
  for (double t : yticks) {
    const double y = kTop + ph - (t - ry.lo) / (ry.hi - ry.lo) * ph;
    const double v = fig.logy ? std::pow(10.0, t) : t;
    out << "<text x=\"" << num(kLeft - 8.0) << "\" y=\"" << num(y + 4.0)
        << "\" text-anchor=\"end\">" << escape_xml(tick_label(v)) << "</text>\n";
  }
  out << "</g>\n";

  // Frame.
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // Series.
  for (const auto& s : fig.series) {
    out << "<polyline fill=\"none\" stroke=\"" << escape_xml(s.color) << "\" stroke-width=\""
        << s.width << "\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    bool open = false;
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) {
        if (open) {
          out << pts << "\"/>\n<polyline fill=\"none\" stroke=\"" << escape_xml(s.color)
              << "\" stroke-width=\"" << s.width << "\"";
          if (s.dashed) out << " stroke-dasharray=\"6 4\"";
          out << " points=\"";
          pts.clear();
          open = false;
        }
        continue;
      }
      if (!pts.empty()) pts += " ";
      pts += num(px(s.x[i])) + "," + num(py(s.y[i]));
      open = true;
    }
    out << pts << "\"/>\n";
  }

  // Markers.
  for (const auto& m : fig.markers) {
    if (!usable(m.x, m.y)) continue;
    out << "<circle cx=\"" << num(px(m.x)) << "\" cy=\"" << num(py(m.y)) << "\" r=\""
        << m.size << "\" fill=\"" << escape_xml(m.color) << "\"/>\n";
  }

  // Labels.
  out << "<g font-family=\"sans-serif\" fill=\"#111111\">\n";
  if (!fig.title.empty())
    out << "<text x=\"" << num(kWidth / 2.0) << "\" y=\"24\" font-size=\"16\" "
        << "text-anchor=\"middle\">" << escape_xml(fig.title) << "</text>\n";
  if (!fig.xlabel.empty())
    out << "<text x=\"" << num(kLeft + pw / 2.0) << "\" y=\"" << num(kHeight - 14.0)
        << "\" font-size=\"13\" text-anchor=\"middle\">" << escape_xml(fig.xlabel)
        << "</text>\n";
  if (!fig.ylabel.empty())
    out << "<text x=\"20\" y=\"" << num(kTop + ph / 2.0)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << num(kTop + ph / 2.0) << ")\">" << escape_xml(fig.ylabel) << "</text>\n";
  out << "</g>\n";

  // Legend, one row per labeled series.
  double ly = kTop + 14.0;
  for (const auto& s : fig.series) {
    if (s.label.empty()) continue;
    const double lx = kLeft + pw - 170.0;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4.0) << "\" x2=\""
        << num(lx + 26.0) << "\" y2=\"" << num(ly - 4.0) << "\" stroke=\""
        << escape_xml(s.color) << "\" stroke-width=\"" << s.width << "\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n";
    out << "<text x=\"" << num(lx + 32.0) << "\" y=\"" << num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#111111\">"
        << escape_xml(s.label) << "</text>\n";
    ly += 16.0;
  }

  out << "</svg>\n";
  return out.str();
}

void write_figure(const Figure& fig, const std::string& path) {
  stateio::write_text_file(path, render(fig));
}

std::string render_panel_grid(const std::string& title, const std::vector<Panel>& panels,
                              int cols) {
  if (cols < 1) cols = 1;
  const int rows = (static_cast<int>(panels.size()) + cols - 1) / cols;
  const double pw = 156.0, ph = 110.0, gap = 10.0, margin = 16.0;
  const double top = title.empty() ? margin : 40.0;
  const double width = margin * 2 + cols * pw + (cols - 1) * gap;
  const double height = top + rows * ph + (rows - 1) * gap + margin;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
  if (!title.empty())
    out << "<text x=\"" << num(width / 2.0)
        << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\" "
        << "fill=\"#111111\">" << escape_xml(title) << "</text>\n";

  for (std::size_t i = 0; i < panels.size(); ++i) {
    const Panel& p = panels[i];
    const int r = static_cast<int>(i) / cols;
    const int c = static_cast<int>(i) % cols;
    const double x0 = margin + c * (pw + gap);
    const double y0 = top + r * (ph + gap);
    out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(pw)
        << "\" height=\"" << num(ph)
        << "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.8\"/>\n";

    double xlo = p.ref_x, xhi = p.ref_x, yhi = 0.0;
    bool anyx = std::isfinite(p.ref_x);
    for (std::size_t j = 0; j < p.x.size() && j < p.y.size(); ++j) {
      if (!std::isfinite(p.x[j]) || !std::isfinite(p.y[j])) continue;
      if (!anyx) {
        xlo = xhi = p.x[j];
        anyx = true;
      }
      xlo = std::min(xlo, p.x[j]);
      xhi = std::max(xhi, p.x[j]);
      yhi = std::max(yhi, p.y[j]);
    }
    if (!anyx || xhi - xlo < 1e-12) {
      xlo -= 0.5;
      xhi += 0.5;
    }
    if (yhi <= 0.0) yhi = 1.0;
    const double padx = 0.06 * (xhi - xlo);
    xlo -= padx;
    xhi += padx;
    yhi *= 1.08;
    auto sx = [&](double x) { return x0 + (x - xlo) / (xhi - xlo) * pw; };
    auto sy = [&](double y) { return y0 + ph - y / yhi * (ph - 16.0); };

    if (std::isfinite(p.ref_x) && p.ref_x >= xlo && p.ref_x <= xhi)
      out << "<line x1=\"" << num(sx(p.ref_x)) << "\" y1=\"" << num(y0 + 2.0) << "\" x2=\""
          << num(sx(p.ref_x)) << "\" y2=\"" << num(y0 + ph - 2.0)
          << "\" stroke=\"#c0392b\" stroke-width=\"1\" stroke-dasharray=\"3 2\"/>\n";

    std::string pts;
    for (std::size_t j = 0; j < p.x.size() && j < p.y.size(); ++j) {
      if (!std::isfinite(p.x[j]) || !std::isfinite(p.y[j])) continue;
      if (!pts.empty()) pts += " ";
      pts += num(sx(p.x[j])) + "," + num(sy(p.y[j]));
    }
    if (!pts.empty())
      out << "<polyline fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"1.1\" points=\""
          << pts << "\"/>\n";
    if (!p.label.empty())
      out << "<text x=\"" << num(x0 + 5.0) << "\" y=\"" << num(y0 + 13.0)
          << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#333333\">"
          << escape_xml(p.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_panel_grid(const std::string& title, const std::vector<Panel>& panels, int cols,
                      const std::string& path) {
  stateio::write_text_file(path, render_panel_grid(title, panels, cols));
}

}  // namespace symris::svg
