#include "smspace/svg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace smspace::svg {

namespace {

const char *const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string pick(std::string color, std::size_t i) {
  return color.empty() ? kPalette[i % std::size(kPalette)] : color;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::fabs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

// Grey-blue-yellow ramp.
std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(40 + 215 * t));
  const int g = static_cast<int>(std::lround(40 + 190 * t));
  const int b = static_cast<int>(std::lround(110 + 20 * (1 - t)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

struct Frame {
  double x0, y0, w, h;  // pixel box of the plotting area
  Box data;

  double px(double x) const { return x0 + (x - data.lo.x) / (data.hi.x - data.lo.x) * w; }
  double py(double y) const { return y0 + h - (y - data.lo.y) / (data.hi.y - data.lo.y) * h; }
};

Box data_bounds(const Panel &p) {
  Box b{{INFINITY, INFINITY}, {-INFINITY, -INFINITY}};
  auto grow = [&b](const Vec2 &v) {
    if (!is_finite(v)) return;
    b.lo = {std::min(b.lo.x, v.x), std::min(b.lo.y, v.y)};
    b.hi = {std::max(b.hi.x, v.x), std::max(b.hi.y, v.y)};
  };
  for (const auto &s : p.series) {
    for (const auto &v : s.points) grow(v);
    for (const auto &v : s.heads) grow(v);
  }
  for (const auto &h : p.heatmaps) {
    grow(h.box.lo);
    grow(h.box.hi);
  }
  if (!std::isfinite(b.lo.x)) b = Box::unit();
  if (p.y_lo < p.y_hi) {
    b.lo.y = p.y_lo;
    b.hi.y = p.y_hi;
  }
  for (double *lo : {&b.lo.x, &b.lo.y}) {
    double *hi = lo == &b.lo.x ? &b.hi.x : &b.hi.y;
    if (*hi - *lo < 1e-12) {
      *lo -= 0.5;
      *hi += 0.5;
    } else if (!(p.y_lo < p.y_hi && lo == &b.lo.y)) {
      const double pad = 0.04 * (*hi - *lo);
      *lo -= pad;
      *hi += pad;
    }
  }
  if (p.equal_aspect) {
    const Vec2 e = b.extent(), c = b.center();
    const double side = std::max(e.x, e.y);
    b = Box::centered(c, side);
  }
  return b;
}

void render_panel(std::ostringstream &os, const Panel &p, double ox, double oy, double W, double H) {
  const double left = 52, right = 12, top = 26, bottom = 40;
  double w = W - left - right, h = H - top - bottom;
  if (p.equal_aspect) w = h = std::min(w, h);
  const Frame f{ox + left, oy + top, w, h, data_bounds(p)};

  os << "<g>\n";
  os << "<rect x=\"" << num(f.x0) << "\" y=\"" << num(f.y0) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
     << "\" fill=\"white\" stroke=\"#444\"/>\n";

  for (const auto &hm : p.heatmaps) {
    if (hm.values.size() != hm.nx * hm.ny || hm.nx == 0 || hm.ny == 0) continue;
    const auto [mn, mx] = std::minmax_element(hm.values.begin(), hm.values.end());
    const double span = *mx - *mn > 0 ? *mx - *mn : 1.0;
    const double cw = (hm.box.hi.x - hm.box.lo.x) / static_cast<double>(hm.nx);
    const double ch = (hm.box.hi.y - hm.box.lo.y) / static_cast<double>(hm.ny);
    for (std::size_t iy = 0; iy < hm.ny; ++iy) {
      for (std::size_t ix = 0; ix < hm.nx; ++ix) {
        const double x = hm.box.lo.x + cw * static_cast<double>(ix);
        const double y = hm.box.lo.y + ch * static_cast<double>(iy + 1);
        os << "<rect x=\"" << num(f.px(x)) << "\" y=\"" << num(f.py(y)) << "\" width=\""
           << num(f.px(x + cw) - f.px(x) + 0.3) << "\" height=\"" << num(f.py(y - ch) - f.py(y) + 0.3)
           << "\" fill=\"" << ramp((hm.values[iy * hm.nx + ix] - *mn) / span) << "\"/>\n";
      }
    }
  }

  for (std::size_t si = 0; si < p.series.size(); ++si) {
    const auto &s = p.series[si];
    const std::string color = pick(s.color, si);
    switch (s.kind) {
      case Series::Kind::kLine: {
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto &v : s.points) os << num(f.px(v.x)) << ',' << num(f.py(v.y)) << ' ';
        os << "\"/>\n";
        break;
      }
      case Series::Kind::kScatter:
        for (const auto &v : s.points) {
          os << "<circle cx=\"" << num(f.px(v.x)) << "\" cy=\"" << num(f.py(v.y)) << "\" r=\"2\" fill=\"" << color
             << "\"/>\n";
        }
        break;
      case Series::Kind::kArrows:
        for (std::size_t i = 0; i < s.points.size() && i < s.heads.size(); ++i) {
          const double x1 = f.px(s.points[i].x), y1 = f.py(s.points[i].y);
          const double x2 = f.px(s.heads[i].x), y2 = f.py(s.heads[i].y);
          os << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
             << "\" stroke=\"" << color << "\" stroke-width=\"0.8\"/>\n";
          const double len = std::hypot(x2 - x1, y2 - y1);
          if (len < 1e-9) continue;
          const double ux = (x2 - x1) / len, uy = (y2 - y1) / len, a = std::min(4.0, 0.4 * len);
          os << "<polygon fill=\"" << color << "\" points=\"" << num(x2) << ',' << num(y2) << ' '
             << num(x2 - a * ux - 0.5 * a * uy) << ',' << num(y2 - a * uy + 0.5 * a * ux) << ' '
             << num(x2 - a * ux + 0.5 * a * uy) << ',' << num(y2 - a * uy - 0.5 * a * ux) << "\"/>\n";
        }
        break;
    }
  }

  // Ticks at the ends and the middle of each axis.
  for (int i = 0; i <= 2; ++i) {
    const double tx = f.data.lo.x + (f.data.hi.x - f.data.lo.x) * i / 2.0;
    const double ty = f.data.lo.y + (f.data.hi.y - f.data.lo.y) * i / 2.0;
    os << "<text x=\"" << num(f.px(tx)) << "\" y=\"" << num(f.y0 + h + 14)
       << "\" font-size=\"10\" text-anchor=\"middle\">" << tick_label(tx) << "</text>\n";
    os << "<text x=\"" << num(f.x0 - 4) << "\" y=\"" << num(f.py(ty) + 3)
       << "\" font-size=\"10\" text-anchor=\"end\">" << tick_label(ty) << "</text>\n";
  }
  os << "<text x=\"" << num(f.x0 + w / 2) << "\" y=\"" << num(oy + 16)
     << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(p.title) << "</text>\n";
  os << "<text x=\"" << num(f.x0 + w / 2) << "\" y=\"" << num(f.y0 + h + 30)
     << "\" font-size=\"11\" text-anchor=\"middle\">" << escape(p.x_label) << "</text>\n";
  os << "<text transform=\"translate(" << num(ox + 12) << ',' << num(f.y0 + h / 2)
     << ") rotate(-90)\" font-size=\"11\" text-anchor=\"middle\">" << escape(p.y_label) << "</text>\n";

  double ly = f.y0 + 12;
  for (std::size_t si = 0; si < p.series.size(); ++si) {
    if (p.series[si].label.empty()) continue;
    os << "<text x=\"" << num(f.x0 + w - 4) << "\" y=\"" << num(ly) << "\" font-size=\"10\" text-anchor=\"end\" fill=\""
       << pick(p.series[si].color, si) << "\">" << escape(p.series[si].label) << "</text>\n";
    ly += 12;
  }
  os << "</g>\n";
}

}  // namespace

Panel &Panel::line(std::vector<Vec2> pts, std::string label, std::string color) {
  series.push_back({Series::Kind::kLine, std::move(label), std::move(color), std::move(pts), {}});
  return *this;
}

Panel &Panel::scatter(std::vector<Vec2> pts, std::string label, std::string color) {
  series.push_back({Series::Kind::kScatter, std::move(label), std::move(color), std::move(pts), {}});
  return *this;
}

Panel &Panel::arrows(std::vector<Vec2> tails, std::vector<Vec2> heads, std::string label, std::string color) {
  series.push_back({Series::Kind::kArrows, std::move(label), std::move(color), std::move(tails), std::move(heads)});
  return *this;
}

Panel &Panel::heatmap(Heatmap h) {
  heatmaps.push_back(std::move(h));
  return *this;
}

std::string Figure::render(bool timestamp) const {
  const std::size_t cols = std::max<std::size_t>(1, std::min(columns, std::max<std::size_t>(1, panels.size())));
  const std::size_t rows = (panels.size() + cols - 1) / cols;
  const double head = title.empty() ? 0 : 24;
  const double W = panel_width * static_cast<double>(cols);
  const double H = head + panel_height * static_cast<double>(std::max<std::size_t>(rows, 1));

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W) << "\" height=\"" << num(H)
     << "\" viewBox=\"0 0 " << num(W) << ' ' << num(H) << "\" font-family=\"sans-serif\">\n";
  if (timestamp) {
    const auto now = std::chrono::system_clock::now();
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    os << "<!-- generated at unix time " << secs << " -->\n";
  }
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#fafafa\"/>\n";
  if (!title.empty()) {
    os << "<text x=\"" << num(W / 2) << "\" y=\"17\" font-size=\"14\" text-anchor=\"middle\">" << escape(title)
       << "</text>\n";
  }
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const double ox = panel_width * static_cast<double>(i % cols);
    const double oy = head + panel_height * static_cast<double>(i / cols);
    render_panel(os, panels[i], ox, oy, panel_width, panel_height);
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace smspace::svg
