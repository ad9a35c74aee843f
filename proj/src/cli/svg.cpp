#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "npulse/svg.hpp"

namespace npulse {

namespace {

constexpr double kSize = 480.0;
constexpr double kRadius = 200.0;
constexpr double kElevation = 0.35;  // rad
constexpr double kAzimuth = -1.0;    // rad

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};

struct Projected {
  double x, y;
  bool front;
};

Projected project(const std::array<double, 3>& p) {
  const double ca = std::cos(kAzimuth), sa = std::sin(kAzimuth);
  const double ce = std::cos(kElevation), se = std::sin(kElevation);
  const double right = -sa * p[0] + ca * p[1];
  const double up = -se * ca * p[0] - se * sa * p[1] + ce * p[2];
  const double depth = ce * ca * p[0] + ce * sa * p[1] + se * p[2];
  return {kSize / 2 + kRadius * right, kSize / 2 - kRadius * up, depth >= 0.0};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void polylines(std::string& out, const std::vector<std::array<double, 3>>& path, const std::string& color,
               double width) {
  std::vector<Projected> pts;
  pts.reserve(path.size());
  for (const auto& p : path) pts.push_back(project(p));
  std::size_t start = 0;
  while (start < pts.size()) {
    std::size_t end = start;
    while (end + 1 < pts.size() && pts[end + 1].front == pts[start].front) ++end;
    const std::size_t last = end + 1 < pts.size() ? end + 1 : end;
    out += "  <polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + num(width) + "\"";
    if (!pts[start].front) out += " stroke-dasharray=\"4 3\" stroke-opacity=\"0.6\"";
    out += " points=\"";
    for (std::size_t i = start; i <= last; ++i) {
      if (i > start) out += ' ';
      out += num(pts[i].x) + "," + num(pts[i].y);
    }
    out += "\"/>\n";
    start = end + 1;
  }
}

}  // namespace

std::string render_tracks_svg(const PointTracks& tracks) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kSize) + "\" height=\"" + num(kSize) +
         "\" viewBox=\"0 0 " + num(kSize) + " " + num(kSize) + "\">\n";
  out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "  <circle cx=\"" + num(kSize / 2) + "\" cy=\"" + num(kSize / 2) + "\" r=\"" + num(kRadius) +
         "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

  std::vector<std::array<double, 3>> equator;
  for (int i = 0; i <= 180; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 180;
    equator.push_back({std::cos(a), std::sin(a), 0.0});
  }
  polylines(out, equator, "#999", 0.8);

  const Projected north = project({0, 0, 1});
  const Projected south = project({0, 0, -1});
  out += "  <text x=\"" + num(north.x + 6) + "\" y=\"" + num(north.y - 6) +
         "\" font-family=\"sans-serif\" font-size=\"12\">1</text>\n";
  out += "  <text x=\"" + num(south.x + 6) + "\" y=\"" + num(south.y + 16) +
         "\" font-family=\"sans-serif\" font-size=\"12\">N</text>\n";

  for (std::size_t t = 0; t < tracks.tracks.size(); ++t) {
    std::vector<std::array<double, 3>> path;
    path.reserve(tracks.tracks[t].size());
    for (const auto& p : tracks.tracks[t]) path.push_back(p.cartesian());
    const std::string color = kPalette[t % std::size(kPalette)];
    polylines(out, path, color, 1.6);
    if (!path.empty()) {
      const Projected end = project(path.back());
      out += "  <circle cx=\"" + num(end.x) + "\" cy=\"" + num(end.y) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace npulse
