#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"
#include "oracle.hpp"
#include "truncation.hpp"

namespace specwin {

using Segment = std::pair<cplx, cplx>;

// Marching squares on the sigma_min field: line segments of the level set {sigma_min = level}.
// Saddle cells are resolved by the cell-center average.
inline std::vector<Segment> contour_segments(const PseudospectrumField& f, double level) {
  std::vector<Segment> out;
  const GridSpec& g = f.grid;
  auto cross = [&](int ax, int ay, int bx, int by) {
    const double va = f.at(ax, ay), vb = f.at(bx, by);
    const double t = (level - va) / (vb - va);
    return g.point(ax, ay) + t * (g.point(bx, by) - g.point(ax, ay));
  };
  for (int iy = 0; iy + 1 < g.ny; ++iy)
    for (int ix = 0; ix + 1 < g.nx; ++ix) {
      // corners counter-clockwise from (ix, iy)
      const int cx[4] = {ix, ix + 1, ix + 1, ix};
      const int cy[4] = {iy, iy, iy + 1, iy + 1};
      bool above[4];
      double sum = 0.0;
      for (int k = 0; k < 4; ++k) {
        above[k] = f.at(cx[k], cy[k]) >= level;
        sum += f.at(cx[k], cy[k]);
      }
      std::vector<cplx> hits;
      for (int k = 0; k < 4; ++k) {
        const int n = (k + 1) % 4;
        if (above[k] != above[n]) hits.push_back(cross(cx[k], cy[k], cx[n], cy[n]));
      }
      if (hits.size() == 2) {
        out.emplace_back(hits[0], hits[1]);
      } else if (hits.size() == 4) {
        // Edges 0-1, 1-2, 2-3, 3-0; pair them so the center's side stays connected.
        const bool center_above = sum / 4.0 >= level;
        if (center_above == above[0]) {
          out.emplace_back(hits[0], hits[1]);
          out.emplace_back(hits[2], hits[3]);
        } else {
          out.emplace_back(hits[3], hits[0]);
          out.emplace_back(hits[1], hits[2]);
        }
      }
    }
  return out;
}

// Square plot of the window [-extent, extent]^2 of the complex plane.
class SvgPlot {
 public:
  explicit SvgPlot(double extent, int size = 640) : extent_(extent), size_(size) {
    body_ += "<rect width=\"" + std::to_string(size) + "\" height=\"" + std::to_string(size) + "\" fill=\"white\"/>\n";
    const std::string c = num(size / 2.0);
    body_ += "<line x1=\"0\" y1=\"" + c + "\" x2=\"" + std::to_string(size) + "\" y2=\"" + c +
             "\" stroke=\"#bbb\" stroke-width=\"0.5\"/>\n";
    body_ += "<line x1=\"" + c + "\" y1=\"0\" x2=\"" + c + "\" y2=\"" + std::to_string(size) +
             "\" stroke=\"#bbb\" stroke-width=\"0.5\"/>\n";
  }

  void circle(double r, const std::string& stroke, double width = 1.5, bool dashed = false) {
    body_ += "<circle cx=\"" + x(0) + "\" cy=\"" + y(0) + "\" r=\"" + num(scale(r)) + "\" fill=\"none\" stroke=\"" +
             stroke + "\" stroke-width=\"" + num(width) + "\"" + (dashed ? " stroke-dasharray=\"4 3\"" : "") + "/>\n";
  }

  // Filled annulus r_min <= |z| <= r_max (r_min = 0 gives a disk).
  void ring(double r_min, double r_max, const std::string& fill) {
    auto loop = [&](double r) {
      const std::string R = num(scale(r));
      return "M " + num(px(-r)) + " " + y(0) + " A " + R + " " + R + " 0 1 0 " + num(px(r)) + " " + y(0) + " A " + R +
             " " + R + " 0 1 0 " + num(px(-r)) + " " + y(0) + " Z ";
    };
    std::string d = loop(r_max);
    if (r_min > 0.0) d += loop(r_min);
    body_ += "<path d=\"" + d + "\" fill=\"" + fill + "\" fill-rule=\"evenodd\" stroke=\"none\"/>\n";
  }

  void points(const std::vector<cplx>& pts, const std::string& fill, double radius = 0.8) {
    body_ += "<g fill=\"" + fill + "\">\n";
    for (cplx p : pts) body_ += "<circle cx=\"" + x(p.real()) + "\" cy=\"" + y(p.imag()) + "\" r=\"" + num(radius) + "\"/>\n";
    body_ += "</g>\n";
  }

  void segments(const std::vector<Segment>& segs, const std::string& stroke, double width = 1.0) {
    if (segs.empty()) return;
    std::string d;
    for (const auto& [a, b] : segs) d += "M" + x(a.real()) + " " + y(a.imag()) + "L" + x(b.real()) + " " + y(b.imag());
    body_ += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
  }

  void label(const std::string& text) {
    body_ += "<text x=\"8\" y=\"18\" font-family=\"monospace\" font-size=\"12\">" + text + "</text>\n";
  }

  std::string str() const {
    const std::string s = std::to_string(size_);
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + s + "\" height=\"" + s + "\" viewBox=\"0 0 " + s +
           " " + s + "\">\n" + body_ + "</svg>\n";
  }

 private:
  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }
  double scale(double r) const { return r / (2.0 * extent_) * size_; }
  double px(double re) const { return (re + extent_) / (2.0 * extent_) * size_; }
  std::string x(double re) const { return num(px(re)); }
  std::string y(double im) const { return num((extent_ - im) / (2.0 * extent_) * size_); }

  double extent_;
  int size_;
  std::string body_;
};

// Predicted set (filled), the unit circle for scale, optional eigenvalues and sigma_min contour.
inline std::string render_spectrum(const SpectrumSet& set, const PseudospectrumField* field = nullptr,
                                   double level = 1e-2, const std::vector<cplx>& eigenvalues = {}) {
  double extent = 1.15 * std::max(1.0, set.outer_radius());
  if (field) {
    const GridSpec& g = field->grid;
    extent = std::max({extent, std::abs(g.re_min), std::abs(g.re_max), std::abs(g.im_min), std::abs(g.im_max)});
  }
  SvgPlot plot(extent);
  switch (set.shape) {
    case SpectrumShape::disk: plot.ring(0.0, set.radius, "#cfe0f5"); break;
    case SpectrumShape::annulus: plot.ring(set.r_min, set.r_max, "#cfe0f5"); break;
    case SpectrumShape::circle: plot.circle(set.radius, "#1f5fa8", 2.5); break;
    case SpectrumShape::sampled_closure: plot.points(set.points, "#1f5fa8", 0.6); break;
  }
  if (set.shape == SpectrumShape::disk || set.shape == SpectrumShape::annulus) {
    plot.circle(set.shape == SpectrumShape::disk ? set.radius : set.r_max, "#1f5fa8");
    if (set.shape == SpectrumShape::annulus) plot.circle(set.r_min, "#1f5fa8");
  }
  plot.circle(1.0, "#888", 0.8, true);
  if (field) plot.segments(contour_segments(*field, level), "#c0392b");
  if (!eigenvalues.empty()) plot.points(eigenvalues, "#222", 1.5);
  plot.label(std::string(to_string(set.shape)) + "  " + set.provenance.rule);
  return plot.str();
}

}  // namespace specwin
