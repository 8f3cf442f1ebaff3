#include "ttvseg/phantom.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace ttvseg {

namespace {

struct Point {
  double x;
  double y;
};

struct Vessel {
  std::function<Point(double)> path;  // t in [0, 1], image coordinates (col, row)
  double radius;
};

}  // namespace

ImageGrid vessel_phantom(std::size_t rows, std::size_t cols) {
  const double w = static_cast<double>(cols);
  const double h = static_cast<double>(rows);
  const double pi = std::numbers::pi;

  auto trunk = [=](double t) {
    return Point{0.16 * w + 0.70 * w * t + 0.06 * w * std::sin(3 * pi * t), h * t};
  };
  const Point fork_a = trunk(0.30);
  const Point fork_b = trunk(0.62);

  const std::vector<Vessel> vessels{
      {trunk, 2.5},
      {[=](double s) {
         return Point{fork_a.x + 0.47 * w * s, fork_a.y - 0.16 * h * s + 0.05 * h * std::sin(2 * pi * s)};
       },
       1.6},
      {[=](double s) { return Point{fork_b.x - 0.40 * w * s, fork_b.y + 0.30 * h * s}; }, 1.5},
      {[=](double s) { return Point{w * s, 0.20 * h + 0.08 * h * std::sin(2 * pi * s)}; }, 1.0},
      {[=](double s) {
         return Point{0.86 * w - 0.08 * w * s, h - 0.55 * h * s + 0.04 * h * std::sin(3 * pi * s)};
       },
       2.0},
      {[=](double s) { return Point{0.55 * w + 0.35 * w * s, 0.80 * h - 0.10 * h * s}; }, 1.2},
  };

  ImageGrid img(rows, cols, 104.0);
  constexpr int kSamples = 1200;
  for (const auto& v : vessels) {
    for (int s = 0; s <= kSamples; ++s) {
      const Point c = v.path(static_cast<double>(s) / kSamples);
      const int r = static_cast<int>(std::ceil(v.radius));
      for (int di = -r - 1; di <= r + 1; ++di) {
        for (int dj = -r - 1; dj <= r + 1; ++dj) {
          const int i = static_cast<int>(std::lround(c.y)) + di;
          const int j = static_cast<int>(std::lround(c.x)) + dj;
          if (i < 0 || j < 0 || i >= static_cast<int>(rows) || j >= static_cast<int>(cols)) continue;
          if (std::hypot(j - c.x, i - c.y) <= v.radius) img(i, j) = 191.0;
        }
      }
    }
  }
  return img;
}

ImageGrid brain_phantom(std::size_t rows, std::size_t cols) {
  const double cy = (static_cast<double>(rows) - 1.0) / 2.0;
  const double cx = (static_cast<double>(cols) - 1.0) / 2.0;
  const double ry = 0.46 * static_cast<double>(rows);
  const double rx = 0.46 * static_cast<double>(cols);

  ImageGrid img(rows, cols, 10.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double dy = (static_cast<double>(i) - cy) / ry;
      const double dx = (static_cast<double>(j) - cx) / rx;
      const double rho = std::hypot(dx, dy);
      const double theta = std::atan2(dy, dx);
      if (rho >= 1.0) continue;

      // Folded grey/white boundary and a slightly wavy pial surface.
      const double pial = 0.87 + 0.02 * std::sin(5.0 * theta);
      const double white = 0.60 + 0.07 * std::sin(7.0 * theta) + 0.03 * std::cos(3.0 * theta);
      double level = 48.0;
      if (rho < white) level = 154.0;
      else if (rho < pial) level = 106.0;

      // Lateral ventricles: two small tilted ellipses near the centre.
      for (const double side : {-1.0, 1.0}) {
        const double vx = (dx - side * 0.16) / 0.09;
        const double vy = (dy + 0.05 - side * 0.04 * dx) / 0.22;
        if (vx * vx + vy * vy < 1.0) level = 48.0;
      }
      img(i, j) = level;
    }
  }
  return img;
}

}  // namespace ttvseg
