#include "ssamc/image.hpp"

#include <cmath>
#include <stdexcept>

namespace ssamc {

Frame Frame::filled(int w, int h, const Vec3& color) {
  if (w <= 0 || h <= 0) throw std::invalid_argument("Frame: empty dimensions");
  Frame f;
  f.width = w;
  f.height = h;
  f.data.resize(size_t(w) * h * 3);
  for (size_t i = 0; i < f.data.size(); i += 3) {
    f.data[i] = color[0];
    f.data[i + 1] = color[1];
    f.data[i + 2] = color[2];
  }
  return f;
}

Vec3 rgb_to_hsv(const Vec3& rgb) {
  const double r = rgb[0], g = rgb[1], b = rgb[2];
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double d = mx - mn;
  double h = 0.0;
  if (d > 0.0) {
    if (mx == r) {
      h = 60.0 * std::fmod((g - b) / d, 6.0);
    } else if (mx == g) {
      h = 60.0 * ((b - r) / d + 2.0);
    } else {
      h = 60.0 * ((r - g) / d + 4.0);
    }
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
  }
  const double s = mx > 0.0 ? d / mx : 0.0;
  return {h, s, mx};
}

Vec3 hsv_to_rgb(const Vec3& hsv) {
  const double h = hsv[0], s = hsv[1], v = hsv[2];
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1)      { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else             { r = c; b = x; }
  const double m = v - c;
  return {r + m, g + m, b + m};
}

ScalarMap edge_map(const Frame& f, double rel_threshold) {
  ScalarMap lum(f.width, f.height);
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x) lum.at(x, y) = luminance(f.px(x, y));

  ScalarMap mag(f.width, f.height, 0.0);
  double max_mag = 0.0;
  for (int y = 1; y + 1 < f.height; ++y) {
    for (int x = 1; x + 1 < f.width; ++x) {
      const double gx = (lum.at(x + 1, y - 1) + 2.0 * lum.at(x + 1, y) +
                         lum.at(x + 1, y + 1)) -
                        (lum.at(x - 1, y - 1) + 2.0 * lum.at(x - 1, y) +
                         lum.at(x - 1, y + 1));
      const double gy = (lum.at(x - 1, y + 1) + 2.0 * lum.at(x, y + 1) +
                         lum.at(x + 1, y + 1)) -
                        (lum.at(x - 1, y - 1) + 2.0 * lum.at(x, y - 1) +
                         lum.at(x + 1, y - 1));
      const double m = std::hypot(gx, gy);
      mag.at(x, y) = m;
      max_mag = std::max(max_mag, m);
    }
  }

  ScalarMap out(f.width, f.height, 0.0);
  if (max_mag <= 0.0) return out;  // constant frame
  const double thr = rel_threshold * max_mag;
  for (size_t i = 0; i < mag.v.size(); ++i) out.v[i] = mag.v[i] > thr ? 1.0 : 0.0;
  return out;
}

ScalarMap dilate3(const ScalarMap& m) {
  ScalarMap out(m.width, m.height, 0.0);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      double mx = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= m.height) continue;
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx;
          if (xx < 0 || xx >= m.width) continue;
          mx = std::max(mx, m.at(xx, yy));
        }
      }
      out.at(x, y) = mx;
    }
  }
  return out;
}

}  // namespace ssamc
