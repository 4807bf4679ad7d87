#ifndef SSAMC_IMAGE_HPP
#define SSAMC_IMAGE_HPP

#include <vector>

#include "ssamc/types.hpp"

namespace ssamc {

/// RGB frame, channels interleaved row-major, every channel in [0, 1].
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  static Frame filled(int w, int h, const Vec3& color);

  double* px(int x, int y) { return data.data() + 3 * (size_t(y) * width + x); }
  const double* px(int x, int y) const {
    return data.data() + 3 * (size_t(y) * width + x);
  }
  Vec3 pixel(int x, int y) const {
    const double* p = px(x, y);
    return {p[0], p[1], p[2]};
  }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  long pixel_count() const { return long(width) * long(height); }
};

/// Single-channel non-negative map with the dimensions of its source frame.
struct ScalarMap {
  int width = 0;
  int height = 0;
  std::vector<double> v;

  ScalarMap() = default;
  ScalarMap(int w, int h, double fill = 0.0)
      : width(w), height(h), v(size_t(w) * h, fill) {}

  double& at(int x, int y) { return v[size_t(y) * width + x]; }
  double at(int x, int y) const { return v[size_t(y) * width + x]; }
};

/// Hexcone conversion; h in [0, 360), s and v in [0, 1]. Gray pixels get h=0.
Vec3 rgb_to_hsv(const Vec3& rgb);
Vec3 hsv_to_rgb(const Vec3& hsv);

inline double luminance(const double* rgb) {
  return 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2];
}

/// Binary edge map: Sobel magnitude on luminance, thresholded at
/// rel_threshold times the maximum magnitude. Border pixels (no full 3x3
/// neighborhood) are always 0.
ScalarMap edge_map(const Frame& f, double rel_threshold = 0.25);

/// Binary dilation with the 3x3 all-one structuring element; neighbors
/// outside the image count as 0.
ScalarMap dilate3(const ScalarMap& m);

}  // namespace ssamc

#endif
