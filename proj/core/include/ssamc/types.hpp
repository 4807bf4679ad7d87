#ifndef SSAMC_TYPES_HPP
#define SSAMC_TYPES_HPP

#include <algorithm>
#include <array>
#include <cmath>

namespace ssamc {

using Vec3 = std::array<double, 3>;

/// Axis-aligned rectangle in continuous image coordinates; (x, y) is the
/// top-left corner. Membership is half-open: [x, x+w) x [y, y+h).
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }
  double area() const { return (w > 0.0 && h > 0.0) ? w * h : 0.0; }
  bool valid() const { return w > 0.0 && h > 0.0; }

  bool contains(double px, double py) const {
    return px >= x && px < x + w && py >= y && py < y + h;
  }
};

inline Rect intersect(const Rect& a, const Rect& b) {
  const double x0 = std::max(a.x, b.x);
  const double y0 = std::max(a.y, b.y);
  const double x1 = std::min(a.x + a.w, b.x + b.w);
  const double y1 = std::min(a.y + a.h, b.y + b.h);
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

/// Integer pixel window, half-open on both axes.
struct PixelSpan {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  long count() const { return empty() ? 0 : long(x1 - x0) * long(y1 - y0); }
};

/// Pixels whose index lies inside the rectangle, clipped to a w x h image.
inline PixelSpan pixel_span(const Rect& r, int img_w, int img_h) {
  PixelSpan s;
  s.x0 = std::max(0, int(std::ceil(r.x)));
  s.y0 = std::max(0, int(std::ceil(r.y)));
  s.x1 = std::min(img_w, int(std::ceil(r.x + r.w)));
  s.y1 = std::min(img_h, int(std::ceil(r.y + r.h)));
  return s;
}

/// Target hypothesis: box center in pixels plus a scale factor applied to the
/// reference box dimensions.
struct TargetState {
  double x = 0.0;
  double y = 0.0;
  double s = 1.0;

  bool operator==(const TargetState&) const = default;
};

/// Box of a state given the reference (frame-1) box dimensions, rounded to
/// integer pixel bounds.
inline Rect state_box(const TargetState& st, double ref_w, double ref_h) {
  const double w = ref_w * st.s;
  const double h = ref_h * st.s;
  Rect r;
  r.w = double(std::lround(w));
  r.h = double(std::lround(h));
  r.x = double(std::lround(st.x - 0.5 * w));
  r.y = double(std::lround(st.y - 0.5 * h));
  return r;
}

}  // namespace ssamc

#endif
