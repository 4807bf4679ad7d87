#include "ssamc/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssamc {

namespace {

int edge(int k, int n, int extent) { return int(long(k) * extent / n); }

// Finds c with edge(c) <= v < edge(c+1). The initial guess from real division
// can be off by one because edges use integer division.
int locate(double v, int n, int extent) {
  int c = std::clamp(int(v * n / extent), 0, n - 1);
  while (c > 0 && v < edge(c, n, extent)) --c;
  while (c + 1 < n && v >= edge(c + 1, n, extent)) ++c;
  return c;
}

}  // namespace

RegionGrid::RegionGrid(int rows_, int cols_, int w, int h)
    : rows(rows_), cols(cols_), image_w(w), image_h(h) {
  if (rows <= 0 || cols <= 0 || w < cols || h < rows)
    throw std::invalid_argument("RegionGrid: partition finer than the image");
}

int RegionGrid::cell_index(double x, double y) const {
  x = std::clamp(x, 0.0, double(image_w) - 1e-9);
  y = std::clamp(y, 0.0, double(image_h) - 1e-9);
  const int c = locate(x, cols, image_w);
  const int r = locate(y, rows, image_h);
  return r * cols + c;
}

Rect RegionGrid::cell_bounds(int i) const {
  const int r = i / cols;
  const int c = i % cols;
  const int x0 = edge(c, cols, image_w);
  const int x1 = edge(c + 1, cols, image_w);
  const int y0 = edge(r, rows, image_h);
  const int y1 = edge(r + 1, rows, image_h);
  return Rect{double(x0), double(y0), double(x1 - x0), double(y1 - y0)};
}

std::array<double, 2> RegionGrid::cell_center(int i) const {
  const Rect b = cell_bounds(i);
  return {b.cx(), b.cy()};
}

long RegionGrid::cell_pixels(int i) const {
  const Rect b = cell_bounds(i);
  return long(b.w) * long(b.h);
}

}  // namespace ssamc
