#ifndef SSAMC_GRID_HPP
#define SSAMC_GRID_HPP

#include <array>

#include "ssamc/types.hpp"

namespace ssamc {

/// Uniform rows x cols partition of the image plane into disjoint cells that
/// cover it exactly. Cell (r, c) spans pixel columns [c*W/cols, (c+1)*W/cols)
/// and the analogous rows; integer division, so cell sizes differ by at most
/// one pixel.
struct RegionGrid {
  int rows = 0;
  int cols = 0;
  int image_w = 0;
  int image_h = 0;

  RegionGrid() = default;
  RegionGrid(int rows_, int cols_, int w, int h);

  int m() const { return rows * cols; }

  /// Index of the cell containing (x, y); coordinates are clamped into the
  /// image first, so the map is total.
  int cell_index(double x, double y) const;

  Rect cell_bounds(int i) const;
  std::array<double, 2> cell_center(int i) const;
  double cell_area(int i) const { return cell_bounds(i).area(); }
  long cell_pixels(int i) const;
};

}  // namespace ssamc

#endif
