#ifndef SSAMC_ANNF_HPP
#define SSAMC_ANNF_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ssamc/grid.hpp"
#include "ssamc/image.hpp"
#include "ssamc/types.hpp"

namespace ssamc {

struct AnnfParams {
  int patch = 8;
  int iterations = 5;
  uint64_t seed = 1;
};

/// Nearest-neighbor field between two equal-sized frames. A patch is the
/// patch x patch square whose center is its top-left corner + patch/2, so
/// valid centers form the [c0, c0+cw) x [c0, c0+ch) window. Offsets map each
/// source patch center to the center of its match in the destination frame;
/// errors are the SSD over patch pixels and RGB channels.
struct PatchField {
  int width = 0, height = 0;
  int patch = 0;
  int c0 = 0;       // first valid center coordinate (= patch/2)
  int cw = 0, ch = 0;

  std::vector<int> dx, dy;
  std::vector<double> err;

  bool is_center(int x, int y) const {
    return x >= c0 && x < c0 + cw && y >= c0 && y < c0 + ch;
  }
  size_t idx(int x, int y) const {
    return size_t(y - c0) * cw + (x - c0);
  }
  double error_at(int x, int y) const { return err[idx(x, y)]; }
  std::array<int, 2> offset_at(int x, int y) const {
    return {dx[idx(x, y)], dy[idx(x, y)]};
  }
  /// Center of the matched patch in the destination frame.
  std::array<int, 2> match_of(int x, int y) const {
    return {x + dx[idx(x, y)], y + dy[idx(x, y)]};
  }
};

/// PatchMatch: random initialization (keeping the zero offset when it is
/// better), alternating scan-order propagation, and exponentially decaying
/// random search. Deterministic for a fixed seed. Frames must have equal
/// dimensions and be at least patch x patch.
PatchField compute_annf(const Frame& src, const Frame& dst,
                        const AnnfParams& params);

/// Flat membership mask over frame pixels.
struct PixelSet {
  int width = 0, height = 0;
  std::vector<uint8_t> in;
  long count = 0;

  bool contains(int x, int y) const { return in[size_t(y) * width + x] != 0; }
};

/// Pixels of frame t that are the forward match of a patch center inside the
/// box and whose backward match center lies inside the box again.
PixelSet forward_backward_filter(const PatchField& fwd, const PatchField& bwd,
                                 const Rect& box);

/// In-degree of each surviving pixel under the forward mapping of box patch
/// centers; zero outside the survivor set.
ScalarMap incoherence_map(const PixelSet& survivors, const PatchField& fwd,
                          const Rect& box);

struct ConfidenceGrid {
  RegionGrid grid;
  std::vector<double> lambda;
};

/// Per-cell mean incoherence.
ConfidenceGrid confidence_map(const ScalarMap& h, const RegionGrid& grid);

/// Full-frame match-error image, normalized by patch pixel count x channel
/// count so values lie in [0, 1]; pixels without a valid patch are 0.
ScalarMap match_error_image(const PatchField& f);

/// Debug dump: one "x,y,dx,dy,error" row per valid patch center.
void write_field_csv(const PatchField& f, std::ostream& out);

}  // namespace ssamc

#endif
