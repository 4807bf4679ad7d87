#ifndef SSAMC_APPEARANCE_HPP
#define SSAMC_APPEARANCE_HPP

#include "ssamc/image.hpp"
#include "ssamc/types.hpp"

namespace ssamc {

/// L1-normalized 10x10x10 HSV color histogram. An all-zero histogram (box
/// outside the frame) carries the empty flag instead of violating the
/// normalization invariant.
struct HsvHistogram {
  static constexpr int kBins = 10;
  static constexpr int kTotal = kBins * kBins * kBins;

  std::array<double, kTotal> bins{};
  bool empty = true;

  static int bin_index(const Vec3& hsv);
};

/// Histogram of the pixels inside box (clipped to the frame).
HsvHistogram build_histogram(const Frame& f, const Rect& box);

/// sqrt(1 - sum(sqrt(h1*h2))) over bins; both inputs must be normalized,
/// non-empty histograms.
double bhattacharyya(const HsvHistogram& h1, const HsvHistogram& h2);

/// Foreground/background templates, fixed after the first frame. The
/// background histogram comes from an annulus around the initial box whose
/// width is half the box's shorter side.
struct AppearanceModel {
  HsvHistogram fg;
  HsvHistogram bg;
  double ref_w = 0.0;
  double ref_h = 0.0;
};

AppearanceModel build_appearance(const Frame& first, const Rect& init_box);

constexpr double kLikelihoodFloor = 1e-12;

/// 1 / (1 + exp(d_F - d_B)) for the candidate box of `state`; degenerate
/// boxes evaluate to the likelihood floor.
double likelihood(const Frame& f, const TargetState& state,
                  const AppearanceModel& model);

}  // namespace ssamc

#endif
