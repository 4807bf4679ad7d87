#include "ssamc/appearance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssamc {

int HsvHistogram::bin_index(const Vec3& hsv) {
  const int h = std::min(kBins - 1, int(hsv[0] / 36.0));
  const int s = std::min(kBins - 1, int(hsv[1] * kBins));
  const int v = std::min(kBins - 1, int(hsv[2] * kBins));
  return (h * kBins + s) * kBins + v;
}

HsvHistogram build_histogram(const Frame& f, const Rect& box) {
  HsvHistogram hist;
  const PixelSpan span = pixel_span(box, f.width, f.height);
  if (span.empty()) return hist;  // flagged empty

  long n = 0;
  for (int y = span.y0; y < span.y1; ++y) {
    for (int x = span.x0; x < span.x1; ++x) {
      hist.bins[HsvHistogram::bin_index(rgb_to_hsv(f.pixel(x, y)))] += 1.0;
      ++n;
    }
  }
  for (auto& b : hist.bins) b /= double(n);
  hist.empty = false;
  return hist;
}

double bhattacharyya(const HsvHistogram& h1, const HsvHistogram& h2) {
  if (h1.empty || h2.empty)
    throw std::invalid_argument("bhattacharyya: empty histogram");
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < HsvHistogram::kTotal; ++i) {
    s1 += h1.bins[i];
    s2 += h2.bins[i];
  }
  if (std::fabs(s1 - 1.0) > 1e-6 || std::fabs(s2 - 1.0) > 1e-6)
    throw std::invalid_argument("bhattacharyya: histogram not normalized");
  double bc = 0.0;
  for (int i = 0; i < HsvHistogram::kTotal; ++i)
    bc += std::sqrt(h1.bins[i] * h2.bins[i]);
  return std::sqrt(std::max(0.0, 1.0 - bc));
}

AppearanceModel build_appearance(const Frame& first, const Rect& init_box) {
  AppearanceModel m;
  m.ref_w = init_box.w;
  m.ref_h = init_box.h;
  m.fg = build_histogram(first, init_box);
  if (m.fg.empty)
    throw std::invalid_argument("build_appearance: box outside frame");

  const double ring = 0.5 * std::min(init_box.w, init_box.h);
  const Rect outer{init_box.x - ring, init_box.y - ring,
                   init_box.w + 2.0 * ring, init_box.h + 2.0 * ring};
  const PixelSpan span = pixel_span(outer, first.width, first.height);

  HsvHistogram bg;
  long n = 0;
  for (int y = span.y0; y < span.y1; ++y) {
    for (int x = span.x0; x < span.x1; ++x) {
      if (init_box.contains(x, y)) continue;
      bg.bins[HsvHistogram::bin_index(rgb_to_hsv(first.pixel(x, y)))] += 1.0;
      ++n;
    }
  }
  if (n == 0) {
    // Box covers the whole frame; fall back to the foreground statistics so
    // that d_B is defined (and uninformative).
    m.bg = m.fg;
    return m;
  }
  for (auto& b : bg.bins) b /= double(n);
  bg.empty = false;
  m.bg = bg;
  return m;
}

double likelihood(const Frame& f, const TargetState& state,
                  const AppearanceModel& model) {
  const Rect box = state_box(state, model.ref_w, model.ref_h);
  if (!box.valid()) return kLikelihoodFloor;
  const HsvHistogram cand = build_histogram(f, box);
  if (cand.empty) return kLikelihoodFloor;
  const double df = bhattacharyya(cand, model.fg);
  const double db = bhattacharyya(cand, model.bg);
  return 1.0 / (1.0 + std::exp(df - db));
}

}  // namespace ssamc
