#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ssamc/appearance.hpp"
#include "support/properties.hpp"

using namespace ssamc;

namespace {

HsvHistogram delta_hist(const Vec3& rgb) {
  HsvHistogram h;
  h.empty = false;
  h.bins[HsvHistogram::bin_index(rgb_to_hsv(rgb))] = 1.0;
  return h;
}

}  // namespace

TEST_CASE("histograms of flat regions concentrate in one bin") {
  const Frame f = Frame::filled(12, 10, {0.2, 0.9, 0.4});
  const HsvHistogram h = build_histogram(f, Rect{2, 2, 6, 5});
  REQUIRE_FALSE(h.empty);
  int nonzero = 0;
  for (const double b : h.bins)
    if (b != 0.0) {
      ++nonzero;
      CHECK(b == 1.0);
    }
  CHECK(nonzero == 1);

  const HsvHistogram one_px = build_histogram(f, Rect{3, 3, 1, 1});
  CHECK(one_px.bins == h.bins);
}

TEST_CASE("half red, half green gives two equal bins") {
  Frame f = Frame::filled(10, 10, {1, 0, 0});
  for (int y = 5; y < 10; ++y)
    for (int x = 0; x < 10; ++x) {
      f.px(x, y)[0] = 0;
      f.px(x, y)[1] = 1;
    }
  const HsvHistogram h = build_histogram(f, Rect{0, 0, 10, 10});
  const int red = HsvHistogram::bin_index(rgb_to_hsv({1, 0, 0}));
  const int green = HsvHistogram::bin_index(rgb_to_hsv({0, 1, 0}));
  CHECK(red != green);
  CHECK(h.bins[red] == doctest::Approx(0.5));
  CHECK(h.bins[green] == doctest::Approx(0.5));
}

TEST_CASE("box fully outside the frame flags empty") {
  const Frame f = Frame::filled(8, 8, {0.5, 0.5, 0.5});
  CHECK(build_histogram(f, Rect{20, 20, 4, 4}).empty);
  CHECK(build_histogram(f, Rect{-10, -10, 5, 5}).empty);
}

TEST_CASE("bhattacharyya distance on known histograms") {
  const HsvHistogram a = delta_hist({1, 0, 0});
  CHECK(bhattacharyya(a, a) == 0.0);

  const HsvHistogram b = delta_hist({0, 1, 0});
  CHECK(bhattacharyya(a, b) == doctest::Approx(1.0));

  HsvHistogram half = a;
  half.bins.fill(0.0);
  half.bins[0] = 0.5;
  half.bins[1] = 0.5;
  HsvHistogram point;
  point.empty = false;
  point.bins[0] = 1.0;
  CHECK(bhattacharyya(half, point) ==
        doctest::Approx(std::sqrt(1.0 - std::sqrt(0.5))));

  HsvHistogram bad = a;
  bad.bins[5] = 0.4;  // no longer sums to one
  CHECK_THROWS(bhattacharyya(a, bad));
}

TEST_CASE("likelihood is the logistic of the distance gap") {
  const Frame f = Frame::filled(30, 30, {1, 0, 0});
  AppearanceModel m;
  m.ref_w = 8;
  m.ref_h = 8;

  SUBCASE("equal distances give exactly one half") {
    m.fg = delta_hist({0, 0, 1});
    m.bg = m.fg;
    CHECK(likelihood(f, TargetState{15, 15, 1}, m) == doctest::Approx(0.5));
  }
  SUBCASE("candidate matching the foreground gives 1/(1+e^-1)") {
    m.fg = delta_hist({1, 0, 0});   // d_F = 0
    m.bg = delta_hist({0, 1, 0});   // d_B = 1
    CHECK(likelihood(f, TargetState{15, 15, 1}, m) ==
          doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
  }
  SUBCASE("candidate matching the background gives 1/(1+e)") {
    m.fg = delta_hist({0, 1, 0});
    m.bg = delta_hist({1, 0, 0});
    CHECK(likelihood(f, TargetState{15, 15, 1}, m) ==
          doctest::Approx(1.0 / (1.0 + std::exp(1.0))));
  }
  SUBCASE("degenerate boxes hit the likelihood floor") {
    m.fg = delta_hist({1, 0, 0});
    m.bg = delta_hist({0, 1, 0});
    CHECK(likelihood(f, TargetState{-200, -200, 1}, m) == kLikelihoodFloor);
    CHECK(likelihood(f, TargetState{15, 15, 1e-9}, m) == kLikelihoodFloor);
  }
}

TEST_CASE("background template comes from the surrounding annulus") {
  // Red box on a blue frame: fg must be pure red, bg pure blue.
  Frame f = Frame::filled(40, 40, {0, 0, 1});
  for (int y = 15; y < 25; ++y)
    for (int x = 15; x < 25; ++x) {
      f.px(x, y)[0] = 1;
      f.px(x, y)[2] = 0;
    }
  const AppearanceModel m = build_appearance(f, Rect{15, 15, 10, 10});
  CHECK(m.fg.bins[HsvHistogram::bin_index(rgb_to_hsv({1, 0, 0}))] == 1.0);
  CHECK(m.bg.bins[HsvHistogram::bin_index(rgb_to_hsv({0, 0, 1}))] == 1.0);
  CHECK(m.ref_w == 10.0);
}

TEST_CASE("appearance invariants hold as properties") {
  CHECK(test::prop_likelihood_bounds_monotone(501).empty());
  CHECK(test::prop_bhattacharyya_metric(502).empty());
  CHECK(test::prop_histogram_translation_equivariance(503).empty());
}
