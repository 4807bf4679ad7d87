#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "ssamc/image.hpp"
#include "ssamc/ppm.hpp"
#include "support/properties.hpp"

using namespace ssamc;

TEST_CASE("rgb_to_hsv handles the canonical corners") {
  const Vec3 black = rgb_to_hsv({0, 0, 0});
  CHECK(black[0] == 0.0);
  CHECK(black[1] == 0.0);
  CHECK(black[2] == 0.0);

  const Vec3 red = rgb_to_hsv({1, 0, 0});
  CHECK(red[0] == 0.0);
  CHECK(red[1] == 1.0);
  CHECK(red[2] == 1.0);

  const Vec3 dark = rgb_to_hsv({0.5, 0.25, 0.25});
  CHECK(dark[0] == doctest::Approx(0.0));
  CHECK(dark[1] == doctest::Approx(0.5));
  CHECK(dark[2] == doctest::Approx(0.5));
}

TEST_CASE("edge_map of a constant frame is all zero") {
  const Frame f = Frame::filled(9, 7, {0.3, 0.6, 0.2});
  const ScalarMap e = edge_map(f);
  for (const double v : e.v) CHECK(v == 0.0);
}

TEST_CASE("edge_map marks the two columns adjacent to a step") {
  const int w = 12, h = 8, step = 6;
  Frame f = Frame::filled(w, h, {0, 0, 0});
  for (int y = 0; y < h; ++y)
    for (int x = step; x < w; ++x)
      for (int c = 0; c < 3; ++c) f.px(x, y)[c] = 1.0;
  const ScalarMap e = edge_map(f);
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const bool adjacent = (x == step - 1 || x == step);
      CHECK(e.at(x, y) == (adjacent ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("edge_map of a 1x1 frame is zero") {
  const Frame f = Frame::filled(1, 1, {1, 0, 0});
  CHECK(edge_map(f).at(0, 0) == 0.0);
}

TEST_CASE("dilate3 grows singletons by the structuring element") {
  ScalarMap zero(5, 5);
  const ScalarMap dz = dilate3(zero);
  for (const double v : dz.v) CHECK(v == 0.0);

  ScalarMap mid(5, 5);
  mid.at(2, 2) = 1.0;
  const ScalarMap dm = dilate3(mid);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x)
      CHECK(dm.at(x, y) == ((std::abs(x - 2) <= 1 && std::abs(y - 2) <= 1)
                                ? 1.0
                                : 0.0));

  ScalarMap corner(5, 5);
  corner.at(0, 0) = 1.0;
  const ScalarMap dc = dilate3(corner);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x)
      CHECK(dc.at(x, y) == ((x <= 1 && y <= 1) ? 1.0 : 0.0));
}

TEST_CASE("ppm round trip is byte exact") {
  Rng rng(31);
  Frame f = test::random_frame(17, 13, rng);
  for (auto& v : f.data) v = std::round(v * 255.0) / 255.0;
  const auto path = std::filesystem::temp_directory_path() / "ssamc_rt.ppm";
  save_ppm(f, path);
  const Frame g = load_ppm(path);
  save_ppm(g, path);
  const Frame h = load_ppm(path);
  REQUIRE(g.data.size() == f.data.size());
  CHECK(g.data == f.data);
  CHECK(h.data == g.data);
  std::filesystem::remove(path);
}

TEST_CASE("ppm loader rejects malformed files") {
  const auto path = std::filesystem::temp_directory_path() / "ssamc_bad.ppm";
  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n2 2\n255\n";
  }
  CHECK_THROWS(load_ppm(path));
  {
    std::ofstream out(path, std::ios::binary);
    out << "P6\n4 4\n255\nxx";  // truncated
  }
  CHECK_THROWS(load_ppm(path));
  std::filesystem::remove(path);
}

TEST_CASE("imaging invariants hold as properties") {
  CHECK(test::prop_dilate_extensive_monotone(101).empty());
  CHECK(test::prop_hsv_roundtrip(102).empty());
  CHECK(test::prop_edge_luminance_invariance(103).empty());
}
