#include "ssamc/annf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ssamc/rng.hpp"

namespace ssamc {

namespace {

constexpr float kInf = std::numeric_limits<float>::infinity();

// Single-precision copy of the pixel data; the matcher's inner loop runs in
// float, which vectorizes twice as wide with no measurable effect on match
// selection.
struct FloatImage {
  int width;
  std::vector<float> data;

  explicit FloatImage(const Frame& f) : width(f.width), data(f.data.size()) {
    for (size_t i = 0; i < data.size(); ++i) data[i] = float(f.data[i]);
  }
  const float* px(int x, int y) const {
    return data.data() + 3 * (size_t(y) * width + x);
  }
};

// SSD between the patches whose top-left corners are (ax, ay) and (bx, by).
// Bails out once the running sum exceeds `bail`. Four accumulators keep the
// summation order fixed while letting the loop vectorize.
float patch_ssd(const FloatImage& a, const FloatImage& b, int ax, int ay,
                int bx, int by, int patch, float bail) {
  float sum = 0.0f;
  const int n = 3 * patch;
  for (int r = 0; r < patch; ++r) {
    const float* pa = a.px(ax, ay + r);
    const float* pb = b.px(bx, by + r);
    float s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    int c = 0;
    for (; c + 4 <= n; c += 4) {
      const float d0 = pa[c] - pb[c];
      const float d1 = pa[c + 1] - pb[c + 1];
      const float d2 = pa[c + 2] - pb[c + 2];
      const float d3 = pa[c + 3] - pb[c + 3];
      s0 += d0 * d0;
      s1 += d1 * d1;
      s2 += d2 * d2;
      s3 += d3 * d3;
    }
    for (; c < n; ++c) {
      const float d = pa[c] - pb[c];
      s0 += d * d;
    }
    sum += (s0 + s1) + (s2 + s3);
    if (sum > bail) return sum;
  }
  return sum;
}

}  // namespace

PatchField compute_annf(const Frame& src, const Frame& dst,
                        const AnnfParams& params) {
  if (src.width != dst.width || src.height != dst.height)
    throw std::invalid_argument("compute_annf: frame dimensions differ");
  const int patch = params.patch;
  if (patch < 1 || patch > src.width || patch > src.height)
    throw std::invalid_argument("compute_annf: patch does not fit the frame");

  PatchField f;
  f.width = src.width;
  f.height = src.height;
  f.patch = patch;
  f.c0 = patch / 2;
  f.cw = src.width - patch + 1;
  f.ch = src.height - patch + 1;

  // Internally positions are patch top-left corners; the index layout matches
  // the public center-indexed accessors because center = top-left + c0.
  const int nx = f.cw, ny = f.ch;
  std::vector<int> px(size_t(nx) * ny), py(size_t(nx) * ny);
  std::vector<float> err(size_t(nx) * ny, 0.0f);

  const FloatImage fsrc(src), fdst(dst);
  Rng master(params.seed);

  for (int y = 0; y < ny; ++y) {
    Rng row = master.split(y);
    for (int x = 0; x < nx; ++x) {
      const size_t i = size_t(y) * nx + x;
      // Identity offset is always a candidate so that identical frames yield
      // the all-zero field.
      float best = patch_ssd(fsrc, fdst, x, y, x, y, patch, kInf);
      int bx = x, by = y;
      const int qx = row.uniform_int(nx);
      const int qy = row.uniform_int(ny);
      if (qx != bx || qy != by) {
        const float e = patch_ssd(fsrc, fdst, x, y, qx, qy, patch, best);
        if (e < best) {
          best = e;
          bx = qx;
          by = qy;
        }
      }
      px[i] = bx;
      py[i] = by;
      err[i] = best;
    }
  }

  const int rad_max = std::max(nx, ny);
  // The decaying schedule gives log2(rad_max) draws per center per sweep.
  // On small position grids that undersamples the search space, so repeat
  // each scale until a constant coverage fraction is reached.
  const long positions = long(nx) * ny;
  const int draws_per_scale =
      positions <= 4096 ? 2 * int(std::ceil(std::log2(double(positions) + 1.0)))
                        : 1;
  for (int it = 1; it <= params.iterations; ++it) {
    const bool forward = (it % 2) == 1;
    for (int sy = 0; sy < ny; ++sy) {
      const int y = forward ? sy : ny - 1 - sy;
      Rng row = master.split(uint64_t(it) * ny + y + 0x10000);
      for (int sx = 0; sx < nx; ++sx) {
        const int x = forward ? sx : nx - 1 - sx;
        const size_t i = size_t(y) * nx + x;

        auto consider = [&](int qx, int qy) {
          qx = std::clamp(qx, 0, nx - 1);
          qy = std::clamp(qy, 0, ny - 1);
          if (qx == px[i] && qy == py[i]) return;
          const float e = patch_ssd(fsrc, fdst, x, y, qx, qy, patch, err[i]);
          if (e < err[i]) {
            err[i] = e;
            px[i] = qx;
            py[i] = qy;
          }
        };

        // Propagation from the already-updated neighbors of this sweep.
        const int step = forward ? -1 : 1;
        const int xn = x + step;
        if (xn >= 0 && xn < nx) {
          const size_t j = size_t(y) * nx + xn;
          consider(x + (px[j] - xn), y + py[j] - y);
        }
        const int yn = y + step;
        if (yn >= 0 && yn < ny) {
          const size_t j = size_t(yn) * nx + x;
          consider(x + px[j] - x, y + (py[j] - yn));
        }

        // Random search around the current match, radius halving each step.
        // The full-image radius only pays off before propagation has spread
        // good matches, so later iterations search locally. Two full-range
        // rounds, because thin structures need a lucky long-range hit that
        // propagation then carries along the row.
        const int rad_start = it <= 2 ? rad_max : std::min(rad_max, 16);
        for (int rad = rad_start; rad >= 1; rad /= 2) {
          for (int d = 0; d < draws_per_scale; ++d) {
            const int qx = px[i] + row.uniform_int(2 * rad + 1) - rad;
            const int qy = py[i] + row.uniform_int(2 * rad + 1) - rad;
            consider(qx, qy);
          }
        }
      }
    }
  }

  f.dx.resize(px.size());
  f.dy.resize(py.size());
  f.err.resize(err.size());
  for (size_t i = 0; i < px.size(); ++i) {
    f.dx[i] = px[i] - int(i % nx);
    f.dy[i] = py[i] - int(i / nx);
    f.err[i] = double(err[i]);
  }
  return f;
}

PixelSet forward_backward_filter(const PatchField& fwd, const PatchField& bwd,
                                 const Rect& box) {
  if (fwd.width != bwd.width || fwd.height != bwd.height ||
      fwd.patch != bwd.patch)
    throw std::invalid_argument("forward_backward_filter: mismatched fields");

  PixelSet out;
  out.width = fwd.width;
  out.height = fwd.height;
  out.in.assign(size_t(fwd.width) * fwd.height, 0);
  if (!box.valid()) return out;

  const PixelSpan span = pixel_span(box, fwd.width, fwd.height);
  for (int y = span.y0; y < span.y1; ++y) {
    for (int x = span.x0; x < span.x1; ++x) {
      if (!fwd.is_center(x, y)) continue;
      const auto q = fwd.match_of(x, y);
      if (!bwd.is_center(q[0], q[1])) continue;
      const auto s = bwd.match_of(q[0], q[1]);
      if (!box.contains(s[0], s[1])) continue;
      uint8_t& cell = out.in[size_t(q[1]) * out.width + q[0]];
      if (!cell) {
        cell = 1;
        ++out.count;
      }
    }
  }
  return out;
}

ScalarMap incoherence_map(const PixelSet& survivors, const PatchField& fwd,
                          const Rect& box) {
  ScalarMap h(fwd.width, fwd.height, 0.0);
  if (!box.valid()) return h;
  const PixelSpan span = pixel_span(box, fwd.width, fwd.height);
  for (int y = span.y0; y < span.y1; ++y) {
    for (int x = span.x0; x < span.x1; ++x) {
      if (!fwd.is_center(x, y)) continue;
      const auto q = fwd.match_of(x, y);
      if (survivors.contains(q[0], q[1])) h.at(q[0], q[1]) += 1.0;
    }
  }
  return h;
}

ConfidenceGrid confidence_map(const ScalarMap& h, const RegionGrid& grid) {
  if (h.width != grid.image_w || h.height != grid.image_h)
    throw std::invalid_argument("confidence_map: dimensions differ from grid");
  ConfidenceGrid out;
  out.grid = grid;
  out.lambda.assign(grid.m(), 0.0);
  for (int i = 0; i < grid.m(); ++i) {
    const Rect b = grid.cell_bounds(i);
    double sum = 0.0;
    for (int y = int(b.y); y < int(b.y + b.h); ++y)
      for (int x = int(b.x); x < int(b.x + b.w); ++x) sum += h.at(x, y);
    out.lambda[i] = sum / double(grid.cell_pixels(i));
  }
  return out;
}

ScalarMap match_error_image(const PatchField& f) {
  ScalarMap out(f.width, f.height, 0.0);
  const double norm = double(f.patch) * f.patch * 3.0;
  for (int y = f.c0; y < f.c0 + f.ch; ++y)
    for (int x = f.c0; x < f.c0 + f.cw; ++x)
      out.at(x, y) = f.error_at(x, y) / norm;
  return out;
}

void write_field_csv(const PatchField& f, std::ostream& out) {
  out << "x,y,dx,dy,error\n";
  char buf[64];
  for (int y = f.c0; y < f.c0 + f.ch; ++y) {
    for (int x = f.c0; x < f.c0 + f.cw; ++x) {
      const auto o = f.offset_at(x, y);
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.9g\n", x, y, o[0], o[1],
                    f.error_at(x, y));
      out << buf;
    }
  }
}

}  // namespace ssamc
