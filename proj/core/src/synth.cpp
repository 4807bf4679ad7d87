#include "ssamc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ssamc/ppm.hpp"
#include "ssamc/rng.hpp"

namespace ssamc {

namespace {

constexpr double kPi2 = 6.283185307179586;
constexpr double kTextureAmp = 0.02;
constexpr double kTeleportFrac = 0.30;

// Scene palettes cycle per epoch. Every consecutive pair, including the wrap,
// differs by at least 0.22 in some channel. Smaller steps get soaked up by
// texture compensation, and the frame-wide matching error of a shot change
// has to clear the residual errors of boundary-straddling patches, which stay
// at target-contrast level regardless of the palette.
constexpr Vec3 kPalette[4] = {
    {0.40, 0.46, 0.56},
    {0.64, 0.48, 0.32},
    {0.34, 0.58, 0.50},
    {0.60, 0.34, 0.30},
};

// Multiplicative brightness pattern in target-relative coordinates, so it
// translates and teleports with the target. A flat target would leave the
// matcher free to pair its interior patches arbitrarily, which skews the
// incoherence pile-up; real targets carry texture that pins correspondences.
// The two waves have incommensurate short wavelengths: no translation maps
// the pattern onto itself, so the identity correspondence wins decisively.
double target_texture(double rel_x, double rel_y) {
  return 1.0 +
         0.035 * std::sin(kPi2 * rel_x / 4.3 + 1.0) *
             std::sin(kPi2 * rel_y / 3.7 + 2.0) +
         0.035 * std::sin(kPi2 * rel_x / 6.83 + 3.0) *
             std::sin(kPi2 * rel_y / 5.31 + 4.0);
}

Rect inflate(const Rect& r, double m) {
  return Rect{r.x - m, r.y - m, r.w + 2 * m, r.h + 2 * m};
}

bool overlaps_any(const Rect& r, const std::vector<Rect>& others, double margin) {
  for (const auto& o : others)
    if (intersect(r, inflate(o, margin)).valid()) return true;
  return false;
}

void fill_rect(Frame& f, const Rect& r, const Vec3& color) {
  const PixelSpan s = pixel_span(r, f.width, f.height);
  for (int y = s.y0; y < s.y1; ++y) {
    for (int x = s.x0; x < s.x1; ++x) {
      double* p = f.px(x, y);
      p[0] = color[0];
      p[1] = color[1];
      p[2] = color[2];
    }
  }
}

}  // namespace

SynthSequence::SynthSequence(const SynthSpec& spec) : spec_(spec) {
  const int W = spec.width, H = spec.height;
  if (W < 8 || H < 8) throw std::invalid_argument("synth: frame too small");
  if (spec.frames < 1) throw std::invalid_argument("synth: no frames");
  if (spec.target_w < 1 || spec.target_h < 1 || spec.target_w > W ||
      spec.target_h > H)
    throw std::invalid_argument("synth: target does not fit inside the frame");
  if (spec.noise_sigma < 0 || spec.clutter < 0 || spec.flicker < 0)
    throw std::invalid_argument("synth: negative parameter");
  for (const int tf : spec.motion.teleport_frames)
    if (tf < 2 || tf > spec.frames)
      throw std::invalid_argument("synth: teleport frame out of range");

  const Rng master(spec.seed);

  // Trajectory: smooth integer steps with border bounce, teleports of at
  // least kTeleportFrac of the frame diagonal.
  const double diag = std::hypot(double(W), double(H));
  const int max_x = W - spec.target_w;
  const int max_y = H - spec.target_h;
  Rng traj = master.split(1);
  double px = std::floor(max_x / 2.0);
  double py = std::floor(max_y / 2.0);
  double vx = spec.motion.vx, vy = spec.motion.vy;

  truth_.reserve(spec.frames);
  epoch_of_frame_.reserve(spec.frames);
  int epoch = 0;
  for (int t = 0; t < spec.frames; ++t) {
    const bool teleport =
        t > 0 && std::find(spec.motion.teleport_frames.begin(),
                           spec.motion.teleport_frames.end(),
                           t + 1) != spec.motion.teleport_frames.end();
    if (teleport) {
      const double ocx = px + spec.target_w / 2.0;
      const double ocy = py + spec.target_h / 2.0;
      bool placed = false;
      for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
        const int nx = traj.uniform_int(max_x + 1);
        const int ny = traj.uniform_int(max_y + 1);
        const double d = std::hypot(nx + spec.target_w / 2.0 - ocx,
                                    ny + spec.target_h / 2.0 - ocy);
        if (d >= kTeleportFrac * diag) {
          px = nx;
          py = ny;
          placed = true;
        }
      }
      if (!placed)
        throw std::runtime_error("synth: no feasible teleport destination");
      if (spec.motion.shot_change) ++epoch;
    } else if (t > 0) {
      px += vx;
      py += vy;
      if (px < 0) { px = -px; vx = -vx; }
      if (px > max_x) { px = 2.0 * max_x - px; vx = -vx; }
      if (py < 0) { py = -py; vy = -vy; }
      if (py > max_y) { py = 2.0 * max_y - py; vy = -vy; }
    }
    truth_.push_back(Rect{double(std::lround(px)), double(std::lround(py)),
                          double(spec.target_w), double(spec.target_h)});
    epoch_of_frame_.push_back(epoch);
  }

  // Clutter and flicker keep their colors and sizes for the whole sequence;
  // a shot change only relocates them. Colors sit at least 60 degrees of hue
  // away from the target so the appearance model stays discriminative.
  Rng fixed = master.split(2);
  const double target_hue = rgb_to_hsv(spec.target_color)[0];
  std::vector<std::array<double, 2>> clutter_size(spec.clutter);
  std::vector<Vec3> clutter_color(spec.clutter);
  for (int i = 0; i < spec.clutter; ++i) {
    clutter_size[i] = {std::floor(fixed.uniform(16, 40)),
                       std::floor(fixed.uniform(12, 32))};
    const double hue = std::fmod(target_hue + fixed.uniform(60, 300), 360.0);
    clutter_color[i] =
        hsv_to_rgb({hue, fixed.uniform(0.5, 0.9), fixed.uniform(0.4, 0.8)});
  }
  std::vector<Vec3> flicker_color(spec.flicker);
  for (int i = 0; i < spec.flicker; ++i) {
    const double hue =
        std::fmod(target_hue + 90.0 + 55.0 * i + fixed.uniform(0, 20), 360.0);
    flicker_color[i] =
        hsv_to_rgb({hue, fixed.uniform(0.6, 0.9), fixed.uniform(0.5, 0.8)});
  }

  const int n_epochs = epoch + 1;
  scenes_.reserve(n_epochs);
  for (int e = 0; e < n_epochs; ++e) {
    Rng srng = master.split((uint64_t(2) << 20) + e);
    Scene sc;
    const Vec3& base = kPalette[e % 4];
    for (int c = 0; c < 3; ++c)
      sc.base[c] = base[c] + srng.uniform(-0.01, 0.01);
    auto freq = [&] {
      const double f = 1.0 / srng.uniform(16.0, 40.0);
      return srng.uniform() < 0.5 ? -f : f;
    };
    sc.fx1 = freq(); sc.fy1 = freq(); sc.p1 = srng.uniform(0, kPi2);
    sc.fx2 = freq(); sc.fy2 = freq(); sc.p2 = srng.uniform(0, kPi2);
    for (int c = 0; c < 3; ++c) {
      sc.mix1[c] = srng.uniform(0.4, 1.0);
      sc.mix2[c] = srng.uniform(0.4, 1.0);
    }

    // Keep scene props off the target's path in this epoch.
    std::vector<Rect> avoid;
    for (int t = 0; t < spec.frames; ++t)
      if (epoch_of_frame_[t] == e) avoid.push_back(truth_[t]);

    auto place = [&](double w, double h) -> Rect {
      for (int attempt = 0; attempt < 2000; ++attempt) {
        const Rect r{double(srng.uniform_int(std::max(1, W - int(w) + 1))),
                     double(srng.uniform_int(std::max(1, H - int(h) + 1))),
                     w, h};
        if (!overlaps_any(r, avoid, 8.0)) return r;
      }
      return Rect{};  // crowded frame: drop this prop
    };

    for (int i = 0; i < spec.clutter; ++i) {
      const Rect r = place(clutter_size[i][0], clutter_size[i][1]);
      if (!r.valid()) continue;
      sc.clutter.push_back(r);
      sc.clutter_color.push_back(clutter_color[i]);
      avoid.push_back(r);
    }
    for (int i = 0; i < spec.flicker; ++i) {
      const Rect r = place(12, 12);
      if (!r.valid()) continue;
      sc.flicker.push_back(r);
      sc.flicker_color.push_back(flicker_color[i]);
      avoid.push_back(r);
    }
    scenes_.push_back(std::move(sc));
  }
}

Frame SynthSequence::render(int t) const {
  if (t < 0 || t >= spec_.frames)
    throw std::out_of_range("synth: frame index");
  const Scene& sc = scenes_[epoch_of_frame_[t]];
  const int W = spec_.width, H = spec_.height;

  Frame f = Frame::filled(W, H, sc.base);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const double w1 = std::sin(kPi2 * (sc.fx1 * x + sc.fy1 * y) + sc.p1);
      const double w2 = std::sin(kPi2 * (sc.fx2 * x + sc.fy2 * y) + sc.p2);
      double* p = f.px(x, y);
      for (int c = 0; c < 3; ++c)
        p[c] += kTextureAmp * (sc.mix1[c] * w1 + sc.mix2[c] * w2);
    }
  }

  for (size_t i = 0; i < sc.clutter.size(); ++i)
    fill_rect(f, sc.clutter[i], sc.clutter_color[i]);

  // Brightness alternates sign every frame, so consecutive frames always
  // differ by 2*flicker_amp inside these patches.
  const double delta = (t % 2 == 0) ? spec_.flicker_amp : -spec_.flicker_amp;
  for (size_t i = 0; i < sc.flicker.size(); ++i) {
    const Vec3& c = sc.flicker_color[i];
    fill_rect(f, sc.flicker[i],
              {c[0] + delta, c[1] + delta, c[2] + delta});
  }

  {
    const Rect& tb = truth_[t];
    const PixelSpan s = pixel_span(tb, W, H);
    for (int y = s.y0; y < s.y1; ++y) {
      for (int x = s.x0; x < s.x1; ++x) {
        const double tex = target_texture(x - tb.x, y - tb.y);
        double* p = f.px(x, y);
        for (int c = 0; c < 3; ++c) p[c] = spec_.target_color[c] * tex;
      }
    }
  }

  Rng noise = Rng(spec_.seed).split((uint64_t(1) << 20) + t);
  for (auto& v : f.data) {
    if (spec_.noise_sigma > 0) v += spec_.noise_sigma * noise.gaussian();
    v = std::clamp(v, 0.0, 1.0);
    v = std::round(v * 255.0) / 255.0;  // match the 8-bit PPM round trip
  }
  return f;
}

void write_sequence(const SynthSequence& seq,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  char name[32];
  for (int t = 0; t < seq.spec().frames; ++t) {
    std::snprintf(name, sizeof name, "frame_%06d.ppm", t + 1);
    save_ppm(seq.render(t), dir / name,
             "seed=" + std::to_string(seq.spec().seed));
  }
  std::ofstream csv(dir / "groundtruth.csv");
  if (!csv) throw std::runtime_error("cannot write ground truth CSV");
  csv << "# seed=" << seq.spec().seed << "\n";
  csv << "frame,x,y,w,h\n";
  const auto& truth = seq.ground_truth();
  for (int t = 0; t < seq.spec().frames; ++t) {
    csv << (t + 1) << "," << std::lround(truth[t].x) << ","
        << std::lround(truth[t].y) << "," << std::lround(truth[t].w) << ","
        << std::lround(truth[t].h) << "\n";
  }
}

}  // namespace ssamc
