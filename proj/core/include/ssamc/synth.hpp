#ifndef SSAMC_SYNTH_HPP
#define SSAMC_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ssamc/image.hpp"
#include "ssamc/types.hpp"

namespace ssamc {

struct MotionScript {
  double vx = 2.0;
  double vy = 1.0;
  /// 1-based frame numbers at which the target jumps by at least 30% of the
  /// frame diagonal.
  std::vector<int> teleport_frames;
  /// Teleports also rebuild the scene (palette, texture, clutter layout),
  /// emulating a shot change rather than pure fast motion.
  bool shot_change = true;
};

struct SynthSpec {
  int width = 320;
  int height = 240;
  int frames = 64;
  Vec3 target_color{0.85, 0.10, 0.10};
  int target_w = 40;
  int target_h = 30;
  MotionScript motion;
  int clutter = 3;
  /// Small patches whose brightness alternates frame to frame. They give
  /// smooth frames a stable, non-trivial matching-error ceiling, the same
  /// role that deforming structures play in real video.
  int flicker = 4;
  double flicker_amp = 0.027;
  double noise_sigma = 0.02;
  uint64_t seed = 1;
};

/// Deterministic synthetic sequence with scripted ground truth. Trajectory
/// and scene layouts are planned at construction; frames render on demand
/// and are quantized to 8-bit levels, so an in-memory frame equals its PPM
/// round trip bit for bit.
class SynthSequence {
 public:
  explicit SynthSequence(const SynthSpec& spec);

  const SynthSpec& spec() const { return spec_; }
  const std::vector<Rect>& ground_truth() const { return truth_; }
  Frame render(int t) const;  // 0-based frame index

 private:
  struct Scene {
    Vec3 base;
    double fx1, fy1, p1, fx2, fy2, p2;
    Vec3 mix1, mix2;
    std::vector<Rect> clutter;
    std::vector<Vec3> clutter_color;
    std::vector<Rect> flicker;
    std::vector<Vec3> flicker_color;
  };

  SynthSpec spec_;
  std::vector<Rect> truth_;
  std::vector<int> epoch_of_frame_;
  std::vector<Scene> scenes_;
};

/// Writes frame_000001.ppm ... plus groundtruth.csv into dir.
void write_sequence(const SynthSequence& seq,
                    const std::filesystem::path& dir);

}  // namespace ssamc

#endif
