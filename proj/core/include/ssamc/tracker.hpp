#ifndef SSAMC_TRACKER_HPP
#define SSAMC_TRACKER_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "ssamc/abruptness.hpp"
#include "ssamc/appearance.hpp"
#include "ssamc/sampler.hpp"

namespace ssamc {

struct TrackerConfig {
  SamplerConfig sampler;
  int grid_rows = 15;
  int grid_cols = 15;
  int patch_size = 8;
  int annf_iters = 5;
  double t_abrupt = 0.2;
  int gmm_k = 3;
  double edge_threshold = 0.25;
  uint64_t seed = 1;
};

struct FrameResult {
  int frame = 0;  // 1-based frame number, always >= 2
  TargetState state;
  double log_posterior = 0.0;
  AbruptnessReport report;
  std::vector<IterDiag> diags;
};

struct TrackerRun {
  Rect init_box;
  TargetState init_state;
  std::vector<FrameResult> frames;  // one entry per frame t in [2, T]
};

/// Lazily loaded frame sequence; get() is called with 0-based indices and may
/// throw on I/O failure.
struct FrameSource {
  int count = 0;
  std::function<Frame(int)> get;
};

/// Sample with the largest posterior; the first occurrence wins ties.
std::pair<TargetState, double> map_estimate(
    const std::vector<std::pair<TargetState, double>>& samples);

/// Observer for the per-frame fields, used by the optional debug dumps.
using FieldObserver =
    std::function<void(int frame, const PatchField& fwd, const PatchField& bwd)>;

/// Runs the full per-frame pipeline: forward/backward field, survivor
/// filtering, confidence, abruptness detection, sample-space restriction,
/// chain sampling against the appearance likelihood, MAP extraction.
TrackerRun track_sequence(const FrameSource& frames, const Rect& init_box,
                          const TrackerConfig& cfg,
                          const FieldObserver& observer = {});

FrameSource memory_frames(const std::vector<Frame>& frames);

}  // namespace ssamc

#endif
