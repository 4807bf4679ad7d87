#include "ssamc/tracker.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <string>

#include "ssamc/annf.hpp"
#include "ssamc/gmm.hpp"

namespace ssamc {

namespace {

constexpr int kMaxGmmSamples = 2000;

// Colors of the box patch centers in the previous frame against the colors at
// their forward matches; the Hellinger distance between the two fitted
// mixtures is the local abrupt degree.
double local_abrupt_degree(const Frame& prev, const Frame& cur,
                           const PatchField& fwd, const Rect& box, int gmm_k,
                           uint64_t seed) {
  std::vector<Vec3> before, after;
  const PixelSpan span = pixel_span(box, prev.width, prev.height);
  for (int y = span.y0; y < span.y1; ++y) {
    for (int x = span.x0; x < span.x1; ++x) {
      if (!fwd.is_center(x, y)) continue;
      before.push_back(prev.pixel(x, y));
      const auto q = fwd.match_of(x, y);
      after.push_back(cur.pixel(q[0], q[1]));
    }
  }
  if (before.empty()) return 1.0;  // nothing measurable; assume full change

  if (int(before.size()) > kMaxGmmSamples) {
    const size_t stride =
        (before.size() + kMaxGmmSamples - 1) / kMaxGmmSamples;
    std::vector<Vec3> b2, a2;
    for (size_t i = 0; i < before.size(); i += stride) {
      b2.push_back(before[i]);
      a2.push_back(after[i]);
    }
    before.swap(b2);
    after.swap(a2);
  }

  const Gmm gp = fit_gmm(before, gmm_k, mix64(seed ^ 0x1));
  const Gmm gq = fit_gmm(after, gmm_k, mix64(seed ^ 0x2));
  return hellinger_distance(gp, gq, mix64(seed ^ 0x3));
}

}  // namespace

std::pair<TargetState, double> map_estimate(
    const std::vector<std::pair<TargetState, double>>& samples) {
  if (samples.empty())
    throw std::invalid_argument("map_estimate: no samples");
  size_t best = 0;
  for (size_t i = 1; i < samples.size(); ++i)
    if (samples[i].second > samples[best].second) best = i;
  return samples[best];
}

FrameSource memory_frames(const std::vector<Frame>& frames) {
  FrameSource src;
  src.count = int(frames.size());
  src.get = [&frames](int i) { return frames[size_t(i)]; };
  return src;
}

TrackerRun track_sequence(const FrameSource& frames, const Rect& init_box,
                          const TrackerConfig& cfg,
                          const FieldObserver& observer) {
  if (frames.count < 2)
    throw std::invalid_argument("track_sequence: need at least two frames");

  auto load = [&](int i) -> Frame {
    try {
      return frames.get(i);
    } catch (const std::exception& e) {
      throw std::runtime_error("frame " + std::to_string(i + 1) +
                               ": " + e.what());
    }
  };

  Frame prev = load(0);
  if (!init_box.valid() || init_box.x < 0 || init_box.y < 0 ||
      init_box.x + init_box.w > prev.width ||
      init_box.y + init_box.h > prev.height)
    throw std::invalid_argument("track_sequence: init box not inside frame 1");

  const AppearanceModel model = build_appearance(prev, init_box);
  const RegionGrid grid(cfg.grid_rows, cfg.grid_cols, prev.width, prev.height);

  TrackerRun run;
  run.init_box = init_box;
  run.init_state = TargetState{init_box.cx(), init_box.cy(), 1.0};

  TargetState cur_state = run.init_state;
  const Rng master(cfg.seed);

  for (int t = 1; t < frames.count; ++t) {
    Frame curf = load(t);

    // The two field passes are independent; run them concurrently.
    AnnfParams ap;
    ap.patch = cfg.patch_size;
    ap.iterations = cfg.annf_iters;
    ap.seed = master.split(uint64_t(t) * 8 + 0).seed();
    auto fwd_task = std::async(std::launch::async, [&prev, &curf, ap] {
      return compute_annf(prev, curf, ap);
    });
    AnnfParams ap_b = ap;
    ap_b.seed = master.split(uint64_t(t) * 8 + 1).seed();
    const PatchField bwd = compute_annf(curf, prev, ap_b);
    const PatchField fwd = fwd_task.get();
    if (observer) observer(t + 1, fwd, bwd);

    const Rect prev_box = state_box(cur_state, model.ref_w, model.ref_h);
    const PixelSet survivors = forward_backward_filter(fwd, bwd, prev_box);
    const ScalarMap incoherence = incoherence_map(survivors, fwd, prev_box);
    const ConfidenceGrid conf = confidence_map(incoherence, grid);

    // Average of both directions' error images. Patches that straddle a
    // moved structure have no true match in one direction and show up as
    // spurious maxima there, but at different pixels in each direction, so
    // the average halves them while leaving genuine frame-wide change alone.
    ScalarMap gamma = match_error_image(fwd);
    {
      const ScalarMap gb = match_error_image(bwd);
      for (size_t i = 0; i < gamma.v.size(); ++i)
        gamma.v[i] = 0.5 * (gamma.v[i] + gb.v[i]);
    }
    const ScalarMap edges = edge_map(curf, cfg.edge_threshold);
    const ScalarMap refined = refined_error(gamma, edges);
    const double g = global_abrupt_degree(refined);
    const double l =
        local_abrupt_degree(prev, curf, fwd, prev_box, cfg.gmm_k,
                            master.split(uint64_t(t) * 8 + 2).seed());
    const AbruptnessReport report = abruptness_decision(g, l, cfg.t_abrupt);

    const SampleSpace space =
        restrict_sample_space(report.abrupt, cur_state, grid);

    const PosteriorFn posterior = [&](const TargetState& st) {
      return likelihood(curf, st, model);
    };
    Rng chain_rng = master.split(uint64_t(t) * 8 + 3);
    ChainResult chain =
        run_chain(posterior, conf, space, cfg.sampler, cur_state, chain_rng);

    const auto [map_state, map_post] = map_estimate(chain.samples);
    cur_state = map_state;

    FrameResult fr;
    fr.frame = t + 1;
    fr.state = map_state;
    fr.log_posterior = std::log(map_post);
    fr.report = report;
    fr.diags = std::move(chain.diags);
    run.frames.push_back(std::move(fr));

    prev = std::move(curf);
  }
  return run;
}

}  // namespace ssamc
