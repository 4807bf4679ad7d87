#ifndef SSAMC_TESTS_PROPERTIES_HPP
#define SSAMC_TESTS_PROPERTIES_HPP

// Property checks for the per-module invariants. Each returns an empty string
// on success and a description of the first violation otherwise, so both the
// unit suites and the acceptance runner can share them.

#include <sstream>
#include <string>

#include "oracles.hpp"
#include "ssamc/abruptness.hpp"
#include "ssamc/appearance.hpp"
#include "ssamc/eval.hpp"
#include "ssamc/sampler.hpp"
#include "ssamc/tracker.hpp"

namespace ssamc::test {

inline std::string fail(const std::string& msg) { return msg; }

// ----------------------------------------------------------------- imaging

inline std::string prop_dilate_extensive_monotone(uint64_t seed,
                                                  int cases = 100) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    const int w = 2 + rng.uniform_int(12), h = 2 + rng.uniform_int(12);
    ScalarMap a(w, h), b(w, h);
    for (size_t i = 0; i < a.v.size(); ++i) {
      a.v[i] = rng.uniform() < 0.3 ? 1.0 : 0.0;
      b.v[i] = a.v[i] > 0.0 || rng.uniform() < 0.2 ? 1.0 : 0.0;  // superset
    }
    const ScalarMap da = dilate3(a), db = dilate3(b);
    for (size_t i = 0; i < a.v.size(); ++i) {
      if (da.v[i] < a.v[i]) return fail("dilate3 not extensive");
      if (db.v[i] < da.v[i]) return fail("dilate3 not monotone");
    }
  }
  return {};
}

inline std::string prop_hsv_roundtrip(uint64_t seed, int cases = 200) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    const Vec3 rgb{rng.uniform(), rng.uniform(), rng.uniform()};
    const Vec3 back = hsv_to_rgb(rgb_to_hsv(rgb));
    for (int i = 0; i < 3; ++i)
      if (std::fabs(back[i] - rgb[i]) > 1e-6)
        return fail("rgb->hsv->rgb round trip exceeded 1e-6");
  }
  return {};
}

inline std::string prop_edge_luminance_invariance(uint64_t seed,
                                                  int cases = 100) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    const int w = 4 + rng.uniform_int(10), h = 4 + rng.uniform_int(10);
    Frame f = Frame::filled(w, h, {0, 0, 0});
    for (auto& v : f.data) v = rng.uniform(0.1, 0.6);
    Frame g = f;
    const double shift = rng.uniform(0.0, 0.35);
    for (auto& v : g.data) v += shift;  // stays within [0,1]
    const ScalarMap ea = edge_map(f), eb = edge_map(g);
    for (size_t i = 0; i < ea.v.size(); ++i)
      if (ea.v[i] != eb.v[i])
        return fail("edge_map changed under constant luminance shift");
  }
  return {};
}

// -------------------------------------------------------------------- annf

inline std::string prop_field_error_dominates_bruteforce(uint64_t seed,
                                                         int cases = 50) {
  Rng rng(seed);
  long optimal = 0, total = 0;
  for (int c = 0; c < cases; ++c) {
    Rng fr = rng.split(c);
    const Frame a = random_frame(8, 8, fr), b = random_frame(8, 8, fr);
    AnnfParams ap;
    ap.patch = 3;
    ap.iterations = 8;
    ap.seed = rng.split(1000 + c).seed();
    const PatchField f = compute_annf(a, b, ap);
    const BruteField bf = brute_force_annf(a, b, 3);
    for (size_t i = 0; i < bf.err.size(); ++i) {
      if (f.err[i] < bf.err[i] - 1e-6 * (1.0 + bf.err[i]))
        return fail("field error below the exhaustive minimum");
      ++total;
      if (f.err[i] <= bf.err[i] + 1e-6 * (1.0 + bf.err[i])) ++optimal;
    }
  }
  if (double(optimal) < 0.95 * double(total)) {
    std::ostringstream os;
    os << "optimality rate " << double(optimal) / double(total) << " < 0.95";
    return fail(os.str());
  }
  return {};
}

inline std::string prop_fb_filter_monotone(uint64_t seed, int cases = 100) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    Rng fr = rng.split(c);
    const Frame a = random_frame(16, 14, fr), b = random_frame(16, 14, fr);
    AnnfParams ap;
    ap.patch = 3;
    ap.seed = fr.seed();
    const PatchField fwd = compute_annf(a, b, ap);
    ap.seed = fr.seed() + 1;
    const PatchField bwd = compute_annf(b, a, ap);
    const Rect big{1 + rng.uniform(0, 3), 1 + rng.uniform(0, 3),
                   6 + rng.uniform(0, 6), 6 + rng.uniform(0, 6)};
    const Rect small{big.x + 1, big.y + 1, big.w - 2, big.h - 2};
    const PixelSet sb = forward_backward_filter(fwd, bwd, big);
    const PixelSet ss = forward_backward_filter(fwd, bwd, small);
    for (int y = 0; y < sb.height; ++y)
      for (int x = 0; x < sb.width; ++x)
        if (ss.contains(x, y) && !sb.contains(x, y))
          return fail("shrinking the box added a survivor");
  }
  return {};
}

inline std::string prop_confidence_mass_conservation(uint64_t seed,
                                                     int cases = 100) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    const int w = 12 + rng.uniform_int(30), h = 12 + rng.uniform_int(30);
    const RegionGrid grid(2 + rng.uniform_int(4), 2 + rng.uniform_int(4), w, h);
    ScalarMap hm(w, h);
    for (auto& v : hm.v)
      v = rng.uniform() < 0.2 ? double(rng.uniform_int(12)) : 0.0;
    const ConfidenceGrid conf = confidence_map(hm, grid);
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < grid.m(); ++i)
      lhs += conf.lambda[i] * double(grid.cell_pixels(i));
    for (const double v : hm.v) rhs += v;
    if (std::fabs(lhs - rhs) > 1e-9 * (1.0 + rhs))
      return fail("sum(lambda_i * N_i) != sum(H)");
  }
  return {};
}

// -------------------------------------------------------------- abruptness

inline std::string prop_hellinger_self_symmetry(uint64_t seed, int cases = 40) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    std::vector<GmmComponent> pc, qc;
    const int kp = 1 + rng.uniform_int(3), kq = 1 + rng.uniform_int(3);
    auto make = [&rng](int k) {
      std::vector<GmmComponent> comps;
      for (int j = 0; j < k; ++j) {
        GmmComponent g;
        g.weight = 0.2 + rng.uniform();
        g.mean = {rng.uniform(), rng.uniform(), rng.uniform()};
        const double s = rng.uniform(0.02, 0.2);
        g.cov = {s * s, 0, 0, 0, s * s, 0, 0, 0, s * s};
        comps.push_back(g);
      }
      return Gmm(std::move(comps));
    };
    const Gmm p = make(kp), q = make(kq);
    const double self = hellinger_distance(p, p, rng.split(c).seed());
    if (self > 0.02) return fail("hellinger(p,p) > 0.02");
    const double pq = hellinger_distance(p, q, rng.split(100 + c).seed());
    const double qp = hellinger_distance(q, p, rng.split(200 + c).seed());
    if (std::fabs(pq - qp) > 0.03)
      return fail("hellinger asymmetry beyond Monte Carlo tolerance");
  }
  return {};
}

inline std::string prop_gad_scale_invariance(uint64_t seed, int cases = 100) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    const int w = 3 + rng.uniform_int(20), h = 3 + rng.uniform_int(20);
    ScalarMap r(w, h);
    for (auto& v : r.v) v = rng.uniform() < 0.7 ? rng.uniform() : 0.0;
    const double scale = std::exp(rng.uniform(-6.0, 6.0));
    ScalarMap rs = r;
    for (auto& v : rs.v) v *= scale;
    const double g1 = global_abrupt_degree(r), g2 = global_abrupt_degree(rs);
    if (std::fabs(g1 - g2) > 1e-12)
      return fail("global degree changed under positive rescaling");
  }
  return {};
}

// Eq-style caveat: the combined score decreases in g whenever l < 0.45, so
// global monotonicity in g only holds on l >= 0.45; below that the low-g bias
// documented in the module notes takes over. The l-monotonicity half holds
// everywhere for fixed g <= T.
inline std::string prop_decision_monotone(uint64_t seed, int cases = 200) {
  Rng rng(seed);
  const double t = 0.2;
  for (int c = 0; c < cases; ++c) {
    const double l = rng.uniform(0.45, 1.0);
    double g1 = rng.uniform(), g2 = rng.uniform();
    if (g1 > g2) std::swap(g1, g2);
    if (abruptness_decision(g1, l, t).abrupt &&
        !abruptness_decision(g2, l, t).abrupt)
      return fail("not monotone in g for l >= 0.45");

    const double g = rng.uniform(0.0, t);
    double l1 = rng.uniform(), l2 = rng.uniform();
    if (l1 > l2) std::swap(l1, l2);
    if (abruptness_decision(g, l1, t).abrupt &&
        !abruptness_decision(g, l2, t).abrupt)
      return fail("not monotone in l for g <= T");
  }
  return {};
}

inline std::string prop_em_loglik_monotone(uint64_t seed, int cases = 100) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    Rng dr = rng.split(c);
    const int n = 30 + dr.uniform_int(60);
    std::vector<Vec3> samples;
    const int clusters = 1 + dr.uniform_int(3);
    for (int i = 0; i < n; ++i) {
      const int j = dr.uniform_int(clusters);
      const double cx = 0.2 + 0.3 * j;
      samples.push_back({cx + 0.05 * dr.gaussian(), 0.5 + 0.05 * dr.gaussian(),
                         0.5 + 0.05 * dr.gaussian()});
    }
    // Track the likelihood trace by refitting with increasing iteration caps;
    // EM is deterministic for a fixed seed, so prefixes coincide.
    double prev = -std::numeric_limits<double>::infinity();
    for (int iters = 1; iters <= 8; ++iters) {
      const Gmm g = fit_gmm(samples, 2, 99 + c, iters, 0.0);
      const double ll = gmm_mean_log_likelihood(g, samples);
      if (ll < prev - 1e-7) {
        std::ostringstream os;
        os << "EM log-likelihood decreased: " << prev << " -> " << ll;
        return fail(os.str());
      }
      prev = ll;
    }
  }
  return {};
}

// -------------------------------------------------------------- appearance

inline std::string prop_likelihood_bounds_monotone(uint64_t seed,
                                                   int cases = 100) {
  Rng rng(seed);
  const Frame f = [] {
    Rng r(7);
    return random_frame(24, 20, r);
  }();
  for (int c = 0; c < cases; ++c) {
    AppearanceModel m;
    m.ref_w = 6;
    m.ref_h = 6;
    const Rect fg_box{2 + rng.uniform(0, 10), 2 + rng.uniform(0, 8), 6, 6};
    m.fg = build_histogram(f, fg_box);
    m.bg = build_histogram(f, Rect{0, 0, 24, 10});
    const TargetState st{4 + rng.uniform(0, 16), 4 + rng.uniform(0, 12), 1.0};
    const double p = likelihood(f, st, m);
    if (!(p > 0.0 && p < 1.0)) return fail("likelihood not in (0,1)");

    // Moving the fg template toward the candidate histogram lowers d_F and
    // must strictly raise the likelihood.
    const HsvHistogram cand = build_histogram(f, state_box(st, 6, 6));
    AppearanceModel closer = m;
    for (int i = 0; i < HsvHistogram::kTotal; ++i)
      closer.fg.bins[i] = 0.5 * (m.fg.bins[i] + cand.bins[i]);
    const double p2 = likelihood(f, st, closer);
    const double df1 = bhattacharyya(cand, m.fg);
    const double df2 = bhattacharyya(cand, closer.fg);
    if (df2 < df1 - 1e-12 && !(p2 > p))
      return fail("likelihood not strictly decreasing in d_F");

    AppearanceModel bg_closer = m;
    for (int i = 0; i < HsvHistogram::kTotal; ++i)
      bg_closer.bg.bins[i] = 0.5 * (m.bg.bins[i] + cand.bins[i]);
    const double p3 = likelihood(f, st, bg_closer);
    const double db1 = bhattacharyya(cand, m.bg);
    const double db2 = bhattacharyya(cand, bg_closer.bg);
    if (db2 < db1 - 1e-12 && !(p3 < p))
      return fail("likelihood not strictly increasing in d_B");
  }
  return {};
}

inline std::string prop_bhattacharyya_metric(uint64_t seed, int cases = 100) {
  Rng rng(seed);
  auto random_hist = [&rng] {
    HsvHistogram h;
    h.empty = false;
    double sum = 0.0;
    for (int i = 0; i < 40; ++i) {
      const int b = rng.uniform_int(HsvHistogram::kTotal);
      const double v = rng.uniform();
      h.bins[b] += v;
      sum += v;
    }
    for (auto& v : h.bins) v /= sum;
    return h;
  };
  for (int c = 0; c < cases; ++c) {
    const HsvHistogram a = random_hist(), b = random_hist(), m = random_hist();
    if (bhattacharyya(a, a) > 1e-7) return fail("d(h,h) != 0");
    if (std::fabs(bhattacharyya(a, b) - bhattacharyya(b, a)) > 1e-12)
      return fail("bhattacharyya not symmetric");
    if (bhattacharyya(a, b) >
        bhattacharyya(a, m) + bhattacharyya(m, b) + 1e-12)
      return fail("triangle inequality violated");
  }
  return {};
}

inline std::string prop_histogram_translation_equivariance(uint64_t seed,
                                                           int cases = 100) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    Rng fr = rng.split(c);
    const Frame a = random_frame(20, 16, fr);
    const int dx = rng.uniform_int(6), dy = rng.uniform_int(5);
    Frame b = Frame::filled(20, 16, {0, 0, 0});
    for (int y = 0; y + dy < 16; ++y)
      for (int x = 0; x + dx < 20; ++x)
        for (int ch = 0; ch < 3; ++ch)
          b.px(x + dx, y + dy)[ch] = a.px(x, y)[ch];
    const Rect box{double(2 + rng.uniform_int(4)), double(1 + rng.uniform_int(3)),
                   double(4 + rng.uniform_int(6)), double(4 + rng.uniform_int(5))};
    const Rect shifted{box.x + dx, box.y + dy, box.w, box.h};
    const HsvHistogram ha = build_histogram(a, box);
    const HsvHistogram hb = build_histogram(b, shifted);
    for (int i = 0; i < HsvHistogram::kTotal; ++i)
      if (ha.bins[i] != hb.bins[i])
        return fail("histogram changed under joint translation");
  }
  return {};
}

// ----------------------------------------------------------------- sampler

inline std::string prop_alpha_rescale_invariance(uint64_t seed,
                                                 int cases = 100) {
  Rng rng(seed);
  const RegionGrid grid(4, 4, 40, 40);
  for (int c = 0; c < cases; ++c) {
    ConfidenceGrid conf;
    conf.grid = grid;
    conf.lambda.assign(grid.m(), 0.0);
    for (auto& l : conf.lambda)
      l = rng.uniform() < 0.5 ? rng.uniform(0, 0.01) : 0.0;
    DensityOfStates dos = init_dos(conf.lambda, 1000.0);
    const TargetState a{rng.uniform(0, 40), rng.uniform(0, 40), 1.0};
    const TargetState b{rng.uniform(0, 40), rng.uniform(0, 40), 1.0};
    const double pa = std::exp(rng.uniform(-20, 0));
    const double pb = std::exp(rng.uniform(-20, 0));
    const double qf = std::exp(rng.uniform(-8, 0));
    const double qb = std::exp(rng.uniform(-8, 0));
    const double scale = std::exp(rng.uniform(-10, 10));
    const double a1 = acceptance_prob(b, a, pb, pa, conf, dos, qf, qb, 1e-6);
    const double a2 = acceptance_prob(b, a, pb * scale, pa * scale, conf, dos,
                                      qf, qb, 1e-6);
    if (std::fabs(a1 - a2) > 1e-9)
      return fail("acceptance not invariant under posterior rescaling");
  }
  return {};
}

inline std::string prop_smoothing_linear_uniform(uint64_t seed,
                                                 int cases = 100) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    const int rows = 2 + rng.uniform_int(4), cols = 2 + rng.uniform_int(4);
    const RegionGrid grid(rows, cols, 60, 60);
    const double cc = rng.uniform(5.0, 120.0);
    const SmoothingKernel kernel(grid, cc);
    const int m = grid.m();
    const int n = 8;
    std::vector<int> r1(m, 0), r2(m, 0), rs(m, 0);
    for (int i = 0; i < n; ++i) ++r1[rng.uniform_int(m)];
    for (int i = 0; i < n; ++i) ++r2[rng.uniform_int(m)];
    for (int i = 0; i < m; ++i) rs[i] = r1[i] + r2[i];
    const auto f1 = kernel.apply(r1, n), f2 = kernel.apply(r2, n),
               fs = kernel.apply(rs, n);
    for (int i = 0; i < m; ++i)
      if (std::fabs(fs[i] - (f1[i] + f2[i])) > 1e-12)
        return fail("smoothed frequency not linear in r");

    std::vector<int> ru(m, 1);  // uniform visits
    const auto fu = kernel.apply(ru, m);
    for (int i = 0; i < m; ++i)
      if (std::fabs(fu[i] - 1.0 / double(m)) > 1e-12)
        return fail("uniform r not mapped to uniform f");
  }
  return {};
}

inline std::string prop_dos_escape_direction(uint64_t seed, int cases = 100) {
  Rng rng(seed);
  const RegionGrid grid(3, 3, 30, 30);
  for (int c = 0; c < cases; ++c) {
    ConfidenceGrid conf;
    conf.grid = grid;
    conf.lambda.assign(9, 0.001);
    DensityOfStates dos = init_dos(conf.lambda, 1000.0);
    const int visited = rng.uniform_int(9);
    std::vector<int> r(9, 0);
    r[visited] = 5;
    const std::vector<double> f = smoothed_frequency(r, 5, grid, 100.0);
    const std::vector<double> pi(9, 1.0 / 9.0);
    const DensityOfStates dos2 =
        update_dos(dos, f, pi, 1.0, DosUpdateMode::kLogGain);
    int unvisited = (visited + 1) % 9;
    const double before = dos.log_omega[visited] - dos.log_omega[unvisited];
    const double after = dos2.log_omega[visited] - dos2.log_omega[unvisited];
    if (!(after > before))
      return fail("visited cell's relative log omega did not increase");

    // Higher omega must strictly lower the acceptance of moves into the cell.
    const auto center = grid.cell_center(visited);
    const auto other = grid.cell_center(unvisited);
    const TargetState cand{center[0], center[1], 1.0};
    const TargetState cur{other[0], other[1], 1.0};
    const double a_before =
        acceptance_prob(cand, cur, 0.4, 0.5, conf, dos, 1.0, 1.0, 1e-6);
    const double a_after =
        acceptance_prob(cand, cur, 0.4, 0.5, conf, dos2, 1.0, 1.0, 1e-6);
    if (!(a_after < a_before))
      return fail("incoming acceptance did not decrease after the update");
  }
  return {};
}

inline std::string prop_gain_schedule(uint64_t /*seed*/, int cases = 200) {
  SamplerConfig cfg;
  const int k0 = cfg.resolved_k0();
  double prev = 1.0;
  for (int k = 1; k <= cases + k0; ++k) {
    const double g = cfg.gain(k);
    if (k <= k0 && g != 1.0) return fail("gain != 1 for k <= k0");
    if (g > prev + 1e-15) return fail("gain increased with k");
    prev = g;
  }
  return {};
}

// ----------------------------------------------------------------- tracker

inline std::string prop_map_rescale_invariance(uint64_t seed,
                                               int cases = 100) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    std::vector<std::pair<TargetState, double>> samples;
    const int n = 1 + rng.uniform_int(50);
    for (int i = 0; i < n; ++i)
      samples.push_back({TargetState{rng.uniform(0, 100), rng.uniform(0, 100),
                                     1.0},
                         std::exp(rng.uniform(-30, 0))});
    const double scale = std::exp(rng.uniform(-15, 15));
    auto scaled = samples;
    for (auto& s : scaled) s.second *= scale;
    if (!(map_estimate(samples).first == map_estimate(scaled).first))
      return fail("MAP changed under positive rescaling");
  }
  return {};
}

// -------------------------------------------------------------------- eval

inline std::string prop_vor_symmetry_identity(uint64_t seed, int cases = 100) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    const Rect a{rng.uniform(0, 50), rng.uniform(0, 50), rng.uniform(1, 30),
                 rng.uniform(1, 30)};
    const Rect b{rng.uniform(0, 50), rng.uniform(0, 50), rng.uniform(1, 30),
                 rng.uniform(1, 30)};
    if (std::fabs(voc_overlap(a, b) - voc_overlap(b, a)) > 1e-12)
      return fail("VOR not symmetric");
    if (voc_overlap(a, a) != 1.0) return fail("VOR(a,a) != 1");
    const bool identical = a.x == b.x && a.y == b.y && a.w == b.w && a.h == b.h;
    if (!identical && voc_overlap(a, b) >= 1.0)
      return fail("VOR == 1 for distinct boxes");
  }
  return {};
}

inline std::string prop_curves_monotone(uint64_t seed, int cases = 100) {
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    const int n = 1 + rng.uniform_int(40);
    std::vector<double> cle(n), vor(n);
    for (int i = 0; i < n; ++i) {
      cle[i] = rng.uniform(0, 60);
      vor[i] = rng.uniform();
    }
    const auto pc = precision_curve(cle, default_precision_thresholds());
    for (size_t i = 1; i < pc.size(); ++i)
      if (pc[i] < pc[i - 1] - 1e-15) return fail("precision curve decreased");
    const auto sc = success_curve(vor, default_success_thresholds());
    for (size_t i = 1; i < sc.size(); ++i)
      if (sc[i] > sc[i - 1] + 1e-15) return fail("success curve increased");
  }
  return {};
}

inline std::string prop_auc_mean_consistency(uint64_t seed, int cases = 100) {
  Rng rng(seed);
  const auto thresholds = default_success_thresholds();
  for (int c = 0; c < cases; ++c) {
    const int n = 1 + rng.uniform_int(40);
    std::vector<double> vor(n);
    for (auto& v : vor) v = rng.uniform();
    const auto sc = success_curve(vor, thresholds);
    const double auc = auc_trapezoid(thresholds, sc);
    if (auc < 0.0 || auc > 1.0) return fail("AUC outside [0,1]");
    double mean = 0.0;
    for (const double v : sc) mean += v;
    mean /= double(sc.size());
    if (std::fabs(auc - mean) > 0.01)
      return fail("AUC far from the curve-sample mean");
  }
  return {};
}

}  // namespace ssamc::test

#endif
