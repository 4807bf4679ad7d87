#ifndef SSAMC_SAMPLER_HPP
#define SSAMC_SAMPLER_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ssamc/annf.hpp"
#include "ssamc/grid.hpp"
#include "ssamc/rng.hpp"
#include "ssamc/types.hpp"

namespace ssamc {

/// Per-subregion log weights. Stored in the log domain throughout: the raw
/// weights routinely reach exp(-tau * lambda) with tau * lambda in the
/// thousands.
struct DensityOfStates {
  std::vector<double> log_omega;
};

enum class DosUpdateMode {
  /// log w_i += gain * (f_i - pi_i); the standard stochastic-approximation
  /// update and the default.
  kLogGain,
  /// w_i += exp(gain * (f_i - pi_i)), evaluated in the log domain.
  kAdditiveExp,
};

struct SamplerConfig {
  double theta = 0.8;
  double beta = 0.2;
  double sigma_x = 8.0;
  double sigma_y = 4.0;
  double sigma_s = 0.013;
  int k_iters = 120;
  int n_per_iter = 5;
  int k0 = 0;  // 0 selects the default (k_iters * n_per_iter) / 4
  double tau = 1000.0;
  double smooth_c = 100.0;
  double epsilon_lambda = 1e-6;
  std::vector<double> pi_target;  // empty selects uniform 1/m
  DosUpdateMode dos_mode = DosUpdateMode::kLogGain;
  bool update_scale = false;
  bool freeze_dos = false;

  int resolved_k0() const {
    return k0 > 0 ? k0 : std::max(1, (k_iters * n_per_iter) / 4);
  }
  /// Gain factor k0 / max(k0, k); equals 1 while k <= k0, then decays.
  double gain(int k) const {
    const int g = resolved_k0();
    return double(g) / double(std::max(g, k));
  }
};

/// Active subset of grid cells the chain may be steered into.
struct SampleSpace {
  std::vector<int> cells;         // ascending
  std::vector<uint8_t> member;    // size grid.m()
  bool contains(int i) const { return member[size_t(i)] != 0; }
};

/// log w_i = -tau * lambda_i.
DensityOfStates init_dos(const std::vector<double>& lambda, double tau);

/// Normalized cell-selection probabilities: weight theta where lambda > 0,
/// 1 - theta elsewhere.
std::vector<double> region_selection_probs(const std::vector<double>& lambda,
                                           double theta);

/// Full grid on abrupt frames; otherwise the 5x5 block of cells centered on
/// the cell of prev_best, clipped at the grid borders.
SampleSpace restrict_sample_space(bool abrupt, const TargetState& prev_best,
                                  const RegionGrid& grid);

/// Mixture proposal: with probability beta a Gaussian step from `current`,
/// otherwise a cell drawn from rho (restricted and renormalized over `space`)
/// with a uniform position inside it. Out-of-frame candidates are resampled,
/// up to 100 attempts, after which `current` is returned unchanged.
TargetState propose(const TargetState& current, const SamplerConfig& cfg,
                    const std::vector<double>& rho, const SampleSpace& space,
                    const RegionGrid& grid, Rng& rng);

/// Density of the proposal mixture Q(to; from). The adaptive term vanishes
/// outside `space`, leaving only the Gaussian component.
double proposal_density(const TargetState& from, const TargetState& to,
                        const SamplerConfig& cfg,
                        const std::vector<double>& rho,
                        const SampleSpace& space, const RegionGrid& grid);

/// Metropolis-Hastings ratio for the weighted trial distribution
/// lambda_J * p(X) / omega_J, computed in the log domain. Confidence values
/// are floored at epsilon_lambda. Non-finite ratios reject.
double acceptance_prob(const TargetState& cand, const TargetState& curr,
                       double post_cand, double post_curr,
                       const ConfidenceGrid& conf, const DensityOfStates& dos,
                       double q_fwd, double q_bwd, double epsilon_lambda);

/// Precomputed double-truncated Gaussian kernel over cell-center distances
/// (in pixels): w(z) = exp(-z^2/2) for |z| < c, else 0.
class SmoothingKernel {
 public:
  SmoothingKernel(const RegionGrid& grid, double c);

  /// Nadaraya-Watson average of r/n over neighboring cells.
  std::vector<double> apply(const std::vector<int>& r, int n) const;

 private:
  int m_;
  std::vector<double> w_;        // m x m
  std::vector<double> row_sum_;  // per-cell normalizer
};

/// One-shot convenience wrapper around SmoothingKernel.
std::vector<double> smoothed_frequency(const std::vector<int>& r, int n,
                                       const RegionGrid& grid, double c);

DensityOfStates update_dos(const DensityOfStates& dos,
                           const std::vector<double>& f,
                           const std::vector<double>& pi, double gain,
                           DosUpdateMode mode);

struct IterDiag {
  int accepts = 0;
  double log_posterior = 0.0;
  double dos_entropy = 0.0;
};

struct ChainResult {
  std::vector<std::pair<TargetState, double>> samples;  // state, posterior
  DensityOfStates dos;
  std::vector<IterDiag> diags;
  long nonfinite_rejects = 0;
};

using PosteriorFn = std::function<double(const TargetState&)>;

/// Runs k_iters iterations of n_per_iter MH steps each, with one smoothing
/// and density-of-states update per iteration. The chain starts from `init`,
/// snapped to the nearest active cell center if `init` lies outside `space`.
/// Every retained state is recorded, so samples.size() == k_iters*n_per_iter.
ChainResult run_chain(const PosteriorFn& posterior, const ConfidenceGrid& conf,
                      const SampleSpace& space, const SamplerConfig& cfg,
                      const TargetState& init, Rng& rng);

}  // namespace ssamc

#endif
