#ifndef SSAMC_GMM_HPP
#define SSAMC_GMM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ssamc/rng.hpp"
#include "ssamc/types.hpp"

namespace ssamc {

using Mat3 = std::array<double, 9>;  // row-major, symmetric where required

constexpr double kCovFloor = 1e-4;

struct GmmComponent {
  double weight = 1.0;
  Vec3 mean{};
  Mat3 cov{};
};

/// Gaussian mixture over 3-D color vectors. Weights are normalized at
/// construction; covariances must be positive definite (the fitting routine
/// guarantees this through the covariance floor).
class Gmm {
 public:
  explicit Gmm(std::vector<GmmComponent> comps);

  double pdf(const Vec3& x) const;
  Vec3 sample(Rng& rng) const;

  const std::vector<GmmComponent>& components() const { return comps_; }
  int size() const { return int(comps_.size()); }

 private:
  struct Cached {
    Mat3 chol;        // lower-triangular factor of cov
    double log_norm;  // -(3/2)log(2pi) - sum(log diag(chol))
  };
  std::vector<GmmComponent> comps_;
  std::vector<Cached> cached_;
};

/// EM fit with k-means++ initialization, covariance floor kCovFloor * I,
/// at most max_iters iterations or average log-likelihood change below tol.
/// Fewer samples than components degrades to one near-delta component per
/// sample. Deterministic for a fixed seed.
Gmm fit_gmm(std::span<const Vec3> samples, int k, uint64_t seed,
            int max_iters = 100, double tol = 1e-6);

/// Average per-sample log-likelihood; exposed for the EM monotonicity checks.
double gmm_mean_log_likelihood(const Gmm& g, std::span<const Vec3> samples);

/// Hellinger distance between mixtures, estimated by importance sampling from
/// (p+q)/2 and clamped to [0, 1]. Deterministic for a fixed seed.
double hellinger_distance(const Gmm& p, const Gmm& q, uint64_t seed,
                          int n_samples = 10000);

}  // namespace ssamc

#endif
