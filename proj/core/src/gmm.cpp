#include "ssamc/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ssamc {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

// Cholesky factor of a symmetric positive-definite 3x3 matrix. Adds jitter
// and retries if the input sits on the PSD boundary.
Mat3 cholesky3(Mat3 a) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    Mat3 l{};
    const double d0 = a[0];
    if (d0 > 0.0) {
      l[0] = std::sqrt(d0);
      l[3] = a[3] / l[0];
      l[6] = a[6] / l[0];
      const double d1 = a[4] - l[3] * l[3];
      if (d1 > 0.0) {
        l[4] = std::sqrt(d1);
        l[7] = (a[7] - l[6] * l[3]) / l[4];
        const double d2 = a[8] - l[6] * l[6] - l[7] * l[7];
        if (d2 > 0.0) {
          l[8] = std::sqrt(d2);
          return l;
        }
      }
    }
    for (int i = 0; i < 3; ++i) a[4 * i] += kCovFloor * (1 << attempt);
  }
  throw std::runtime_error("cholesky3: matrix not positive definite");
}

// Solves L z = r by forward substitution.
Vec3 forward_solve(const Mat3& l, const Vec3& r) {
  Vec3 z;
  z[0] = r[0] / l[0];
  z[1] = (r[1] - l[3] * z[0]) / l[4];
  z[2] = (r[2] - l[6] * z[0] - l[7] * z[1]) / l[8];
  return z;
}

// Clamps the eigenvalues of a symmetric matrix at kCovFloor via a Jacobi
// eigendecomposition. Clamping is the exact M step of the floor-constrained
// model, so EM keeps its monotone log-likelihood; adding the floor on the
// diagonal instead would break that by ~1e-4 per iteration.
Mat3 floored(const Mat3& cov) {
  Mat3 a = cov;
  Mat3 v{1, 0, 0, 0, 1, 0, 0, 0, 1};
  for (int sweep = 0; sweep < 64; ++sweep) {
    // Largest off-diagonal element.
    int p = 0, q = 1;
    double apq = std::fabs(a[1]);
    if (std::fabs(a[2]) > apq) { p = 0; q = 2; apq = std::fabs(a[2]); }
    if (std::fabs(a[5]) > apq) { p = 1; q = 2; apq = std::fabs(a[5]); }
    const double scale = std::fabs(a[0]) + std::fabs(a[4]) + std::fabs(a[8]);
    if (apq <= 1e-15 * (scale + 1e-300)) break;

    const double app = a[4 * p], aqq = a[4 * q], apq_v = a[3 * p + q];
    const double theta = (aqq - app) / (2.0 * apq_v);
    const double t = (theta >= 0 ? 1.0 : -1.0) /
                     (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    // Rotate rows/columns p and q of a, and the eigenvector columns of v.
    Mat3 r{1, 0, 0, 0, 1, 0, 0, 0, 1};
    r[3 * p + p] = c;
    r[3 * q + q] = c;
    r[3 * p + q] = s;
    r[3 * q + p] = -s;
    auto mul = [](const Mat3& x, const Mat3& y) {
      Mat3 z{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) z[3 * i + j] += x[3 * i + k] * y[3 * k + j];
      return z;
    };
    auto transpose = [](const Mat3& x) {
      return Mat3{x[0], x[3], x[6], x[1], x[4], x[7], x[2], x[5], x[8]};
    };
    a = mul(transpose(r), mul(a, r));
    a[3 * p + q] = a[3 * q + p] = 0.0;
    v = mul(v, r);
  }

  const Vec3 eig{std::max(a[0], kCovFloor), std::max(a[4], kCovFloor),
                 std::max(a[8], kCovFloor)};
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double sum = 0.0;
      for (int k = 0; k < 3; ++k) sum += v[3 * i + k] * eig[k] * v[3 * j + k];
      out[3 * i + j] = out[3 * j + i] = sum;
    }
  return out;
}

}  // namespace

Gmm::Gmm(std::vector<GmmComponent> comps) : comps_(std::move(comps)) {
  if (comps_.empty()) throw std::invalid_argument("Gmm: no components");
  double sum = 0.0;
  for (const auto& c : comps_) {
    if (!(c.weight > 0.0)) throw std::invalid_argument("Gmm: weight <= 0");
    sum += c.weight;
  }
  for (auto& c : comps_) c.weight /= sum;
  cached_.reserve(comps_.size());
  for (const auto& c : comps_) {
    Cached cc;
    cc.chol = cholesky3(c.cov);
    cc.log_norm =
        -1.5 * kLog2Pi -
        (std::log(cc.chol[0]) + std::log(cc.chol[4]) + std::log(cc.chol[8]));
    cached_.push_back(cc);
  }
}

double Gmm::pdf(const Vec3& x) const {
  double p = 0.0;
  for (size_t k = 0; k < comps_.size(); ++k) {
    const Vec3 r = {x[0] - comps_[k].mean[0], x[1] - comps_[k].mean[1],
                    x[2] - comps_[k].mean[2]};
    const Vec3 z = forward_solve(cached_[k].chol, r);
    const double quad = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
    p += comps_[k].weight * std::exp(cached_[k].log_norm - 0.5 * quad);
  }
  return p;
}

Vec3 Gmm::sample(Rng& rng) const {
  double u = rng.uniform();
  size_t k = 0;
  for (; k + 1 < comps_.size(); ++k) {
    if (u < comps_[k].weight) break;
    u -= comps_[k].weight;
  }
  const Vec3 e = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
  const Mat3& l = cached_[k].chol;
  return {comps_[k].mean[0] + l[0] * e[0],
          comps_[k].mean[1] + l[3] * e[0] + l[4] * e[1],
          comps_[k].mean[2] + l[6] * e[0] + l[7] * e[1] + l[8] * e[2]};
}

double gmm_mean_log_likelihood(const Gmm& g, std::span<const Vec3> samples) {
  double ll = 0.0;
  for (const auto& x : samples)
    ll += std::log(std::max(g.pdf(x), 1e-300));
  return ll / double(samples.size());
}

Gmm fit_gmm(std::span<const Vec3> samples, int k, uint64_t seed, int max_iters,
            double tol) {
  const int n = int(samples.size());
  if (n == 0) throw std::invalid_argument("fit_gmm: no samples");
  if (k < 1) throw std::invalid_argument("fit_gmm: k < 1");

  // A pixel is a delta in color space; with fewer samples than requested
  // components, represent each sample by one near-delta Gaussian.
  if (n < k) {
    std::vector<GmmComponent> comps(n);
    for (int i = 0; i < n; ++i) {
      comps[i].weight = 1.0 / n;
      comps[i].mean = samples[i];
      comps[i].cov = floored(Mat3{});
    }
    return Gmm(std::move(comps));
  }

  Rng rng(seed);

  // k-means++ seeding.
  std::vector<Vec3> centers;
  centers.push_back(samples[rng.uniform_int(n)]);
  std::vector<double> d2(n, 0.0);
  while (int(centers.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) {
          const double d = samples[i][j] - c[j];
          s += d * d;
        }
        best = std::min(best, s);
      }
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      centers.push_back(samples[rng.uniform_int(n)]);
      continue;
    }
    double u = rng.uniform() * total;
    int pick = n - 1;
    for (int i = 0; i < n; ++i) {
      u -= d2[i];
      if (u <= 0.0) {
        pick = i;
        break;
      }
    }
    centers.push_back(samples[pick]);
  }

  // Shared initial covariance: overall sample covariance, floored.
  Vec3 mean_all{};
  for (const auto& x : samples)
    for (int j = 0; j < 3; ++j) mean_all[j] += x[j];
  for (int j = 0; j < 3; ++j) mean_all[j] /= n;
  Mat3 cov_all{};
  for (const auto& x : samples) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        cov_all[3 * r + c] += (x[r] - mean_all[r]) * (x[c] - mean_all[c]);
  }
  for (auto& v : cov_all) v /= n;

  std::vector<GmmComponent> comps(k);
  for (int j = 0; j < k; ++j) {
    comps[j].weight = 1.0 / k;
    comps[j].mean = centers[j];
    comps[j].cov = floored(cov_all);
  }

  std::vector<double> resp(size_t(n) * k);
  std::vector<double> lp(k);
  double prev_ll = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < max_iters; ++iter) {
    // E step in log domain.
    double ll = 0.0;
    std::vector<double> logw(k), lognorm(k);
    std::vector<Mat3> chols(k);
    for (int j = 0; j < k; ++j) {
      logw[j] = std::log(comps[j].weight);
      chols[j] = cholesky3(comps[j].cov);
      lognorm[j] = -1.5 * kLog2Pi - (std::log(chols[j][0]) +
                                     std::log(chols[j][4]) +
                                     std::log(chols[j][8]));
    }
    for (int i = 0; i < n; ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        const Vec3 r = {samples[i][0] - comps[j].mean[0],
                        samples[i][1] - comps[j].mean[1],
                        samples[i][2] - comps[j].mean[2]};
        const Vec3 z = forward_solve(chols[j], r);
        lp[j] = logw[j] + lognorm[j] -
                0.5 * (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
        mx = std::max(mx, lp[j]);
      }
      double sum = 0.0;
      for (int j = 0; j < k; ++j) sum += std::exp(lp[j] - mx);
      const double lse = mx + std::log(sum);
      ll += lse;
      for (int j = 0; j < k; ++j) resp[size_t(i) * k + j] = std::exp(lp[j] - lse);
    }
    ll /= n;

    // M step.
    for (int j = 0; j < k; ++j) {
      double nk = 0.0;
      Vec3 mu{};
      for (int i = 0; i < n; ++i) {
        const double r = resp[size_t(i) * k + j];
        nk += r;
        for (int c = 0; c < 3; ++c) mu[c] += r * samples[i][c];
      }
      if (nk < 1e-9 * n) {
        // Dead component: restart at a random sample.
        comps[j].weight = 1.0 / n;
        comps[j].mean = samples[rng.uniform_int(n)];
        comps[j].cov = floored(Mat3{});
        continue;
      }
      for (int c = 0; c < 3; ++c) mu[c] /= nk;
      Mat3 cov{};
      for (int i = 0; i < n; ++i) {
        const double r = resp[size_t(i) * k + j];
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            cov[3 * a + b] += r * (samples[i][a] - mu[a]) * (samples[i][b] - mu[b]);
      }
      for (auto& v : cov) v /= nk;
      comps[j].weight = nk / n;
      comps[j].mean = mu;
      comps[j].cov = floored(cov);
    }

    if (iter > 0 && std::fabs(ll - prev_ll) < tol) break;
    prev_ll = ll;
  }

  return Gmm(std::move(comps));
}

double hellinger_distance(const Gmm& p, const Gmm& q, uint64_t seed,
                          int n_samples) {
  Rng rng(seed);
  double bc = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const Vec3 x = (rng.uniform() < 0.5) ? p.sample(rng) : q.sample(rng);
    const double dp = p.pdf(x);
    const double dq = q.pdf(x);
    const double m = 0.5 * (dp + dq);
    if (m > 0.0) bc += std::sqrt(dp * dq) / m;
  }
  bc /= n_samples;
  const double l2 = std::clamp(1.0 - bc, 0.0, 1.0);
  return std::sqrt(l2);
}

}  // namespace ssamc
