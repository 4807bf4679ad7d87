#include "ssamc/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ssamc {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

double norm_pdf(double d, double sigma) {
  return std::exp(-0.5 * d * d / (sigma * sigma)) / (sigma * kSqrt2Pi);
}

double space_rho_total(const std::vector<double>& rho,
                       const SampleSpace& space) {
  double total = 0.0;
  for (const int c : space.cells) total += rho[c];
  return total;
}

double dos_entropy(const DensityOfStates& dos, const SampleSpace& space) {
  double mx = -std::numeric_limits<double>::infinity();
  for (const int c : space.cells) mx = std::max(mx, dos.log_omega[c]);
  double z = 0.0;
  for (const int c : space.cells) z += std::exp(dos.log_omega[c] - mx);
  double h = 0.0;
  for (const int c : space.cells) {
    const double p = std::exp(dos.log_omega[c] - mx) / z;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace

DensityOfStates init_dos(const std::vector<double>& lambda, double tau) {
  DensityOfStates dos;
  dos.log_omega.resize(lambda.size());
  for (size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < 0.0) throw std::invalid_argument("init_dos: lambda < 0");
    dos.log_omega[i] = -tau * lambda[i];
  }
  return dos;
}

std::vector<double> region_selection_probs(const std::vector<double>& lambda,
                                           double theta) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("region_selection_probs: theta not in (0,1)");
  std::vector<double> rho(lambda.size());
  double sum = 0.0;
  for (size_t i = 0; i < lambda.size(); ++i) {
    rho[i] = lambda[i] > 0.0 ? theta : 1.0 - theta;
    sum += rho[i];
  }
  for (auto& v : rho) v /= sum;
  return rho;
}

SampleSpace restrict_sample_space(bool abrupt, const TargetState& prev_best,
                                  const RegionGrid& grid) {
  SampleSpace s;
  s.member.assign(grid.m(), 0);
  if (abrupt) {
    s.cells.resize(grid.m());
    for (int i = 0; i < grid.m(); ++i) {
      s.cells[i] = i;
      s.member[i] = 1;
    }
    return s;
  }
  const int j = grid.cell_index(prev_best.x, prev_best.y);
  const int r0 = j / grid.cols;
  const int c0 = j % grid.cols;
  for (int r = std::max(0, r0 - 2); r <= std::min(grid.rows - 1, r0 + 2); ++r) {
    for (int c = std::max(0, c0 - 2); c <= std::min(grid.cols - 1, c0 + 2);
         ++c) {
      const int i = r * grid.cols + c;
      s.cells.push_back(i);
      s.member[i] = 1;
    }
  }
  return s;
}

TargetState propose(const TargetState& current, const SamplerConfig& cfg,
                    const std::vector<double>& rho, const SampleSpace& space,
                    const RegionGrid& grid, Rng& rng) {
  const double total = space_rho_total(rho, space);
  for (int attempt = 0; attempt < 100; ++attempt) {
    TargetState cand = current;
    if (rng.uniform() < cfg.beta) {
      cand.x = current.x + cfg.sigma_x * rng.gaussian();
      cand.y = current.y + cfg.sigma_y * rng.gaussian();
    } else {
      double u = rng.uniform() * total;
      int cell = space.cells.back();
      for (const int c : space.cells) {
        u -= rho[c];
        if (u <= 0.0) {
          cell = c;
          break;
        }
      }
      const Rect b = grid.cell_bounds(cell);
      cand.x = b.x + rng.uniform() * b.w;
      cand.y = b.y + rng.uniform() * b.h;
    }
    if (cfg.update_scale) cand.s = current.s + cfg.sigma_s * rng.gaussian();
    if (cand.x >= 0.0 && cand.x < grid.image_w && cand.y >= 0.0 &&
        cand.y < grid.image_h && cand.s > 0.0)
      return cand;
  }
  return current;
}

double proposal_density(const TargetState& from, const TargetState& to,
                        const SamplerConfig& cfg,
                        const std::vector<double>& rho,
                        const SampleSpace& space, const RegionGrid& grid) {
  // The scale coordinate moves by the same Gaussian in both branches, so its
  // density multiplies the whole mixture (and is omitted when scale is
  // locked, where s' == s identically).
  const double gs =
      cfg.update_scale ? norm_pdf(to.s - from.s, cfg.sigma_s) : 1.0;
  const double gauss =
      norm_pdf(to.x - from.x, cfg.sigma_x) * norm_pdf(to.y - from.y, cfg.sigma_y);
  double adaptive = 0.0;
  const int j = grid.cell_index(to.x, to.y);
  if (space.contains(j)) {
    const double total = space_rho_total(rho, space);
    adaptive = rho[j] / total / grid.cell_area(j);
  }
  return gs * (cfg.beta * gauss + (1.0 - cfg.beta) * adaptive);
}

double acceptance_prob(const TargetState& cand, const TargetState& curr,
                       double post_cand, double post_curr,
                       const ConfidenceGrid& conf, const DensityOfStates& dos,
                       double q_fwd, double q_bwd, double epsilon_lambda) {
  if (cand == curr) return 1.0;
  const int jc = conf.grid.cell_index(cand.x, cand.y);
  const int ju = conf.grid.cell_index(curr.x, curr.y);
  const double lc = std::max(conf.lambda[jc], epsilon_lambda);
  const double lu = std::max(conf.lambda[ju], epsilon_lambda);
  const double log_ratio = std::log(post_cand) - std::log(post_curr) +
                           std::log(lc) - std::log(lu) -
                           (dos.log_omega[jc] - dos.log_omega[ju]) +
                           std::log(q_bwd) - std::log(q_fwd);
  if (!std::isfinite(log_ratio)) return 0.0;
  return std::min(1.0, std::exp(log_ratio));
}

SmoothingKernel::SmoothingKernel(const RegionGrid& grid, double c) : m_(grid.m()) {
  if (!(c > 0.0)) throw std::invalid_argument("SmoothingKernel: c must be > 0");
  w_.assign(size_t(m_) * m_, 0.0);
  row_sum_.assign(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    const auto ci = grid.cell_center(i);
    for (int j = 0; j < m_; ++j) {
      const auto cj = grid.cell_center(j);
      const double z = std::hypot(ci[0] - cj[0], ci[1] - cj[1]);
      const double w = z < c ? std::exp(-0.5 * z * z) : 0.0;
      w_[size_t(i) * m_ + j] = w;
      row_sum_[i] += w;
    }
  }
}

std::vector<double> SmoothingKernel::apply(const std::vector<int>& r,
                                           int n) const {
  if (int(r.size()) != m_)
    throw std::invalid_argument("SmoothingKernel: size mismatch");
  std::vector<double> f(m_, 0.0);
  for (int j = 0; j < m_; ++j) {
    if (r[j] == 0) continue;
    const double rj = double(r[j]) / double(n);
    for (int i = 0; i < m_; ++i) f[i] += w_[size_t(i) * m_ + j] * rj;
  }
  for (int i = 0; i < m_; ++i) f[i] /= row_sum_[i];
  return f;
}

std::vector<double> smoothed_frequency(const std::vector<int>& r, int n,
                                       const RegionGrid& grid, double c) {
  return SmoothingKernel(grid, c).apply(r, n);
}

DensityOfStates update_dos(const DensityOfStates& dos,
                           const std::vector<double>& f,
                           const std::vector<double>& pi, double gain,
                           DosUpdateMode mode) {
  if (f.size() != dos.log_omega.size() || pi.size() != dos.log_omega.size())
    throw std::invalid_argument("update_dos: size mismatch");
  DensityOfStates out = dos;
  for (size_t i = 0; i < out.log_omega.size(); ++i) {
    const double step = gain * (f[i] - pi[i]);
    if (mode == DosUpdateMode::kLogGain) {
      out.log_omega[i] += step;
    } else {
      // log(w + exp(step)) without leaving the log domain.
      const double a = out.log_omega[i];
      const double hi = std::max(a, step);
      out.log_omega[i] = hi + std::log1p(std::exp(std::min(a, step) - hi));
    }
  }
  return out;
}

ChainResult run_chain(const PosteriorFn& posterior, const ConfidenceGrid& conf,
                      const SampleSpace& space, const SamplerConfig& cfg,
                      const TargetState& init, Rng& rng) {
  const RegionGrid& grid = conf.grid;
  const int m = grid.m();
  if (space.cells.empty())
    throw std::invalid_argument("run_chain: empty sample space");
  if (!cfg.pi_target.empty() && int(cfg.pi_target.size()) != m)
    throw std::invalid_argument("run_chain: pi_target size mismatch");

  // Desired sampling frequencies, renormalized over the active space.
  std::vector<double> pi(m, 0.0);
  double pi_total = 0.0;
  for (const int c : space.cells) {
    pi[c] = cfg.pi_target.empty() ? 1.0 : cfg.pi_target[c];
    pi_total += pi[c];
  }
  for (const int c : space.cells)
    pi[c] = pi_total > 0.0 ? pi[c] / pi_total : 1.0 / double(space.cells.size());

  DensityOfStates dos = init_dos(conf.lambda, cfg.tau);
  const std::vector<double> rho = region_selection_probs(conf.lambda, cfg.theta);

  TargetState cur = init;
  if (!space.contains(grid.cell_index(cur.x, cur.y))) {
    double best = std::numeric_limits<double>::infinity();
    int best_cell = space.cells.front();
    for (const int c : space.cells) {
      const auto ctr = grid.cell_center(c);
      const double d = (ctr[0] - cur.x) * (ctr[0] - cur.x) +
                       (ctr[1] - cur.y) * (ctr[1] - cur.y);
      if (d < best) {
        best = d;
        best_cell = c;
      }
    }
    const auto ctr = grid.cell_center(best_cell);
    cur.x = ctr[0];
    cur.y = ctr[1];
  }

  auto eval = [&](const TargetState& st) {
    const double p = posterior(st);
    if (!std::isfinite(p) || !(p > 0.0))
      throw std::runtime_error("run_chain: posterior evaluator failed");
    return p;
  };
  double post_cur = eval(cur);

  ChainResult res;
  res.samples.reserve(size_t(cfg.k_iters) * cfg.n_per_iter);

  SmoothingKernel kernel(grid, cfg.smooth_c);
  std::vector<int> r(m);

  for (int k = 1; k <= cfg.k_iters; ++k) {
    std::fill(r.begin(), r.end(), 0);
    int accepts = 0;
    for (int j = 0; j < cfg.n_per_iter; ++j) {
      const TargetState cand = propose(cur, cfg, rho, space, grid, rng);
      const double q_fwd = proposal_density(cur, cand, cfg, rho, space, grid);
      const double q_bwd = proposal_density(cand, cur, cfg, rho, space, grid);
      const double post_cand = eval(cand);
      const double alpha =
          acceptance_prob(cand, cur, post_cand, post_cur, conf, dos, q_fwd,
                          q_bwd, cfg.epsilon_lambda);
      if (!(q_fwd > 0.0) || !(q_bwd > 0.0)) ++res.nonfinite_rejects;
      if (alpha >= 1.0 || rng.uniform() < alpha) {
        cur = cand;
        post_cur = post_cand;
        ++accepts;
      }
      res.samples.emplace_back(cur, post_cur);
      ++r[grid.cell_index(cur.x, cur.y)];
    }
    if (!cfg.freeze_dos) {
      const std::vector<double> f = kernel.apply(r, cfg.n_per_iter);
      dos = update_dos(dos, f, pi, cfg.gain(k), cfg.dos_mode);
    }
    res.diags.push_back({accepts, std::log(post_cur), dos_entropy(dos, space)});
  }

  res.dos = std::move(dos);
  return res;
}

}  // namespace ssamc
