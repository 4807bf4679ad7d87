#include "ssamc/abruptness.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssamc {

ScalarMap refined_error(const ScalarMap& gamma, const ScalarMap& edges) {
  if (gamma.width != edges.width || gamma.height != edges.height)
    throw std::invalid_argument("refined_error: dimension mismatch");
  ScalarMap dil = dilate3(edges);
  ScalarMap r(gamma.width, gamma.height);
  for (size_t i = 0; i < r.v.size(); ++i)
    r.v[i] = gamma.v[i] / (dil.v[i] + 1.0);
  return r;
}

double global_abrupt_degree(const ScalarMap& r) {
  double sum = 0.0, mx = 0.0;
  for (const double v : r.v) {
    sum += v;
    mx = std::max(mx, v);
  }
  if (mx <= 0.0) return 0.0;
  return sum / (mx * double(r.v.size()));
}

AbruptnessReport abruptness_decision(double g, double l, double t_threshold) {
  AbruptnessReport rep;
  rep.g = g;
  rep.l = l;
  rep.a = 0.55 + g * (l - 0.45);
  // sign(a - 0.5) must equal one, so a == 0.5 resolves to not-abrupt.
  rep.abrupt = (g > t_threshold) || (rep.a > 0.5);
  return rep;
}

}  // namespace ssamc
