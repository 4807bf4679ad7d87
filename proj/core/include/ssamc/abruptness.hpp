#ifndef SSAMC_ABRUPTNESS_HPP
#define SSAMC_ABRUPTNESS_HPP

#include "ssamc/image.hpp"

namespace ssamc {

struct AbruptnessReport {
  double g = 0.0;  // global abrupt degree
  double l = 0.0;  // local abrupt degree
  double a = 0.0;  // combined score
  bool abrupt = false;
};

/// Divides the match-error image pointwise by (dilated edge map + 1) so edge
/// regions, where matching errors run high regardless of motion, count half.
ScalarMap refined_error(const ScalarMap& gamma, const ScalarMap& edges);

/// sum(R) / (max(R) * pixel count), in [0, 1]; 0 when R is identically zero.
double global_abrupt_degree(const ScalarMap& r);

/// Abrupt iff g > t_threshold, or the combined score
/// a = 0.55 + g*(l - 0.45) exceeds 0.5 strictly.
AbruptnessReport abruptness_decision(double g, double l, double t_threshold);

}  // namespace ssamc

#endif
