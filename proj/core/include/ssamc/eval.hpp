#ifndef SSAMC_EVAL_HPP
#define SSAMC_EVAL_HPP

#include <vector>

#include "ssamc/types.hpp"

namespace ssamc {

/// Euclidean distance between box centers, in pixels.
double center_location_error(const Rect& result, const Rect& truth);

/// Intersection-over-union on continuous rectangle areas; 0 for disjoint
/// boxes.
double voc_overlap(const Rect& result, const Rect& truth);

/// Fraction of frames with CLE <= R, per threshold.
std::vector<double> precision_curve(const std::vector<double>& cle,
                                    const std::vector<double>& thresholds);
double precision_at(const std::vector<double>& cle, double r = 20.0);

/// Fraction of frames with VOR strictly above the threshold, per threshold.
std::vector<double> success_curve(const std::vector<double>& vor,
                                  const std::vector<double>& thresholds);

/// Trapezoid integral of values over thresholds, normalized by the threshold
/// range.
double auc_trapezoid(const std::vector<double>& thresholds,
                     const std::vector<double>& values);

std::vector<double> default_precision_thresholds();  // integers 0..50
std::vector<double> default_success_thresholds();    // 101 points in [0, 1]

}  // namespace ssamc

#endif
