#include "ssamc/eval.hpp"

#include <cmath>
#include <stdexcept>

namespace ssamc {

double center_location_error(const Rect& result, const Rect& truth) {
  return std::hypot(result.cx() - truth.cx(), result.cy() - truth.cy());
}

double voc_overlap(const Rect& result, const Rect& truth) {
  // Exact equality short-circuits so VOR(a, a) == 1 holds bit-exactly; the
  // rectangle arithmetic below rounds away from 1 otherwise.
  if (result.x == truth.x && result.y == truth.y && result.w == truth.w &&
      result.h == truth.h)
    return result.valid() ? 1.0 : 0.0;
  const double inter = intersect(result, truth).area();
  const double uni = result.area() + truth.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<double> precision_curve(const std::vector<double>& cle,
                                    const std::vector<double>& thresholds) {
  if (cle.empty()) throw std::invalid_argument("precision_curve: no frames");
  std::vector<double> out(thresholds.size());
  for (size_t i = 0; i < thresholds.size(); ++i) {
    long hits = 0;
    for (const double d : cle)
      if (d <= thresholds[i]) ++hits;
    out[i] = double(hits) / double(cle.size());
  }
  return out;
}

double precision_at(const std::vector<double>& cle, double r) {
  return precision_curve(cle, {r})[0];
}

std::vector<double> success_curve(const std::vector<double>& vor,
                                  const std::vector<double>& thresholds) {
  if (vor.empty()) throw std::invalid_argument("success_curve: no frames");
  std::vector<double> out(thresholds.size());
  for (size_t i = 0; i < thresholds.size(); ++i) {
    long hits = 0;
    for (const double v : vor)
      if (v > thresholds[i]) ++hits;
    out[i] = double(hits) / double(vor.size());
  }
  return out;
}

double auc_trapezoid(const std::vector<double>& thresholds,
                     const std::vector<double>& values) {
  if (thresholds.size() != values.size() || thresholds.size() < 2)
    throw std::invalid_argument("auc_trapezoid: bad inputs");
  double area = 0.0;
  for (size_t i = 1; i < thresholds.size(); ++i)
    area += 0.5 * (values[i] + values[i - 1]) *
            (thresholds[i] - thresholds[i - 1]);
  return area / (thresholds.back() - thresholds.front());
}

std::vector<double> default_precision_thresholds() {
  std::vector<double> t(51);
  for (int i = 0; i <= 50; ++i) t[i] = double(i);
  return t;
}

std::vector<double> default_success_thresholds() {
  std::vector<double> t(101);
  for (int i = 0; i <= 100; ++i) t[i] = double(i) / 100.0;
  return t;
}

}  // namespace ssamc
