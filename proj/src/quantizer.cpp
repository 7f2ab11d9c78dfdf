#include "qgmi/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qgmi/errors.hpp"

namespace qgmi::quant {
namespace {

bool strictly_increasing_positive(const std::vector<double>& v) {
  double prev = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || !(x > prev)) return false;
    prev = x;
  }
  return true;
}

}  // namespace

SymmetricQuantizer::SymmetricQuantizer(std::vector<double> thresholds, std::vector<double> points)
    : thresholds_(std::move(thresholds)), points_(std::move(points)) {
  if (points_.empty()) throw DomainError("SymmetricQuantizer: need K >= 1 points");
  if (thresholds_.size() + 1 != points_.size()) {
    throw DomainError("SymmetricQuantizer: expected K-1 thresholds for K points, got " +
                      std::to_string(thresholds_.size()) + " and " +
                      std::to_string(points_.size()));
  }
  if (!strictly_increasing_positive(thresholds_)) {
    throw DomainError("SymmetricQuantizer: thresholds must be finite, positive, increasing");
  }
  if (!strictly_increasing_positive(points_)) {
    throw DomainError("SymmetricQuantizer: points must be finite, positive, increasing");
  }
}

double SymmetricQuantizer::resolution_bits() const { return std::log2(2.0 * levels()); }

double SymmetricQuantizer::cell_upper(int k) const {
  return k + 1 == levels() ? std::numeric_limits<double>::infinity() : thresholds_[k];
}

SymmetricQuantizer SymmetricQuantizer::scaled_points(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scaled_points: need c > 0");
  std::vector<double> p(points_);
  for (double& x : p) x *= c;
  return {thresholds_, std::move(p)};
}

UniformSpec UniformSpec::from_loading(int levels_K, double loading_factor) {
  if (levels_K < 1) throw DomainError("UniformSpec: levels_K must be >= 1");
  UniformSpec s{levels_K, loading_factor / levels_K};
  s.validate();
  return s;
}

void UniformSpec::validate() const {
  if (levels_K < 1) throw DomainError("UniformSpec: levels_K must be >= 1");
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("UniformSpec: step must be > 0");
}

SymmetricQuantizer make_uniform(int levels_K, double step) {
  UniformSpec{levels_K, step}.validate();
  std::vector<double> thresholds;
  std::vector<double> points;
  thresholds.reserve(levels_K - 1);
  points.reserve(levels_K);
  for (int k = 1; k < levels_K; ++k) thresholds.push_back(k * step);
  for (int k = 1; k <= levels_K; ++k) points.push_back((k - 0.5) * step);
  return {std::move(thresholds), std::move(points)};
}

SymmetricQuantizer make_uniform(const UniformSpec& spec) {
  return make_uniform(spec.levels_K, spec.step);
}

int cell_index(const SymmetricQuantizer& q, double v) {
  const auto t = q.thresholds();
  // number of thresholds <= |v|  (lower-inclusive cells)
  return static_cast<int>(std::upper_bound(t.begin(), t.end(), std::abs(v)) - t.begin());
}

double quantize(const SymmetricQuantizer& q, double v) {
  if (!std::isfinite(v)) throw DomainError("quantize: sample must be finite");
  const double r = q.points()[cell_index(q, v)];
  return std::signbit(v) && v != 0.0 ? -r : r;
}

SymmetricQuantizer normalize_gain(std::span<const double> raw_thresholds,
                                  std::span<const double> raw_points, double gain) {
  if (!(gain > 0.0) || !std::isfinite(gain)) throw DomainError("normalize_gain: need g > 0");
  std::vector<double> t(raw_thresholds.begin(), raw_thresholds.end());
  std::vector<double> p(raw_points.begin(), raw_points.end());
  for (double& x : t) x /= gain;
  for (double& x : p) x /= gain;
  return {std::move(t), std::move(p)};
}

}  // namespace qgmi::quant
