#pragma once

// Symmetric 2K-level scalar quantizers in the normalized (unit-variance
// input) domain.

#include <span>
#include <vector>

namespace qgmi::quant {

/// Symmetric quantizer with output levels {+-r_1, ..., +-r_K}.
///
/// thresholds holds l_1..l_{K-1}; l_0 = 0 and l_K = +inf are implicit.
/// Cell k (1-based) is l_{k-1} <= |v| < l_k and maps to sgn(v) * r_k.
/// Immutable after construction.
class SymmetricQuantizer {
 public:
  /// Throws DomainError unless thresholds and points are strictly
  /// increasing, strictly positive, finite, and |points| = |thresholds| + 1.
  SymmetricQuantizer(std::vector<double> thresholds, std::vector<double> points);

  int levels() const { return static_cast<int>(points_.size()); }
  double resolution_bits() const;
  std::span<const double> thresholds() const { return thresholds_; }
  std::span<const double> points() const { return points_; }

  /// Lower edge of cell k (0-based, k in [0, K)).
  double cell_lower(int k) const { return k == 0 ? 0.0 : thresholds_[k - 1]; }
  /// Upper edge of cell k; +inf for the outermost cell.
  double cell_upper(int k) const;

  /// Copy with every representation point multiplied by c > 0.
  SymmetricQuantizer scaled_points(double c) const;

  friend bool operator==(const SymmetricQuantizer&, const SymmetricQuantizer&) = default;

 private:
  std::vector<double> thresholds_;
  std::vector<double> points_;
};

/// Uniform mid-rise quantizer parameters; loading factor L = K * step.
struct UniformSpec {
  int levels_K;
  double step;

  static UniformSpec from_loading(int levels_K, double loading_factor);
  double loading_factor() const { return levels_K * step; }
  void validate() const;
};

/// Thresholds k*step, points (k - 1/2)*step.
SymmetricQuantizer make_uniform(int levels_K, double step);
SymmetricQuantizer make_uniform(const UniformSpec& spec);

/// Apply q to a normalized sample. v = 0 maps to +r_1.
double quantize(const SymmetricQuantizer& q, double v);

/// Index (0-based) of the cell containing |v|.
int cell_index(const SymmetricQuantizer& q, double v);

/// Normalized equivalent of a gain-controlled quantizer: l_k/g, y_k/g.
SymmetricQuantizer normalize_gain(std::span<const double> raw_thresholds,
                                  std::span<const double> raw_points, double gain);

}  // namespace qgmi::quant
