#pragma once

// Gaussian special functions, closed-form tail integrals and scalar
// root-finding / optimization used by every analytic formula in qgmi.
//
// All rates inside the library are in nats. Conversion to bits happens
// only at presentation boundaries (see to_bits()).

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>

namespace qgmi::numerics {

inline constexpr double kSqrt2Pi = 2.506628274631000502415765284811;
inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

struct Tolerance {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_iter = 200;

  /// Throws DomainError if no tolerance is positive or max_iter < 1.
  void validate() const;
  double width(double x) const { return abs_tol + rel_tol * std::abs(x); }
};

struct Interval {
  double lo;
  double hi;
};

struct Bounds {
  double lower;
  double upper;
};

struct Extremum {
  double x;
  double value;
};

using ScalarFn = std::function<double(double)>;

/// Standard normal density phi(t).
double std_normal_pdf(double t);

/// Gaussian tail probability Q(t) = P(W > t), W ~ N(0,1).
///
/// Evaluated through erfc with the rounding error of t/sqrt(2) folded back
/// in, so the relative error stays near machine precision up to the
/// underflow point (t ~ 38).
double q_function(double t);

/// Two-sided bound  t*phi(t)/(t^2+1) < Q(t) < phi(t)/t  for t > 0.
Bounds q_bounds(double t);

/// Integral of t*Q(t) over [L, inf), closed form ((1-L^2)Q(L) + L phi(L))/2.
double tail_integral_tq(double L);

/// Integral of phi(t) - t*Q(t) over [L, inf), closed form
/// ((1+L^2)Q(L) - L phi(L))/2.
double tail_integral_phi_minus_tq(double L);

/// Log of P(chi'^2 <= x) for a noncentral chi-square with 2*half_dof
/// degrees of freedom and noncentrality lambda. Stable deep into the lower
/// tail (returns values far below log(DBL_MIN)).
double log_noncentral_chi2_cdf(double x, int half_dof, double lambda);

/// Log of the regularized lower incomplete gamma function P(a, y).
double log_gamma_p(double a, double y);

/// Brent's method. Requires a sign change over the bracket.
double find_root(const ScalarFn& f, Interval bracket, const Tolerance& tol = {});

/// Golden-section maximizer for a unimodal f.
Extremum maximize_scalar(const ScalarFn& f, Interval bracket, const Tolerance& tol = {});

inline double to_bits(double nats) { return nats / std::numbers::ln2; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace qgmi::numerics
