#include "qgmi/highres.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qgmi/errors.hpp"
#include "qgmi/gmi.hpp"

namespace qgmi::highres {
namespace {

using numerics::Interval;
using numerics::q_function;
using numerics::std_normal_pdf;
using numerics::Tolerance;
using quant::UniformSpec;

const double kSqrtTwoOverPi = std::sqrt(2.0 / std::numbers::pi);

void require_resolution(int levels_K, int min_K, const char* who) {
  if (levels_K < min_K) {
    throw DomainError(std::string(who) + ": levels_K must be >= " + std::to_string(min_K));
  }
}

double gamma_at(int K, double L) { return gmi::gamma(UniformSpec::from_loading(K, L)); }

// Widen a window around x until the residual changes sign.
template <class Residual>
bool sign_change_bracket(const Residual& residual, double x, Interval limits, Interval& out) {
  const double r0 = residual(x);
  if (r0 == 0.0) {
    out = {x, x};
    return true;
  }
  for (double w = 1e-7 * (1.0 + x); w < 1.0; w *= 4.0) {
    const double lo = std::max(limits.lo, x - w);
    const double hi = std::min(limits.hi, x + w);
    if ((residual(lo) > 0.0) != (residual(hi) > 0.0)) {
      out = {lo, hi};
      return true;
    }
  }
  return false;
}

// Golden-section estimate x refined to a sign change of residual near it.
template <class Residual>
double polish(const Residual& residual, double x, Interval limits, const Tolerance& tol) {
  Interval window{};
  if (!sign_change_bracket(residual, x, limits, window)) return x;
  if (window.lo == window.hi) return window.lo;
  return numerics::find_root(residual, window, tol);
}

// E[W q(W)] - E[q(W)^2] for the mid-rise quantizer, divided by the step.
double mse_stationarity(int K, double L) {
  const double l = L / K;
  numerics::CompensatedSum sum;
  for (int k = 0; k < K; ++k) {
    const double a = k * l;
    const double c = k + 0.5;
    double mass = q_function(a);
    double density = std_normal_pdf(a);
    if (k + 1 < K) {
      mass -= q_function((k + 1) * l);
      density -= std_normal_pdf((k + 1) * l);
    }
    sum.add(c * (density - c * l * mass));
  }
  return sum.value();
}

}  // namespace

double gamma_bar(double L) {
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("gamma_bar: requires L > 0");
  const double q = q_function(L);
  const double num = numerics::tail_integral_phi_minus_tq(L) - q * q;
  const double den = 0.25 - numerics::tail_integral_tq(L);
  return num / den;
}

double overload_loss_approx(double L, double snr) {
  if (!(L > 0.0)) throw DomainError("overload_loss_approx: requires L > 0");
  if (!(snr >= 0.0)) throw DomainError("overload_loss_approx: requires snr >= 0");
  return 4.0 * std::exp(-0.5 * L * L) / (L * L * L * L) * snr;
}

double granular_loss_approx(double step, double snr) {
  if (!(step > 0.0)) throw DomainError("granular_loss_approx: requires step > 0");
  if (!(snr >= 0.0)) throw DomainError("granular_loss_approx: requires snr >= 0");
  return step * step / 12.0 * snr;
}

double stationarity_residual(const UniformSpec& spec) {
  return gmi::coeff_a_uniform(spec) / gmi::coeff_b_uniform(spec) - kSqrtTwoOverPi;
}

double scaling_law(int levels_K) {
  require_resolution(levels_K, 1, "scaling_law");
  return 2.0 * std::sqrt(std::log(2.0 * levels_K));
}

Interval loading_bracket(int levels_K) { return {0.5, scaling_law(levels_K) + 3.0}; }

double loading_estimate(int levels_K, const Tolerance& tol) {
  require_resolution(levels_K, 2, "loading_estimate");
  const double rhs = 4.0 * std::log(2.0 * levels_K) + std::log(18.0 / std::numbers::pi);
  // L^2 + 6 ln L is strictly increasing on L > 0.
  const auto f = [rhs](double L) { return L * L + 6.0 * std::log(L) - rhs; };
  double L = numerics::find_root(f, loading_bracket(levels_K), tol);
  for (int i = 0; i < 3; ++i) L -= f(L) / (2.0 * L + 6.0 / L);
  return L;
}

double mse_uniform(const UniformSpec& spec) {
  spec.validate();
  // Per cell [a, b) with point r, the antiderivative of (t-r)^2 phi(t) is
  // (2r - t) phi(t) + (1 + r^2) Phi(t).
  const int K = spec.levels_K;
  const double l = spec.step;
  numerics::CompensatedSum sum;
  for (int k = 0; k < K; ++k) {
    const double a = k * l;
    const double r = (k + 0.5) * l;
    double cell = (1.0 + r * r) * q_function(a) - (2.0 * r - a) * std_normal_pdf(a);
    if (k + 1 < K) {
      const double b = (k + 1) * l;
      cell += (2.0 * r - b) * std_normal_pdf(b) - (1.0 + r * r) * q_function(b);
    }
    sum.add(cell);
  }
  return 2.0 * sum.value();
}

double mse_optimal_loading(int levels_K, const Tolerance& tol) {
  require_resolution(levels_K, 2, "mse_optimal_loading");
  const Interval bracket = loading_bracket(levels_K);
  const auto best = numerics::maximize_scalar(
      [levels_K](double L) { return -mse_uniform(UniformSpec::from_loading(levels_K, L)); }, bracket, tol);
  return polish([levels_K](double L) { return mse_stationarity(levels_K, L); }, best.x, bracket, tol);
}

double one_bit_loading() { return 2.0 * kSqrtTwoOverPi; }

namespace {

struct LStar {
  double golden;
  double polished;
};

LStar solve_l_star(int levels_K, const Tolerance& tol) {
  require_resolution(levels_K, 2, "optimal_loading");
  const Interval bracket = loading_bracket(levels_K);
  const auto golden = numerics::maximize_scalar(
      [levels_K](double L) { return -gamma_at(levels_K, L); }, bracket, tol);
  const auto residual = [levels_K](double L) {
    return stationarity_residual(UniformSpec::from_loading(levels_K, L));
  };
  return {golden.x, polish(residual, golden.x, bracket, tol)};
}

}  // namespace

double optimal_loading_factor(int levels_K, const Tolerance& tol) {
  return solve_l_star(levels_K, tol).polished;
}

LoadingAnalysis optimal_loading(int levels_K, const Tolerance& tol, double reference_snr) {
  require_resolution(levels_K, 2, "optimal_loading");
  LoadingAnalysis out;
  out.levels_K = levels_K;
  out.reference_snr = reference_snr;
  const LStar star = solve_l_star(levels_K, tol);
  out.l_star_golden = star.golden;
  out.l_star = star.polished;
  out.step_star = out.l_star / levels_K;
  out.l_hat = loading_estimate(levels_K, tol);
  out.scaling_law = scaling_law(levels_K);
  out.gamma_at_star = gamma_at(levels_K, out.l_star);
  out.gmi_at_star = gmi::gmi_rate(out.gamma_at_star, reference_snr);
  out.gmi_at_hat = gmi::gmi_rate(gamma_at(levels_K, out.l_hat), reference_snr);
  out.l_mse = mse_optimal_loading(levels_K, tol);
  out.residual_at_star = stationarity_residual(UniformSpec::from_loading(levels_K, out.l_star));
  return out;
}

}  // namespace qgmi::highres
