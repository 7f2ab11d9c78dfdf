#include "qgmi/numerics.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "qgmi/errors.hpp"

namespace qgmi::numerics {
namespace {

constexpr double kSqrtHalfHi = 0.7071067811865476;
constexpr double kSqrtHalfLo = -4.833646656726457e-17;
constexpr double kTwoOverSqrtPi = 1.1283791670955126;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(double t, const char* who) {
  if (!std::isfinite(t)) {
    throw DomainError(std::string(who) + ": argument must be finite");
  }
}

// Lower series  P(a,y) = y^a e^-y / Gamma(a+1) * sum_k y^k / ((a+1)...(a+k)).
double log_gamma_p_series(double a, double y) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 100000; ++k) {
    term *= y / (a + k);
    sum += term;
    if (term < sum * kEps) break;
  }
  return a * std::log(y) - y - std::lgamma(a + 1.0) + std::log(sum);
}

// Upper continued fraction for Q(a,y), modified Lentz.
double gamma_q_fraction(double a, double y) {
  constexpr double tiny = 1e-300;
  double b = y + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(a * std::log(y) - y - std::lgamma(a)) * h;
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0)) {
    throw DomainError("Tolerance: need abs_tol, rel_tol >= 0 with at least one positive");
  }
  if (max_iter < 1) throw DomainError("Tolerance: max_iter must be >= 1");
}

double std_normal_pdf(double t) {
  require_finite(t, "std_normal_pdf");
  // t^2 split into hi + lo so the exponent is exact to ~1 ulp.
  const double hi = t * t;
  const double lo = std::fma(t, t, -hi);
  return kInvSqrt2Pi * std::exp(-0.5 * hi) * (1.0 - 0.5 * lo);
}

double q_function(double t) {
  require_finite(t, "q_function");
  const double x = t * kSqrtHalfHi;
  const double dx = std::fma(t, kSqrtHalfHi, -x) + t * kSqrtHalfLo;
  // erfc(x + dx) ~= erfc(x) - dx * 2/sqrt(pi) * exp(-x^2)
  return 0.5 * (std::erfc(x) - dx * kTwoOverSqrtPi * std::exp(-x * x));
}

Bounds q_bounds(double t) {
  require_finite(t, "q_bounds");
  if (t <= 0.0) throw DomainError("q_bounds: requires t > 0");
  const double p = std_normal_pdf(t);
  return {t * p / (t * t + 1.0), p / t};
}

double tail_integral_tq(double L) {
  require_finite(L, "tail_integral_tq");
  if (L < 0.0) throw DomainError("tail_integral_tq: requires L >= 0");
  return 0.5 * ((1.0 - L * L) * q_function(L) + L * std_normal_pdf(L));
}

double tail_integral_phi_minus_tq(double L) {
  require_finite(L, "tail_integral_phi_minus_tq");
  if (L < 0.0) throw DomainError("tail_integral_phi_minus_tq: requires L >= 0");
  return 0.5 * ((1.0 + L * L) * q_function(L) - L * std_normal_pdf(L));
}

double log_gamma_p(double a, double y) {
  if (!(a > 0.0) || !(y >= 0.0) || !std::isfinite(y)) {
    throw DomainError("log_gamma_p: requires a > 0, finite y >= 0");
  }
  if (y == 0.0) return -std::numeric_limits<double>::infinity();
  if (y < a + 1.0) return log_gamma_p_series(a, y);
  return std::log1p(-gamma_q_fraction(a, y));
}

double log_noncentral_chi2_cdf(double x, int half_dof, double lambda) {
  if (half_dof < 1 || !(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("log_noncentral_chi2_cdf: requires half_dof >= 1, lambda >= 0");
  }
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  const double y = 0.5 * x;
  const double mu = 0.5 * lambda;
  if (mu == 0.0) return log_gamma_p(half_dof, y);

  // Poisson mixture of central chi-squares, accumulated as a running
  // log-sum-exp. P(n+j, y) falls with j, so once past the Poisson mode the
  // terms only shrink.
  const double log_mu = std::log(mu);
  double best = -std::numeric_limits<double>::infinity();
  double scaled = 0.0;  // sum of exp(term - best)
  const long j_cap = static_cast<long>(mu + 60.0 * std::sqrt(mu) + 1000.0);
  for (long j = 0; j <= j_cap; ++j) {
    const double log_w = -mu + j * log_mu - std::lgamma(static_cast<double>(j) + 1.0);
    const double term = log_w + log_gamma_p(half_dof + static_cast<double>(j), y);
    if (term > best) {
      scaled = scaled * std::exp(best - term) + 1.0;
      best = term;
    } else {
      scaled += std::exp(term - best);
    }
    if (static_cast<double>(j) > mu && term < best - 45.0) break;
  }
  return best + std::log(scaled);
}

double find_root(const ScalarFn& f, Interval bracket, const Tolerance& tol) {
  tol.validate();
  double a = bracket.lo;
  double b = bracket.hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw BracketError("find_root: no sign change over bracket [" + std::to_string(a) + ", " +
                       std::to_string(b) + "]");
  }
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol.width(b);
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic interpolation, or secant when a == c
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw ConvergenceError("find_root: max_iter exceeded");
}

Extremum maximize_scalar(const ScalarFn& f, Interval bracket, const Tolerance& tol) {
  tol.validate();
  constexpr double kInvPhi = 0.6180339887498948482;  // (sqrt(5)-1)/2
  double a = std::min(bracket.lo, bracket.hi);
  double b = std::max(bracket.lo, bracket.hi);
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    if (b - a <= 2.0 * tol.width(0.5 * (a + b))) {
      return fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
    }
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  throw ConvergenceError("maximize_scalar: max_iter exceeded");
}

}  // namespace qgmi::numerics
