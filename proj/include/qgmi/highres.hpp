#pragma once

// High-resolution asymptotics of gamma for the 2K-level uniform quantizer
// and the rate-optimal loading factor.

#include "qgmi/numerics.hpp"
#include "qgmi/quantizer.hpp"

namespace qgmi::highres {

/// K -> inf limit of gamma at fixed loading factor L > 0:
///   (int_L^inf (phi - tQ) - Q(L)^2) / (1/4 - int_L^inf tQ).
double gamma_bar(double L);

/// Leading overload term 4 e^{-L^2/2} / L^4 times snr, in nats.
double overload_loss_approx(double L, double snr);

/// Granular loss law (step^2 / 12) * snr, in nats.
double granular_loss_approx(double step, double snr);

/// A/B - sqrt(2/pi). Vanishes at the GMI-optimal step for K >= 2.
double stationarity_residual(const quant::UniformSpec& spec);

/// 2 sqrt(ln 2K).
double scaling_law(int levels_K);

/// Search bracket [0.5, 2 sqrt(ln 2K) + 3] used by the loading optimizers.
numerics::Interval loading_bracket(int levels_K);

/// Root of L^2 + 6 ln L - ln(18/pi) = 4 ln(2K).
double loading_estimate(int levels_K, const numerics::Tolerance& tol = {});

/// Mean squared error of the uniform quantizer for a N(0,1) input.
double mse_uniform(const quant::UniformSpec& spec);

/// Loading factor minimizing mse_uniform over loading_bracket(K).
double mse_optimal_loading(int levels_K, const numerics::Tolerance& tol = {});

/// Loading factor used for one-bit quantizers, whose GMI does not depend
/// on L at all: 2 sqrt(2/pi), the MSE-optimal one-bit choice.
double one_bit_loading();

struct LoadingAnalysis {
  int levels_K = 0;
  double l_star = 0.0;
  double step_star = 0.0;
  double l_hat = 0.0;
  double scaling_law = 0.0;
  double reference_snr = 0.0;
  double gmi_at_star = 0.0;  // nats at reference_snr
  double gmi_at_hat = 0.0;
  double l_mse = 0.0;
  double gamma_at_star = 0.0;
  /// Golden-section minimizer of gamma before polishing on the
  /// stationarity root; kept for cross-checking.
  double l_star_golden = 0.0;
  double residual_at_star = 0.0;
};

/// L* = argmin_L gamma(K, L), i.e. the GMI maximizer at every SNR.
/// Golden-section on gamma, then polished to the root of
/// stationarity_residual inside the golden bracket. Requires K >= 2.
LoadingAnalysis optimal_loading(int levels_K, const numerics::Tolerance& tol = {},
                                double reference_snr = 10.0);

/// L* only (no estimator, MSE or GMI fields). Requires K >= 2.
double optimal_loading_factor(int levels_K, const numerics::Tolerance& tol = {});

}  // namespace qgmi::highres
