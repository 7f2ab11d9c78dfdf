#pragma once

// Achievable rate (GMI) of the quantized complex AWGN channel under an
// i.i.d. Gaussian codebook and scaled nearest-neighbor decoding.
//
// For a symmetric quantizer with normalized thresholds l_k and points r_k
//
//   A = sqrt(2 pi) sum_k r_k (phi(l_{k-1}) - phi(l_k))
//   B = pi sum_k r_k^2 (Q(l_{k-1}) - Q(l_k))
//   gamma = 1 - A^2 / B
//   GMI = ln(1 + snr) - ln(1 + gamma snr)          [nats / channel use]
//
// gamma depends on the quantizer only, not on the SNR.

#include <complex>
#include <optional>

#include "qgmi/channel.hpp"
#include "qgmi/quantizer.hpp"

namespace qgmi::gmi {

double coeff_a(const quant::SymmetricQuantizer& q);
double coeff_b(const quant::SymmetricQuantizer& q);

/// Closed sums specialized to the uniform mid-rise quantizer.
double coeff_a_uniform(const quant::UniformSpec& spec);
double coeff_b_uniform(const quant::UniformSpec& spec);

/// B - A^2 evaluated as (pi/2)(D - (1-m)^2), where D = E[(q(W)-W)^2] and
/// 1-m = E[W(W-q(W))] are integrated cell by cell. Free of the
/// cancellation in B - A^2 when the quantizer is fine.
double b_minus_a2_fused(const quant::SymmetricQuantizer& q);
double b_minus_a2_fused(const quant::UniformSpec& spec);

/// Below this value the direct 1 - A^2/B is replaced by the fused form.
inline constexpr double kFusedGammaThreshold = 1e-6;

double gamma(const quant::SymmetricQuantizer& q);
double gamma(const quant::UniformSpec& spec);

/// ln(1+snr) - ln(1+gamma*snr). snr may be +inf (returns the saturation
/// rate). Throws DomainError for snr < 0 or gamma outside [0, 1).
double gmi_rate(double gamma, double snr);
double capacity(double snr);

/// Delta such that GMI = ln(1/(1-Delta)).
double delta_from_gamma(double gamma, double snr);
double gmi_from_delta(double delta);

/// Quantizer actually seen by the normalized input V/sigma_v when q is
/// applied to g*V/sigma_v: thresholds l_k/g, points unchanged.
quant::SymmetricQuantizer effective_quantizer(const ChannelParams& channel,
                                              const quant::SymmetricQuantizer& q);

/// Optimal decoder scaling alpha = E[X* Y] / sigma_x^2.
std::complex<double> decoder_scale_alpha(const ChannelParams& channel,
                                         const quant::SymmetricQuantizer& q);

/// Closed-form E[X Y*] and E[|Y|^2] for the same convention.
std::complex<double> expected_x_yconj(const ChannelParams& channel,
                                      const quant::SymmetricQuantizer& q);
double expected_y_power(const ChannelParams& channel, const quant::SymmetricQuantizer& q);

struct SnrAsymptotes {
  double saturation_nats;      // ln(1/gamma)
  double low_snr_slope;        // 1 - gamma
  double low_snr_quad;         // (1 - gamma^2) / 2
  double high_snr_correction;  // 1/gamma - 1
};

SnrAsymptotes snr_asymptotes(double gamma);

/// Exact capacity loss ln(1 + gamma*snr). For small gamma this is
/// gamma*snr - (gamma*snr)^2/2 + ..., the expansion behind the
/// high-resolution loss laws.
double rate_loss_fine_quantization(double gamma, double snr);

struct GmiReport {
  int levels_K = 0;
  std::optional<quant::UniformSpec> uniform;
  double coeff_a = 0.0;
  double coeff_b = 0.0;
  double gamma = 0.0;
  double snr = 0.0;
  double delta = 0.0;
  std::complex<double> alpha_scale;
  double gmi_nats = 0.0;
  double capacity_nats = 0.0;
  double rate_loss_nats = 0.0;
};

GmiReport make_report(const quant::SymmetricQuantizer& q, const ChannelParams& channel);
GmiReport make_report(const quant::UniformSpec& spec, const ChannelParams& channel);

}  // namespace qgmi::gmi
