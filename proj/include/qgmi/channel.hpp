#pragma once

#include <complex>

namespace qgmi {

/// Flat complex AWGN link ahead of the receiver quantizer:
/// V = h X + Z, X ~ CN(0, sigma_x2), Z ~ CN(0, sigma2), quantizer input g*V.
struct ChannelParams {
  std::complex<double> h{1.0, 0.0};
  double sigma_x2 = 1.0;
  double sigma2 = 1.0;
  double gain = 1.0;

  /// Unit input power, unit channel gain, noise set from the SNR.
  static ChannelParams from_snr(double snr_linear);

  /// Per-component standard deviation of V.
  double sigma_v() const;
  double snr() const;
  /// Throws DomainError on non-positive powers or gain.
  void validate() const;
};

}  // namespace qgmi
