#include "qgmi/channel.hpp"

#include <cmath>

#include "qgmi/errors.hpp"

namespace qgmi {

ChannelParams ChannelParams::from_snr(double snr_linear) {
  if (!(snr_linear > 0.0) || !std::isfinite(snr_linear)) {
    throw DomainError("ChannelParams::from_snr: snr must be finite and > 0");
  }
  return ChannelParams{{1.0, 0.0}, 1.0, 1.0 / snr_linear, 1.0};
}

double ChannelParams::sigma_v() const {
  return std::sqrt(0.5 * (std::norm(h) * sigma_x2 + sigma2));
}

double ChannelParams::snr() const { return std::norm(h) * sigma_x2 / sigma2; }

void ChannelParams::validate() const {
  if (!(sigma_x2 > 0.0) || !std::isfinite(sigma_x2)) {
    throw DomainError("ChannelParams: sigma_x2 must be > 0");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw DomainError("ChannelParams: sigma2 must be > 0");
  }
  if (!(gain > 0.0) || !std::isfinite(gain)) throw DomainError("ChannelParams: gain must be > 0");
  if (!std::isfinite(h.real()) || !std::isfinite(h.imag())) {
    throw DomainError("ChannelParams: h must be finite");
  }
}

}  // namespace qgmi
