#include "qgmi/gmi.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "qgmi/errors.hpp"
#include "qgmi/numerics.hpp"

namespace qgmi::gmi {
namespace {

using numerics::CompensatedSum;
using numerics::q_function;
using numerics::std_normal_pdf;
using quant::SymmetricQuantizer;
using quant::UniformSpec;

constexpr double kPi = std::numbers::pi;

// 8-point Gauss-Legendre, nonnegative half.
constexpr std::array<std::array<double, 2>, 4> kGauss8 = {{
    {0.18343464249564978, 0.36268378337836177},
    {0.525532409916329, 0.31370664587788705},
    {0.7966664774136267, 0.22238103445337434},
    {0.9602898564975362, 0.10122853629037669},
}};

// Panel width cap for the per-cell quadrature.
constexpr double kMaxPanel = 0.25;

struct CellMoments {
  double sq_err;     // int (t - r)^2 phi
  double cross_err;  // int t (t - r) phi
};

CellMoments finite_cell_moments(double lo, double hi, double r) {
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / kMaxPanel)));
  const double width = (hi - lo) / panels;
  double sq = 0.0;
  double cross = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    const double half = 0.5 * width;
    for (const auto& [x, w] : kGauss8) {
      for (double t : {mid - half * x, mid + half * x}) {
        const double wf = w * half * std_normal_pdf(t);
        sq += wf * (t - r) * (t - r);
        cross += wf * t * (t - r);
      }
    }
  }
  return {sq, cross};
}

// Closed forms on [a, inf):  int (t-r)^2 phi = (1+r^2)Q(a) + (a-2r)phi(a),
//                            int t(t-r) phi  = Q(a) + (a-r)phi(a).
CellMoments overload_cell_moments(double a, double r) {
  const double qa = q_function(a);
  const double pa = std_normal_pdf(a);
  return {(1.0 + r * r) * qa + (a - 2.0 * r) * pa, qa + (a - r) * pa};
}

template <class Cells>
double fused_from_cells(int K, const Cells& cell) {
  CompensatedSum mse;
  CompensatedSum one_minus_m;
  for (int k = 0; k < K; ++k) {
    const auto [lo, hi, r] = cell(k);
    const CellMoments c =
        k + 1 == K ? overload_cell_moments(lo, r) : finite_cell_moments(lo, hi, r);
    mse.add(c.sq_err);
    one_minus_m.add(c.cross_err);
  }
  const double d = 2.0 * mse.value();
  const double e = 2.0 * one_minus_m.value();
  return 0.5 * kPi * (d - e * e);
}

struct CellBounds {
  double lo;
  double hi;
  double r;
};

}  // namespace

double coeff_a(const SymmetricQuantizer& q) {
  CompensatedSum s;
  double prev = std_normal_pdf(0.0);
  for (int k = 0; k < q.levels(); ++k) {
    const double upper = q.cell_upper(k);
    const double next = std::isinf(upper) ? 0.0 : std_normal_pdf(upper);
    s.add(q.points()[k] * (prev - next));
    prev = next;
  }
  return numerics::kSqrt2Pi * s.value();
}

double coeff_b(const SymmetricQuantizer& q) {
  CompensatedSum s;
  double prev = 0.5;
  for (int k = 0; k < q.levels(); ++k) {
    const double upper = q.cell_upper(k);
    const double next = std::isinf(upper) ? 0.0 : q_function(upper);
    const double r = q.points()[k];
    s.add(r * r * (prev - next));
    prev = next;
  }
  return kPi * s.value();
}

double coeff_a_uniform(const UniformSpec& spec) {
  spec.validate();
  const double l = spec.step;
  CompensatedSum s;
  for (int k = 0; k < spec.levels_K; ++k) s.add(l * std_normal_pdf(k * l));
  return numerics::kSqrt2Pi * s.value() - 0.5 * l;
}

double coeff_b_uniform(const UniformSpec& spec) {
  spec.validate();
  const double l = spec.step;
  CompensatedSum s;
  for (int k = 1; k < spec.levels_K; ++k) s.add(2.0 * k * l * l * q_function(k * l));
  return kPi * s.value() + 0.125 * kPi * l * l;
}

double b_minus_a2_fused(const SymmetricQuantizer& q) {
  return fused_from_cells(q.levels(), [&q](int k) {
    return CellBounds{q.cell_lower(k), q.cell_upper(k), q.points()[k]};
  });
}

double b_minus_a2_fused(const UniformSpec& spec) {
  spec.validate();
  const double l = spec.step;
  return fused_from_cells(spec.levels_K, [l](int k) {
    return CellBounds{k * l, (k + 1) * l, (k + 0.5) * l};
  });
}

double gamma(const SymmetricQuantizer& q) {
  const double a = coeff_a(q);
  const double b = coeff_b(q);
  const double g = 1.0 - a * a / b;
  if (g >= kFusedGammaThreshold) return g;
  return b_minus_a2_fused(q) / b;
}

double gamma(const UniformSpec& spec) {
  const double a = coeff_a_uniform(spec);
  const double b = coeff_b_uniform(spec);
  const double g = 1.0 - a * a / b;
  if (g >= kFusedGammaThreshold) return g;
  return b_minus_a2_fused(spec) / b;
}

double gmi_rate(double gamma, double snr) {
  if (!(snr >= 0.0)) throw DomainError("gmi_rate: snr must be >= 0");
  if (!(gamma >= 0.0) || !(gamma < 1.0)) throw DomainError("gmi_rate: gamma must be in [0, 1)");
  if (std::isinf(snr)) {
    if (gamma == 0.0) return snr;
    return -std::log(gamma);
  }
  return std::log1p(snr) - std::log1p(gamma * snr);
}

double capacity(double snr) {
  if (!(snr >= 0.0)) throw DomainError("capacity: snr must be >= 0");
  return std::log1p(snr);
}

double delta_from_gamma(double gamma, double snr) {
  // 1 - Delta = (1 + gamma snr) / (1 + snr)
  if (!(snr >= 0.0)) throw DomainError("delta_from_gamma: snr must be >= 0");
  return (1.0 - gamma) * snr / (1.0 + snr);
}

double gmi_from_delta(double delta) {
  if (!(delta >= 0.0) || !(delta < 1.0)) throw DomainError("gmi_from_delta: need 0 <= delta < 1");
  return -std::log1p(-delta);
}

SymmetricQuantizer effective_quantizer(const ChannelParams& channel, const SymmetricQuantizer& q) {
  channel.validate();
  std::vector<double> t(q.thresholds().begin(), q.thresholds().end());
  for (double& x : t) x /= channel.gain;
  return {std::move(t), std::vector<double>(q.points().begin(), q.points().end())};
}

std::complex<double> decoder_scale_alpha(const ChannelParams& channel, const SymmetricQuantizer& q) {
  return std::conj(expected_x_yconj(channel, q)) / channel.sigma_x2;
}

std::complex<double> expected_x_yconj(const ChannelParams& channel, const SymmetricQuantizer& q) {
  channel.validate();
  const double a = coeff_a(effective_quantizer(channel, q));
  const double power = std::norm(channel.h) * channel.sigma_x2 + channel.sigma2;
  return 2.0 * std::conj(channel.h) * channel.sigma_x2 * a / std::sqrt(kPi * power);
}

double expected_y_power(const ChannelParams& channel, const SymmetricQuantizer& q) {
  return 4.0 / kPi * coeff_b(effective_quantizer(channel, q));
}

SnrAsymptotes snr_asymptotes(double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0)) throw DomainError("snr_asymptotes: gamma must be in (0, 1)");
  return {-std::log(gamma), 1.0 - gamma, 0.5 * (1.0 - gamma * gamma), 1.0 / gamma - 1.0};
}

double rate_loss_fine_quantization(double gamma, double snr) {
  if (!(snr >= 0.0)) throw DomainError("rate_loss_fine_quantization: snr must be >= 0");
  if (!(gamma >= 0.0) || !(gamma < 1.0)) {
    throw DomainError("rate_loss_fine_quantization: gamma must be in [0, 1)");
  }
  return std::log1p(gamma * snr);
}

namespace {

GmiReport assemble(int K, double a, double b, double g, const ChannelParams& channel,
                   const SymmetricQuantizer& q) {
  GmiReport r;
  r.levels_K = K;
  r.coeff_a = a;
  r.coeff_b = b;
  r.gamma = g;
  r.snr = channel.snr();
  r.delta = delta_from_gamma(g, r.snr);
  r.alpha_scale = decoder_scale_alpha(channel, q);
  r.gmi_nats = gmi_rate(g, r.snr);
  r.capacity_nats = capacity(r.snr);
  r.rate_loss_nats = rate_loss_fine_quantization(g, r.snr);
  return r;
}

}  // namespace

GmiReport make_report(const SymmetricQuantizer& q, const ChannelParams& channel) {
  const SymmetricQuantizer eff = effective_quantizer(channel, q);
  return assemble(q.levels(), coeff_a(eff), coeff_b(eff), gamma(eff), channel, q);
}

GmiReport make_report(const UniformSpec& spec, const ChannelParams& channel) {
  // Effective thresholds are step/g while the points stay (k - 1/2) step,
  // i.e. g times the uniform quantizer with step/g.
  spec.validate();
  channel.validate();
  const double g = channel.gain;
  const UniformSpec eff{spec.levels_K, spec.step / g};
  GmiReport r = assemble(spec.levels_K, g * coeff_a_uniform(eff), g * g * coeff_b_uniform(eff),
                         gamma(eff), channel, quant::make_uniform(spec));
  r.uniform = eff;
  return r;
}

}  // namespace qgmi::gmi
