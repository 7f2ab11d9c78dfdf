#include "qgmi/montecarlo.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qgmi/errors.hpp"
#include "qgmi/gmi.hpp"
#include "qgmi/numerics.hpp"
#include "qgmi/parallel.hpp"
#include "qgmi/rng.hpp"

namespace qgmi::mc {
namespace {

using quant::SymmetricQuantizer;

struct Front {
  std::complex<double> h;
  double scale;  // g / sigma_v

  explicit Front(const ChannelParams& p) : h(p.h), scale(p.gain / p.sigma_v()) {}

  std::complex<double> operator()(const SymmetricQuantizer& q, std::complex<double> x,
                                  std::complex<double> z) const {
    const std::complex<double> v = h * x + z;
    return {quant::quantize(q, scale * v.real()), quant::quantize(q, scale * v.imag())};
  }
};

struct BatchSums {
  std::complex<double> x_yconj;
  double x2 = 0.0;
  double y2 = 0.0;
  std::int64_t n = 0;
};

struct MessageCount {
  double log2_m;
  double m;
};

MessageCount message_count(double rate_bits, int block_len) {
  if (!(rate_bits > 0.0) || !std::isfinite(rate_bits)) {
    throw ParameterError("decode experiment: rate_bits must be > 0");
  }
  if (block_len < 1) throw ParameterError("decode experiment: block_len must be >= 1");
  const double nr = rate_bits * block_len;
  // ceil(2^{NR}); above 2^53 the ceiling is immaterial.
  const double m = nr < 53.0 ? std::ceil(std::exp2(nr)) : std::exp2(nr);
  return {nr, m};
}

void check_trials(int trials) {
  if (trials < kMinTrials) {
    throw ParameterError("decode experiment: trials must be >= " + std::to_string(kMinTrials));
  }
}

// log(-log1p(-p)) from log p, i.e. the log of the per-competitor hazard.
double log_hazard(double log_p) {
  if (log_p < -30.0) return log_p;
  if (log_p >= 0.0) return std::numeric_limits<double>::infinity();
  return std::log(-std::log1p(-std::exp(log_p)));
}

}  // namespace

std::complex<double> simulate_symbol(const ChannelParams& params, const SymmetricQuantizer& q,
                                     std::complex<double> x, std::complex<double> z) {
  params.validate();
  return Front(params)(q, x, z);
}

MomentEstimate estimate_moments(const ChannelParams& params, const SymmetricQuantizer& q,
                                std::int64_t n_samples, std::uint64_t seed) {
  params.validate();
  if (n_samples < kMinSamples) {
    throw ParameterError("estimate_moments: n_samples must be >= " + std::to_string(kMinSamples));
  }
  const Front front(params);
  std::array<BatchSums, kBatches> batches{};
  parallel_for(kBatches, [&](std::size_t b) {
    const std::int64_t n = n_samples / kBatches + (static_cast<std::int64_t>(b) < n_samples % kBatches);
    GaussianStream gauss(seed, b);
    std::complex<double> acc_xy{};
    double acc_x2 = 0.0;
    double acc_y2 = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const auto x = gauss.complex_normal(params.sigma_x2);
      const auto z = gauss.complex_normal(params.sigma2);
      const auto y = front(q, x, z);
      acc_xy += x * std::conj(y);
      acc_x2 += std::norm(x);
      acc_y2 += std::norm(y);
    }
    batches[b] = {acc_xy, acc_x2, acc_y2, n};
  });

  MomentEstimate out;
  out.n_samples = n_samples;
  out.seed = seed;
  std::complex<double> sum_xy{};
  double sum_x2 = 0.0;
  double sum_y2 = 0.0;
  std::array<double, kBatches> batch_gmi{};
  for (int b = 0; b < kBatches; ++b) {
    sum_xy += batches[b].x_yconj;
    sum_x2 += batches[b].x2;
    sum_y2 += batches[b].y2;
    batch_gmi[b] = -std::log1p(-std::norm(batches[b].x_yconj) / (batches[b].x2 * batches[b].y2));
  }
  const double n = static_cast<double>(n_samples);
  out.exy_conj = sum_xy / n;
  out.ex2 = sum_x2 / n;
  out.ey2 = sum_y2 / n;
  out.alpha_hat = std::conj(out.exy_conj) / params.sigma_x2;
  out.delta_hat = std::norm(sum_xy) / (sum_x2 * sum_y2);
  out.gmi_hat_nats = -std::log1p(-out.delta_hat);

  double mean = 0.0;
  for (double g : batch_gmi) mean += g;
  mean /= kBatches;
  double ss = 0.0;
  for (double g : batch_gmi) ss += (g - mean) * (g - mean);
  out.std_err_gmi = std::sqrt(ss / (kBatches - 1) / kBatches);
  return out;
}

DecodeExperiment run_decode_experiment(const ChannelParams& params, const SymmetricQuantizer& q,
                                       double rate_bits, int block_len, int trials,
                                       std::uint64_t seed) {
  params.validate();
  const MessageCount mc = message_count(rate_bits, block_len);
  if (mc.log2_m > kMaxLog2Messages) {
    throw ParameterError("run_decode_experiment: ceil(2^{NR}) exceeds 2^16 messages");
  }
  if (mc.m < 2.0) throw ParameterError("run_decode_experiment: need at least 2 messages");
  check_trials(trials);

  const Front front(params);
  const std::complex<double> a = gmi::decoder_scale_alpha(params, q);
  const auto competitors = static_cast<std::int64_t>(mc.m) - 1;
  std::vector<unsigned char> errors(trials, 0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    GaussianStream gauss(seed, t);
    std::vector<std::complex<double>> y(block_len);
    double sent = 0.0;
    for (int n = 0; n < block_len; ++n) {
      const auto x = gauss.complex_normal(params.sigma_x2);
      const auto z = gauss.complex_normal(params.sigma2);
      y[n] = front(q, x, z);
      sent += std::norm(y[n] - a * x);
    }
    for (std::int64_t m = 0; m < competitors; ++m) {
      double metric = 0.0;
      for (int n = 0; n < block_len; ++n) {
        metric += std::norm(y[n] - a * gauss.complex_normal(params.sigma_x2));
      }
      if (metric <= sent) {
        errors[t] = 1;
        return;
      }
    }
  });

  DecodeExperiment out;
  out.method = DecodeMethod::kBruteForce;
  out.rate_bits = rate_bits;
  out.block_len = block_len;
  out.log2_num_messages = mc.log2_m;
  out.num_messages = mc.m;
  out.trials = trials;
  out.scale_a = a;
  out.seed = seed;
  double count = 0.0;
  for (unsigned char e : errors) count += e;
  out.error_rate = count / trials;
  out.std_err = std::sqrt(out.error_rate * (1.0 - out.error_rate) / trials);
  return out;
}

DecodeExperiment run_ensemble_decode_experiment(const ChannelParams& params,
                                                const SymmetricQuantizer& q, double rate_bits,
                                                int block_len, int trials, std::uint64_t seed) {
  params.validate();
  const MessageCount mc = message_count(rate_bits, block_len);
  if (mc.m < 2.0) throw ParameterError("run_ensemble_decode_experiment: need at least 2 messages");
  check_trials(trials);

  const double log_competitors =
      mc.log2_m < 53.0 ? std::log(mc.m - 1.0) : mc.log2_m * std::numbers::ln2;
  const Front front(params);
  const std::complex<double> a = gmi::decoder_scale_alpha(params, q);
  // Per-component variance of Y_n - a X'_n around Y_n for a competitor X'.
  const double comp_var = 0.5 * std::norm(a) * params.sigma_x2;
  std::vector<double> p_err(trials, 0.0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    GaussianStream gauss(seed, t);
    double sent = 0.0;
    double y_power = 0.0;
    for (int n = 0; n < block_len; ++n) {
      const auto x = gauss.complex_normal(params.sigma_x2);
      const auto z = gauss.complex_normal(params.sigma2);
      const auto y = front(q, x, z);
      sent += std::norm(y - a * x);
      y_power += std::norm(y);
    }
    const double log_p =
        numerics::log_noncentral_chi2_cdf(sent / comp_var, block_len, y_power / comp_var);
    const double log_x = log_competitors + log_hazard(log_p);
    p_err[t] = log_x > 700.0 ? 1.0 : -std::expm1(-std::exp(log_x));
  });

  DecodeExperiment out;
  out.method = DecodeMethod::kEnsemble;
  out.rate_bits = rate_bits;
  out.block_len = block_len;
  out.log2_num_messages = mc.log2_m;
  out.num_messages = mc.m;
  out.trials = trials;
  out.scale_a = a;
  out.seed = seed;
  double sum = 0.0;
  double sum2 = 0.0;
  for (double p : p_err) {
    sum += p;
    sum2 += p * p;
  }
  out.error_rate = sum / trials;
  const double var = std::max(0.0, sum2 / trials - out.error_rate * out.error_rate);
  out.std_err = std::sqrt(var / trials);
  return out;
}

}  // namespace qgmi::mc
