#pragma once

// Seeded Monte Carlo simulation of the quantized channel
//   Y = q(g Re V / sigma_v) + j q(g Im V / sigma_v),   V = h X + Z,
// used to validate the closed-form moments, Delta and GMI, and to run
// small nearest-neighbor decoding experiments.

#include <complex>
#include <cstdint>

#include "qgmi/channel.hpp"
#include "qgmi/quantizer.hpp"

namespace qgmi::mc {

inline constexpr int kBatches = 16;
inline constexpr std::int64_t kMinSamples = 10'000;
inline constexpr double kMaxLog2Messages = 16.0;
inline constexpr int kMinTrials = 100;

/// One channel use. q is applied to g*Re(V)/sigma_v and g*Im(V)/sigma_v;
/// with g = 1 these are the normalized thresholds and points.
std::complex<double> simulate_symbol(const ChannelParams& params,
                                     const quant::SymmetricQuantizer& q, std::complex<double> x,
                                     std::complex<double> z);

struct MomentEstimate {
  std::complex<double> exy_conj;   // sample E[X Y*]
  double ey2 = 0.0;                // sample E[|Y|^2]
  double ex2 = 0.0;                // sample E[|X|^2]
  std::complex<double> alpha_hat;  // sample E[X* Y] / sigma_x2
  /// |E[X Y*]|^2 / (E[|X|^2] E[|Y|^2]) from sample moments; bounded by 1
  /// (Cauchy-Schwarz) so the GMI estimate stays finite near saturation.
  double delta_hat = 0.0;
  double gmi_hat_nats = 0.0;
  double std_err_gmi = 0.0;  // batch means over kBatches batches
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Batch b draws from stream (seed, b); results do not depend on the
/// number of threads. Throws ParameterError if n_samples < kMinSamples.
MomentEstimate estimate_moments(const ChannelParams& params, const quant::SymmetricQuantizer& q,
                                std::int64_t n_samples, std::uint64_t seed);

enum class DecodeMethod { kBruteForce, kEnsemble };

struct DecodeExperiment {
  DecodeMethod method = DecodeMethod::kBruteForce;
  double rate_bits = 0.0;
  int block_len = 0;
  double log2_num_messages = 0.0;
  double num_messages = 0.0;  // ceil(2^{N R}); exact while below 2^53
  int trials = 0;
  double error_rate = 0.0;
  double std_err = 0.0;
  std::complex<double> scale_a;
  std::uint64_t seed = 0;
};

/// Draws a fresh i.i.d. CN(0, sigma_x2) codebook per trial, sends message
/// 1 and decodes argmin_m sum_n |Y_n - a X_n(m)|^2 with a = alpha. A tie
/// with the transmitted codeword counts as an error. Requires
/// N R <= kMaxLog2Messages and trials >= kMinTrials.
DecodeExperiment run_decode_experiment(const ChannelParams& params,
                                       const quant::SymmetricQuantizer& q, double rate_bits,
                                       int block_len, int trials, std::uint64_t seed);

/// Same ensemble error rate without enumerating the codebook. Each trial
/// draws the sent codeword and the noise; the M-1 competitors are i.i.d.
/// Gaussian, so given (Y, X(1)) each beats the sent codeword with
/// probability p = P(chi'^2_{2N}(lambda) <= d0 / c), and the trial
/// contributes 1 - (1-p)^{M-1}. Works for any M.
DecodeExperiment run_ensemble_decode_experiment(const ChannelParams& params,
                                                const quant::SymmetricQuantizer& q,
                                                double rate_bits, int block_len, int trials,
                                                std::uint64_t seed);

}  // namespace qgmi::mc
