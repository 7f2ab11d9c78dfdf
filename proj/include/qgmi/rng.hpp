#pragma once

#include <complex>
#include <cstdint>

namespace qgmi::mc {

/// Counter-based generator: the i-th output of stream (seed, stream) is a
/// fixed 64-bit mix of (seed, stream, i), so draws are reproducible across
/// platforms and independent of how streams are scheduled onto threads.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on (0, 1].
  double next_unit();
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Standard normal samples by the Box-Muller transform over a CounterRng.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

  double next();
  /// Circularly-symmetric complex Gaussian with E|Z|^2 = variance.
  std::complex<double> complex_normal(double variance);

 private:
  CounterRng rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic child seed for a labelled sub-experiment.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);

}  // namespace qgmi::mc
