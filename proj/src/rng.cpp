#include "qgmi/rng.hpp"

#include <cmath>
#include <numbers>

namespace qgmi::mc {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
  return mix64(mix64(seed + kGolden) ^ (label * 0xD6E8FEB86659FD93ULL + 0x632BE59BD9B4E019ULL));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(derive_seed(seed, stream)) {}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::next_unit() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double radius = std::sqrt(-2.0 * std::log(rng_.next_unit()));
  const double angle = 2.0 * std::numbers::pi * rng_.next_unit();
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::complex<double> GaussianStream::complex_normal(double variance) {
  const double s = std::sqrt(0.5 * variance);
  const double re = next();
  const double im = next();
  return {s * re, s * im};
}

}  // namespace qgmi::mc
