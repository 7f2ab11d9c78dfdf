#pragma once

// Dataset builders behind the qgmi command-line tool. Each builder returns
// a Table whose rows are in a fixed, sorted order regardless of how the
// cells were scheduled.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qgmi/quantizer.hpp"
#include "qgmi/serialize.hpp"

namespace qgmi::cli {

enum class Format { kCsv, kJson };

/// A loading-factor request: a number, or the rate-optimal L* of each b.
struct LoadingChoice {
  bool optimal = false;
  double value = 0.0;

  static LoadingChoice star() { return {true, 0.0}; }
  static LoadingChoice fixed(double L) { return {false, L}; }
};

struct SweepConfig {
  std::vector<int> resolutions;
  std::vector<double> snr_grid_db;
  /// nullopt means "auto": 60 log-spaced points on [0.5, 2 sqrt(ln 2K) + 3].
  std::optional<std::vector<LoadingChoice>> loading_grid;
  std::string output_path;  // empty or "-" writes to stdout
  Format format = Format::kCsv;
  Units units = Units::kBits;
  std::uint64_t seed = 1;
  std::int64_t samples = 1'000'000;
  /// Quantizer for the single-shot gmi command; overrides resolutions.
  std::optional<quant::SymmetricQuantizer> quantizer;

  /// Throws ParameterError on empty grids, b < 1 or non-positive loading.
  void validate() const;
};

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json parameters;
  /// Structured records (GmiReport / LoadingAnalysis JSON) when the
  /// command has them; emitted in place of rows for JSON output.
  std::optional<nlohmann::json> records;
  /// Set by mc-validate when some |z| exceeds the validation threshold.
  bool validation_failed = false;
};

inline constexpr int kAutoLoadingPoints = 60;
inline constexpr double kMaxAbsZ = 5.0;

/// L* for b >= 2; the one-bit convention 2 sqrt(2/pi) for b = 1.
double l_star_for_bits(int b);
int levels_for_bits(int b);
std::vector<double> auto_loading_grid(int levels_K);

/// b, snr_db, L_star, gmi_bits, capacity_bits
Table rate_sweep(const SweepConfig& config);
/// b, L, snr_db, gmi_bits, marker; marker rows for L_star, L_hat, four_sigma
Table loading_sweep(const SweepConfig& config);
/// K, b, L_star, L_hat, scaling_law, L_mse  (b >= 2)
Table optimal_loading_table(const SweepConfig& config);
/// b, L, snr_db, gmi_analytic_bits, gmi_mc_bits, std_err, z_score
Table mc_validate(const SweepConfig& config);
/// Single-shot GmiReport rows for each (b or quantizer, L, snr).
Table gmi_reports(const SweepConfig& config);

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);
/// Writes to config.output_path (or stdout). Throws IoError.
void emit(const Table& table, const SweepConfig& config);

/// Number formatting shared by CSV output: shortest round-trip, '.' decimal.
std::string format_number(double v);

}  // namespace qgmi::cli
