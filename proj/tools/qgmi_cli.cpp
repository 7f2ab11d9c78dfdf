// qgmi: figure-reproduction sweeps and single-shot GMI analyses.
//
//   qgmi rate-sweep      --bits 1:6 --snr-db=-10:40:1
//   qgmi loading-sweep   --bits 3,6,9 --snr-db 10 --loading auto
//   qgmi optimal-loading --bits 2:16
//   qgmi mc-validate     --bits 1:6 --snr-db=-10:30:10 --loading star,4 --samples 1000000
//   qgmi gmi             --quantizer q.json --snr-db 0,10,20
//
// Exit status: 0 success, 2 Monte Carlo validation failure, 3 I/O error,
// 4 bad arguments.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgmi/errors.hpp"
#include "qgmi/serialize.hpp"
#include "qgmi/sweep.hpp"

namespace {

using qgmi::ParameterError;
using qgmi::cli::LoadingChoice;
using qgmi::cli::SweepConfig;
using qgmi::cli::Table;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitArgs = 4;

constexpr std::size_t kMaxGridPoints = 100'000;

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
    throw ParameterError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// "a", "a:b" (unit step) or "a:b:step"; several terms may be comma separated
// or repeated across tokens.
std::vector<double> parse_grid(const std::vector<std::string>& tokens) {
  std::vector<double> out;
  for (const auto& token : tokens) {
    for (const auto& term : split(token, ',')) {
      if (term.empty()) throw ParameterError("empty grid term in '" + token + "'");
      const auto parts = split(term, ':');
      if (parts.size() == 1) {
        out.push_back(parse_double(parts[0]));
        continue;
      }
      if (parts.size() > 3) throw ParameterError("bad range '" + term + "'");
      const double lo = parse_double(parts[0]);
      const double hi = parse_double(parts[1]);
      const double step = parts.size() == 3 ? parse_double(parts[2]) : 1.0;
      if (!(step > 0.0) || hi < lo) throw ParameterError("bad range '" + term + "'");
      const double count = std::floor((hi - lo) / step + 1e-9) + 1.0;
      if (count > kMaxGridPoints) throw ParameterError("range too long: '" + term + "'");
      for (int i = 0; i < static_cast<int>(count); ++i) out.push_back(lo + i * step);
    }
  }
  if (out.size() > kMaxGridPoints) throw ParameterError("grid too long");
  return out;
}

std::vector<int> parse_bits(const std::vector<std::string>& tokens) {
  std::vector<int> out;
  for (double v : parse_grid(tokens)) {
    if (v != std::floor(v)) throw ParameterError("bits must be integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::optional<std::vector<LoadingChoice>> parse_loading(const std::vector<std::string>& tokens) {
  if (tokens.size() == 1 && tokens[0] == "auto") return std::nullopt;
  std::vector<LoadingChoice> out;
  for (const auto& token : tokens) {
    for (const auto& term : split(token, ',')) {
      if (term == "star") {
        out.push_back(LoadingChoice::star());
      } else if (term == "auto") {
        throw ParameterError("'auto' cannot be combined with other loading values");
      } else {
        for (double v : parse_grid({term})) out.push_back(LoadingChoice::fixed(v));
      }
    }
  }
  return out;
}

qgmi::quant::SymmetricQuantizer read_quantizer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qgmi::IoError("cannot open quantizer file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("quantizer file is not valid JSON: " + std::string(e.what()));
  }
  return qgmi::quantizer_from_json(j);
}

struct RawOptions {
  std::vector<std::string> bits;
  std::vector<std::string> snr_db;
  std::vector<std::string> loading;
  std::string quantizer_path;
  std::string out;
  std::string format = "csv";
  std::string units = "bits";
  std::uint64_t seed = 1;
  std::int64_t samples = 1'000'000;
};

struct Defaults {
  const char* bits;
  const char* snr_db;
  const char* loading;
};

SweepConfig build_config(const RawOptions& raw, const Defaults& d) {
  SweepConfig c;
  c.resolutions = parse_bits(raw.bits.empty() ? std::vector<std::string>{d.bits} : raw.bits);
  c.snr_grid_db = parse_grid(raw.snr_db.empty() ? std::vector<std::string>{d.snr_db} : raw.snr_db);
  c.loading_grid =
      parse_loading(raw.loading.empty() ? std::vector<std::string>{d.loading} : raw.loading);
  c.output_path = raw.out;
  c.format = raw.format == "json" ? qgmi::cli::Format::kJson : qgmi::cli::Format::kCsv;
  c.units = raw.units == "nats" ? qgmi::Units::kNats : qgmi::Units::kBits;
  c.seed = raw.seed;
  c.samples = raw.samples;
  if (!raw.quantizer_path.empty()) c.quantizer = read_quantizer(raw.quantizer_path);
  return c;
}

void add_common(CLI::App* sub, RawOptions& raw, const Defaults& d) {
  sub->add_option("--bits,-b", raw.bits, "Resolutions b (list or range a:b)")
      ->default_str(d.bits)
      ->allow_extra_args(false);
  sub->add_option("--snr-db,-s", raw.snr_db, "SNR grid in dB (list or range a:b:step)")
      ->default_str(d.snr_db)
      ->allow_extra_args(false);
  sub->add_option("--loading,-L", raw.loading, "Loading factors, 'star' for L*, or 'auto'")
      ->default_str(d.loading)
      ->allow_extra_args(false);
  sub->add_option("--out,-o", raw.out, "Output file (default stdout)");
  sub->add_option("--format,-f", raw.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--units,-u", raw.units, "Rate units")
      ->check(CLI::IsMember({"bits", "nats"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Achievable rates of quantized complex AWGN receivers"};
  app.require_subcommand(1);
  app.allow_windows_style_options(false);

  RawOptions raw;
  struct Command {
    CLI::App* sub;
    Defaults defaults;
    Table (*build)(const SweepConfig&);
  };
  std::vector<Command> commands;

  auto* rate = app.add_subcommand("rate-sweep", "GMI at L* versus SNR for each resolution");
  commands.push_back({rate, {"1:6", "-10:40:1", "star"}, qgmi::cli::rate_sweep});
  auto* loading = app.add_subcommand("loading-sweep", "GMI versus loading factor");
  commands.push_back({loading, {"3,6,9", "10", "auto"}, qgmi::cli::loading_sweep});
  auto* table = app.add_subcommand("optimal-loading", "L*, its estimate, and the scaling law");
  commands.push_back({table, {"2:16", "10", "star"}, qgmi::cli::optimal_loading_table});
  auto* mc = app.add_subcommand("mc-validate", "Monte Carlo check of the analytic GMI");
  commands.push_back({mc, {"1:6", "-10:30:10", "star,4"}, qgmi::cli::mc_validate});
  auto* single = app.add_subcommand("gmi", "Single-shot GMI report");
  commands.push_back({single, {"4", "10", "star"}, qgmi::cli::gmi_reports});

  for (auto& c : commands) add_common(c.sub, raw, c.defaults);
  mc->add_option("--samples,-n", raw.samples, "Samples per cell")->capture_default_str();
  mc->add_option("--seed", raw.seed, "Base seed")->capture_default_str();
  single->add_option("--quantizer,-q", raw.quantizer_path,
                     "Quantizer JSON {K, thresholds, points}; overrides --bits/--loading");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgs;
  }

  for (const auto& c : commands) {
    if (!c.sub->parsed()) continue;
    try {
      const SweepConfig config = build_config(raw, c.defaults);
      const Table result = c.build(config);
      qgmi::cli::emit(result, config);
      if (result.validation_failed) {
        std::cerr << "qgmi: Monte Carlo validation failed (|z| > " << qgmi::cli::kMaxAbsZ
                  << " in at least one cell)\n";
        return kExitValidation;
      }
      return kExitOk;
    } catch (const qgmi::IoError& e) {
      std::cerr << "qgmi: " << e.what() << '\n';
      return kExitIo;
    } catch (const std::exception& e) {
      std::cerr << "qgmi: " << e.what() << '\n';
      return kExitArgs;
    }
  }
  return kExitArgs;
}
