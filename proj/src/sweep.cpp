#include "qgmi/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>

#include "qgmi/errors.hpp"
#include "qgmi/gmi.hpp"
#include "qgmi/highres.hpp"
#include "qgmi/montecarlo.hpp"
#include "qgmi/numerics.hpp"
#include "qgmi/parallel.hpp"
#include "qgmi/rng.hpp"

namespace qgmi::cli {
namespace {

using nlohmann::json;
using quant::UniformSpec;

constexpr double kFourSigma = 4.0;

std::string rate_col(const char* stem, Units units) { return std::string(stem) + unit_suffix(units); }

json loading_grid_json(const SweepConfig& c) {
  if (!c.loading_grid) return "auto";
  json arr = json::array();
  for (const auto& l : *c.loading_grid) {
    if (l.optimal) {
      arr.push_back("star");
    } else {
      arr.push_back(l.value);
    }
  }
  return arr;
}

json echo(const SweepConfig& c) {
  return json{{"bits", c.resolutions},
              {"snr_db", c.snr_grid_db},
              {"loading", loading_grid_json(c)},
              {"units", c.units == Units::kBits ? "bits" : "nats"},
              {"seed", c.seed},
              {"samples", c.samples}};
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// L* per resolution, computed concurrently.
std::map<int, double> l_stars(const std::vector<int>& bits) {
  std::vector<double> values(bits.size());
  parallel_for(bits.size(), [&](std::size_t i) { values[i] = l_star_for_bits(bits[i]); });
  std::map<int, double> out;
  for (std::size_t i = 0; i < bits.size(); ++i) out[bits[i]] = values[i];
  return out;
}

std::vector<double> resolve_loadings(const SweepConfig& c, int b, double l_star) {
  std::vector<double> out;
  if (!c.loading_grid) return auto_loading_grid(levels_for_bits(b));
  for (const auto& l : *c.loading_grid) out.push_back(l.optimal ? l_star : l.value);
  return out;
}

std::string cell_text(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  return std::get<std::string>(cell);
}

json cell_json(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  return std::get<std::string>(cell);
}

}  // namespace

void SweepConfig::validate() const {
  if (resolutions.empty() && !quantizer) throw ParameterError("bits grid must be non-empty");
  for (int b : resolutions) {
    if (b < 1 || b > 24) throw ParameterError("bits must be in [1, 24]");
  }
  if (snr_grid_db.empty()) throw ParameterError("snr grid must be non-empty");
  for (double s : snr_grid_db) {
    if (!std::isfinite(s)) throw ParameterError("snr values must be finite");
  }
  if (loading_grid) {
    if (loading_grid->empty()) throw ParameterError("loading grid must be non-empty");
    for (const auto& l : *loading_grid) {
      if (!l.optimal && !(l.value > 0.0 && std::isfinite(l.value))) {
        throw ParameterError("loading factors must be > 0");
      }
    }
  }
  if (samples < mc::kMinSamples) throw ParameterError("samples must be >= 10000");
}

int levels_for_bits(int b) { return 1 << (b - 1); }

double l_star_for_bits(int b) {
  const int K = levels_for_bits(b);
  if (K == 1) return highres::one_bit_loading();
  return highres::optimal_loading_factor(K);
}

std::vector<double> auto_loading_grid(int levels_K) {
  const auto [lo, hi] = highres::loading_bracket(levels_K);
  std::vector<double> grid(kAutoLoadingPoints);
  const double ratio = std::log(hi / lo) / (kAutoLoadingPoints - 1);
  for (int i = 0; i < kAutoLoadingPoints; ++i) grid[i] = lo * std::exp(ratio * i);
  grid.back() = hi;
  return grid;
}

Table rate_sweep(const SweepConfig& config) {
  config.validate();
  const auto bits = sorted_unique(config.resolutions);
  const auto snrs = sorted_unique(config.snr_grid_db);
  const auto stars = l_stars(bits);
  Table t;
  t.command = "rate-sweep";
  t.parameters = echo(config);
  t.columns = {"b", "snr_db", "L_star", rate_col("gmi", config.units),
               rate_col("capacity", config.units)};
  for (int b : bits) {
    const int K = levels_for_bits(b);
    const double g = gmi::gamma(UniformSpec::from_loading(K, stars.at(b)));
    for (double s : snrs) {
      const double snr = numerics::db_to_linear(s);
      t.rows.push_back({std::int64_t{b}, s, stars.at(b), rate_in(config.units, gmi::gmi_rate(g, snr)),
                        rate_in(config.units, gmi::capacity(snr))});
    }
  }
  return t;
}

Table loading_sweep(const SweepConfig& config) {
  config.validate();
  const auto bits = sorted_unique(config.resolutions);
  const auto snrs = sorted_unique(config.snr_grid_db);
  const auto stars = l_stars(bits);
  Table t;
  t.command = "loading-sweep";
  t.parameters = echo(config);
  t.columns = {"b", "L", "snr_db", rate_col("gmi", config.units), "marker"};
  for (int b : bits) {
    const int K = levels_for_bits(b);
    std::vector<std::pair<double, std::string>> points;
    for (double L : resolve_loadings(config, b, stars.at(b))) points.emplace_back(L, "");
    points.emplace_back(stars.at(b), "L_star");
    if (K >= 2) points.emplace_back(highres::loading_estimate(K), "L_hat");
    points.emplace_back(kFourSigma, "four_sigma");
    std::stable_sort(points.begin(), points.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> gammas(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
      gammas[i] = gmi::gamma(UniformSpec::from_loading(K, points[i].first));
    });
    for (double s : snrs) {
      const double snr = numerics::db_to_linear(s);
      for (std::size_t i = 0; i < points.size(); ++i) {
        t.rows.push_back({std::int64_t{b}, points[i].first, s,
                          rate_in(config.units, gmi::gmi_rate(gammas[i], snr)), points[i].second});
      }
    }
  }
  return t;
}

Table optimal_loading_table(const SweepConfig& config) {
  config.validate();
  const auto bits = sorted_unique(config.resolutions);
  for (int b : bits) {
    if (b < 2) throw ParameterError("optimal-loading requires b >= 2 (one-bit GMI is flat in L)");
  }
  const double reference_snr = numerics::db_to_linear(config.snr_grid_db.front());
  std::vector<highres::LoadingAnalysis> analyses(bits.size());
  parallel_for(bits.size(), [&](std::size_t i) {
    analyses[i] = highres::optimal_loading(levels_for_bits(bits[i]), {}, reference_snr);
  });
  Table t;
  t.command = "optimal-loading";
  t.parameters = echo(config);
  t.columns = {"K", "b", "L_star", "L_hat", "scaling_law", "L_mse"};
  json records = json::array();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const auto& a = analyses[i];
    t.rows.push_back({std::int64_t{a.levels_K}, std::int64_t{bits[i]}, a.l_star, a.l_hat,
                      a.scaling_law, a.l_mse});
    records.push_back(loading_to_json(a, config.units));
  }
  t.records = std::move(records);
  return t;
}

Table mc_validate(const SweepConfig& config) {
  config.validate();
  const auto bits = sorted_unique(config.resolutions);
  const auto snrs = sorted_unique(config.snr_grid_db);
  const auto stars = l_stars(bits);
  Table t;
  t.command = "mc-validate";
  t.parameters = echo(config);
  t.columns = {"b",        "L",          "snr_db", rate_col("gmi_analytic", config.units),
               rate_col("gmi_mc", config.units), "std_err", "z_score"};
  std::uint64_t cell = 0;
  for (int b : bits) {
    const int K = levels_for_bits(b);
    for (double L : resolve_loadings(config, b, stars.at(b))) {
      const auto q = quant::make_uniform(UniformSpec::from_loading(K, L));
      const double g = gmi::gamma(UniformSpec::from_loading(K, L));
      for (double s : snrs) {
        const double snr = numerics::db_to_linear(s);
        const double analytic = gmi::gmi_rate(g, snr);
        const auto est = mc::estimate_moments(ChannelParams::from_snr(snr), q, config.samples,
                                              mc::derive_seed(config.seed, cell++));
        const double z = (est.gmi_hat_nats - analytic) / est.std_err_gmi;
        if (!(std::abs(z) <= kMaxAbsZ)) t.validation_failed = true;
        t.rows.push_back({std::int64_t{b}, L, s, rate_in(config.units, analytic),
                          rate_in(config.units, est.gmi_hat_nats),
                          rate_in(config.units, est.std_err_gmi), z});
      }
    }
  }
  return t;
}

Table gmi_reports(const SweepConfig& config) {
  config.validate();
  const auto snrs = sorted_unique(config.snr_grid_db);
  Table t;
  t.command = "gmi";
  t.parameters = echo(config);
  t.columns = {"K",      "step", "loading_factor", "A", "B", "gamma", "snr_db",
               rate_col("gmi", config.units), rate_col("capacity", config.units),
               rate_col("loss", config.units)};
  json records = json::array();
  auto add = [&](const gmi::GmiReport& r) {
    const json j = report_to_json(r, config.units);
    const double step = r.uniform ? r.uniform->step : std::nan("");
    const double loading = r.uniform ? r.uniform->loading_factor() : std::nan("");
    t.rows.push_back({std::int64_t{r.levels_K}, step, loading, r.coeff_a, r.coeff_b, r.gamma,
                      j["snr_db"].get<double>(), rate_in(config.units, r.gmi_nats),
                      rate_in(config.units, r.capacity_nats),
                      rate_in(config.units, r.rate_loss_nats)});
    records.push_back(j);
  };
  if (config.quantizer) {
    t.parameters["quantizer"] = quantizer_to_json(*config.quantizer);
    for (double s : snrs) {
      add(gmi::make_report(*config.quantizer, ChannelParams::from_snr(numerics::db_to_linear(s))));
    }
  } else {
    const auto bits = sorted_unique(config.resolutions);
    const auto stars = l_stars(bits);
    for (int b : bits) {
      const int K = levels_for_bits(b);
      for (double L : resolve_loadings(config, b, stars.at(b))) {
        for (double s : snrs) {
          add(gmi::make_report(UniformSpec::from_loading(K, L),
                               ChannelParams::from_snr(numerics::db_to_linear(s))));
        }
      }
    }
  }
  t.records = std::move(records);
  return t;
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["command"] = table.command;
  doc["parameters"] = table.parameters;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  if (table.records) doc["records"] = *table.records;
  out << doc.dump(2) << '\n';
}

void emit(const Table& table, const SweepConfig& config) {
  auto write = [&](std::ostream& os) {
    if (config.format == Format::kCsv) {
      write_csv(table, os);
    } else {
      write_json(table, os);
    }
  };
  if (config.output_path.empty() || config.output_path == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open output file: " + config.output_path);
  write(file);
  file.flush();
  if (!file) throw IoError("failed writing output file: " + config.output_path);
}

}  // namespace qgmi::cli
