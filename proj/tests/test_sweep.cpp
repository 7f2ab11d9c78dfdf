#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qgmi/errors.hpp"
#include "qgmi/gmi.hpp"
#include "qgmi/highres.hpp"
#include "qgmi/sweep.hpp"

namespace {

using namespace qgmi::cli;

double num(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  return std::get<double>(c);
}

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> v;
  for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
  return v;
}

SweepConfig config(std::vector<int> bits, std::vector<double> snr) {
  SweepConfig c;
  c.resolutions = std::move(bits);
  c.snr_grid_db = std::move(snr);
  return c;
}

TEST(SweepConfig, Validation) {
  EXPECT_NO_THROW(config({1}, {0.0}).validate());
  EXPECT_THROW(config({}, {0.0}).validate(), qgmi::ParameterError);
  EXPECT_THROW(config({1}, {}).validate(), qgmi::ParameterError);
  EXPECT_THROW(config({0}, {0.0}).validate(), qgmi::ParameterError);
  auto bad = config({2}, {0.0});
  bad.loading_grid = std::vector<LoadingChoice>{LoadingChoice::fixed(-1.0)};
  EXPECT_THROW(bad.validate(), qgmi::ParameterError);
  bad.loading_grid = std::vector<LoadingChoice>{};
  EXPECT_THROW(bad.validate(), qgmi::ParameterError);
  auto few = config({2}, {0.0});
  few.samples = 100;
  EXPECT_THROW(few.validate(), qgmi::ParameterError);
}

TEST(Helpers, LevelsAndAutoGrid) {
  EXPECT_EQ(levels_for_bits(1), 1);
  EXPECT_EQ(levels_for_bits(6), 32);
  EXPECT_DOUBLE_EQ(l_star_for_bits(1), qgmi::highres::one_bit_loading());
  const auto grid = auto_loading_grid(4);
  ASSERT_EQ(grid.size(), 60u);
  EXPECT_DOUBLE_EQ(grid.front(), 0.5);
  EXPECT_DOUBLE_EQ(grid.back(), qgmi::highres::scaling_law(4) + 3.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    EXPECT_NEAR(grid[i] / grid[i - 1], grid[1] / grid[0], 1e-12);
  }
}

TEST(RateSweep, ShapeAndClaims) {
  auto c = config({6, 5, 4, 3, 2, 1}, range(-10.0, 40.0, 1.0));
  const auto t = rate_sweep(c);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"b", "snr_db", "L_star", "gmi_bits", "capacity_bits"}));
  ASSERT_EQ(t.rows.size(), 6u * 51u);
  std::map<std::pair<int, double>, double> gmi;
  for (const auto& r : t.rows) {
    EXPECT_LE(num(r[3]), num(r[4]));
    gmi[std::pair<int, double>(static_cast<int>(num(r[0])), num(r[1]))] = num(r[3]);
  }
  // Sorted by b, then snr.
  EXPECT_EQ(num(t.rows.front()[0]), 1.0);
  EXPECT_EQ(num(t.rows.front()[1]), -10.0);
  EXPECT_NEAR(gmi.at(std::pair<int, double>(1, 40.0)), 1.4604, 1e-3);
  for (double s : range(-10.0, 40.0, 1.0)) {
    for (int b = 2; b <= 6; ++b) EXPECT_GT(gmi.at(std::pair<int, double>(b, s)), gmi.at(std::pair<int, double>(b - 1, s))) << b << " " << s;
  }
  for (int b = 1; b <= 6; ++b) {
    const int K = levels_for_bits(b);
    const double g = qgmi::gmi::gamma(qgmi::quant::UniformSpec::from_loading(K, l_star_for_bits(b)));
    const double sat = std::log2(1.0 / g);
    EXPECT_LT(gmi.at(std::pair<int, double>(b, 40.0)), sat);
    EXPECT_GT(gmi.at(std::pair<int, double>(b, 40.0)), gmi.at(std::pair<int, double>(b, 30.0)));
    if (b <= 3) {
      EXPECT_NEAR(gmi.at(std::pair<int, double>(b, 40.0)), sat, 0.02 * sat) << b;
    }
  }
}

TEST(RateSweep, NatsUnits) {
  auto c = config({2}, {10.0});
  c.units = qgmi::Units::kNats;
  const auto t = rate_sweep(c);
  EXPECT_EQ(t.columns[3], "gmi_nats");
  c.units = qgmi::Units::kBits;
  const auto tb = rate_sweep(c);
  EXPECT_NEAR(num(t.rows[0][3]) / std::log(2.0), num(tb.rows[0][3]), 1e-15);
}

TEST(LoadingSweep, FourSigmaLossAndMarkers) {
  const auto t = loading_sweep(config({3, 6, 9}, {10.0}));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"b", "L", "snr_db", "gmi_bits", "marker"}));
  std::map<std::pair<int, std::string>, double> marked;
  std::map<int, std::vector<std::pair<double, double>>> curves;
  for (const auto& r : t.rows) {
    const int b = static_cast<int>(num(r[0]));
    const auto& m = std::get<std::string>(r[4]);
    if (m.empty()) {
      curves[b].emplace_back(num(r[1]), num(r[3]));
    } else {
      marked[std::pair<int, std::string>(b, m)] = num(r[3]);
    }
  }
  for (int b : {3, 6, 9}) {
    EXPECT_EQ(curves[b].size(), 60u);
    EXPECT_TRUE(marked.count(std::pair<int, std::string>(b, "L_star")) && marked.count(std::pair<int, std::string>(b, "L_hat")) &&
                marked.count(std::pair<int, std::string>(b, "four_sigma")));
  }
  const auto rel_loss = [&](int b) {
    return (marked.at(std::pair<int, std::string>(b, "L_star")) - marked.at(std::pair<int, std::string>(b, "four_sigma"))) / marked.at(std::pair<int, std::string>(b, "L_star"));
  };
  EXPECT_LT(rel_loss(9), 1e-3);
  EXPECT_GT(rel_loss(3), 1e-2);
  EXPECT_NEAR(rel_loss(3), 0.122, 1e-3);
  for (int b : {3, 6, 9}) {
    for (const auto& [L, g] : curves[b]) EXPECT_LE(g, marked.at(std::pair<int, std::string>(b, "L_star")) + 1e-15) << b << " " << L;
  }
}

TEST(LoadingSweep, UnimodalInLoading) {
  const auto t = loading_sweep(config({2, 3, 4, 5, 6, 7, 8, 9, 10}, {-10.0, 10.0, 30.0}));
  std::map<std::pair<int, double>, std::vector<double>> curves;
  for (const auto& r : t.rows) {
    if (std::get<std::string>(r[4]).empty()) curves[std::pair<int, double>(static_cast<int>(num(r[0])), num(r[2]))].push_back(num(r[3]));
  }
  for (const auto& [key, g] : curves) {
    int turns = 0;
    for (std::size_t i = 2; i < g.size(); ++i) {
      if ((g[i] > g[i - 1]) != (g[i - 1] > g[i - 2])) ++turns;
    }
    EXPECT_EQ(turns, 1) << key.first << " " << key.second;
  }
}

TEST(LoadingSweep, ExplicitGridWithStar) {
  auto c = config({4}, {0.0});
  c.loading_grid = std::vector<LoadingChoice>{LoadingChoice::fixed(2.0), LoadingChoice::star()};
  const auto t = loading_sweep(c);
  // Two grid rows plus three markers.
  EXPECT_EQ(t.rows.size(), 5u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_GE(num(t.rows[i][1]), num(t.rows[i - 1][1]));
}

TEST(OptimalLoadingTable, Columns) {
  std::vector<int> bits;
  for (int b = 2; b <= 16; ++b) bits.push_back(b);
  const auto t = optimal_loading_table(config(bits, {10.0}));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"K", "b", "L_star", "L_hat", "scaling_law", "L_mse"}));
  ASSERT_EQ(t.rows.size(), 15u);
  ASSERT_TRUE(t.records.has_value());
  EXPECT_EQ(t.records->size(), 15u);
  for (const auto& r : t.rows) {
    const double K = num(r[0]);
    EXPECT_EQ(num(r[4]), 2.0 * std::sqrt(std::log(2.0 * K)));
    EXPECT_LT(num(r[2]), num(r[4]));
    EXPECT_NEAR(num(r[5]), num(r[2]), 1e-6);
  }
  EXPECT_NEAR(num(t.rows[1][4]) - num(t.rows[1][2]), 0.54, 0.01);
  // |L* - L_hat| shrinks from b = 9 (K = 2^8) on.
  for (std::size_t i = 8; i < t.rows.size(); ++i) {
    const double gap = std::abs(num(t.rows[i][2]) - num(t.rows[i][3]));
    const double prev = std::abs(num(t.rows[i - 1][2]) - num(t.rows[i - 1][3]));
    EXPECT_LT(gap, prev) << i;
  }
  EXPECT_THROW(optimal_loading_table(config({1, 2}, {10.0})), qgmi::ParameterError);
}

TEST(McValidate, DeterministicAndScaled) {
  auto c = config({2, 4}, {0.0, 20.0});
  c.loading_grid = std::vector<LoadingChoice>{LoadingChoice::star(), LoadingChoice::fixed(4.0)};
  c.samples = 10'000;
  const auto a = mc_validate(c);
  const auto b = mc_validate(c);
  std::ostringstream sa;
  std::ostringstream sb;
  write_csv(a, sa);
  write_csv(b, sb);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.rows.size(), 8u);
  EXPECT_EQ(a.columns, (std::vector<std::string>{"b", "L", "snr_db", "gmi_analytic_bits", "gmi_mc_bits",
                                                 "std_err", "z_score"}));

  auto big = c;
  big.samples = 1'000'000;
  const auto large = mc_validate(big);
  double log_ratio = 0.0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    log_ratio += std::log(num(a.rows[i][5]) / num(large.rows[i][5]));
    EXPECT_LE(std::abs(num(large.rows[i][6])), 4.0) << i;
  }
  const double ratio = std::exp(log_ratio / static_cast<double>(a.rows.size()));
  EXPECT_GT(ratio, 7.0);
  EXPECT_LT(ratio, 14.0);
  EXPECT_FALSE(large.validation_failed);
}

TEST(GmiReports, QuantizerAndUniformRoutes) {
  auto c = config({3}, {0.0, 10.0});
  c.loading_grid = std::vector<LoadingChoice>{LoadingChoice::fixed(4.0)};
  const auto uniform = gmi_reports(c);
  ASSERT_EQ(uniform.rows.size(), 2u);
  EXPECT_EQ(uniform.columns, (std::vector<std::string>{"K", "step", "loading_factor", "A", "B", "gamma",
                                                       "snr_db", "gmi_bits", "capacity_bits", "loss_bits"}));
  EXPECT_NEAR(num(uniform.rows[0][5]), 0.07698600931286192, 1e-14);

  auto cq = c;
  cq.quantizer = qgmi::quant::make_uniform(4, 1.0);
  const auto general = gmi_reports(cq);
  ASSERT_EQ(general.rows.size(), 2u);
  EXPECT_TRUE(std::isnan(num(general.rows[0][1])));
  EXPECT_NEAR(num(general.rows[1][7]), num(uniform.rows[1][7]), 1e-13);
  const auto& rec = (*general.records)[0];
  EXPECT_TRUE(rec.at("step").is_null());
  EXPECT_TRUE(rec.at("loading_factor").is_null());
}

TEST(Output, CsvFormatting) {
  Table t;
  t.command = "x";
  t.columns = {"a", "b", "c"};
  t.rows = {{std::int64_t{3}, 0.1, std::string("L_star")}, {std::int64_t{-1}, std::nan(""), std::string("")}};
  std::ostringstream os;
  write_csv(t, os);
  EXPECT_EQ(os.str(), "a,b,c\n3,0.1,L_star\n-1,,\n");
}

TEST(Output, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 1.4604481735891688}) {
    const auto s = format_number(v);
    EXPECT_EQ(s.find(','), std::string::npos);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
}

TEST(Output, JsonShape) {
  const auto t = rate_sweep(config({2}, {0.0, 10.0}));
  std::ostringstream os;
  write_json(t, os);
  const auto j = nlohmann::json::parse(os.str());
  EXPECT_EQ(j.at("command"), "rate-sweep");
  EXPECT_EQ(j.at("rows").size(), 2u);
  EXPECT_EQ(j.at("rows")[0].at("b"), 2);
  EXPECT_EQ(j.at("parameters").at("units"), "bits");
  EXPECT_EQ(j.at("columns").size(), 5u);
}

TEST(Output, UnwritablePathRaisesIoError) {
  auto c = config({2}, {0.0});
  c.output_path = "/nonexistent-dir/out.csv";
  EXPECT_THROW(emit(rate_sweep(c), c), qgmi::IoError);
}

}  // namespace
