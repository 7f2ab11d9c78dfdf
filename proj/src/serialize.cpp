#include "qgmi/serialize.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qgmi/errors.hpp"
#include "qgmi/numerics.hpp"

namespace qgmi {
namespace {

using nlohmann::json;

std::string rate_key(const char* stem, Units units) { return std::string(stem) + unit_suffix(units); }

double snr_db(double snr) { return 10.0 * std::log10(snr); }

}  // namespace

const char* unit_suffix(Units units) { return units == Units::kBits ? "_bits" : "_nats"; }

double rate_in(Units units, double nats) {
  return units == Units::kBits ? numerics::to_bits(nats) : nats;
}

json quantizer_to_json(const quant::SymmetricQuantizer& q) {
  return json{{"K", q.levels()},
              {"thresholds", std::vector<double>(q.thresholds().begin(), q.thresholds().end())},
              {"points", std::vector<double>(q.points().begin(), q.points().end())}};
}

quant::SymmetricQuantizer quantizer_from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("quantizer JSON: expected an object");
  for (const char* key : {"K", "thresholds", "points"}) {
    if (!j.contains(key)) throw ParameterError(std::string("quantizer JSON: missing '") + key + "'");
  }
  int K = 0;
  std::vector<double> thresholds;
  std::vector<double> points;
  try {
    K = j.at("K").get<int>();
    thresholds = j.at("thresholds").get<std::vector<double>>();
    points = j.at("points").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("quantizer JSON: ") + e.what());
  }
  if (K < 1 || static_cast<std::size_t>(K) != points.size()) {
    throw ParameterError("quantizer JSON: K does not match the number of points");
  }
  return {std::move(thresholds), std::move(points)};
}

json report_to_json(const gmi::GmiReport& r, Units units) {
  json j;
  j["K"] = r.levels_K;
  if (r.uniform) {
    j["step"] = r.uniform->step;
    j["loading_factor"] = r.uniform->loading_factor();
  } else {
    j["step"] = nullptr;
    j["loading_factor"] = nullptr;
  }
  j["A"] = r.coeff_a;
  j["B"] = r.coeff_b;
  j["gamma"] = r.gamma;
  j["snr_db"] = snr_db(r.snr);
  j[rate_key("gmi", units)] = rate_in(units, r.gmi_nats);
  j[rate_key("capacity", units)] = rate_in(units, r.capacity_nats);
  j[rate_key("loss", units)] = rate_in(units, r.rate_loss_nats);
  return j;
}

json loading_to_json(const highres::LoadingAnalysis& a, Units units) {
  json j;
  j["K"] = a.levels_K;
  j["b"] = std::log2(2.0 * a.levels_K);
  j["L_star"] = a.l_star;
  j["step_star"] = a.step_star;
  j["L_hat"] = a.l_hat;
  j["scaling_law"] = a.scaling_law;
  j["L_mse"] = a.l_mse;
  j["gamma_at_star"] = a.gamma_at_star;
  j[rate_key("gmi_at_star", units)] = rate_in(units, a.gmi_at_star);
  j[rate_key("gmi_at_hat", units)] = rate_in(units, a.gmi_at_hat);
  return j;
}

json moments_to_json(const mc::MomentEstimate& m) {
  return json{{"exy_conj", {m.exy_conj.real(), m.exy_conj.imag()}},
              {"ey2", m.ey2},
              {"ex2", m.ex2},
              {"alpha_hat", {m.alpha_hat.real(), m.alpha_hat.imag()}},
              {"delta_hat", m.delta_hat},
              {"gmi_hat_nats", m.gmi_hat_nats},
              {"std_err_gmi", m.std_err_gmi},
              {"n_samples", m.n_samples},
              {"seed", m.seed}};
}

json decode_to_json(const mc::DecodeExperiment& d) {
  return json{{"method", d.method == mc::DecodeMethod::kBruteForce ? "brute_force" : "ensemble"},
              {"rate_bits", d.rate_bits},
              {"block_len", d.block_len},
              {"log2_num_messages", d.log2_num_messages},
              {"trials", d.trials},
              {"error_rate", d.error_rate},
              {"std_err", d.std_err},
              {"scale_a", {d.scale_a.real(), d.scale_a.imag()}},
              {"seed", d.seed}};
}

}  // namespace qgmi
