#pragma once

// JSON encodings of quantizers and analysis records.

#include <json.hpp>

#include "qgmi/gmi.hpp"
#include "qgmi/highres.hpp"
#include "qgmi/montecarlo.hpp"
#include "qgmi/quantizer.hpp"

namespace qgmi {

enum class Units { kBits, kNats };

/// "_bits" or "_nats"; rate fields carry their unit in the name.
const char* unit_suffix(Units units);
double rate_in(Units units, double nats);

/// {K, thresholds[], points[]}
nlohmann::json quantizer_to_json(const quant::SymmetricQuantizer& q);
/// Throws ParameterError on missing fields or K mismatch, DomainError on
/// invalid threshold/point sequences.
quant::SymmetricQuantizer quantizer_from_json(const nlohmann::json& j);

/// {K, step, loading_factor, A, B, gamma, snr_db, gmi_bits, capacity_bits,
///  loss_bits}; step and loading_factor are null for non-uniform quantizers.
nlohmann::json report_to_json(const gmi::GmiReport& r, Units units = Units::kBits);

/// {K, b, L_star, step_star, L_hat, scaling_law, L_mse, gamma_at_star,
///  gmi_at_star_bits, gmi_at_hat_bits}
nlohmann::json loading_to_json(const highres::LoadingAnalysis& a, Units units = Units::kBits);

nlohmann::json moments_to_json(const mc::MomentEstimate& m);
nlohmann::json decode_to_json(const mc::DecodeExperiment& d);

}  // namespace qgmi
