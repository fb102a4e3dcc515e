#pragma once

#include <string>

#include <json.hpp>

#include "qd/discord.hpp"
#include "qd/dynamics.hpp"
#include "qd/maxsat.hpp"
#include "qd/montecarlo.hpp"
#include "qd/qstate.hpp"

namespace qd {

// Bloch tensor file schema:
//   {"n_qubits": N, "entries": [{"a": "<N base-4 digits>", "value": v}, ...]}
// Omitted words are zero; the all-identity word is implicit and rejected.
nlohmann::json bloch_to_json(const BlochTensor& n);
BlochTensor bloch_from_json(const nlohmann::json& j);

// Density matrix file schema: row-major [re, im] pairs.
//   {"n_qubits": N, "entries": [[re, im], ...]}  (4^N entries)
nlohmann::json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j);

nlohmann::json frame_to_json(const MeasurementFrame& f);
nlohmann::json norm_result_to_json(const NormResult& r);
nlohmann::json discord_result_to_json(const DiscordResult& r);
nlohmann::json transition_report_to_json(const TransitionReport& r);
nlohmann::json mc_report_to_json(const McReport& r);
nlohmann::json energy_tensor_to_json(const EnergyTensor& t); // H-form coefficients

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

// Shortest decimal form that round-trips to the same double.
std::string format_shortest(double v);

// 64-bit FNV-1a content digest, "fnv1a64:<16 hex digits>".
std::string file_digest(const std::string& path);

} // namespace qd
