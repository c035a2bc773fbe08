#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "racert/harness.hpp"

namespace racert {

using Json = nlohmann::json;

// --- value field container -------------------------------------------------
// Little-endian binary layout:
//   magic "RAVF", u32 version, u32 dims,
//   per axis: f64 lo, f64 hi, u64 count,
//   f64 gamma, u8 mode, f64 bound,
//   u32 iterations, f64 residual, u8 converged, u32 last_mask_change,
//   payload: f64 per node, row-major (last axis fastest).
void save_field(const ValueField& field, const std::filesystem::path& path);
ValueField load_field(const std::filesystem::path& path);

// CSV with one row per node: coordinates then value.
void export_field_csv(const ValueField& field, const std::filesystem::path& path);

// CSV of a policy sampled at every grid node: coordinates then controls.
void export_policy_csv(const Grid& grid, const Policy& policy,
                       const std::filesystem::path& path);

// --- JSON serialization ----------------------------------------------------
// Timing fields are kept out of report artifacts so identical configs and
// seeds produce byte-identical files; wall time lives in the manifest.
Json cert_report_to_json(const CertReport& rep);
Json certified_set_to_json(const CertifiedSet& set);
CertifiedSet certified_set_from_json(const Json& j);
Json success_report_to_json(const SuccessReport& rep);
Json sweep_to_json(const std::vector<GammaSweepRow>& rows);
Json latency_to_json(const LatencyReport& rep);

void export_certified_centers_csv(const CertifiedSet& set,
                                  const std::filesystem::path& path);
void export_sweep_csv(const std::vector<GammaSweepRow>& rows,
                      const std::filesystem::path& path);
void export_latency_csv(const LatencyReport& rep,
                        const std::filesystem::path& path);

// --- configuration ---------------------------------------------------------
// System document: {"name": "linear1d"|"di2"|"di4"|"unicycle",
//                   "params": {..}, "mode": "reach_avoid"}
// or {"custom_linear": {A,B,D,[c],control,disturbance,clamp,
//                       reward_affine,constraint_affine,[name]}, "mode": ..}
SystemModel system_from_json(const Json& j);
Grid grid_from_json(const Json& j);
ActionLattice lattice_from_json(const SystemModel& model, const Json& j);
SolveOptions solve_options_from_json(const Json& j);

Json load_json_file(const std::filesystem::path& path);

// Atomic write (temp file + rename).
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const Json& j);

// Manifest recorded alongside every CLI artifact; enough to re-run the
// command identically.
void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const Json& resolved_config,
                    const std::vector<std::string>& artifacts, std::uint64_t seed,
                    double wall_time_seconds);

std::string toolkit_version();

}  // namespace racert
