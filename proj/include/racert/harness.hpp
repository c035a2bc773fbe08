#pragma once

#include "racert/certify.hpp"
#include "racert/value.hpp"

namespace racert {

enum class SamplerKind { region, learned_set, certified_set };
enum class DisturbanceMode { sampled, worst_case };

std::string to_string(SamplerKind k);
SamplerKind sampler_kind_from_string(const std::string& s);
std::string to_string(DisturbanceMode m);
DisturbanceMode disturbance_mode_from_string(const std::string& s);

struct ExperimentConfig {
  SamplerKind sampler = SamplerKind::region;
  Vec region_lo, region_hi;  // sampling box (region and learned_set samplers)
  int trials = 100;
  int horizon = 50;
  std::uint64_t seed = 0;
  DisturbanceMode disturbance = DisturbanceMode::sampled;
};

struct SuccessReport {
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  std::vector<int> first_entry;  // stage of first safe reach, -1 if none
  int failures_constraint = 0;   // constraint violated before any safe reach
  int failures_never = 0;        // stayed safe but never reached
};

// Monte-Carlo success-rate protocol: a trial succeeds iff the rollout's RA
// measure is positive at some stage within the horizon. The learned_set
// sampler rejection-samples the field's super-zero set; the certified_set
// sampler draws a ball around a certified center and replays that center's
// certified open-loop controls instead of the policy.
SuccessReport success_rate(const SystemModel& model, const ExperimentConfig& config,
                           const Policy& policy, const DisturbancePolicy& dist_policy,
                           const ValueField* field = nullptr,
                           const CertifiedSet* certified = nullptr);

// Fraction of N uniform samples passing the test, times the region volume.
double volume_estimate(const std::function<bool(const Vec&)>& member,
                       const Vec& region_lo, const Vec& region_hi, int samples,
                       std::uint64_t seed);

// Mean stage of first safe reach for greedy rollouts against the grid
// worst-case disturbance, over a fixed pool of start states. Starts that
// never reach within the horizon are excluded from the mean and counted.
struct ReachTimeStats {
  double mean_time = 0.0;
  int reached = 0;
  int never_reached = 0;
};
ReachTimeStats greedy_reach_times(const SystemModel& model, const ValueField& field,
                                  const ActionLattice& lattice,
                                  const std::vector<Vec>& starts, int horizon);

struct GammaSweepRow {
  double gamma = 0.0;
  int iterations = 0;
  bool converged = false;
  double super_zero_volume = 0.0;
  double lipschitz_volume = 0.0;
  double socp_volume = 0.0;
  int certified_lipschitz = 0;
  int certified_socp = 0;
  std::size_t centers_examined = 0;
  ReachTimeStats reach;
};

struct GammaSweepParams {
  std::vector<double> gammas;
  SolveOptions solve;
  int lattice_controls = 11;
  int lattice_disturbances = 5;
  double cert_eps_x = 0.05;
  int cert_horizon = 30;
  Vec cert_lo, cert_hi;
  std::size_t cert_max_centers = 1000000;
  int volume_samples = 10000;
  int reach_trials = 50;
  int reach_horizon = 120;
  std::uint64_t seed = 0;
};

std::vector<GammaSweepRow> gamma_sweep(const SystemModel& model, const Grid& grid,
                                       const GammaSweepParams& params);

struct LatencyReport {
  std::vector<double> lipschitz_seconds;
  std::vector<double> socp_seconds;
  double lipschitz_median = 0.0;
  double socp_median = 0.0;
};

// Times both certificates on `centers` states sampled uniformly in the box.
LatencyReport latency_histogram(const SystemModel& model, const Policy& policy,
                                int centers, const Vec& region_lo,
                                const Vec& region_hi, double eps_x, int horizon,
                                double gamma, std::uint64_t seed);

double median(std::vector<double> values);

}  // namespace racert
