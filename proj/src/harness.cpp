#include "racert/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace racert {
namespace {

Vec sample_box(const Vec& lo, const Vec& hi, CounterRng& rng) {
  Vec x(lo.size());
  for (int i = 0; i < lo.size(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
  return x;
}

Vec sample_ball(const Vec& center, double radius, CounterRng& rng) {
  return BoundedSet::ball(center, radius).sample(rng);
}

struct TrialResult {
  bool success = false;
  int first_entry = -1;
  bool constraint_violated = false;
};

// Walks the trajectory incrementally; stops at the first stage whose RA
// measure is positive.
template <typename ControlFn>
TrialResult run_trial(const SystemModel& model, const Vec& x0, int horizon,
                      const ControlFn& control_at, const DisturbancePolicy& dist,
                      CounterRng& rng) {
  TrialResult res;
  Vec x = x0;
  double running_c = std::numeric_limits<double>::infinity();
  for (int t = 0; t <= horizon; ++t) {
    running_c = std::min(running_c, model.constraint(x));
    if (model.reward(x) > 0.0 && running_c > 0.0) {
      res.success = true;
      res.first_entry = t;
      return res;
    }
    if (t == horizon) break;
    Vec u = control_at(x, t);
    Vec d = dist.eval(x, u, &rng, model.disturbance_set);
    x = model.step(x, u, d);
  }
  res.constraint_violated = running_c <= 0.0;
  return res;
}

}  // namespace

std::string to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::region: return "region";
    case SamplerKind::learned_set: return "learned_set";
    case SamplerKind::certified_set: return "certified_set";
  }
  return "region";
}

SamplerKind sampler_kind_from_string(const std::string& s) {
  if (s == "region") return SamplerKind::region;
  if (s == "learned_set") return SamplerKind::learned_set;
  if (s == "certified_set") return SamplerKind::certified_set;
  throw std::invalid_argument("unknown sampler kind: " + s);
}

std::string to_string(DisturbanceMode m) {
  return m == DisturbanceMode::sampled ? "sampled" : "worst_case";
}

DisturbanceMode disturbance_mode_from_string(const std::string& s) {
  if (s == "sampled" || s == "uniform") return DisturbanceMode::sampled;
  if (s == "worst_case") return DisturbanceMode::worst_case;
  throw std::invalid_argument("unknown disturbance mode: " + s);
}

SuccessReport success_rate(const SystemModel& model, const ExperimentConfig& config,
                           const Policy& policy, const DisturbancePolicy& dist_policy,
                           const ValueField* field, const CertifiedSet* certified) {
  if (config.trials < 1)
    throw std::invalid_argument("success_rate: trials must be >= 1");
  if (config.sampler == SamplerKind::learned_set && !field)
    throw std::invalid_argument("success_rate: learned_set sampler needs a value field");
  if (config.sampler == SamplerKind::certified_set &&
      (!certified || certified->members.empty()))
    throw std::invalid_argument(
        "success_rate: certified_set sampler needs a non-empty certified set");

  SuccessReport rep;
  rep.trials = config.trials;
  rep.first_entry.resize(config.trials, -1);
  CounterRng root(CounterRng::mix(config.seed));

  for (int trial = 0; trial < config.trials; ++trial) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(trial));
    TrialResult res;
    if (config.sampler == SamplerKind::certified_set) {
      const auto& member = certified->members[rng.next_u64() % certified->members.size()];
      Vec x0 = sample_ball(member.center, certified->eps_x, rng);
      const auto& controls = member.certified_controls;
      const int h = std::min<int>(config.horizon, static_cast<int>(controls.size()));
      auto control_at = [&controls](const Vec&, int t) { return controls[t]; };
      res = run_trial(model, x0, h, control_at, dist_policy, rng);
    } else {
      Vec x0;
      if (config.sampler == SamplerKind::region) {
        x0 = sample_box(config.region_lo, config.region_hi, rng);
      } else {
        int attempts = 0;
        do {
          x0 = sample_box(config.region_lo, config.region_hi, rng);
          if (++attempts > 100000)
            throw std::runtime_error(
                "success_rate: learned_set sampler found no super-zero states");
        } while (!(field->interpolate(x0) > 0.0));
      }
      auto control_at = [&policy](const Vec& x, int) { return policy(x); };
      res = run_trial(model, x0, config.horizon, control_at, dist_policy, rng);
    }
    if (res.success) {
      ++rep.successes;
      rep.first_entry[trial] = res.first_entry;
    } else if (res.constraint_violated) {
      ++rep.failures_constraint;
    } else {
      ++rep.failures_never;
    }
  }
  rep.success_rate = static_cast<double>(rep.successes) / rep.trials;
  return rep;
}

double volume_estimate(const std::function<bool(const Vec&)>& member,
                       const Vec& region_lo, const Vec& region_hi, int samples,
                       std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("volume_estimate: samples must be >= 1");
  double volume = 1.0;
  for (int i = 0; i < region_lo.size(); ++i) volume *= region_hi[i] - region_lo[i];
  CounterRng rng(CounterRng::mix(seed));
  int hits = 0;
  for (int i = 0; i < samples; ++i)
    if (member(sample_box(region_lo, region_hi, rng))) ++hits;
  return volume * static_cast<double>(hits) / samples;
}

ReachTimeStats greedy_reach_times(const SystemModel& model, const ValueField& field,
                                  const ActionLattice& lattice,
                                  const std::vector<Vec>& starts, int horizon) {
  ReachTimeStats stats;
  double total = 0.0;
  for (const Vec& x0 : starts) {
    Vec x = x0;
    double running_c = std::numeric_limits<double>::infinity();
    int entry = -1;
    for (int t = 0; t <= horizon; ++t) {
      running_c = std::min(running_c, model.constraint(x));
      if (model.reward(x) > 0.0 && running_c > 0.0) {
        entry = t;
        break;
      }
      if (t == horizon) break;
      Vec u = greedy_control(field, model, lattice, x);
      Vec d = worst_case_disturbance(field, model, lattice, x, u);
      x = model.dynamics(x, u, d);
    }
    if (entry >= 0) {
      ++stats.reached;
      total += entry;
    } else {
      ++stats.never_reached;
    }
  }
  stats.mean_time = stats.reached ? total / stats.reached : 0.0;
  return stats;
}

std::vector<GammaSweepRow> gamma_sweep(const SystemModel& model, const Grid& grid,
                                       const GammaSweepParams& params) {
  for (double g : params.gammas)
    if (!(g > 0.0 && g < 1.0))
      throw std::invalid_argument("gamma_sweep: gamma must be in (0,1)");

  const ActionLattice lattice =
      ActionLattice::build(model, params.lattice_controls, params.lattice_disturbances);

  std::vector<GammaSweepRow> rows;
  std::vector<std::shared_ptr<const ValueField>> fields;
  for (double g : params.gammas) {
    GammaSweepRow row;
    row.gamma = g;
    auto field = std::make_shared<const ValueField>(
        value_iteration(model, grid, g, lattice, params.solve));
    row.iterations = field->stats.iterations;
    row.converged = field->stats.converged;
    fields.push_back(field);
    rows.push_back(row);
  }

  Vec grid_lo(grid.dim()), grid_hi(grid.dim());
  for (int i = 0; i < grid.dim(); ++i) {
    grid_lo[i] = grid.axis(i).lo;
    grid_hi[i] = grid.axis(i).hi;
  }

  // shared pool of starts outside the target but inside every field's
  // super-zero set, so reach-time means compare like for like across gamma
  std::vector<Vec> pool;
  {
    CounterRng rng = CounterRng(CounterRng::mix(params.seed)).substream(0x706F6F6CULL);
    int attempts = 0;
    while (static_cast<int>(pool.size()) < params.reach_trials &&
           attempts < 200000) {
      ++attempts;
      Vec x = sample_box(grid_lo, grid_hi, rng);
      if (model.reward(x) > 0.0) continue;
      bool in_all = true;
      for (const auto& f : fields)
        if (!(f->interpolate(x) > 0.0)) {
          in_all = false;
          break;
        }
      if (in_all) pool.push_back(x);
    }
  }

  for (std::size_t i = 0; i < params.gammas.size(); ++i) {
    GammaSweepRow& row = rows[i];
    const auto& field = fields[i];
    row.super_zero_volume = volume_estimate(
        [&](const Vec& x) { return field->interpolate(x) > 0.0; }, grid_lo,
        grid_hi, params.volume_samples, params.seed);

    Policy greedy = Policy::grid_greedy(field, std::make_shared<SystemModel>(model),
                                        lattice);
    CertifiedSet certset = certify_offline(
        model, greedy, params.cert_lo, params.cert_hi, params.cert_eps_x,
        params.cert_horizon, row.gamma, CertMethod::both, params.cert_max_centers);
    row.centers_examined = certset.centers_examined;
    for (const auto& member : certset.members) {
      if (member.certified(CertMethod::lipschitz)) ++row.certified_lipschitz;
      if (member.certified(CertMethod::socp)) ++row.certified_socp;
    }
    auto covered_by = [&](CertMethod m) {
      return [&certset, m](const Vec& x) {
        for (const auto& member : certset.members)
          if (member.certified(m) && (x - member.center).norm() <= certset.eps_x)
            return true;
        return false;
      };
    };
    row.lipschitz_volume =
        volume_estimate(covered_by(CertMethod::lipschitz), params.cert_lo,
                        params.cert_hi, params.volume_samples, params.seed);
    row.socp_volume =
        volume_estimate(covered_by(CertMethod::socp), params.cert_lo,
                        params.cert_hi, params.volume_samples, params.seed);

    row.reach = greedy_reach_times(model, *field, lattice, pool, params.reach_horizon);
  }
  return rows;
}

LatencyReport latency_histogram(const SystemModel& model, const Policy& policy,
                                int centers, const Vec& region_lo,
                                const Vec& region_hi, double eps_x, int horizon,
                                double gamma, std::uint64_t seed) {
  if (centers < 1)
    throw std::invalid_argument("latency_histogram: centers must be >= 1");
  LatencyReport rep;
  CounterRng rng(CounterRng::mix(seed));
  for (int i = 0; i < centers; ++i) {
    Vec x = sample_box(region_lo, region_hi, rng);
    CertReport lip = certify_online(model, policy, x, eps_x, horizon, gamma,
                                    CertMethod::lipschitz);
    CertReport socp = certify_online(model, policy, x, eps_x, horizon, gamma,
                                     CertMethod::socp);
    rep.lipschitz_seconds.push_back(lip.wall_time_seconds);
    rep.socp_seconds.push_back(socp.wall_time_seconds);
  }
  rep.lipschitz_median = median(rep.lipschitz_seconds);
  rep.socp_median = median(rep.socp_seconds);
  return rep;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace racert
