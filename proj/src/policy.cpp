#include "racert/policy.hpp"

#include <limits>
#include <stdexcept>

#include "racert/value.hpp"

namespace racert {

double Trajectory::replay_error(const SystemModel& model) const {
  double err = 0.0;
  for (int t = 0; t < horizon(); ++t) {
    Vec expect = model.step(states[t], controls[t], disturbances[t]);
    err = std::max(err, (expect - states[t + 1]).lpNorm<Eigen::Infinity>());
  }
  return err;
}

Vec greedy_control(const ValueField& field, const SystemModel& model,
                   const ActionLattice& lattice, const Vec& x) {
  double best = -std::numeric_limits<double>::infinity();
  const Vec* arg = nullptr;
  for (const Vec& u : lattice.controls) {
    double worst = std::numeric_limits<double>::infinity();
    for (const Vec& d : lattice.disturbances)
      worst = std::min(worst, backup_integrand(field, model, x, u, d));
    if (worst > best) {
      best = worst;
      arg = &u;
    }
  }
  return *arg;
}

Vec worst_case_disturbance(const ValueField& field, const SystemModel& model,
                           const ActionLattice& lattice, const Vec& x,
                           const Vec& u) {
  double best = std::numeric_limits<double>::infinity();
  const Vec* arg = nullptr;
  for (const Vec& d : lattice.disturbances) {
    double q = backup_integrand(field, model, x, u, d);
    if (q < best) {
      best = q;
      arg = &d;
    }
  }
  return *arg;
}

Policy Policy::constant(Vec u) {
  Policy p;
  p.eval_ = [u = std::move(u)](const Vec&) { return u; };
  return p;
}

Policy Policy::grid_greedy(std::shared_ptr<const ValueField> field,
                           std::shared_ptr<const SystemModel> model,
                           ActionLattice lattice) {
  Policy p;
  p.eval_ = [field = std::move(field), model = std::move(model),
             lattice = std::move(lattice)](const Vec& x) {
    return greedy_control(*field, *model, lattice, x);
  };
  return p;
}

Policy Policy::black_box(std::function<Vec(const Vec&)> fn,
                         const BoundedSet& control_set) {
  Policy p;
  p.eval_ = [fn = std::move(fn), control_set](const Vec& x) {
    Vec u = fn(x);
    Vec clamped = control_set.clamp(u);
    if ((u - clamped).norm() > 1e-6)
      throw std::runtime_error("Policy: black-box output outside U beyond tolerance");
    return clamped;
  };
  return p;
}

DisturbancePolicy DisturbancePolicy::constant(Vec d) {
  DisturbancePolicy p;
  p.eval_ = [d = std::move(d)](const Vec&, const Vec&) { return d; };
  return p;
}

DisturbancePolicy DisturbancePolicy::grid_worst_case(
    std::shared_ptr<const ValueField> field,
    std::shared_ptr<const SystemModel> model, ActionLattice lattice) {
  DisturbancePolicy p;
  p.eval_ = [field = std::move(field), model = std::move(model),
             lattice = std::move(lattice)](const Vec& x, const Vec& u) {
    return worst_case_disturbance(*field, *model, lattice, x, u);
  };
  return p;
}

DisturbancePolicy DisturbancePolicy::uniform_sampler() {
  DisturbancePolicy p;
  p.sampler_ = true;
  return p;
}

Vec DisturbancePolicy::eval(const Vec& x, const Vec& u, CounterRng* rng,
                            const BoundedSet& disturbance_set) const {
  if (sampler_) {
    if (!rng)
      throw std::invalid_argument("DisturbancePolicy: sampler needs an rng stream");
    return disturbance_set.sample(*rng);
  }
  return eval_(x, u);
}

Trajectory rollout(const SystemModel& model, const Policy& policy,
                   const DisturbancePolicy& dist_policy, const Vec& x0,
                   int horizon, std::uint64_t seed) {
  if (horizon < 0) throw std::invalid_argument("rollout: horizon must be >= 0");
  if (x0.size() != model.n)
    throw std::invalid_argument("rollout: initial state dimension mismatch");
  CounterRng rng = CounterRng(CounterRng::mix(seed)).substream(0x726F6C6CULL);
  Trajectory traj;
  traj.states.reserve(horizon + 1);
  traj.states.push_back(x0);
  for (int t = 0; t < horizon; ++t) {
    const Vec& x = traj.states.back();
    Vec u = policy(x);
    Vec d = dist_policy.eval(x, u, &rng, model.disturbance_set);
    traj.controls.push_back(u);
    traj.disturbances.push_back(d);
    traj.states.push_back(model.step(x, u, d));
  }
  return traj;
}

}  // namespace racert
