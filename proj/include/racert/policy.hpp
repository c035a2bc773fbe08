#pragma once

#include <memory>

#include "racert/grid.hpp"
#include "racert/lattice.hpp"
#include "racert/trajectory.hpp"

namespace racert {

// Greedy maximizer of the backup at x: argmax over lattice controls of the
// min over lattice disturbances of the backup integrand. Ties break to the
// first control in lattice order.
Vec greedy_control(const ValueField& field, const SystemModel& model,
                   const ActionLattice& lattice, const Vec& x);

// Inner minimizer of the backup at (x, u); ties break to the first
// disturbance in lattice order.
Vec worst_case_disturbance(const ValueField& field, const SystemModel& model,
                           const ActionLattice& lattice, const Vec& x,
                           const Vec& u);

// State-to-control map. Outputs are always inside U: grid-greedy and
// constant variants are inside by construction, black boxes are clamped with
// tolerance 1e-6 beyond which evaluation throws (a silently altered control
// must not be certified).
class Policy {
 public:
  static Policy constant(Vec u);
  static Policy grid_greedy(std::shared_ptr<const ValueField> field,
                            std::shared_ptr<const SystemModel> model,
                            ActionLattice lattice);
  static Policy black_box(std::function<Vec(const Vec&)> fn,
                          const BoundedSet& control_set);

  Vec operator()(const Vec& x) const { return eval_(x); }

 private:
  Policy() = default;
  std::function<Vec(const Vec&)> eval_;
};

// (state, control) -> disturbance map.
class DisturbancePolicy {
 public:
  static DisturbancePolicy constant(Vec d);
  static DisturbancePolicy grid_worst_case(std::shared_ptr<const ValueField> field,
                                           std::shared_ptr<const SystemModel> model,
                                           ActionLattice lattice);
  // Uniform draw over D from the rollout's seeded stream.
  static DisturbancePolicy uniform_sampler();

  bool is_sampler() const { return sampler_; }
  Vec eval(const Vec& x, const Vec& u, CounterRng* rng,
           const BoundedSet& disturbance_set) const;

 private:
  DisturbancePolicy() = default;
  std::function<Vec(const Vec&, const Vec&)> eval_;
  bool sampler_ = false;
};

// Plays policy against dist_policy for `horizon` steps. Sampler disturbances
// draw from a CounterRng stream keyed by seed, so equal seeds reproduce the
// trajectory bitwise.
Trajectory rollout(const SystemModel& model, const Policy& policy,
                   const DisturbancePolicy& dist_policy, const Vec& x0,
                   int horizon, std::uint64_t seed = 0);

}  // namespace racert
