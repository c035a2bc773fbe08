#pragma once

#include <functional>
#include <map>
#include <string>

#include "racert/sets.hpp"

namespace racert {

enum class Mode { reach_avoid, viability, reach };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

// Discrete-time uncertain system x+ = f(x, u, d) together with the sets,
// reward/constraint functions, Lipschitz data and surrogate descriptors the
// solver and the certifiers need. Immutable after construction; all queries
// are pure.
struct SystemModel {
  std::string name;
  int n = 0;    // state dimension
  int m_u = 0;  // control dimension
  int m_d = 0;  // disturbance dimension

  std::function<Vec(const Vec&, const Vec&, const Vec&)> dynamics;

  BoundedSet control_set;      // U
  BoundedSet disturbance_set;  // D
  double eps_d = 0.0;          // sup ||d||_2 over D

  ScalarFn reward;      // sign encodes target membership
  ScalarFn constraint;  // pointwise min of components; sign encodes safety

  double lip_fx = 0.0;  // Lipschitz constant of f in x (l2)
  double lip_fd = 0.0;  // Lipschitz constant of f in d (l2)

  SurrogateTarget surrogate_target;
  SurrogateConstraint surrogate_constraint;

  Mode mode = Mode::reach_avoid;

  // Validated step: rejects dimension mismatches and inputs outside U/D.
  Vec step(const Vec& x, const Vec& u, const Vec& d) const;

  double reward_at(const Vec& x) const { return reward(x); }
  double constraint_at(const Vec& x) const { return constraint(x); }

  double value_bound() const {
    return std::max(reward.bound(), constraint.bound());
  }
};

// Parameter map for the builtin families. Unknown keys are rejected.
using ParamMap = std::map<std::string, double>;

// Builtin benchmark instances: linear1d, di2, di4, unicycle.
// Recognized params (all optional): dt, clamp, eps_d/eps_u style bounds per
// family — see builtin_systems.cpp for each family's list.
SystemModel builtin_system(const std::string& name, const ParamMap& params = {},
                           Mode mode = Mode::reach_avoid);

// Applies the mode overrides of the companion propositions:
// viability forces reward == -1, reach forces constraint == +1.
void apply_mode(SystemModel& model, Mode mode);

}  // namespace racert
