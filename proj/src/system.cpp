#include "racert/system.hpp"

#include <stdexcept>

namespace racert {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::reach_avoid: return "reach_avoid";
    case Mode::viability: return "viability";
    case Mode::reach: return "reach";
  }
  return "reach_avoid";
}

Mode mode_from_string(const std::string& s) {
  if (s == "reach_avoid") return Mode::reach_avoid;
  if (s == "viability") return Mode::viability;
  if (s == "reach") return Mode::reach;
  throw std::invalid_argument("unknown mode: " + s);
}

Vec SystemModel::step(const Vec& x, const Vec& u, const Vec& d) const {
  if (x.size() != n) throw std::invalid_argument("step: state dimension mismatch");
  if (u.size() != m_u) throw std::invalid_argument("step: control dimension mismatch");
  if (d.size() != m_d) throw std::invalid_argument("step: disturbance dimension mismatch");
  if (!x.allFinite()) throw std::invalid_argument("step: non-finite state");
  if (!control_set.contains(u))
    throw std::invalid_argument("step: control outside U");
  if (!disturbance_set.contains(d))
    throw std::invalid_argument("step: disturbance outside D");
  return dynamics(x, u, d);
}

void apply_mode(SystemModel& model, Mode mode) {
  model.mode = mode;
  if (mode == Mode::viability) {
    model.reward = ScalarFn::constant(-1.0, model.reward.bound());
  } else if (mode == Mode::reach) {
    model.constraint = ScalarFn::constant(1.0, model.constraint.bound());
  }
}

}  // namespace racert
