#include "racert/tube.hpp"

#include <cmath>
#include <stdexcept>

namespace racert {

std::pair<std::vector<Vec>, std::vector<Vec>> nominal_rollout(
    const SystemModel& model, const Policy& policy, const Vec& x0, int horizon) {
  if (horizon < 1) throw std::invalid_argument("nominal_rollout: horizon must be >= 1");
  if (!model.disturbance_set.contains_zero())
    throw std::invalid_argument("nominal_rollout: 0 must be inside D");
  std::vector<Vec> states{x0};
  std::vector<Vec> controls;
  const Vec d0 = Vec::Zero(model.m_d);
  for (int t = 0; t < horizon; ++t) {
    Vec u = policy(states.back());
    controls.push_back(u);
    states.push_back(model.step(states.back(), u, d0));
  }
  return {std::move(states), std::move(controls)};
}

std::vector<double> lipschitz_tube_radii(const SystemModel& model, double eps_x,
                                         int horizon) {
  if (eps_x < 0) throw std::invalid_argument("lipschitz_tube_radii: eps_x must be >= 0");
  std::vector<double> radii(horizon + 1);
  radii[0] = eps_x;
  for (int t = 0; t < horizon; ++t)
    radii[t + 1] = model.lip_fx * radii[t] + model.lip_fd * model.eps_d;
  return radii;
}

double lipschitz_tube_radius_closed_form(const SystemModel& model, double eps_x,
                                         int t) {
  double s = 0.0;
  for (int tau = 0; tau < t; ++tau) s += std::pow(model.lip_fx, tau);
  return std::pow(model.lip_fx, t) * eps_x + s * model.lip_fd * model.eps_d;
}

Tube build_tube(const SystemModel& model, const Policy& policy, const Vec& x0,
                double eps_x, int horizon) {
  Tube tube;
  auto [states, controls] = nominal_rollout(model, policy, x0, horizon);
  tube.nominal_states = std::move(states);
  tube.nominal_controls = std::move(controls);
  tube.radii = lipschitz_tube_radii(model, eps_x, horizon);
  tube.eps_x = eps_x;
  tube.eps_d = model.eps_d;
  tube.horizon = horizon;
  return tube;
}

}  // namespace racert
