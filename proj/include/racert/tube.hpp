#pragma once

#include "racert/policy.hpp"

namespace racert {

// Disturbance-free nominal trajectory plus the Lipschitz error-ball radii
// that outer-bound every disturbed trajectory replaying the same open-loop
// controls from the initial ball.
struct Tube {
  std::vector<Vec> nominal_states;    // x̄_0 .. x̄_T
  std::vector<Vec> nominal_controls;  // ū_0 .. ū_{T-1}
  std::vector<double> radii;          // Δx_0 .. Δx_T
  double eps_x = 0.0;
  double eps_d = 0.0;
  int horizon = 0;
};

// d = 0 rollout under the policy. Requires 0 in D.
std::pair<std::vector<Vec>, std::vector<Vec>> nominal_rollout(
    const SystemModel& model, const Policy& policy, const Vec& x0, int horizon);

// Radii by the recursion Δx_{t+1} = L_fx Δx_t + L_fd eps_d, Δx_0 = eps_x.
std::vector<double> lipschitz_tube_radii(const SystemModel& model, double eps_x,
                                         int horizon);

// Closed form L_fx^t eps_x + sum_{tau<t} L_fx^tau L_fd eps_d.
double lipschitz_tube_radius_closed_form(const SystemModel& model, double eps_x,
                                         int t);

Tube build_tube(const SystemModel& model, const Policy& policy, const Vec& x0,
                double eps_x, int horizon);

}  // namespace racert
