#pragma once

#include <vector>

#include "racert/system.hpp"

namespace racert {

// Realized play: states x_0..x_T plus the controls and disturbances that
// produced them, so x_{t+1} = f(x_t, u_t, d_t) is re-checkable.
struct Trajectory {
  std::vector<Vec> states;
  std::vector<Vec> controls;
  std::vector<Vec> disturbances;

  int horizon() const { return static_cast<int>(controls.size()); }

  // Recomputes every transition and returns the largest deviation.
  double replay_error(const SystemModel& model) const;
};

}  // namespace racert
