#pragma once

#include <vector>

#include "racert/system.hpp"

namespace racert {

// Finite control and disturbance sets discretizing the max-min backup.
// Points are enumerated in a fixed lexicographic order over dimensions;
// tie-breaking everywhere picks the first point in this order.
struct ActionLattice {
  std::vector<Vec> controls;
  std::vector<Vec> disturbances;

  static ActionLattice build(const SystemModel& model, int per_control_dim = 11,
                             int per_disturbance_dim = 5);
};

}  // namespace racert
