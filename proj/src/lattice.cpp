#include "racert/lattice.hpp"

#include <stdexcept>

namespace racert {

ActionLattice ActionLattice::build(const SystemModel& model, int per_control_dim,
                                   int per_disturbance_dim) {
  if (per_control_dim < 1 || per_disturbance_dim < 1)
    throw std::invalid_argument("ActionLattice: need >= 1 point per dimension");
  ActionLattice lat;
  lat.controls = model.control_set.lattice(per_control_dim);
  lat.disturbances = model.disturbance_set.lattice(per_disturbance_dim);
  return lat;
}

}  // namespace racert
