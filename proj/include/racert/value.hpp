#pragma once

#include "racert/grid.hpp"
#include "racert/lattice.hpp"
#include "racert/trajectory.hpp"

namespace racert {

// min{ r(x_t), min_{tau<=t} c(x_tau) }: positive iff the prefix reaches the
// target safely.
double ra_measure(const Trajectory& traj, int t, const SystemModel& model);

// min{ gamma^t r(x_t), min_{tau<=t} gamma^tau c(x_tau) }; sign-equivalent to
// ra_measure for gamma in (0,1).
double discounted_ra_measure(const Trajectory& traj, int t, double gamma,
                             const SystemModel& model);

struct SolveOptions {
  double tol = 1e-6;
  int max_iter = 5000;
  // Sweeps the level mask must stay unchanged before the iteration is
  // declared converged. The sign of slow-resolving nodes keeps flipping with
  // sub-tolerance increments long after the sup-norm residual is small, so a
  // pure residual stop misplaces the set boundary.
  int stable_window = 100;
  int threads = 1;
};

// One application of the discounted max-min Bellman operator on the grid.
// The input field is untouched; off-grid successors use clamped multilinear
// interpolation.
ValueField bellman_backup(const ValueField& field, const SystemModel& model,
                          const ActionLattice& lattice, int threads = 1);

// Iterates the backup from V0 = min(r, c) until the residual is below tol
// and the level mask has been stable for opts.stable_window sweeps. Always
// returns the field; stats.converged reports whether the stop criterion was
// met within max_iter.
ValueField value_iteration(const SystemModel& model, const Grid& grid,
                           double gamma, const ActionLattice& lattice,
                           const SolveOptions& opts = {});

// Backup integrand min{c(x), max{r(x), gamma * V(f(x,u,d))}}.
double backup_integrand(const ValueField& field, const SystemModel& model,
                        const Vec& x, const Vec& u, const Vec& d);

}  // namespace racert
