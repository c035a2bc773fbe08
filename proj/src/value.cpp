#include "racert/value.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace racert {
namespace {

void check_stage(const Trajectory& traj, int t) {
  if (t < 0 || t >= static_cast<int>(traj.states.size()))
    throw std::out_of_range("ra_measure: stage out of range");
}

// Interpolation stencil of every (node, control, disturbance) successor,
// laid out node-major so a node's whole action scan is contiguous.
struct BackupPlan {
  int corners = 0;
  std::size_t entries = 0;  // nodes * |U| * |D|
  std::vector<std::uint32_t> idx;
  std::vector<double> w;
};

// cap on precomputed stencil slots (each is one corner index + weight);
// bigger products fall back to recomputing successors every sweep
constexpr std::size_t kPlanSlotBudget = 30u * 1000 * 1000;

void for_each_chunk(std::size_t total, int threads,
                    const std::function<void(std::size_t, std::size_t)>& work) {
  if (threads <= 1 || total < 1024) {
    work(0, total);
    return;
  }
  const int nt = std::min<std::size_t>(threads, (total + 1023) / 1024);
  std::vector<std::thread> pool;
  const std::size_t chunk = (total + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    std::size_t lo = t * chunk, hi = std::min(total, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
}

BackupPlan build_plan(const Grid& grid, const SystemModel& model,
                      const ActionLattice& lattice, int threads) {
  const int n = grid.dim();
  const std::size_t nodes = grid.size();
  const std::size_t actions = lattice.controls.size() * lattice.disturbances.size();
  BackupPlan plan;
  plan.corners = 1 << n;
  plan.entries = nodes * actions;
  plan.idx.resize(plan.entries * plan.corners);
  plan.w.resize(plan.entries * plan.corners);
  const auto& strides = grid.strides();

  for_each_chunk(nodes, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> base(n);
    std::vector<double> frac(n);
    for (std::size_t node = lo; node < hi; ++node) {
      const Vec x = grid.node(node);
      std::size_t e = node * actions;
      for (const Vec& u : lattice.controls) {
        for (const Vec& d : lattice.disturbances) {
          const Vec xn = model.dynamics(x, u, d);
          grid.locate(xn, base, frac);
          std::size_t base_flat = 0;
          for (int i = 0; i < n; ++i)
            base_flat += strides[i] * static_cast<std::size_t>(base[i]);
          for (int c = 0; c < plan.corners; ++c) {
            double wt = 1.0;
            std::size_t off = 0;
            for (int i = 0; i < n; ++i) {
              if (c & (1 << i)) {
                wt *= frac[i];
                off += strides[i];
              } else {
                wt *= 1.0 - frac[i];
              }
            }
            plan.idx[e * plan.corners + c] = static_cast<std::uint32_t>(base_flat + off);
            plan.w[e * plan.corners + c] = wt;
          }
          ++e;
        }
      }
    }
  });
  return plan;
}

// One planned sweep: out[i] = max_u min_d min{c_i, max{r_i, gamma * interp}}.
void planned_sweep(const BackupPlan& plan, const std::vector<double>& node_r,
                   const std::vector<double>& node_c, double gamma,
                   std::size_t n_u, std::size_t n_d, const std::vector<double>& in,
                   std::vector<double>& out, int threads) {
  const std::size_t nodes = node_r.size();
  const std::size_t actions = n_u * n_d;
  const int corners = plan.corners;
  for_each_chunk(nodes, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t node = lo; node < hi; ++node) {
      const double r = node_r[node];
      const double c = node_c[node];
      const std::uint32_t* ip = plan.idx.data() + node * actions * corners;
      const double* wp = plan.w.data() + node * actions * corners;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t iu = 0; iu < n_u; ++iu) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t id = 0; id < n_d; ++id) {
          double v = 0.0;
          for (int k = 0; k < corners; ++k) v += wp[k] * in[ip[k]];
          ip += corners;
          wp += corners;
          double q = gamma * v;
          if (r > q) q = r;
          if (c < q) q = c;
          if (q < worst) worst = q;
        }
        if (worst > best) best = worst;
      }
      out[node] = best;
    }
  });
}

// Unplanned sweep used when the stencil table would not fit the budget.
void direct_sweep(const Grid& grid, const SystemModel& model,
                  const ActionLattice& lattice, const std::vector<double>& node_r,
                  const std::vector<double>& node_c, double gamma,
                  const ValueField& in, std::vector<double>& out, int threads) {
  for_each_chunk(grid.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t node = lo; node < hi; ++node) {
      const Vec x = grid.node(node);
      const double r = node_r[node];
      const double c = node_c[node];
      double best = -std::numeric_limits<double>::infinity();
      for (const Vec& u : lattice.controls) {
        double worst = std::numeric_limits<double>::infinity();
        for (const Vec& d : lattice.disturbances) {
          double q = gamma * in.interpolate(model.dynamics(x, u, d));
          if (r > q) q = r;
          if (c < q) q = c;
          if (q < worst) worst = q;
        }
        if (worst > best) best = worst;
      }
      out[node] = best;
    }
  });
}

void node_functions(const Grid& grid, const SystemModel& model,
                    std::vector<double>& node_r, std::vector<double>& node_c) {
  node_r.resize(grid.size());
  node_c.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec x = grid.node(i);
    node_r[i] = model.reward(x);
    node_c[i] = model.constraint(x);
  }
}

bool update_mask(std::vector<bool>& mask, const std::vector<double>& v,
                 Mode mode, double bound, double gamma, int sweep) {
  bool changed = false;
  if (mode == Mode::viability) {
    const double thr = -bound * std::pow(gamma, sweep);
    for (std::size_t i = 0; i < v.size(); ++i) {
      bool m = v[i] >= thr;
      if (m != mask[i]) {
        mask[i] = m;
        changed = true;
      }
    }
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) {
      bool m = v[i] > 0.0;
      if (m != mask[i]) {
        mask[i] = m;
        changed = true;
      }
    }
  }
  return changed;
}

}  // namespace

double ra_measure(const Trajectory& traj, int t, const SystemModel& model) {
  check_stage(traj, t);
  double m = model.reward(traj.states[t]);
  for (int tau = 0; tau <= t; ++tau)
    m = std::min(m, model.constraint(traj.states[tau]));
  return m;
}

double discounted_ra_measure(const Trajectory& traj, int t, double gamma,
                             const SystemModel& model) {
  check_stage(traj, t);
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("discounted_ra_measure: gamma must be in (0,1)");
  double m = std::pow(gamma, t) * model.reward(traj.states[t]);
  double df = 1.0;
  for (int tau = 0; tau <= t; ++tau) {
    m = std::min(m, df * model.constraint(traj.states[tau]));
    df *= gamma;
  }
  return m;
}

double backup_integrand(const ValueField& field, const SystemModel& model,
                        const Vec& x, const Vec& u, const Vec& d) {
  double q = field.gamma * field.interpolate(model.dynamics(x, u, d));
  q = std::max(model.reward(x), q);
  return std::min(model.constraint(x), q);
}

ValueField bellman_backup(const ValueField& field, const SystemModel& model,
                          const ActionLattice& lattice, int threads) {
  if (field.grid.dim() != model.n)
    throw std::invalid_argument("bellman_backup: grid/model dimension mismatch");
  std::vector<double> node_r, node_c;
  node_functions(field.grid, model, node_r, node_c);
  ValueField out = field;
  direct_sweep(field.grid, model, lattice, node_r, node_c, field.gamma, field,
               out.values, threads);
  return out;
}

ValueField value_iteration(const SystemModel& model, const Grid& grid,
                           double gamma, const ActionLattice& lattice,
                           const SolveOptions& opts) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("value_iteration: gamma must be in (0,1)");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("value_iteration: tol must be > 0");
  if (grid.dim() != model.n)
    throw std::invalid_argument("value_iteration: grid/model dimension mismatch");
  if (lattice.controls.empty() || lattice.disturbances.empty())
    throw std::invalid_argument("value_iteration: empty lattice");

  ValueField field;
  field.grid = grid;
  field.gamma = gamma;
  field.mode = model.mode;
  field.bound = model.value_bound();

  std::vector<double> node_r, node_c;
  node_functions(grid, model, node_r, node_c);

  field.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    field.values[i] = std::min(node_r[i], node_c[i]);

  const std::size_t n_u = lattice.controls.size();
  const std::size_t n_d = lattice.disturbances.size();
  const bool planned =
      grid.size() * n_u * n_d * (std::size_t{1} << grid.dim()) <= kPlanSlotBudget;
  BackupPlan plan;
  if (planned) plan = build_plan(grid, model, lattice, opts.threads);

  std::vector<bool> mask(grid.size());
  update_mask(mask, field.values, field.mode, field.bound, gamma, 0);

  std::vector<double> next(grid.size());
  double prev_residual = std::numeric_limits<double>::infinity();
  int last_change = 0;
  int sweep = 0;
  bool converged = false;
  double residual = std::numeric_limits<double>::infinity();

  while (sweep < opts.max_iter) {
    ++sweep;
    if (planned)
      planned_sweep(plan, node_r, node_c, gamma, n_u, n_d, field.values, next,
                    opts.threads);
    else
      direct_sweep(grid, model, lattice, node_r, node_c, gamma, field, next,
                   opts.threads);

    residual = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      residual = std::max(residual, std::abs(next[i] - field.values[i]));

    // successive residuals must shrink: the backup is a gamma-contraction
    if (std::isfinite(prev_residual) &&
        residual > gamma * prev_residual + 1e-9 * field.bound)
      throw std::logic_error("value_iteration: residual contraction violated");
    prev_residual = residual;

    field.values.swap(next);
    if (update_mask(mask, field.values, field.mode, field.bound, gamma, sweep))
      last_change = sweep;

    if (residual <= opts.tol && sweep - last_change >= opts.stable_window) {
      converged = true;
      break;
    }
  }

  field.stats.iterations = sweep;
  field.stats.residual = residual;
  field.stats.converged = converged;
  field.stats.last_mask_change = last_change;
  return field;
}

}  // namespace racert
