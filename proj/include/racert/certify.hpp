#pragma once

#include <optional>

#include "racert/ball_solvers.hpp"
#include "racert/tube.hpp"

namespace racert {

enum class CertMethod { lipschitz, socp, both };

std::string to_string(CertMethod m);
CertMethod cert_method_from_string(const std::string& s);

// Per-stage lower bounds on reward and constraint over the tube balls.
struct StageBounds {
  std::vector<double> reward_lb;      // ř_t, t = 0..T
  std::vector<double> constraint_lb;  // č_t, t = 0..T
};

struct CertReport {
  Vec center;
  double eps_x = 0.0;
  int horizon = 0;
  double gamma = 0.0;
  CertMethod method = CertMethod::lipschitz;
  std::optional<StageBounds> lipschitz_bounds;
  std::optional<StageBounds> socp_bounds;
  std::optional<double> lipschitz_value;  // V̌^L
  std::optional<double> socp_value;       // V̌^S
  std::vector<Vec> certified_controls;    // ū_0 .. ū_{T-1}
  Tube tube;
  double wall_time_seconds = 0.0;

  bool certified(CertMethod m) const;
  bool any_certified() const;
};

// max_t min{ gamma^t ř_t, min_{tau<=t} gamma^tau č_tau } over t = 0..T.
double compose_certificate(const std::vector<double>& reward_lb,
                           const std::vector<double>& constraint_lb,
                           double gamma);

// Lower bound of V_gamma over ball(x0, eps_x) from Lipschitz constants of
// f, r and c along the disturbance-free nominal trajectory.
CertReport lipschitz_certificate(const SystemModel& model, const Policy& policy,
                                 const Vec& x0, double eps_x, int horizon,
                                 double gamma);

// Lower bound from exact cone subproblems over the same ball tube: linear
// minimization for each surrogate target halfspace, convex-quadratic ball
// minimization for each surrogate constraint form. A subproblem failure is
// conservative: that stage's bound becomes -inf.
CertReport socp_certificate(const SystemModel& model, const Policy& policy,
                            const Vec& x0, double eps_x, int horizon,
                            double gamma);

// Dispatch wrapper; records wall time.
CertReport certify_online(const SystemModel& model, const Policy& policy,
                          const Vec& x0, double eps_x, int horizon, double gamma,
                          CertMethod method);

struct CertifiedSet {
  std::vector<CertReport> members;  // only certified centers
  double eps_x = 0.0;
  int horizon = 0;
  double gamma = 0.0;
  CertMethod method = CertMethod::both;
  Vec region_lo, region_hi;
  double spacing = 0.0;
  std::size_t centers_examined = 0;

  bool covers(const Vec& x) const;  // inside some certified ball
};

// Covers the region box with a lattice of ball centers spaced 2 eps_x/sqrt(n)
// per axis (cell circumradius <= eps_x, so certified balls cover their
// cells), certifies every center, and keeps the certified ones.
CertifiedSet certify_offline(const SystemModel& model, const Policy& policy,
                             const Vec& region_lo, const Vec& region_hi,
                             double eps_x, int horizon, double gamma,
                             CertMethod method, std::size_t max_centers = 1000000,
                             int threads = 1);

}  // namespace racert
