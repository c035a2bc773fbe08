#include "racert/certify.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace racert {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double stage_reward_socp(const SystemModel& model, const Vec& xbar, double radius) {
  double lb = kInf;
  for (const auto& half : model.surrogate_target.halfspaces)
    lb = std::min(lb, min_linear_over_ball(half.p, half.k, xbar, radius));
  return lb;
}

double stage_constraint_socp(const SystemModel& model, const Vec& xbar,
                             double radius) {
  double lb = kInf;
  for (const auto& quad : model.surrogate_constraint.quadratics) {
    double b_eff = quad.b;
    if (quad.offset) {
      // maximize the coupled linear functional over the same stage ball,
      // clamp at zero, then fold into the constant term
      double m = -min_linear_over_ball(-quad.offset->row, 0.0, xbar, radius) +
                 quad.offset->shift;
      b_eff -= quad.offset->scale * std::max(m, 0.0);
    }
    double v;
    try {
      v = min_convex_quadratic_over_ball(quad.Q, quad.q, b_eff, xbar, radius).value;
    } catch (const std::exception&) {
      v = -kInf;  // unresolved subproblem never inflates a certificate
    }
    lb = std::min(lb, v);
  }
  return lb;
}

CertReport certify_impl(const SystemModel& model, const Policy& policy,
                        const Vec& x0, double eps_x, int horizon, double gamma,
                        CertMethod method) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("certify: gamma must be in (0,1)");
  if (horizon < 1) throw std::invalid_argument("certify: horizon must be >= 1");
  if (eps_x < 0) throw std::invalid_argument("certify: eps_x must be >= 0");
  const bool want_lip = method != CertMethod::socp;
  const bool want_socp = method != CertMethod::lipschitz;
  if (want_socp &&
      (model.surrogate_target.empty() || model.surrogate_constraint.empty()))
    throw std::invalid_argument("certify: model lacks surrogate sets for socp");

  CertReport rep;
  rep.center = x0;
  rep.eps_x = eps_x;
  rep.horizon = horizon;
  rep.gamma = gamma;
  rep.method = method;
  rep.tube = build_tube(model, policy, x0, eps_x, horizon);
  rep.certified_controls = rep.tube.nominal_controls;

  const int T = horizon;
  if (want_lip) {
    StageBounds sb;
    sb.reward_lb.resize(T + 1);
    sb.constraint_lb.resize(T + 1);
    const double lr = model.reward.lipschitz();
    const double lc = model.constraint.lipschitz();
    for (int t = 0; t <= T; ++t) {
      const Vec& xbar = rep.tube.nominal_states[t];
      const double rad = rep.tube.radii[t];
      sb.reward_lb[t] = model.reward(xbar) - lr * rad;
      sb.constraint_lb[t] = model.constraint(xbar) - lc * rad;
    }
    rep.lipschitz_value = compose_certificate(sb.reward_lb, sb.constraint_lb, gamma);
    rep.lipschitz_bounds = std::move(sb);
  }
  if (want_socp) {
    StageBounds sb;
    sb.reward_lb.resize(T + 1);
    sb.constraint_lb.resize(T + 1);
    for (int t = 0; t <= T; ++t) {
      const Vec& xbar = rep.tube.nominal_states[t];
      const double rad = rep.tube.radii[t];
      sb.reward_lb[t] = stage_reward_socp(model, xbar, rad);
      sb.constraint_lb[t] = stage_constraint_socp(model, xbar, rad);
    }
    rep.socp_value = compose_certificate(sb.reward_lb, sb.constraint_lb, gamma);
    rep.socp_bounds = std::move(sb);
  }
  return rep;
}

}  // namespace

std::string to_string(CertMethod m) {
  switch (m) {
    case CertMethod::lipschitz: return "lipschitz";
    case CertMethod::socp: return "socp";
    case CertMethod::both: return "both";
  }
  return "both";
}

CertMethod cert_method_from_string(const std::string& s) {
  if (s == "lipschitz") return CertMethod::lipschitz;
  if (s == "socp") return CertMethod::socp;
  if (s == "both") return CertMethod::both;
  throw std::invalid_argument("unknown certification method: " + s);
}

bool CertReport::certified(CertMethod m) const {
  if (m == CertMethod::lipschitz)
    return lipschitz_value && *lipschitz_value > 0.0;
  if (m == CertMethod::socp) return socp_value && *socp_value > 0.0;
  return certified(CertMethod::lipschitz) || certified(CertMethod::socp);
}

bool CertReport::any_certified() const { return certified(CertMethod::both); }

double compose_certificate(const std::vector<double>& reward_lb,
                           const std::vector<double>& constraint_lb,
                           double gamma) {
  double best = -kInf;
  double running_c = kInf;
  double df = 1.0;
  for (std::size_t t = 0; t < reward_lb.size(); ++t) {
    running_c = std::min(running_c, df * constraint_lb[t]);
    best = std::max(best, std::min(df * reward_lb[t], running_c));
    df *= gamma;
  }
  return best;
}

CertReport lipschitz_certificate(const SystemModel& model, const Policy& policy,
                                 const Vec& x0, double eps_x, int horizon,
                                 double gamma) {
  return certify_online(model, policy, x0, eps_x, horizon, gamma,
                        CertMethod::lipschitz);
}

CertReport socp_certificate(const SystemModel& model, const Policy& policy,
                            const Vec& x0, double eps_x, int horizon,
                            double gamma) {
  return certify_online(model, policy, x0, eps_x, horizon, gamma, CertMethod::socp);
}

CertReport certify_online(const SystemModel& model, const Policy& policy,
                          const Vec& x0, double eps_x, int horizon, double gamma,
                          CertMethod method) {
  auto t0 = std::chrono::steady_clock::now();
  CertReport rep = certify_impl(model, policy, x0, eps_x, horizon, gamma, method);
  rep.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

bool CertifiedSet::covers(const Vec& x) const {
  for (const auto& rep : members)
    if ((x - rep.center).norm() <= eps_x) return true;
  return false;
}

CertifiedSet certify_offline(const SystemModel& model, const Policy& policy,
                             const Vec& region_lo, const Vec& region_hi,
                             double eps_x, int horizon, double gamma,
                             CertMethod method, std::size_t max_centers,
                             int threads) {
  const int n = model.n;
  if (region_lo.size() != n || region_hi.size() != n)
    throw std::invalid_argument("certify_offline: region dimension mismatch");
  for (int i = 0; i < n; ++i)
    if (region_lo[i] > region_hi[i])
      throw std::invalid_argument("certify_offline: empty region");
  if (!(eps_x > 0))
    throw std::invalid_argument("certify_offline: eps_x must be > 0");

  const double spacing = 2.0 * eps_x / std::sqrt(static_cast<double>(n));
  std::vector<int> counts(n);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    double extent = region_hi[i] - region_lo[i];
    if (extent / spacing > 1e9)
      throw std::invalid_argument(
          "certify_offline: lattice axis count exceeds budget " +
          std::to_string(max_centers));
    counts[i] = std::max(1, static_cast<int>(std::ceil(extent / spacing)));
    if (total > max_centers / static_cast<std::size_t>(counts[i])) {
      std::size_t need = 1;
      for (int j = 0; j < n; ++j)
        need *= std::max(1, static_cast<int>(
                                std::ceil((region_hi[j] - region_lo[j]) / spacing)));
      throw std::invalid_argument(
          "certify_offline: lattice of " + std::to_string(need) +
          " centers exceeds budget " + std::to_string(max_centers));
    }
    total *= static_cast<std::size_t>(counts[i]);
  }

  std::vector<Vec> centers(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vec c(n);
    std::size_t rem = flat;
    for (int i = n - 1; i >= 0; --i) {
      int idx = static_cast<int>(rem % counts[i]);
      rem /= counts[i];
      double ci = region_lo[i] + spacing * (idx + 0.5);
      c[i] = std::min(ci, region_hi[i]);
    }
    centers[flat] = c;
  }

  std::vector<CertReport> reports(total);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      reports[i] = certify_online(model, policy, centers[i], eps_x, horizon,
                                  gamma, method);
  };
  if (threads <= 1 || total < 2) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    const int nt = std::min<int>(threads, static_cast<int>(total));
    const std::size_t chunk = (total + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
      std::size_t lo = t * chunk, hi = std::min(total, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  CertifiedSet set;
  set.eps_x = eps_x;
  set.horizon = horizon;
  set.gamma = gamma;
  set.method = method;
  set.region_lo = region_lo;
  set.region_hi = region_hi;
  set.spacing = spacing;
  set.centers_examined = total;
  for (auto& rep : reports)
    if (rep.certified(method)) set.members.push_back(std::move(rep));
  return set;
}

}  // namespace racert
