#include <cmath>
#include <set>
#include <stdexcept>

#include "racert/system.hpp"

namespace racert {
namespace {

double get_param(const ParamMap& params, const std::string& key, double dflt) {
  auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

void reject_unknown(const ParamMap& params, std::set<std::string> known) {
  for (const auto& [k, v] : params)
    if (!known.count(k))
      throw std::invalid_argument("builtin_system: unknown param '" + k + "'");
}

double clampv(double v, double b) { return std::min(std::max(v, -b), b); }

// Largest singular value of the double-integrator block [[1, dt], [0, 1]].
double di_block_norm(double dt) {
  return std::sqrt((2.0 + dt * dt + dt * std::sqrt(dt * dt + 4.0)) / 2.0);
}

Halfspace hs(std::initializer_list<double> p, double k) {
  Vec v(static_cast<int>(p.size()));
  int i = 0;
  for (double c : p) v[i++] = c;
  return Halfspace{v, k};
}

QuadraticForm linear_quad(const Halfspace& h) {
  QuadraticForm q;
  q.Q = Mat::Zero(h.p.size(), h.p.size());
  q.q = h.p;
  q.b = -h.k;
  return q;
}

SystemModel make_linear1d(const ParamMap& params) {
  reject_unknown(params, {"clamp"});
  const double bound = get_param(params, "clamp", 10.0);
  if (bound <= 0) throw std::invalid_argument("linear1d: clamp must be > 0");

  SystemModel m;
  m.name = "linear1d";
  m.n = 1;
  m.m_u = 1;
  m.m_d = 1;
  m.dynamics = [](const Vec& x, const Vec& u, const Vec& d) {
    Vec y(1);
    y[0] = 1.01 * x[0] + 0.01 * (u[0] + d[0]);
    return y;
  };
  m.control_set = BoundedSet::symmetric_box(1, 1.0);
  m.disturbance_set = BoundedSet::symmetric_box(1, 0.5);
  m.eps_d = m.disturbance_set.max_norm();
  m.reward = ScalarFn([bound](const Vec& x) { return clampv(-(x[0] + 1.0), bound); },
                      1.0, bound);
  m.constraint = ScalarFn([bound](const Vec& x) { return clampv(x[0] + 2.0, bound); },
                          1.0, bound);
  m.lip_fx = 1.01;
  m.lip_fd = 0.01;
  m.surrogate_target.halfspaces = {hs({-1.0}, 1.0)};   // -x - 1 > 0
  m.surrogate_constraint.quadratics = {linear_quad(hs({1.0}, -2.0))};  // x + 2 > 0
  return m;
}

// Double integrator per axis: p+ = p + dt v, v+ = v + dt (u + d).
SystemModel make_di(int axes, const ParamMap& params) {
  reject_unknown(params, {"dt", "clamp", "u_max", "d_max", "target_halfwidth",
                          "constraint_halfwidth"});
  const double dt = get_param(params, "dt", 0.1);
  const double bound = get_param(params, "clamp", 10.0);
  const double u_max = get_param(params, "u_max", 1.0);
  const double d_max = get_param(params, "d_max", 0.1);
  const double tw = get_param(params, "target_halfwidth", 0.5);
  const double cw = get_param(params, "constraint_halfwidth", 2.0);
  if (dt <= 0 || bound <= 0 || u_max <= 0 || d_max < 0 || tw <= 0 || cw <= tw)
    throw std::invalid_argument("di: invalid params");

  const int n = 2 * axes;
  SystemModel m;
  m.name = axes == 1 ? "di2" : "di4";
  m.n = n;
  m.m_u = axes;
  m.m_d = axes;
  m.dynamics = [axes, dt](const Vec& x, const Vec& u, const Vec& d) {
    Vec y(2 * axes);
    for (int a = 0; a < axes; ++a) {
      y[2 * a] = x[2 * a] + dt * x[2 * a + 1];
      y[2 * a + 1] = x[2 * a + 1] + dt * (u[a] + d[a]);
    }
    return y;
  };
  m.control_set = BoundedSet::symmetric_box(axes, u_max);
  m.disturbance_set = BoundedSet::symmetric_box(axes, d_max);
  m.eps_d = m.disturbance_set.max_norm();

  m.reward = ScalarFn(
      [n, tw, bound](const Vec& x) {
        double v = tw - std::abs(x[0]);
        for (int i = 1; i < n; ++i) v = std::min(v, tw - std::abs(x[i]));
        return clampv(v, bound);
      },
      1.0, bound);

  const bool obstacle = axes == 2;  // di4 keeps clear of a disk in (px, py)
  const double ox = 1.2, oy = 0.0, orad = 0.6;
  m.constraint = ScalarFn(
      [n, cw, bound, obstacle, ox, oy, orad](const Vec& x) {
        double v = cw - std::abs(x[0]);
        for (int i = 1; i < n; ++i) v = std::min(v, cw - std::abs(x[i]));
        if (obstacle) {
          double dx = x[0] - ox, dy = x[2] - oy;
          v = std::min(v, dx * dx + dy * dy - orad * orad);
        }
        return clampv(v, bound);
      },
      obstacle ? std::max(1.0, 2.0 * std::sqrt(bound + orad * orad)) : 1.0,
      bound);

  m.lip_fx = di_block_norm(dt);
  m.lip_fd = dt;

  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = -1.0;
    m.surrogate_target.halfspaces.push_back({e, -tw});   // tw - x_i > 0
    m.surrogate_constraint.quadratics.push_back(linear_quad({e, -cw}));
    e[i] = 1.0;
    m.surrogate_target.halfspaces.push_back({e, -tw});   // tw + x_i > 0
    m.surrogate_constraint.quadratics.push_back(linear_quad({e, -cw}));
  }
  if (obstacle) {
    QuadraticForm disk;
    disk.Q = Mat::Zero(n, n);
    disk.Q(0, 0) = 2.0;
    disk.Q(2, 2) = 2.0;
    disk.q = Vec::Zero(n);
    disk.q[0] = -2.0 * ox;
    disk.q[2] = -2.0 * oy;
    disk.b = ox * ox + oy * oy - orad * orad;
    m.surrogate_constraint.quadratics.push_back(disk);
  }
  return m;
}

SystemModel make_unicycle(const ParamMap& params) {
  reject_unknown(params, {"dt", "clamp", "v_max", "d_max"});
  const double dt = get_param(params, "dt", 0.1);
  const double bound = get_param(params, "clamp", 10.0);
  const double v_max = get_param(params, "v_max", 1.0);
  const double d_max = get_param(params, "d_max", 0.05);
  if (dt <= 0 || bound <= 0 || v_max <= 0 || d_max < 0)
    throw std::invalid_argument("unicycle: invalid params");

  SystemModel m;
  m.name = "unicycle";
  m.n = 3;
  m.m_u = 2;  // (speed, turn rate)
  m.m_d = 2;  // additive planar velocity disturbance
  m.dynamics = [dt](const Vec& x, const Vec& u, const Vec& d) {
    Vec y(3);
    y[0] = x[0] + dt * (u[0] * std::cos(x[2]) + d[0]);
    y[1] = x[1] + dt * (u[0] * std::sin(x[2]) + d[1]);
    y[2] = x[2] + dt * u[1];
    return y;
  };
  Vec ulo(2), uhi(2);
  ulo << 0.0, -1.0;
  uhi << v_max, 1.0;
  m.control_set = BoundedSet::box(ulo, uhi);
  m.disturbance_set = BoundedSet::ball(Vec::Zero(2), d_max);
  m.eps_d = m.disturbance_set.max_norm();

  m.reward = ScalarFn(
      [bound](const Vec& x) {
        return clampv(0.5 - std::hypot(x[0], x[1]), bound);
      },
      1.0, bound);
  m.constraint = ScalarFn(
      [bound](const Vec& x) {
        return clampv(std::min(2.0 - std::abs(x[0]), 2.0 - std::abs(x[1])), bound);
      },
      1.0, bound);

  m.lip_fx = 1.0 + dt * v_max;  // bound over the compact speed range
  m.lip_fd = dt;

  // square |x|+|y| < 0.45 inscribed in the target disk
  m.surrogate_target.halfspaces = {
      hs({-1.0, -1.0, 0.0}, -0.45), hs({-1.0, 1.0, 0.0}, -0.45),
      hs({1.0, -1.0, 0.0}, -0.45), hs({1.0, 1.0, 0.0}, -0.45)};
  m.surrogate_constraint.quadratics = {
      linear_quad(hs({-1.0, 0.0, 0.0}, -2.0)),
      linear_quad(hs({1.0, 0.0, 0.0}, -2.0)),
      linear_quad(hs({0.0, -1.0, 0.0}, -2.0)),
      linear_quad(hs({0.0, 1.0, 0.0}, -2.0))};
  return m;
}

}  // namespace

SystemModel builtin_system(const std::string& name, const ParamMap& params,
                           Mode mode) {
  SystemModel m;
  if (name == "linear1d")
    m = make_linear1d(params);
  else if (name == "di2")
    m = make_di(1, params);
  else if (name == "di4")
    m = make_di(2, params);
  else if (name == "unicycle")
    m = make_unicycle(params);
  else
    throw std::invalid_argument("builtin_system: unknown name '" + name + "'");
  validate_psd(m.surrogate_constraint);
  apply_mode(m, mode);
  return m;
}

}  // namespace racert
