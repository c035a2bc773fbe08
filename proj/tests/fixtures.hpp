// Synthetic systems shared between the unit and acceptance suites.
#pragma once

#include <racert/system.hpp>

namespace racert::fixtures {

// Stable 2-D linear system whose affine reward/constraint are represented
// exactly by the surrogates; the clamp never binds inside the test region.
inline SystemModel affine_system() {
  SystemModel m;
  m.name = "affine2";
  m.n = 2;
  m.m_u = 1;
  m.m_d = 1;
  Mat A(2, 2), B(2, 1), D(2, 1);
  A << 0.9, 0.05, 0.0, 0.9;
  B << 0.1, 0.05;
  D << 0.02, 0.05;
  m.dynamics = [A, B, D](const Vec& x, const Vec& u, const Vec& d) {
    return Vec(A * x + B * u + D * d);
  };
  m.control_set = BoundedSet::symmetric_box(1, 1.0);
  m.disturbance_set = BoundedSet::symmetric_box(1, 0.3);
  m.eps_d = m.disturbance_set.max_norm();
  m.lip_fx = A.jacobiSvd().singularValues()(0);
  m.lip_fd = D.norm();
  Vec p(2);
  p << 1.0, 2.0;
  const double k = -0.5;
  m.reward = ScalarFn([p, k](const Vec& x) { return p.dot(x) - k; }, p.norm(), 100.0);
  Vec pc(2);
  pc << -0.5, 1.0;
  const double kc = -3.0;
  m.constraint =
      ScalarFn([pc, kc](const Vec& x) { return pc.dot(x) - kc; }, pc.norm(), 100.0);
  m.surrogate_target.halfspaces = {{p, k}};
  QuadraticForm qf;
  qf.Q = Mat::Zero(2, 2);
  qf.q = pc;
  qf.b = -kc;
  m.surrogate_constraint.quadratics = {qf};
  return m;
}

// Same dynamics with the quadratic constraint c(x) = 0.5||x||^2 - 1; the
// stated Lipschitz constant is valid on the ball of the given radius.
inline SystemModel quadratic_constraint_system(double region_radius) {
  SystemModel m = affine_system();
  m.name = "quad2";
  m.constraint = ScalarFn(
      [](const Vec& x) { return 0.5 * x.squaredNorm() - 1.0; }, region_radius,
      100.0);
  QuadraticForm qf;
  qf.Q = Mat::Identity(2, 2);
  qf.q = Vec::Zero(2);
  qf.b = -1.0;
  m.surrogate_constraint.quadratics = {qf};
  return m;
}

}  // namespace racert::fixtures
