#include "racert/ball_solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace racert {

double min_linear_over_ball(const Vec& p, double k, const Vec& center,
                            double radius) {
  if (p.size() != center.size())
    throw std::invalid_argument("min_linear_over_ball: dimension mismatch");
  if (radius < 0)
    throw std::invalid_argument("min_linear_over_ball: radius must be >= 0");
  return p.dot(center) - k - p.norm() * radius;
}

QuadBallResult min_convex_quadratic_over_ball(const Mat& Q, const Vec& q,
                                              double b, const Vec& center,
                                              double radius, double tol) {
  const int n = static_cast<int>(center.size());
  if (Q.rows() != n || Q.cols() != n || q.size() != n)
    throw std::invalid_argument("min_convex_quadratic_over_ball: shape mismatch");
  if (radius < 0)
    throw std::invalid_argument("min_convex_quadratic_over_ball: radius must be >= 0");
  if (!(tol > 0))
    throw std::invalid_argument("min_convex_quadratic_over_ball: tol must be > 0");

  Eigen::SelfAdjointEigenSolver<Mat> es(Q);
  const Vec lam = es.eigenvalues();
  const Mat& V = es.eigenvectors();
  if (lam.minCoeff() < -1e-8)
    throw std::invalid_argument("min_convex_quadratic_over_ball: Q is not PSD");

  const Vec g = Q * center + q;  // gradient at the ball center
  const double f0 = 0.5 * center.dot(Q * center) + q.dot(center) + b;
  const Vec gh = V.transpose() * g;
  const double gnorm = g.norm();

  QuadBallResult res;
  if (radius == 0.0) {
    res.value = f0;
    res.minimizer = center;
    return res;
  }

  // Interior candidate: least-norm stationary point in eigencoordinates.
  const double lam_tol = 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  Vec sh = Vec::Zero(n);
  double grad_resid = 0.0;
  for (int i = 0; i < n; ++i) {
    if (lam[i] > lam_tol)
      sh[i] = -gh[i] / lam[i];
    else
      grad_resid = std::max(grad_resid, std::abs(gh[i]));
  }
  if (grad_resid <= 1e-10 * std::max(1.0, gnorm) && sh.norm() <= radius) {
    res.minimizer = center + V * sh;
    double val = f0;
    for (int i = 0; i < n; ++i) val += 0.5 * lam[i] * sh[i] * sh[i] + gh[i] * sh[i];
    // discount the tolerated gradient residual so the result stays a true
    // lower bound even when near-null directions were truncated
    res.value = val - grad_resid * radius;
    return res;
  }

  // Boundary: solve ||s(lambda)|| = radius, s_i = -gh_i / (lam_i + lambda),
  // by Newton safeguarded with bisection on [0, ||g||/radius].
  auto norm_at = [&](double l) {
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = lam[i] + l;
      s2 += (gh[i] / d) * (gh[i] / d);
    }
    return std::sqrt(s2);
  };
  double lo = std::max(0.0, -lam.minCoeff());
  double hi = std::max(gnorm / radius, lo + 1e-300);
  // widen hi defensively until ||s(hi)|| <= radius (holds analytically)
  while (norm_at(hi) > radius && hi < 1e300) hi *= 2.0;

  double l = std::min(std::max(0.5 * (lo + hi), lo), hi);
  int it = 0;
  for (; it < 200; ++it) {
    double w = norm_at(l);
    if (std::abs(w - radius) <= tol * std::max(1.0, radius)) break;
    if (w > radius)
      lo = l;
    else
      hi = l;
    // Newton step on 1/w - 1/radius = 0
    double dw2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = lam[i] + l;
      dw2 += gh[i] * gh[i] / (d * d * d);
    }
    double phi = 1.0 / w - 1.0 / radius;
    double dphi = dw2 / (w * w * w);
    double step = (dphi > 0) ? -phi / dphi : 0.0;
    double cand = l + step;
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    l = cand;
  }

  for (int i = 0; i < n; ++i) sh[i] = -gh[i] / (lam[i] + l);
  if (sh.norm() > 0) sh *= radius / sh.norm();  // feasible point on the sphere
  res.minimizer = center + V * sh;
  // Lagrangian dual value at the converged multiplier: a lower bound on the
  // true minimum by weak duality, with gap bounded by the secular tolerance.
  // Using it instead of the primal evaluation keeps downstream certificates
  // sound against solver truncation error.
  double dual = f0 - 0.5 * l * radius * radius;
  for (int i = 0; i < n; ++i) dual -= 0.5 * gh[i] * gh[i] / (lam[i] + l);
  res.value = dual;
  res.iterations = it;
  res.on_boundary = true;
  return res;
}

}  // namespace racert
