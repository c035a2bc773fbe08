#pragma once

#include "racert/sets.hpp"

namespace racert {

// Exact minimum of p.x - k over the ball ||x - center|| <= radius:
// p.center - k - ||p|| * radius.
double min_linear_over_ball(const Vec& p, double k, const Vec& center,
                            double radius);

struct QuadBallResult {
  double value = 0.0;
  Vec minimizer;
  int iterations = 0;   // secular-equation iterations (0 for interior solves)
  bool on_boundary = false;
};

// Global minimum of the convex quadratic 0.5 x'Qx + q.x + b over the l2 ball
// around center. Q must be symmetric PSD (eigenvalues >= -1e-8). Interior
// minimizers are taken directly (least-norm solution when Q is singular);
// otherwise the boundary multiplier solves the secular equation
// ||(Q + lambda I)^{-1} g|| = radius by safeguarded Newton/bisection on
// lambda in [0, ||g||/radius].
QuadBallResult min_convex_quadratic_over_ball(const Mat& Q, const Vec& q,
                                              double b, const Vec& center,
                                              double radius, double tol = 1e-10);

}  // namespace racert
