#include "racert/sets.hpp"

#include <cmath>

namespace racert {

BoundedSet BoundedSet::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw std::invalid_argument("BoundedSet::box: bad bounds");
  for (int i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i]))
      throw std::invalid_argument("BoundedSet::box: lo > hi");
  BoundedSet s;
  s.kind_ = Kind::box;
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

BoundedSet BoundedSet::ball(Vec center, double radius) {
  if (center.size() == 0 || radius < 0)
    throw std::invalid_argument("BoundedSet::ball: bad parameters");
  BoundedSet s;
  s.kind_ = Kind::ball;
  s.center_ = center;
  s.radius_ = radius;
  s.lo_ = center.array() - radius;
  s.hi_ = center.array() + radius;
  return s;
}

BoundedSet BoundedSet::symmetric_box(int dim, double halfwidth) {
  return box(Vec::Constant(dim, -halfwidth), Vec::Constant(dim, halfwidth));
}

bool BoundedSet::contains(const Vec& x, double tol) const {
  if (x.size() != lo_.size()) return false;
  if (kind_ == Kind::box) {
    for (int i = 0; i < x.size(); ++i)
      if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
    return true;
  }
  return (x - center_).norm() <= radius_ + tol;
}

bool BoundedSet::contains_zero(double tol) const {
  return contains(Vec::Zero(dim()), tol);
}

Vec BoundedSet::clamp(const Vec& x) const {
  if (x.size() != lo_.size())
    throw std::invalid_argument("BoundedSet::clamp: dimension mismatch");
  if (kind_ == Kind::box) {
    Vec y = x;
    for (int i = 0; i < y.size(); ++i)
      y[i] = std::min(std::max(y[i], lo_[i]), hi_[i]);
    return y;
  }
  Vec diff = x - center_;
  double n = diff.norm();
  if (n <= radius_) return x;
  if (n == 0.0) return center_;
  return center_ + diff * (radius_ / n);
}

double BoundedSet::max_norm() const {
  if (kind_ == Kind::ball) return center_.norm() + radius_;
  // farthest corner of the box
  double s = 0.0;
  for (int i = 0; i < lo_.size(); ++i) {
    double m = std::max(std::abs(lo_[i]), std::abs(hi_[i]));
    s += m * m;
  }
  return std::sqrt(s);
}

Vec BoundedSet::sample(CounterRng& rng) const {
  const int n = dim();
  if (kind_ == Kind::box) {
    Vec y(n);
    for (int i = 0; i < n; ++i) y[i] = rng.uniform(lo_[i], hi_[i]);
    return y;
  }
  // uniform in the ball: gaussian direction, radius ~ U^(1/n)
  Vec dir(n);
  double nrm = 0.0;
  do {
    for (int i = 0; i < n; ++i) dir[i] = rng.gaussian();
    nrm = dir.norm();
  } while (nrm == 0.0);
  double r = radius_ * std::pow(rng.next_double(), 1.0 / n);
  return center_ + dir * (r / nrm);
}

std::vector<Vec> BoundedSet::lattice(int points_per_dim) const {
  if (points_per_dim < 1)
    throw std::invalid_argument("BoundedSet::lattice: need >= 1 point per dim");
  const int n = dim();
  std::vector<Vec> pts;
  std::vector<int> idx(n, 0);
  Vec y(n);
  while (true) {
    for (int i = 0; i < n; ++i) {
      if (points_per_dim == 1)
        y[i] = 0.5 * (lo_[i] + hi_[i]);
      else
        y[i] = lo_[i] + (hi_[i] - lo_[i]) * idx[i] / (points_per_dim - 1);
    }
    pts.push_back(kind_ == Kind::ball ? clamp(y) : y);
    int d = n - 1;
    while (d >= 0 && ++idx[d] == points_per_dim) idx[d--] = 0;
    if (d < 0) break;
  }
  return pts;
}

ScalarFn ScalarFn::constant(double value, double bound) {
  return ScalarFn([value](const Vec&) { return value; }, 1e-12, bound);
}

void validate_psd(const SurrogateConstraint& sc) {
  for (const auto& quad : sc.quadratics) {
    if (quad.Q.rows() != quad.Q.cols() || quad.Q.rows() != quad.q.size())
      throw std::invalid_argument("SurrogateConstraint: shape mismatch");
    if (!quad.Q.isApprox(quad.Q.transpose(), 1e-12))
      throw std::invalid_argument("SurrogateConstraint: Q not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(quad.Q);
    if (es.eigenvalues().minCoeff() < -1e-8)
      throw std::invalid_argument("SurrogateConstraint: Q not PSD");
  }
}

}  // namespace racert
