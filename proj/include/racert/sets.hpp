#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "racert/rng.hpp"

namespace racert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Compact, connected set used for control and disturbance bounds.
// Either an axis-aligned box or a Euclidean ball.
class BoundedSet {
 public:
  enum class Kind { box, ball };

  BoundedSet() = default;  // empty placeholder; factories build real sets

  static BoundedSet box(Vec lo, Vec hi);
  static BoundedSet ball(Vec center, double radius);
  // Convenience for the common symmetric interval/box [-b, b]^dim.
  static BoundedSet symmetric_box(int dim, double halfwidth);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(lo_.size()); }

  bool contains(const Vec& x, double tol = 1e-9) const;
  bool contains_zero(double tol = 1e-9) const;
  Vec clamp(const Vec& x) const;

  // sup of ||y||_2 over the set (used as the disturbance magnitude bound).
  double max_norm() const;

  // Uniform sample.
  Vec sample(CounterRng& rng) const;

  // Deterministic uniform lattice with points_per_dim points per axis.
  // Box lattices contain every corner. Ball lattices are the box lattice of
  // the bounding box with exterior points radially projected onto the sphere.
  std::vector<Vec> lattice(int points_per_dim) const;

  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  const Vec& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Kind kind_ = Kind::box;
  Vec lo_, hi_;      // box bounds (bounding box for balls)
  Vec center_;       // ball only
  double radius_ = 0.0;
};

// Bounded Lipschitz scalar function of the state. Calls clamp the raw map to
// [-bound, bound]; the advertised Lipschitz constant must hold for the
// clamped function (clamping never increases it).
class ScalarFn {
 public:
  ScalarFn() = default;
  ScalarFn(std::function<double(const Vec&)> raw, double lipschitz,
           double bound)
      : raw_(std::move(raw)), lipschitz_(lipschitz), bound_(bound) {
    if (lipschitz_ <= 0 || bound_ <= 0)
      throw std::invalid_argument("ScalarFn: lipschitz and bound must be > 0");
  }

  static ScalarFn constant(double value, double bound);

  double operator()(const Vec& x) const {
    double v = raw_(x);
    return v < -bound_ ? -bound_ : (v > bound_ ? bound_ : v);
  }

  double lipschitz() const { return lipschitz_; }
  double bound() const { return bound_; }
  bool valid() const { return static_cast<bool>(raw_); }

 private:
  std::function<double(const Vec&)> raw_;
  double lipschitz_ = 1.0;
  double bound_ = 1.0;
};

// Halfspace P.x - k > 0 of the surrogate target polytope.
struct Halfspace {
  Vec p;
  double k = 0.0;
};

struct SurrogateTarget {
  std::vector<Halfspace> halfspaces;
  bool empty() const { return halfspaces.empty(); }
};

// Optional stage-coupled offset: the quadratic's constant term becomes
// b - scale * max(m + shift, 0) where m is the maximum of row.x over the
// stage tube. Models constraints whose clearance depends on another linear
// functional of the state (e.g. a separation that grows with height gap).
struct CoupledOffset {
  Vec row;
  double scale = 0.0;
  double shift = 0.0;
};

// One PSD quadratic 0.5 x'Qx + q.x + b whose super-zero set over-approximates
// nothing: the intersection of all of them must lie inside the true
// constraint set.
struct QuadraticForm {
  Mat Q;
  Vec q;
  double b = 0.0;
  std::optional<CoupledOffset> offset;

  double eval(const Vec& x) const {
    return 0.5 * x.dot(Q * x) + q.dot(x) + b;
  }
};

struct SurrogateConstraint {
  std::vector<QuadraticForm> quadratics;
  bool empty() const { return quadratics.empty(); }
};

// Throws if any Q fails the PSD eigenvalue test (min eigenvalue < -1e-8).
void validate_psd(const SurrogateConstraint& sc);

}  // namespace racert
