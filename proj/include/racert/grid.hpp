#pragma once

#include <cstdint>
#include <vector>

#include "racert/system.hpp"

namespace racert {

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  double spacing() const { return (hi - lo) / (count - 1); }
};

// Uniform rectangular grid over a box of R^n, row-major node order
// (last axis fastest).
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<GridAxis> axes, std::size_t max_points = kDefaultBudget);

  static constexpr std::size_t kDefaultBudget = 1u << 26;

  int dim() const { return static_cast<int>(axes_.size()); }
  std::size_t size() const { return size_; }
  const std::vector<GridAxis>& axes() const { return axes_; }
  const GridAxis& axis(int i) const { return axes_[i]; }
  double max_spacing() const;

  Vec node(std::size_t flat) const;
  std::size_t flat_index(const std::vector<int>& idx) const;

  // Cell locator for multilinear interpolation: coordinates are clamped to
  // the grid box, then the containing cell base index and per-axis fractions
  // in [0,1] are produced.
  void locate(const Vec& x, std::vector<int>& base, std::vector<double>& frac) const;

  const std::vector<std::size_t>& strides() const { return strides_; }

  bool operator==(const Grid& other) const;

 private:
  std::vector<GridAxis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

struct IterationStats {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  int last_mask_change = 0;  // sweep index of the last level-mask event
};

// Scalar field on a grid approximating the discounted reach-avoid value
// function. Immutable by convention once returned from the solver.
struct ValueField {
  Grid grid;
  std::vector<double> values;
  double gamma = 0.0;
  Mode mode = Mode::reach_avoid;
  double bound = 0.0;  // max(reward.bound, constraint.bound) of the system
  IterationStats stats;

  // Multilinear interpolation; off-grid coordinates are clamped to the
  // boundary before interpolating.
  double interpolate(const Vec& x) const;

  // Threshold below which a viability-mode node still counts as viable:
  // the discount drives viable values to 0 from below only in the limit, so
  // after K sweeps they sit near -gamma^K while resolved exits are far lower.
  double kernel_tolerance() const;
};

// Node mask of the set the field encodes: {V > 0} in reach_avoid and reach
// modes, {V >= -kernel_tolerance} in viability mode.
std::vector<bool> level_mask(const ValueField& field);

// Maximal mask intervals of a 1-D field, boundaries located by linear
// interpolation of V against the mask threshold.
std::vector<std::pair<double, double>> level_intervals_1d(const ValueField& field);

}  // namespace racert
