#include "racert/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace racert {

Grid::Grid(std::vector<GridAxis> axes, std::size_t max_points)
    : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("Grid: no axes");
  size_ = 1;
  for (const auto& ax : axes_) {
    if (ax.count < 2) throw std::invalid_argument("Grid: axis needs >= 2 points");
    if (!(ax.lo < ax.hi)) throw std::invalid_argument("Grid: axis lo >= hi");
    if (size_ > max_points / static_cast<std::size_t>(ax.count))
      throw std::invalid_argument("Grid: total point count exceeds budget");
    size_ *= static_cast<std::size_t>(ax.count);
  }
  strides_.assign(axes_.size(), 1);
  for (int i = static_cast<int>(axes_.size()) - 2; i >= 0; --i)
    strides_[i] = strides_[i + 1] * static_cast<std::size_t>(axes_[i + 1].count);
}

double Grid::max_spacing() const {
  double h = 0.0;
  for (const auto& ax : axes_) h = std::max(h, ax.spacing());
  return h;
}

Vec Grid::node(std::size_t flat) const {
  Vec x(dim());
  for (int i = 0; i < dim(); ++i) {
    std::size_t idx = (flat / strides_[i]) % static_cast<std::size_t>(axes_[i].count);
    x[i] = axes_[i].lo + axes_[i].spacing() * static_cast<double>(idx);
  }
  return x;
}

std::size_t Grid::flat_index(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int i = 0; i < dim(); ++i) flat += strides_[i] * static_cast<std::size_t>(idx[i]);
  return flat;
}

void Grid::locate(const Vec& x, std::vector<int>& base,
                  std::vector<double>& frac) const {
  base.resize(axes_.size());
  frac.resize(axes_.size());
  for (int i = 0; i < dim(); ++i) {
    const auto& ax = axes_[i];
    double t = (x[i] - ax.lo) / ax.spacing();
    if (t < 0.0) t = 0.0;
    if (t > ax.count - 1) t = ax.count - 1;
    int b = static_cast<int>(t);
    if (b > ax.count - 2) b = ax.count - 2;
    base[i] = b;
    frac[i] = t - b;
  }
}

bool Grid::operator==(const Grid& other) const {
  if (axes_.size() != other.axes_.size()) return false;
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (axes_[i].lo != other.axes_[i].lo || axes_[i].hi != other.axes_[i].hi ||
        axes_[i].count != other.axes_[i].count)
      return false;
  return true;
}

double ValueField::interpolate(const Vec& x) const {
  const int n = grid.dim();
  if (x.size() != n)
    throw std::invalid_argument("interpolate: dimension mismatch");
  std::vector<int> base;
  std::vector<double> frac;
  grid.locate(x, base, frac);
  const auto& strides = grid.strides();
  std::size_t base_flat = 0;
  for (int i = 0; i < n; ++i) base_flat += strides[i] * static_cast<std::size_t>(base[i]);
  double acc = 0.0;
  const unsigned corners = 1u << n;
  for (unsigned c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t off = 0;
    for (int i = 0; i < n; ++i) {
      if (c & (1u << i)) {
        w *= frac[i];
        off += strides[i];
      } else {
        w *= 1.0 - frac[i];
      }
    }
    if (w != 0.0) acc += w * values[base_flat + off];
  }
  return acc;
}

double ValueField::kernel_tolerance() const {
  return bound * std::pow(gamma, stats.iterations);
}

std::vector<bool> level_mask(const ValueField& field) {
  std::vector<bool> mask(field.values.size());
  if (field.mode == Mode::viability) {
    const double thr = -field.kernel_tolerance();
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = field.values[i] >= thr;
  } else {
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = field.values[i] > 0.0;
  }
  return mask;
}

std::vector<std::pair<double, double>> level_intervals_1d(const ValueField& field) {
  if (field.grid.dim() != 1)
    throw std::invalid_argument("level_intervals_1d: field is not 1-D");
  const auto mask = level_mask(field);
  const auto& ax = field.grid.axis(0);
  const double h = ax.spacing();
  const double thr = field.mode == Mode::viability ? -field.kernel_tolerance() : 0.0;
  const auto& v = field.values;

  auto cross = [&](int i) {
    // threshold crossing between node i and i+1 by linear interpolation
    double a = v[i] - thr, b = v[i + 1] - thr;
    double t = (a == b) ? 0.5 : a / (a - b);
    return ax.lo + h * (i + t);
  };

  std::vector<std::pair<double, double>> out;
  int i = 0;
  const int n = ax.count;
  while (i < n) {
    if (!mask[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && mask[j + 1]) ++j;
    double left = (i == 0) ? ax.lo : cross(i - 1);
    double right = (j == n - 1) ? ax.hi : cross(j);
    out.emplace_back(left, right);
    i = j + 1;
  }
  return out;
}

}  // namespace racert
