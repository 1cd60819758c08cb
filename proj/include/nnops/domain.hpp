#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "nnops/common.hpp"

namespace nnops {

// Box R = [a_1,b_1] x ... x [a_r,b_r] with finite endpoints, a_i < b_i.
class box_domain {
 public:
  explicit box_domain(std::vector<std::array<double, 2>> intervals)
      : intervals_(std::move(intervals)) {
    if (intervals_.empty()) throw argument_error("box domain needs at least one interval");
    for (const auto& [a, b] : intervals_) {
      if (!std::isfinite(a) || !std::isfinite(b))
        throw argument_error("box domain endpoints must be finite");
      if (!(a < b)) throw argument_error("box domain requires a < b on every axis");
    }
  }

  static box_domain cube(int dimension, double lo, double hi) {
    if (dimension < 1) throw argument_error("box domain dimension must be >= 1");
    return box_domain(std::vector<std::array<double, 2>>(
        static_cast<std::size_t>(dimension), {lo, hi}));
  }
  static box_domain unit_cube(int dimension) { return cube(dimension, 0.0, 1.0); }

  int dimension() const { return static_cast<int>(intervals_.size()); }
  const std::vector<std::array<double, 2>>& intervals() const { return intervals_; }

  bool contains(std::span<const double> y) const {
    if (y.size() != intervals_.size()) return false;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] < intervals_[i][0] || y[i] > intervals_[i][1]) return false;
    return true;
  }

  double max_extent() const {
    double m = 0.0;
    for (const auto& [a, b] : intervals_) m = std::max(m, b - a);
    return m;
  }

 private:
  std::vector<std::array<double, 2>> intervals_;
};

// J_n^r: the full integer box ceil(n a_i) .. floor(n b_i), inclusive per axis.
struct lattice_index_set {
  int n = 1;
  std::vector<std::array<long long, 2>> axis_ranges;

  long long axis_size(int i) const {
    return axis_ranges[static_cast<std::size_t>(i)][1] -
           axis_ranges[static_cast<std::size_t>(i)][0] + 1;
  }
  long long size() const {
    long long s = 1;
    for (std::size_t i = 0; i < axis_ranges.size(); ++i)
      s *= axis_size(static_cast<int>(i));
    return s;
  }
};

inline lattice_index_set build_lattice(int n, const box_domain& domain) {
  if (n < 1) throw argument_error("lattice scale n must be >= 1");
  lattice_index_set out;
  out.n = n;
  out.axis_ranges.reserve(domain.intervals().size());
  for (const auto& [a, b] : domain.intervals()) {
    const auto lo = static_cast<long long>(std::ceil(n * a));
    const auto hi = static_cast<long long>(std::floor(n * b));
    if (lo > hi) throw argument_error("n too small for domain");
    out.axis_ranges.push_back({lo, hi});
  }
  return out;
}

}  // namespace nnops
