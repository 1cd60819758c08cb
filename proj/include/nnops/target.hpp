#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "nnops/domain.hpp"

namespace nnops {

enum class range_class { unit_interval, bounded_general };

// The function h to approximate. `domain` == nullopt declares h on all of
// R^r (required by quasi-interpolation). unit_interval declares values in
// [0,1]; operators validate samples lazily where their theory requires it.
// Evaluation must be safe for concurrent calls: grid evaluation fans out
// across threads.
struct target_function {
  std::function<double(std::span<const double>)> fn;
  int dimension = 1;
  std::optional<box_domain> domain;
  range_class rclass = range_class::unit_interval;
  double bound = 1.0;  // known |h| bound for bounded_general
  std::string description;

  double operator()(std::span<const double> y) const { return fn(y); }

  static target_function constant(int r, double c) {
    target_function t;
    t.fn = [c](std::span<const double>) { return c; };
    t.dimension = r;
    t.rclass = (c >= 0.0 && c <= 1.0) ? range_class::unit_interval
                                      : range_class::bounded_general;
    t.bound = std::max(1.0, std::abs(c));
    t.description = "const:" + format_double_short(c);
    return t;
  }

  // h(y) = y on [0,1].
  static target_function identity() {
    target_function t;
    t.fn = [](std::span<const double> y) { return y[0]; };
    t.dimension = 1;
    t.domain = box_domain::unit_cube(1);
    t.description = "identity";
    return t;
  }

  // h(y1,y2) = (y1^2 + y2^2)/2 on [0,1]^2, the error-table benchmark.
  static target_function table1() {
    target_function t;
    t.fn = [](std::span<const double> y) { return (y[0] * y[0] + y[1] * y[1]) / 2.0; };
    t.dimension = 2;
    t.domain = box_domain::unit_cube(2);
    t.description = "table1";
    return t;
  }

  // h(y) = (1 + prod_i cos y_i)/4 + 1/4 on all of R^r; range [1/4, 3/4].
  static target_function cosine_bump(int r = 2) {
    if (r < 1) throw argument_error("cosine_bump dimension must be >= 1");
    target_function t;
    t.fn = [](std::span<const double> y) {
      double p = 1.0;
      for (double v : y) p *= std::cos(v);
      return (1.0 + p) / 4.0 + 0.25;
    };
    t.dimension = r;
    t.description = "cosine_bump";
    return t;
  }
};

}  // namespace nnops
