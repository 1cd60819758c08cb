#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nnops/kernel.hpp"
#include "nnops/target.hpp"

namespace nnops {

enum class operator_kind { classical, max_product, max_min, quasi_interpolation };

inline std::string_view to_string(operator_kind k) {
  switch (k) {
    case operator_kind::classical: return "classical";
    case operator_kind::max_product: return "max_product";
    case operator_kind::max_min: return "max_min";
    case operator_kind::quasi_interpolation: return "quasi_interpolation";
  }
  return {};
}

inline operator_kind parse_operator_kind(std::string_view s) {
  if (s == "classical") return operator_kind::classical;
  if (s == "max_product") return operator_kind::max_product;
  if (s == "max_min") return operator_kind::max_min;
  if (s == "quasi_interpolation" || s == "qi") return operator_kind::quasi_interpolation;
  throw argument_error("unknown operator kind '" + std::string(s) + "'");
}

struct eval_options {
  bool full_lattice = false;  // oracle mode: disable the truncation window
};

namespace detail {

struct axis_phi {
  long long k_lo = 0;
  std::vector<double> values;  // phi(center - k), k = k_lo, k_lo+1, ...
  double max_value = 0.0;
  long long omitted = 0;       // lattice points left outside the window
};

inline axis_phi make_axis(const sigmoidal_activation& act, double center,
                          long long lat_lo, long long lat_hi, double window, bool full) {
  long long lo = lat_lo, hi = lat_hi;
  if (!full) {
    const auto wlo = static_cast<long long>(std::ceil(center - window));
    const auto whi = static_cast<long long>(std::floor(center + window));
    if (wlo > lo) lo = wlo;
    if (whi < hi) hi = whi;
    if (lo > hi) {  // window misses the lattice box: keep the full axis
      lo = lat_lo;
      hi = lat_hi;
    }
  }
  axis_phi a;
  a.k_lo = lo;
  a.values.resize(static_cast<std::size_t>(hi - lo + 1));
  for (long long k = lo; k <= hi; ++k) {
    const double v = phi(act, center - static_cast<double>(k));
    a.values[static_cast<std::size_t>(k - lo)] = v;
    a.max_value = std::max(a.max_value, v);
  }
  a.omitted = (lat_hi - lat_lo + 1) - (hi - lo + 1);
  return a;
}

inline std::vector<axis_phi> make_axes(const kernel_profile& profile, int n,
                                       const lattice_index_set& lat,
                                       std::span<const double> ybar, bool full) {
  std::vector<axis_phi> axes;
  axes.reserve(ybar.size());
  for (std::size_t i = 0; i < ybar.size(); ++i) {
    const auto [lo, hi] = lat.axis_ranges[i];
    axes.push_back(make_axis(profile.activation(), n * ybar[i], lo, hi,
                             profile.axis_window(), full));
  }
  return axes;
}

// Window over Z^r: never empty, the axis window is always >= 1.5.
inline std::vector<axis_phi> make_axes_integers(const kernel_profile& profile, int n,
                                                std::span<const double> ybar) {
  std::vector<axis_phi> axes;
  axes.reserve(ybar.size());
  for (std::size_t i = 0; i < ybar.size(); ++i) {
    const double c = n * ybar[i];
    const auto lo = static_cast<long long>(std::ceil(c - profile.axis_window()));
    const auto hi = static_cast<long long>(std::floor(c + profile.axis_window()));
    axes.push_back(make_axis(profile.activation(), c, lo, hi, 0.0, true));
  }
  return axes;
}

enum pass_flags : unsigned {
  pass_classical = 1u,
  pass_max_product = 2u,
  pass_max_min = 4u,
};

struct pass_result {
  neumaier_sum classical_num;
  neumaier_sum classical_den;
  double max_product_num = 0.0;
  double max_min = 0.0;
};

inline void check_sample(double hv, bool unit_range, bool nonnegative) {
  if (!(hv == hv)) throw computation_error("target sample is NaN");
  if (unit_range && (hv < 0.0 || hv > 1.0))
    throw computation_error(
        "target sample outside [0,1]; use extended_max_min for general bounded functions");
  if (nonnegative && hv < 0.0)
    throw computation_error("max-product operator requires a nonnegative target");
}

// One lexicographic sweep over the index box spanned by `axes`, sampling h
// once per lattice point. Reduction order is fixed, so results are
// bit-reproducible regardless of threading above this call.
inline pass_result lattice_pass(const target_function& h, int n,
                                std::span<const axis_phi> axes, double max_rho,
                                unsigned flags, bool unit_range, bool nonnegative) {
  const int r = static_cast<int>(axes.size());
  pass_result out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
  std::vector<double> point(static_cast<std::size_t>(r));
  std::vector<double> partial(static_cast<std::size_t>(r) + 1, 1.0);
  int dirty = 0;
  for (;;) {
    for (int i = dirty; i < r; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      point[ii] = static_cast<double>(axes[ii].k_lo + static_cast<long long>(idx[ii])) / n;
      partial[ii + 1] = partial[ii] * axes[ii].values[idx[ii]];
    }
    const double rho_v = partial[static_cast<std::size_t>(r)];
    const double hv = h(point);
    check_sample(hv, unit_range, nonnegative);
    if (flags & pass_classical) {
      out.classical_num.add(hv * rho_v);
      out.classical_den.add(rho_v);
    }
    if (flags & pass_max_product)
      out.max_product_num = std::max(out.max_product_num, hv * rho_v);
    if (flags & pass_max_min)
      out.max_min = std::max(out.max_min, std::min(hv, rho_v / max_rho));
    int ax = r - 1;
    while (ax >= 0 && idx[static_cast<std::size_t>(ax)] + 1 ==
                          axes[static_cast<std::size_t>(ax)].values.size()) {
      idx[static_cast<std::size_t>(ax)] = 0;
      --ax;
    }
    if (ax < 0) break;
    ++idx[static_cast<std::size_t>(ax)];
    dirty = ax;
  }
  return out;
}

inline double axes_max_rho(std::span<const axis_phi> axes) {
  double m = 1.0;
  for (const auto& a : axes) m *= a.max_value;
  return m;
}

inline long long axes_omitted(std::span<const axis_phi> axes,
                              const lattice_index_set& lat) {
  long long full = 1, used = 1;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    full *= lat.axis_size(static_cast<int>(i));
    used *= static_cast<long long>(axes[i].values.size());
  }
  return full - used;
}

// Lattice points outside the window at this evaluation point, by arithmetic
// alone (no phi evaluations).
inline long long count_omitted(const kernel_profile& profile, int n,
                               const lattice_index_set& lat, std::span<const double> ybar) {
  long long full = 1, used = 1;
  for (std::size_t i = 0; i < ybar.size(); ++i) {
    const auto [lat_lo, lat_hi] = lat.axis_ranges[i];
    const double c = n * ybar[i];
    long long lo = std::max(lat_lo, static_cast<long long>(std::ceil(c - profile.axis_window())));
    long long hi = std::min(lat_hi, static_cast<long long>(std::floor(c + profile.axis_window())));
    if (lo > hi) {
      lo = lat_lo;
      hi = lat_hi;
    }
    full *= lat_hi - lat_lo + 1;
    used *= hi - lo + 1;
  }
  return full - used;
}

inline void check_operator_args(const target_function& h, const box_domain& domain,
                                const kernel_profile& profile, std::span<const double> ybar) {
  if (h.dimension != domain.dimension() || domain.dimension() != profile.dimension() ||
      static_cast<int>(ybar.size()) != profile.dimension())
    throw argument_error("operator arguments disagree on dimension");
  if (!domain.contains(ybar))
    throw argument_error("evaluation point lies outside the domain");
}

}  // namespace detail

// Classical neural network operator: kernel-weighted average of the lattice
// samples h(k/n) over J_n^r, normalized to reproduce constants.
inline double classical_nn(const target_function& h, int n, const box_domain& domain,
                           const kernel_profile& profile, std::span<const double> ybar,
                           const eval_options& opt = {}) {
  detail::check_operator_args(h, domain, profile, ybar);
  const auto lat = build_lattice(n, domain);
  const auto axes = detail::make_axes(profile, n, lat, ybar, opt.full_lattice);
  const auto pass =
      detail::lattice_pass(h, n, axes, 1.0, detail::pass_classical, false, false);
  const double den = pass.classical_den.value();
  if (den < 1e-300) throw computation_error("kernel vanished: normalizing sum underflowed");
  return pass.classical_num.value() / den;
}

// Max-product operator: sum replaced by max, still normalized by the kernel
// max. Requires h >= 0. The windowed numerator is exact unless every windowed
// term falls below (sup h) * tail_epsilon, in which case the numerator is
// recomputed over the full lattice.
inline double max_product_nn(const target_function& h, int n, const box_domain& domain,
                             const kernel_profile& profile, std::span<const double> ybar,
                             const eval_options& opt = {}) {
  detail::check_operator_args(h, domain, profile, ybar);
  const auto lat = build_lattice(n, domain);
  const auto axes = detail::make_axes(profile, n, lat, ybar, opt.full_lattice);
  const double den = detail::axes_max_rho(axes);
  if (den < 1e-300) throw computation_error("kernel vanished: max of rho underflowed");
  auto pass = detail::lattice_pass(h, n, axes, den, detail::pass_max_product, false, true);
  const double sup_h = h.rclass == range_class::unit_interval ? 1.0 : h.bound;
  if (!opt.full_lattice && detail::axes_omitted(axes, lat) > 0 &&
      pass.max_product_num < sup_h * profile.tail_epsilon()) {
    const auto full_axes = detail::make_axes(profile, n, lat, ybar, true);
    pass = detail::lattice_pass(h, n, full_axes, den, detail::pass_max_product, false, true);
  }
  return pass.max_product_num / den;
}

// Max-min operator: each sample h(k/n) is capped by its normalized kernel
// weight and the maximum is taken. Requires h: domain -> [0,1]; out-of-range
// samples raise a computation_error pointing at extended_max_min. Windowing
// changes the value by at most tail_epsilon / [phi(1)]^r.
inline double max_min_nn(const target_function& h, int n, const box_domain& domain,
                         const kernel_profile& profile, std::span<const double> ybar,
                         const eval_options& opt = {}) {
  if (h.rclass != range_class::unit_interval)
    throw argument_error(
        "max_min_nn requires a unit-interval target; use extended_max_min for general "
        "bounded functions");
  detail::check_operator_args(h, domain, profile, ybar);
  const auto lat = build_lattice(n, domain);
  const auto axes = detail::make_axes(profile, n, lat, ybar, opt.full_lattice);
  const double den = detail::axes_max_rho(axes);
  if (den < 1e-300) throw computation_error("kernel vanished: max of rho underflowed");
  return detail::lattice_pass(h, n, axes, den, detail::pass_max_min, true, false).max_min;
}

// Max-min quasi-interpolation: lattice indices range over Z^r, approximating
// targets defined on the whole space. Realized on the finite window
// {k : |n*y_i - k_i| <= axis_window}; out-of-window terms are capped by
// tail_epsilon / [phi(1)]^r.
inline double quasi_interpolation_max_min(const target_function& h, int n,
                                          const kernel_profile& profile,
                                          std::span<const double> ybar) {
  if (h.domain)
    throw argument_error("quasi-interpolation requires a target defined on all of R^r");
  if (h.rclass != range_class::unit_interval)
    throw argument_error("quasi-interpolation requires a unit-interval target");
  if (h.dimension != profile.dimension() ||
      static_cast<int>(ybar.size()) != profile.dimension())
    throw argument_error("operator arguments disagree on dimension");
  if (n < 1) throw argument_error("lattice scale n must be >= 1");
  const auto axes = detail::make_axes_integers(profile, n, ybar);
  const double den = detail::axes_max_rho(axes);
  if (den < 1e-300) throw computation_error("kernel vanished: max of rho underflowed");
  return detail::lattice_pass(h, n, axes, den, detail::pass_max_min, true, false).max_min;
}

enum class range_regime { unit, above_one, negative_unit, below_minus_one };

namespace detail {

inline range_regime classify_value(double v) {
  if (!(v == v)) throw computation_error("target sample is NaN");
  if (v >= 0.0 && v <= 1.0) return range_regime::unit;
  if (v > 1.0) return range_regime::above_one;
  if (v >= -1.0) return range_regime::negative_unit;
  return range_regime::below_minus_one;
}

inline range_regime classify_lattice_range(const target_function& h, int n,
                                           const box_domain& domain) {
  const auto lat = build_lattice(n, domain);
  const int r = domain.dimension();
  std::vector<long long> k(static_cast<std::size_t>(r));
  std::vector<double> point(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) k[static_cast<std::size_t>(i)] = lat.axis_ranges[static_cast<std::size_t>(i)][0];
  bool first = true;
  range_regime regime = range_regime::unit;
  for (;;) {
    for (int i = 0; i < r; ++i)
      point[static_cast<std::size_t>(i)] =
          static_cast<double>(k[static_cast<std::size_t>(i)]) / n;
    const auto rg = classify_value(h(point));
    if (first) {
      regime = rg;
      first = false;
    } else if (rg != regime) {
      throw computation_error(
          "mixed range unsupported: target values span more than one of [0,1], (1,inf), "
          "[-1,0), (-inf,-1)");
    }
    int ax = r - 1;
    while (ax >= 0 && k[static_cast<std::size_t>(ax)] ==
                          lat.axis_ranges[static_cast<std::size_t>(ax)][1]) {
      k[static_cast<std::size_t>(ax)] = lat.axis_ranges[static_cast<std::size_t>(ax)][0];
      --ax;
    }
    if (ax < 0) break;
    ++k[static_cast<std::size_t>(ax)];
  }
  return regime;
}

}  // namespace detail

// Max-min operator extended to bounded functions with a single-regime range:
// values entirely in [0,1], (1,inf), [-1,0) or (-inf,-1). The reciprocal /
// negation transform maps the target into [0,1], the max-min operator runs
// there, and the inverse transform restores the result.
inline double extended_max_min(const target_function& h, int n, const box_domain& domain,
                               const kernel_profile& profile, std::span<const double> ybar,
                               const eval_options& opt = {}) {
  detail::check_operator_args(h, domain, profile, ybar);
  if (h.rclass == range_class::unit_interval)
    return max_min_nn(h, n, domain, profile, ybar, opt);
  const auto regime = detail::classify_lattice_range(h, n, domain);
  std::vector<double> yv(ybar.begin(), ybar.end());
  if (detail::classify_value(h(yv)) != regime)
    throw computation_error(
        "mixed range unsupported: target values span more than one of [0,1], (1,inf), "
        "[-1,0), (-inf,-1)");
  target_function t;
  t.dimension = h.dimension;
  t.domain = h.domain;
  t.rclass = range_class::unit_interval;
  t.description = h.description;
  switch (regime) {
    case range_regime::unit:
      t.fn = h.fn;
      return max_min_nn(t, n, domain, profile, ybar, opt);
    case range_regime::above_one:
      t.fn = [f = h.fn](std::span<const double> y) { return 1.0 / f(y); };
      return 1.0 / max_min_nn(t, n, domain, profile, ybar, opt);
    case range_regime::negative_unit:
      t.fn = [f = h.fn](std::span<const double> y) { return -f(y); };
      return -max_min_nn(t, n, domain, profile, ybar, opt);
    case range_regime::below_minus_one:
      t.fn = [f = h.fn](std::span<const double> y) { return -1.0 / f(y); };
      return -1.0 / max_min_nn(t, n, domain, profile, ybar, opt);
  }
  throw computation_error("unreachable regime");
}

// All three box-domain operators from one lattice sweep; used by the error
// tables where the shared kernel pass dominates the cost.
struct point_eval {
  double classical = 0.0;
  double max_product = 0.0;
  double max_min = 0.0;
};

inline point_eval evaluate_all(const target_function& h, int n, const box_domain& domain,
                               const kernel_profile& profile, std::span<const double> ybar,
                               const eval_options& opt = {}) {
  detail::check_operator_args(h, domain, profile, ybar);
  const auto lat = build_lattice(n, domain);
  const auto axes = detail::make_axes(profile, n, lat, ybar, opt.full_lattice);
  const double den_max = detail::axes_max_rho(axes);
  if (den_max < 1e-300) throw computation_error("kernel vanished: max of rho underflowed");
  auto pass = detail::lattice_pass(
      h, n, axes, den_max,
      detail::pass_classical | detail::pass_max_product | detail::pass_max_min, true, false);
  const double den_sum = pass.classical_den.value();
  if (den_sum < 1e-300) throw computation_error("kernel vanished: normalizing sum underflowed");
  if (!opt.full_lattice && detail::axes_omitted(axes, lat) > 0 &&
      pass.max_product_num < profile.tail_epsilon()) {
    const auto full_axes = detail::make_axes(profile, n, lat, ybar, true);
    pass.max_product_num =
        detail::lattice_pass(h, n, full_axes, den_max, detail::pass_max_product, true, false)
            .max_product_num;
  }
  return {pass.classical_num.value() / den_sum, pass.max_product_num / den_max,
          pass.max_min};
}

struct truncation_stats {
  long long max_omitted_lattice_points = 0;  // worst evaluation point
  double omitted_tail_bound = 0.0;           // max omitted count * tail_epsilon
};

// Dense operator evaluation on a uniform grid including both endpoints per
// axis, values in row-major lexicographic order.
struct grid_field {
  operator_kind kind = operator_kind::max_min;
  int n = 1;
  std::string activation;
  double tail_epsilon = 0.0;
  double axis_window = 0.0;
  bool full_lattice = false;
  box_domain domain;
  std::vector<int> points_per_axis;
  std::vector<double> values;
  truncation_stats truncation;

  int dimension() const { return domain.dimension(); }
  std::size_t size() const { return values.size(); }

  void point_at(std::size_t flat, std::span<double> out) const {
    const auto& iv = domain.intervals();
    for (int i = dimension() - 1; i >= 0; --i) {
      const auto ii = static_cast<std::size_t>(i);
      const auto pts = static_cast<std::size_t>(points_per_axis[ii]);
      const std::size_t gi = flat % pts;
      flat /= pts;
      // endpoints exact so the points stay inside the domain
      out[ii] = gi == pts - 1 ? iv[ii][1]
                              : iv[ii][0] + (iv[ii][1] - iv[ii][0]) *
                                                static_cast<double>(gi) /
                                                static_cast<double>(pts - 1);
    }
  }
};

inline grid_field evaluate_on_grid(operator_kind kind, const target_function& h, int n,
                                   const box_domain& domain, const kernel_profile& profile,
                                   int points_per_axis, const eval_options& opt = {},
                                   int threads = 0) {
  if (points_per_axis < 2) throw argument_error("grid needs at least 2 points per axis");
  if (h.dimension != domain.dimension() || domain.dimension() != profile.dimension())
    throw argument_error("operator arguments disagree on dimension");
  const int r = domain.dimension();
  lattice_index_set lat;
  if (kind != operator_kind::quasi_interpolation) lat = build_lattice(n, domain);

  grid_field field{kind,
                   n,
                   profile.activation().name(),
                   profile.tail_epsilon(),
                   profile.axis_window(),
                   opt.full_lattice,
                   domain,
                   std::vector<int>(static_cast<std::size_t>(r), points_per_axis),
                   {},
                   {}};
  std::size_t total = 1;
  for (int i = 0; i < r; ++i) total *= static_cast<std::size_t>(points_per_axis);
  field.values.resize(total);

  const unsigned nthreads = resolve_threads(threads);
  std::vector<long long> chunk_omitted(nthreads, 0);
  std::vector<std::exception_ptr> errors(nthreads);
  std::atomic_uint chunk_index{0};
  parallel_for(total, threads, [&](std::size_t lo, std::size_t hi) {
    const unsigned slot = chunk_index.fetch_add(1) % nthreads;
    try {
      std::vector<double> point(static_cast<std::size_t>(r));
      long long worst_omitted = 0;
      for (std::size_t flat = lo; flat < hi; ++flat) {
        field.point_at(flat, point);
        double v = 0.0;
        switch (kind) {
          case operator_kind::classical:
            v = classical_nn(h, n, domain, profile, point, opt);
            break;
          case operator_kind::max_product:
            v = max_product_nn(h, n, domain, profile, point, opt);
            break;
          case operator_kind::max_min:
            v = max_min_nn(h, n, domain, profile, point, opt);
            break;
          case operator_kind::quasi_interpolation:
            v = quasi_interpolation_max_min(h, n, profile, point);
            break;
        }
        field.values[flat] = v;
        if (kind != operator_kind::quasi_interpolation && !opt.full_lattice)
          worst_omitted =
              std::max(worst_omitted, detail::count_omitted(profile, n, lat, point));
      }
      chunk_omitted[slot] = std::max(chunk_omitted[slot], worst_omitted);
    } catch (...) {
      errors[slot] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (long long o : chunk_omitted)
    field.truncation.max_omitted_lattice_points =
        std::max(field.truncation.max_omitted_lattice_points, o);
  field.truncation.omitted_tail_bound =
      static_cast<double>(field.truncation.max_omitted_lattice_points) *
      profile.tail_epsilon();
  return field;
}

}  // namespace nnops
