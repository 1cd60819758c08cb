#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nnops/operators.hpp"

namespace nnops {

// Discrete sup-norm distance between an evaluated field and the target,
// taken over the field's own grid.
inline double sup_norm_error(const grid_field& field, const target_function& h) {
  if (h.dimension != field.dimension())
    throw argument_error("sup_norm_error: dimension mismatch");
  std::vector<double> point(static_cast<std::size_t>(field.dimension()));
  if (h.domain) {
    for (int i = 0; i < field.dimension(); ++i) {
      const auto ii = static_cast<std::size_t>(i);
      if (field.domain.intervals()[ii][0] < h.domain->intervals()[ii][0] - 1e-12 ||
          field.domain.intervals()[ii][1] > h.domain->intervals()[ii][1] + 1e-12)
        throw argument_error("sup_norm_error: field grid leaves the target domain");
    }
  }
  double worst = 0.0;
  for (std::size_t flat = 0; flat < field.size(); ++flat) {
    field.point_at(flat, point);
    worst = std::max(worst, std::abs(field.values[flat] - h(point)));
  }
  return worst;
}

struct modulus_estimate {
  double delta = 0.0;
  double lower = 0.0;               // grid max of |h(x)-h(y)| over ||x-y|| <= delta
  double lipschitz_constant = 0.0;  // max |h(x)-h(y)| / ||x-y||^beta over the same pairs
  double lipschitz_upper = 0.0;     // lipschitz_constant * delta^beta
  double beta = 1.0;
  int resolution = 0;
};

// Modulus of continuity omega(h, delta) estimated by pairwise search over a
// uniform grid, window-limited to offsets within delta. `lower` underestimates
// the true sup; `lipschitz_upper` extrapolates an upper value for use in
// bounds where a low estimate would be misleading.
inline modulus_estimate modulus_of_continuity(const target_function& h,
                                              const box_domain& domain, double delta,
                                              int resolution, double beta = 1.0) {
  if (!(delta > 0)) throw argument_error("modulus delta must be positive");
  if (resolution < 2) throw argument_error("modulus resolution must be >= 2");
  if (h.dimension != domain.dimension())
    throw argument_error("modulus_of_continuity: dimension mismatch");
  const int r = domain.dimension();
  std::vector<double> spacing(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    const auto& iv = domain.intervals()[static_cast<std::size_t>(i)];
    spacing[static_cast<std::size_t>(i)] = (iv[1] - iv[0]) / (resolution - 1);
    if (spacing[static_cast<std::size_t>(i)] > delta / 4.0)
      throw argument_error("resolution too coarse for delta (need spacing <= delta/4)");
  }

  // Precompute h on the grid (row-major lexicographic).
  std::size_t total = 1;
  for (int i = 0; i < r; ++i) total *= static_cast<std::size_t>(resolution);
  std::vector<double> values(total);
  std::vector<double> point(static_cast<std::size_t>(r));
  std::vector<std::size_t> gidx(static_cast<std::size_t>(r), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int i = r - 1; i >= 0; --i) {
      gidx[static_cast<std::size_t>(i)] = rem % static_cast<std::size_t>(resolution);
      rem /= static_cast<std::size_t>(resolution);
    }
    for (int i = 0; i < r; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      point[ii] = domain.intervals()[ii][0] +
                  spacing[ii] * static_cast<double>(gidx[ii]);
    }
    values[flat] = h(point);
  }

  // Lexicographically positive offsets within the delta-window.
  std::vector<std::vector<long long>> offsets;
  std::vector<long long> w(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i)
    w[static_cast<std::size_t>(i)] =
        static_cast<long long>(std::floor(delta / spacing[static_cast<std::size_t>(i)]));
  std::vector<long long> d(static_cast<std::size_t>(r), 0);
  std::vector<double> dists;
  for (;;) {
    bool positive = false;
    for (int i = 0; i < r; ++i) {
      if (d[static_cast<std::size_t>(i)] > 0) { positive = true; break; }
      if (d[static_cast<std::size_t>(i)] < 0) break;
    }
    if (positive) {
      double dist2 = 0.0;
      for (int i = 0; i < r; ++i) {
        const double dd = spacing[static_cast<std::size_t>(i)] *
                          static_cast<double>(d[static_cast<std::size_t>(i)]);
        dist2 += dd * dd;
      }
      const double dist = std::sqrt(dist2);
      if (dist <= delta) {
        offsets.push_back(d);
        dists.push_back(dist);
      }
    }
    int ax = r - 1;
    while (ax >= 0 && d[static_cast<std::size_t>(ax)] == w[static_cast<std::size_t>(ax)]) {
      d[static_cast<std::size_t>(ax)] = -w[static_cast<std::size_t>(ax)];
      --ax;
    }
    if (ax < 0) break;
    ++d[static_cast<std::size_t>(ax)];
  }

  modulus_estimate out;
  out.delta = delta;
  out.beta = beta;
  out.resolution = resolution;
  std::vector<long long> strides(static_cast<std::size_t>(r), 1);
  for (int i = r - 2; i >= 0; --i)
    strides[static_cast<std::size_t>(i)] =
        strides[static_cast<std::size_t>(i + 1)] * resolution;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int i = r - 1; i >= 0; --i) {
      gidx[static_cast<std::size_t>(i)] = rem % static_cast<std::size_t>(resolution);
      rem /= static_cast<std::size_t>(resolution);
    }
    for (std::size_t oi = 0; oi < offsets.size(); ++oi) {
      const auto& off = offsets[oi];
      bool inside = true;
      long long other = static_cast<long long>(flat);
      for (int i = 0; i < r; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const long long gj = static_cast<long long>(gidx[ii]) + off[ii];
        if (gj < 0 || gj >= resolution) { inside = false; break; }
        other += off[ii] * strides[ii];
      }
      if (!inside) continue;
      const double dv = std::abs(values[static_cast<std::size_t>(other)] - values[flat]);
      out.lower = std::max(out.lower, dv);
      out.lipschitz_constant =
          std::max(out.lipschitz_constant, dv / std::pow(dists[oi], beta));
    }
  }
  out.lipschitz_upper = out.lipschitz_constant * std::pow(delta, beta);
  return out;
}

struct bound_report {
  int n = 0;
  double delta_n = 0.0;
  double omega_term = 0.0;   // omega(h, delta_n), Lipschitz-extrapolated upper value
  double moment_term = 0.0;  // m_alpha / ([phi(1)]^r n^alpha delta_n^alpha), with safety
  double bound = 0.0;        // max of the two
  double observed_error = std::numeric_limits<double>::quiet_NaN();
  double omega_lower = 0.0;
  double moment_value = 0.0;
  double moment_safety = 1.0;
};

// Jackson-type bound max(omega(h, delta_n), m_alpha / ([phi(1)]^r n^a d^a)).
// The moment estimate is a grid lower bound, so it enters with a safety
// factor. omega_domain is the box the modulus is estimated on: the operator
// domain for box operators, a larger box for quasi-interpolation targets.
inline bound_report jackson_bound(const target_function& h, const box_domain& omega_domain,
                                  int n, double delta_n, double alpha,
                                  const kernel_profile& profile, const moment_estimate& moment,
                                  double observed_error = std::numeric_limits<double>::quiet_NaN(),
                                  double beta = 1.0, int omega_resolution = 0,
                                  double moment_safety = 1.05) {
  if (!(delta_n > 0)) throw argument_error("jackson_bound: delta_n must be positive");
  if (!(alpha > 0)) throw argument_error("jackson_bound: alpha must be positive");
  const auto& act = profile.activation();
  if (act.decay_exponent() && alpha > *act.decay_exponent() + 1e-12)
    throw argument_error("jackson_bound: alpha exceeds the activation decay exponent");
  if (std::abs(moment.beta - alpha) > 1e-12)
    throw argument_error("jackson_bound: moment order must equal alpha");

  if (omega_resolution <= 0) {
    const double extent = omega_domain.max_extent();
    omega_resolution =
        std::max(51, static_cast<int>(std::ceil(4.0 * extent / delta_n)) + 1);
  }
  const auto om = modulus_of_continuity(h, omega_domain, delta_n, omega_resolution, beta);

  bound_report rep;
  rep.n = n;
  rep.delta_n = delta_n;
  rep.omega_lower = om.lower;
  rep.omega_term = om.lipschitz_upper;
  rep.moment_value = moment.value;
  rep.moment_safety = moment_safety;
  const double phi1 = profile.phi(1.0);
  rep.moment_term = moment_safety * moment.value /
                    (std::pow(phi1, profile.dimension()) * std::pow(double(n), alpha) *
                     std::pow(delta_n, alpha));
  rep.bound = std::max(rep.omega_term, rep.moment_term);
  rep.observed_error = observed_error;
  return rep;
}

// Predicted convergence exponent alpha*beta/(alpha+beta) for Lipschitz
// classes of order beta under kernel decay alpha.
inline double lipschitz_rate(double alpha, double beta) {
  if (!(alpha > 0)) throw argument_error("lipschitz_rate: alpha must be positive");
  if (!(beta > 0 && beta <= 1)) throw argument_error("lipschitz_rate: beta must be in (0,1]");
  return alpha * beta / (alpha + beta);
}

// The optimizing null-sequence exponent: delta_n = n^(-alpha/(alpha+beta)).
inline double optimal_delta_exponent(double alpha, double beta) {
  if (!(alpha > 0)) throw argument_error("optimal_delta_exponent: alpha must be positive");
  if (!(beta > 0 && beta <= 1))
    throw argument_error("optimal_delta_exponent: beta must be in (0,1]");
  return alpha / (alpha + beta);
}

// Least-squares slope of -log(error) against log(n).
inline double empirical_order(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 3) throw argument_error("empirical_order needs at least 3 samples");
  double prev_n = 0.0;
  for (const auto& [n, e] : samples) {
    if (!(n > prev_n)) throw argument_error("empirical_order: n must be strictly increasing");
    if (!(e > 0)) throw argument_error("empirical_order: errors must be positive");
    prev_n = n;
  }
  const double m = static_cast<double>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, e] : samples) {
    const double x = std::log(n), y = -std::log(e);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

struct error_table_row {
  int n = 0;
  double classical_error = 0.0;
  double max_product_error = 0.0;
  double max_min_error = 0.0;
};

struct error_table {
  std::vector<error_table_row> rows;
  std::string target_description;
  std::string activation;
  int grid_points = 0;
  box_domain domain;
};

// Sup-norm errors of the three box-domain operators on a shared uniform grid,
// one row per n. One kernel sweep per grid point covers all three operators.
// Note the discrete sup is sensitive to grid/lattice alignment for the
// max-product operator: grids whose spacing divides 1/n sit on lattice points
// where that operator nearly interpolates. The 151-point default mesh
// reproduces the published benchmark table for n in {20,55,77,100,150,1000}.
inline error_table compare_operators(const target_function& h, std::span<const int> n_list,
                                     const box_domain& domain, const kernel_profile& profile,
                                     int grid_points = 151, const eval_options& opt = {},
                                     int threads = 0, bool use_extended_max_min = false) {
  if (grid_points < 2) throw argument_error("grid needs at least 2 points per axis");
  int prev = 0;
  for (int n : n_list) {
    if (n <= prev) throw argument_error("compare_operators: n values must be strictly increasing");
    prev = n;
    build_lattice(n, domain);  // validate before any computation
  }

  const int r = domain.dimension();
  std::size_t total = 1;
  for (int i = 0; i < r; ++i) total *= static_cast<std::size_t>(grid_points);

  error_table table{{},
                    h.description,
                    profile.activation().name(),
                    grid_points,
                    domain};
  for (int n : n_list) {
    std::vector<double> ecl(total), emp(total), emm(total);
    std::vector<std::exception_ptr> errors(resolve_threads(threads));
    std::atomic_uint chunk_index{0};
    parallel_for(total, threads, [&](std::size_t lo, std::size_t hi) {
      const unsigned slot = chunk_index.fetch_add(1) % errors.size();
      try {
        std::vector<double> point(static_cast<std::size_t>(r));
        for (std::size_t flat = lo; flat < hi; ++flat) {
          std::size_t rem = flat;
          for (int i = r - 1; i >= 0; --i) {
            const auto ii = static_cast<std::size_t>(i);
            const auto pts = static_cast<std::size_t>(grid_points);
            const std::size_t gi = rem % pts;
            rem /= pts;
            const auto& iv = domain.intervals()[ii];
            point[ii] = gi == pts - 1 ? iv[1]
                                      : iv[0] + (iv[1] - iv[0]) * static_cast<double>(gi) /
                                                    static_cast<double>(pts - 1);
          }
          const double hv = h(point);
          if (use_extended_max_min) {
            ecl[flat] = std::abs(classical_nn(h, n, domain, profile, point, opt) - hv);
            emp[flat] = std::abs(max_product_nn(h, n, domain, profile, point, opt) - hv);
            emm[flat] = std::abs(extended_max_min(h, n, domain, profile, point, opt) - hv);
          } else {
            const auto v = evaluate_all(h, n, domain, profile, point, opt);
            ecl[flat] = std::abs(v.classical - hv);
            emp[flat] = std::abs(v.max_product - hv);
            emm[flat] = std::abs(v.max_min - hv);
          }
        }
      } catch (...) {
        errors[slot] = std::current_exception();
      }
    });
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    error_table_row row;
    row.n = n;
    for (std::size_t i = 0; i < total; ++i) {
      row.classical_error = std::max(row.classical_error, ecl[i]);
      row.max_product_error = std::max(row.max_product_error, emp[i]);
      row.max_min_error = std::max(row.max_min_error, emm[i]);
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace nnops
