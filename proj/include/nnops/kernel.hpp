#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "nnops/activation.hpp"
#include "nnops/domain.hpp"

namespace nnops {

// Centered-difference density induced by a sigmoidal activation:
// phi(y) = (mu(y+1) - mu(y-1)) / 2. Nonnegative, bounded by 1/2, even when
// condition (a) holds.
inline double phi(const sigmoidal_activation& act, double y) {
  return (act(y + 1.0) - act(y - 1.0)) / 2.0;
}

namespace detail {

// Smallest w >= tail start with max(phi(w), phi(-w)) < threshold; monotone
// tails extend the bound to every |y| > w. Doubling then bisection; the scan
// aborts past 1e6 (reachable for power_tail with small gamma and tiny eps).
inline double scan_axis_window(const sigmoidal_activation& act, double threshold) {
  const double start = std::max(1.0, act.tail_monotone_from());
  if (start > 1e6)
    throw computation_error(
        "kernel decays too slowly for requested eps (truncation scan cap 1e6 exceeded)");
  auto below = [&](double w) {
    return std::max(phi(act, w), phi(act, -w)) < threshold;
  };
  if (below(start)) return start;
  double lo = start, hi = start;
  do {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6)
      throw computation_error(
          "kernel decays too slowly for requested eps (truncation scan cap 1e6 exceeded)");
  } while (!below(hi));
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? hi : lo) = mid;
  }
  return hi;
}

// Per-axis factor threshold certifying rho <= eps outside the window: if some
// |z_i| exceeds the axis window then rho(z) <= phi(z_i) * (1/2)^(r-1), so
// phi < eps * 2^(r-1) suffices; the extra /64 keeps summed tails (classical
// operator) well under eps as well.
inline double axis_threshold(int r, double eps) {
  return eps * std::pow(2.0, r - 1) / 64.0;
}

}  // namespace detail

// Certified l2 truncation radius: rho(z) <= eps whenever ||z||_2 > W.
// ||z||_2 > W forces max_i |z_i| > W/sqrt(r), so it is the per-axis scan
// radius scaled by sqrt(r).
inline double truncation_radius(const sigmoidal_activation& act, int r, double eps) {
  if (r < 1) throw argument_error("truncation_radius: dimension must be >= 1");
  if (!(eps > 0)) throw argument_error("truncation_radius: eps must be positive");
  return detail::scan_axis_window(act, detail::axis_threshold(r, eps)) * std::sqrt(double(r));
}

// The r-variate product density rho(y) = prod_i phi(y_i) with its truncation
// window. Immutable and shareable.
class kernel_profile {
 public:
  kernel_profile(sigmoidal_activation act, int dimension, double tail_epsilon = 1e-15)
      : act_(std::move(act)), dim_(dimension), tail_eps_(tail_epsilon) {
    if (dim_ < 1) throw argument_error("kernel profile dimension must be >= 1");
    if (!(tail_eps_ > 0)) throw argument_error("tail epsilon must be positive");
    axis_window_ = detail::scan_axis_window(act_, detail::axis_threshold(dim_, tail_eps_));
  }

  const sigmoidal_activation& activation() const { return act_; }
  int dimension() const { return dim_; }
  double tail_epsilon() const { return tail_eps_; }

  // Half-width of the per-axis lattice window used by the operators.
  double axis_window() const { return axis_window_; }
  // l2 radius beyond which rho is certified below tail_epsilon.
  double truncation_radius() const { return axis_window_ * std::sqrt(double(dim_)); }

  double phi(double y) const { return nnops::phi(act_, y); }

 private:
  sigmoidal_activation act_;
  int dim_;
  double tail_eps_;
  double axis_window_;
};

inline double rho(const kernel_profile& profile, std::span<const double> ybar) {
  if (static_cast<int>(ybar.size()) != profile.dimension())
    throw argument_error("rho: point dimension does not match profile");
  double v = 1.0;
  for (double y : ybar) v *= profile.phi(y);
  return v;
}

namespace detail {

// Max of phi(center - k) for integer k in [lo, hi]. Restricting to the
// profile window loses nothing: beyond it the tails are monotone, so every
// outside candidate is dominated by the window edge.
inline double axis_max_phi(const sigmoidal_activation& act, double center,
                           long long lo, long long hi, double window, bool use_window) {
  if (use_window) {
    const long long wlo = static_cast<long long>(std::ceil(center - window));
    const long long whi = static_cast<long long>(std::floor(center + window));
    if (wlo > lo) lo = wlo;
    if (whi < hi) hi = whi;
  }
  double m = 0.0;
  for (long long k = lo; k <= hi; ++k) m = std::max(m, phi(act, center - k));
  return m;
}

}  // namespace detail

// Max over k in J_n^r of rho(n*ybar - k). The index set is a box, so the max
// factorizes into per-axis maxima. Valid for any ybar in R^r (the lower bound
// [phi(1)]^r of Lemma-type estimates needs ybar inside the domain). With the
// window enabled, the result still equals the full-lattice max except when the
// window misses the lattice box entirely (ybar far outside), where the scan
// falls back to the full axis.
inline double lattice_max_rho(const kernel_profile& profile, int n, const box_domain& domain,
                              std::span<const double> ybar, bool full_lattice = false) {
  if (static_cast<int>(ybar.size()) != profile.dimension() ||
      domain.dimension() != profile.dimension())
    throw argument_error("lattice_max_rho: dimension mismatch");
  const auto lat = build_lattice(n, domain);
  double out = 1.0;
  for (int i = 0; i < profile.dimension(); ++i) {
    const double c = n * ybar[static_cast<std::size_t>(i)];
    const auto [lo, hi] = lat.axis_ranges[static_cast<std::size_t>(i)];
    const bool window_hits = !full_lattice &&
                             std::ceil(c - profile.axis_window()) <= static_cast<double>(hi) &&
                             std::floor(c + profile.axis_window()) >= static_cast<double>(lo);
    out *= detail::axis_max_phi(profile.activation(), c, lo, hi,
                                profile.axis_window(), window_hits);
  }
  return out;
}

// Same max with k ranging over Z^r (quasi-interpolation denominator).
inline double lattice_max_rho_integers(const kernel_profile& profile, int n,
                                       std::span<const double> ybar) {
  if (static_cast<int>(ybar.size()) != profile.dimension())
    throw argument_error("lattice_max_rho: dimension mismatch");
  double out = 1.0;
  for (double y : ybar) {
    const double c = n * y;
    const auto lo = static_cast<long long>(std::ceil(c - profile.axis_window()));
    const auto hi = static_cast<long long>(std::floor(c + profile.axis_window()));
    out *= detail::axis_max_phi(profile.activation(), c, lo, hi, 0.0, false);
  }
  return out;
}

struct moment_estimate {
  double beta = 0.0;
  double value = 0.0;
  int resolution = 0;          // grid points per unit interval axis
  long long lattice_window = 0;  // integer window radius the estimate used
};

// Grid estimate of the generalized absolute moment
//   m_beta = sup_y max_k rho(y - k) ||y - k||_2^beta.
// Shift-invariance reduces y to the fundamental cell [0,1]^r; the combined
// (cell grid) x (lattice window) offsets form one uniform z-grid of spacing
// 1/(resolution-1), which is what gets scanned. The window doubles until the
// analytic tail bound phi(L) * (1/2)^(r-1) * (sqrt(r) L)^beta drops below the
// running maximum, so enlarging it further cannot change the estimate.
// A lower estimate by construction; callers add a safety factor where an
// upper value is needed.
inline moment_estimate absolute_moment(const kernel_profile& profile, double beta,
                                       int resolution = 200) {
  if (!(beta >= 0)) throw argument_error("moment order beta must be >= 0");
  if (resolution < 50) throw argument_error("moment resolution must be >= 50 points per axis");
  const auto& act = profile.activation();
  if (act.decay_exponent() && beta > *act.decay_exponent() + 1e-12)
    throw argument_error("moment may be infinite: beta exceeds the activation decay exponent");

  const int r = profile.dimension();
  const double s = 1.0 / (resolution - 1);
  const double norm_scale = std::sqrt(double(r));
  auto tail_bound = [&](double w) {
    return std::max(phi(act, w), phi(act, -w)) * std::pow(0.5, r - 1) *
           std::pow(norm_scale * w, beta);
  };
  // The bound decays monotonically past both the phi tail start and the peak
  // of w^beta * phi(w).
  const double bound_monotone_from = std::max(act.tail_monotone_from(), beta + 1.0);

  long long L = static_cast<long long>(std::ceil(std::max(4.0, bound_monotone_from)));
  for (;;) {
    const long long M = L * (resolution - 1);
    std::vector<double> ax(static_cast<std::size_t>(2 * M + 1));
    std::vector<double> off(ax.size());
    for (long long j = -M; j <= M; ++j) {
      const double u = static_cast<double>(j) * s;
      off[static_cast<std::size_t>(j + M)] = u;
      ax[static_cast<std::size_t>(j + M)] = phi(act, u);
    }

    double best = 0.0;
    if (beta == 0.0) {
      // ||.||^0 = 1 everywhere (0^0 convention included): the max over the
      // box factorizes into per-axis maxima.
      double axis_best = 0.0;
      for (double v : ax) axis_best = std::max(axis_best, v);
      best = std::pow(axis_best, r);
    } else {
      std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
      const std::size_t count = ax.size();
      for (;;) {
        double p = 1.0, n2 = 0.0;
        for (int i = 0; i < r; ++i) {
          p *= ax[idx[static_cast<std::size_t>(i)]];
          const double u = off[idx[static_cast<std::size_t>(i)]];
          n2 += u * u;
        }
        const double weight = (beta == 2.0) ? n2 : std::pow(n2, beta / 2.0);
        best = std::max(best, p * weight);
        int axis = r - 1;
        while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == count) {
          idx[static_cast<std::size_t>(axis)] = 0;
          --axis;
        }
        if (axis < 0) break;
      }
    }

    if (static_cast<double>(L) >= bound_monotone_from && tail_bound(static_cast<double>(L)) < best)
      return {beta, best, resolution, L};
    L *= 2;
    if (L > 1000000) throw computation_error("moment window scan exceeded cap");
  }
}

}  // namespace nnops
