#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nnops/analysis.hpp"
#include "nnops/operators.hpp"

namespace nnops {

struct property_result {
  std::string name;
  bool passed = true;
  long long trials = 0;
  std::string detail;
};

struct verify_config {
  std::uint64_t seed = 42;
  int trials = 1000;
  double tail_epsilon = 1e-15;
  double tolerance = 1e-12;
};

namespace detail {

// Random smooth target with range inside [center - budget, center + budget]
// by construction: a constant plus three bounded separable waves.
struct random_target_spec {
  double center = 0.5;
  double amplitude[3] = {0, 0, 0};
  double omega[3][3] = {};
  double phase[3][3] = {};
  int dimension = 1;

  double eval(std::span<const double> y) const {
    double v = center;
    for (int j = 0; j < 3; ++j) {
      double term = amplitude[j];
      for (int i = 0; i < dimension; ++i)
        term *= std::sin(omega[j][i] * y[static_cast<std::size_t>(i)] + phase[j][i]);
      v += term;
    }
    return v;
  }
};

inline random_target_spec make_random_spec(std::mt19937_64& rng, int r, double center,
                                           double budget) {
  random_target_spec spec;
  spec.center = center;
  spec.dimension = r;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double weights[3];
  double total = 0.0;
  for (double& w : weights) total += (w = unit(rng) + 0.1);
  for (int j = 0; j < 3; ++j) {
    spec.amplitude[j] = budget * weights[j] / total;
    for (int i = 0; i < r; ++i) {
      spec.omega[j][i] = 0.5 + 2.5 * unit(rng);
      spec.phase[j][i] = 6.283185307179586 * unit(rng);
    }
  }
  return spec;
}

inline target_function spec_target(const random_target_spec& spec) {
  target_function t;
  t.fn = [spec](std::span<const double> y) { return spec.eval(y); };
  t.dimension = spec.dimension;
  t.description = "random";
  return t;
}

struct trial_setting {
  int r = 1;
  int n = 2;
  box_domain domain;
  std::vector<std::vector<double>> points;
};

inline trial_setting make_trial_setting(std::mt19937_64& rng, int max_n = 12) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  trial_setting ts{1, 2, box_domain::unit_cube(1), {}};
  ts.r = 1 + static_cast<int>(rng() % 2);
  const double a = -1.0 + unit(rng);
  const double len = 0.8 + 1.2 * unit(rng);
  ts.domain = box_domain::cube(ts.r, a, a + len);
  const int n_min = std::max(2, static_cast<int>(std::ceil(1.2 / len)));
  ts.n = n_min + static_cast<int>(rng() % static_cast<unsigned>(std::max(1, max_n - n_min + 1)));
  for (int p = 0; p < 5; ++p) {
    std::vector<double> pt(static_cast<std::size_t>(ts.r));
    for (auto& c : pt) c = a + len * unit(rng);
    ts.points.push_back(std::move(pt));
  }
  return ts;
}

inline std::string describe_failure(const trial_setting& ts, double lhs, double rhs) {
  std::ostringstream os;
  os << "r=" << ts.r << " n=" << ts.n << " lhs=" << lhs << " rhs=" << rhs;
  return os.str();
}

}  // namespace detail

// Numeric property suite for one activation: condition checks against the
// catalog declaration, the kernel lemmas (A-series), the max-min operator
// lemmas (B-series), and the max/min algebra (C-series). Deterministic for a
// given seed.
inline std::vector<property_result> run_property_suite(const sigmoidal_activation& act,
                                                       const verify_config& cfg = {}) {
  std::vector<property_result> results;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tol = cfg.tolerance;

  // Profiles used throughout; power_tail tails are too heavy for the default
  // epsilon, fall back to a coarser certified window.
  double tail_eps = cfg.tail_epsilon;
  std::string eps_note;
  auto make_profile = [&](int r) {
    for (;;) {
      try {
        return kernel_profile(act, r, tail_eps);
      } catch (const computation_error&) {
        if (tail_eps >= 1e-2) throw;
        tail_eps *= 1e4;
        eps_note = " (tail epsilon relaxed to " + format_double_short(tail_eps) + ")";
      }
    }
  };

  // conditions vs catalog declaration
  {
    property_result pr{"conditions_match_declaration", true, 1, ""};
    const auto rep = check_conditions(act);
    std::ostringstream os;
    const bool a_measured = rep.symmetry_defect <= 1e-12;
    os << "symmetry defect " << rep.symmetry_defect
       << (a_measured ? " (condition (a) satisfied)" : " (condition (a) FAILED)");
    if (a_measured != act.satisfies_a()) pr.passed = false;
    if (!rep.monotonicity_ok) {
      pr.passed = false;
      os << "; not monotone";
    }
    if (rep.concavity_defect) {
      const bool b_measured = *rep.concavity_defect <= 1e-8;
      os << "; concavity defect " << *rep.concavity_defect;
      if (b_measured != act.satisfies_b()) pr.passed = false;
    } else {
      os << "; concavity check inapplicable (not C^2)";
      if (act.satisfies_b()) pr.passed = false;
    }
    if (rep.decay_fit) {
      os << "; decay fit " << *rep.decay_fit;
      if (!act.decay_exponent() ||
          std::abs(*rep.decay_fit - *act.decay_exponent()) > 0.15 * *act.decay_exponent())
        pr.passed = false;
    } else {
      os << "; decay faster than any power";
      if (act.decay_exponent()) pr.passed = false;
    }
    const double up = act(1e16), down = act(-1e16);
    if (std::abs(up - 1.0) > 1e-6 || std::abs(down) > 1e-6) {
      pr.passed = false;
      os << "; limit defect " << std::max(std::abs(up - 1.0), std::abs(down));
    }
    pr.detail = os.str();
    results.push_back(std::move(pr));
  }

  // shape: non-decreasing, mu(2) > mu(1) (equality only at exact saturation),
  // and phi(1) > 0 which the operator lower bounds rely on
  {
    property_result pr{"sigmoid_shape", true, 1, ""};
    double prev = act(-20.0);
    for (int i = 1; i <= 4000; ++i) {
      const double v = act(-20.0 + i * 0.01);
      if (v < prev - 1e-15) {
        pr.passed = false;
        break;
      }
      prev = v;
    }
    const double m1 = act(1.0), m2 = act(2.0);
    const bool saturating =
        act.kind() == activation_kind::ramp || act.kind() == activation_kind::three_step;
    if (saturating ? !(m2 >= m1) : !(m2 > m1)) pr.passed = false;
    if (!(phi(act, 1.0) > 0.0)) pr.passed = false;
    std::ostringstream os;
    os << "mu(1)=" << m1 << " mu(2)=" << m2 << " phi(1)=" << phi(act, 1.0);
    pr.detail = os.str();
    results.push_back(std::move(pr));
  }

  // phi symmetry under condition (a)
  if (act.satisfies_a()) {
    property_result pr{"phi_symmetry", true, 0, ""};
    double worst = 0.0;
    for (double y = 0.0; y <= 10.0; y += 0.0125) {
      worst = std::max(worst, std::abs(phi(act, y) - phi(act, -y)));
      ++pr.trials;
    }
    for (double y : {0.3, 1.7, 4.2})
      worst = std::max(worst, std::abs(phi(act, y) - phi(act, -y)));
    pr.passed = worst <= 1e-12;
    pr.detail = "max asymmetry " + format_double_short(worst);
    results.push_back(std::move(pr));
  }

  // rho is exactly the per-axis product
  {
    property_result pr{"rho_factorization", true, 0, ""};
    for (int r = 1; r <= 3; ++r) {
      const auto profile = make_profile(r);
      for (int t = 0; t < 50; ++t) {
        std::vector<double> y(static_cast<std::size_t>(r));
        for (auto& c : y) c = -6.0 + 12.0 * unit(rng);
        double prod = 1.0;
        for (int i = r - 1; i >= 0; --i) prod *= phi(act, y[static_cast<std::size_t>(i)]);
        const double v = rho(profile, y);
        if (std::abs(v - prod) > 1e-15 * std::max(1.0, std::abs(prod))) pr.passed = false;
        ++pr.trials;
      }
    }
    results.push_back(std::move(pr));
  }

  // tail envelope at the certified radius, plus shell decay
  {
    property_result pr{"kernel_tail_envelope", true, 0, ""};
    const auto profile = make_profile(2);
    const double W = profile.truncation_radius();
    double at_radius = 0.0;
    for (int k = 0; k < 256; ++k) {
      const double ang = 6.283185307179586 * k / 256.0;
      const double z[2] = {W * std::cos(ang), W * std::sin(ang)};
      at_radius = std::max(at_radius, rho(profile, z));
      ++pr.trials;
    }
    if (at_radius > profile.tail_epsilon()) pr.passed = false;
    double prev_shell = std::numeric_limits<double>::infinity();
    double last_shell = 0.0;
    for (double R : {5.0, 10.0, 20.0, 40.0}) {
      double shell = 0.0;
      for (int k = 0; k < 256; ++k) {
        const double ang = 6.283185307179586 * k / 256.0;
        const double z[2] = {R * std::cos(ang), R * std::sin(ang)};
        shell = std::max(shell, rho(profile, z));
      }
      if (shell > prev_shell + 1e-18) pr.passed = false;
      prev_shell = shell;
      last_shell = shell;
    }
    if (!act.decay_exponent() && last_shell > 1e-12) pr.passed = false;
    pr.detail = "rho at radius " + format_double_short(W) + ": " +
                format_double_short(at_radius) + "; shell max at R=40: " +
                format_double_short(last_shell) + eps_note;
    results.push_back(std::move(pr));
  }

  // A2/A3 lower bound for the normalizing max
  if (act.satisfies_a()) {
    property_result pr{"lattice_max_lower_bound", true, 0, ""};
    for (int t = 0; t < cfg.trials; ++t) {
      const auto ts = detail::make_trial_setting(rng, 40);
      const auto profile = make_profile(ts.r);
      const double floor_v = std::pow(phi(act, 1.0), ts.r) * (1.0 - 1e-12);
      const auto& pt = ts.points[t % ts.points.size()];
      const double box_max = lattice_max_rho(profile, ts.n, ts.domain, pt);
      std::vector<double> anywhere(static_cast<std::size_t>(ts.r));
      for (auto& c : anywhere) c = -8.0 + 16.0 * unit(rng);
      const double z_max = lattice_max_rho_integers(profile, ts.n, anywhere);
      if (box_max < floor_v || z_max < floor_v) {
        pr.passed = false;
        pr.detail = detail::describe_failure(ts, box_max, floor_v);
      }
      ++pr.trials;
    }
    results.push_back(std::move(pr));
  }

  // A5: m_0 <= 2^-r
  {
    property_result pr{"moment_m0_bound", true, 0, ""};
    std::ostringstream os;
    for (int r = 1; r <= 3; ++r) {
      const auto profile = make_profile(r);
      const auto m0 = absolute_moment(profile, 0.0, r == 3 ? 50 : 200);
      os << "m0(r=" << r << ")=" << m0.value << " ";
      if (m0.value > std::pow(2.0, -r)) pr.passed = false;
      ++pr.trials;
    }
    pr.detail = os.str();
    results.push_back(std::move(pr));
  }

  const auto profile1 = make_profile(1);
  const auto profile2 = make_profile(2);
  auto profile_for = [&](int r) -> const kernel_profile& {
    return r == 1 ? profile1 : profile2;
  };

  // constant reproduction across all four operators, plus the extended cases
  {
    property_result pr{"constant_reproduction", true, 0, ""};
    const int trials = std::min(cfg.trials, 100);
    for (int t = 0; t < trials && pr.passed; ++t) {
      const auto ts = detail::make_trial_setting(rng);
      const auto& profile = profile_for(ts.r);
      const double c = unit(rng);
      const auto h = target_function::constant(ts.r, c);
      for (const auto& pt : ts.points) {
        const double vc = classical_nn(h, ts.n, ts.domain, profile, pt);
        const double vp = max_product_nn(h, ts.n, ts.domain, profile, pt);
        const double vm = max_min_nn(h, ts.n, ts.domain, profile, pt);
        const double vq = quasi_interpolation_max_min(h, ts.n, profile, pt);
        const double worst = std::max({std::abs(vc - c), std::abs(vp - c),
                                       std::abs(vm - c), std::abs(vq - c)});
        if (worst > 1e-14) {
          pr.passed = false;
          pr.detail = detail::describe_failure(ts, worst, 1e-14);
          break;
        }
      }
      ++pr.trials;
    }
    // Remark-style extension: constants outside [0,1] reproduce exactly
    const auto ts = detail::make_trial_setting(rng);
    const auto& profile = profile_for(ts.r);
    for (double c : {3.0, -0.4}) {
      const auto h = target_function::constant(ts.r, c);
      const double v = extended_max_min(h, ts.n, ts.domain, profile, ts.points[0]);
      if (v != c) {
        pr.passed = false;
        pr.detail = "extended constant " + format_double_short(c) + " -> " + format_double(v);
      }
    }
    results.push_back(std::move(pr));
  }

  // range preservation: 0 <= L_n(h) <= sup h
  {
    property_result pr{"range_preservation", true, 0, ""};
    const int trials = std::min(cfg.trials, 200);
    for (int t = 0; t < trials && pr.passed; ++t) {
      const auto ts = detail::make_trial_setting(rng);
      const auto& profile = profile_for(ts.r);
      const double center = 0.2 + 0.6 * unit(rng);
      const double budget = std::min(center, 1.0 - center) * unit(rng);
      const auto h = detail::spec_target(detail::make_random_spec(rng, ts.r, center, budget));
      for (const auto& pt : ts.points) {
        const double v = max_min_nn(h, ts.n, ts.domain, profile, pt);
        if (v < 0.0 || v > center + budget + 1e-15) {
          pr.passed = false;
          pr.detail = detail::describe_failure(ts, v, center + budget);
        }
      }
      ++pr.trials;
    }
    results.push_back(std::move(pr));
  }

  // B2: monotone in the target
  {
    property_result pr{"maxmin_monotone_B2", true, 0, ""};
    for (int t = 0; t < cfg.trials && pr.passed; ++t) {
      const auto ts = detail::make_trial_setting(rng);
      const auto& profile = profile_for(ts.r);
      const double center = 0.2 + 0.4 * unit(rng);
      const double budget = std::min(center, 1.0 - center) * unit(rng);
      const auto hs = detail::make_random_spec(rng, ts.r, center, budget);
      const auto us = detail::make_random_spec(rng, ts.r, 0.15, 0.1);
      const auto h = detail::spec_target(hs);
      target_function g;
      g.dimension = ts.r;
      g.fn = [hs, us](std::span<const double> y) {
        return std::min(hs.eval(y) + us.eval(y), 1.0);
      };
      g.description = "random+bump";
      for (const auto& pt : ts.points) {
        const double vh = max_min_nn(h, ts.n, ts.domain, profile, pt);
        const double vg = max_min_nn(g, ts.n, ts.domain, profile, pt);
        if (vh > vg + 1e-15) {
          pr.passed = false;
          pr.detail = detail::describe_failure(ts, vh, vg);
        }
      }
      ++pr.trials;
    }
    results.push_back(std::move(pr));
  }

  // B3: pseudo-linearity over the (max, min) semiring
  {
    property_result pr{"maxmin_pseudo_linear_B3", true, 0, ""};
    for (int t = 0; t < cfg.trials && pr.passed; ++t) {
      const auto ts = detail::make_trial_setting(rng);
      const auto& profile = profile_for(ts.r);
      const auto hs = detail::make_random_spec(rng, ts.r, 0.5, 0.5 * unit(rng));
      const auto gs = detail::make_random_spec(rng, ts.r, 0.5, 0.5 * unit(rng));
      const double alpha = unit(rng), beta = unit(rng);
      const auto h = detail::spec_target(hs);
      const auto g = detail::spec_target(gs);
      target_function combo;
      combo.dimension = ts.r;
      combo.fn = [hs, gs, alpha, beta](std::span<const double> y) {
        return std::max(std::min(alpha, hs.eval(y)), std::min(beta, gs.eval(y)));
      };
      combo.description = "(a^h)v(b^g)";
      for (const auto& pt : ts.points) {
        const double lhs = max_min_nn(combo, ts.n, ts.domain, profile, pt);
        const double rhs =
            std::max(std::min(alpha, max_min_nn(h, ts.n, ts.domain, profile, pt)),
                     std::min(beta, max_min_nn(g, ts.n, ts.domain, profile, pt)));
        if (std::abs(lhs - rhs) > tol) {
          pr.passed = false;
          pr.detail = detail::describe_failure(ts, lhs, rhs);
        }
      }
      ++pr.trials;
    }
    results.push_back(std::move(pr));
  }

  // B4: subadditive for h + g <= 1
  {
    property_result pr{"maxmin_subadditive_B4", true, 0, ""};
    for (int t = 0; t < cfg.trials && pr.passed; ++t) {
      const auto ts = detail::make_trial_setting(rng);
      const auto& profile = profile_for(ts.r);
      const double ch = 0.1 + 0.3 * unit(rng), cg = 0.1 + 0.3 * unit(rng);
      const auto hs = detail::make_random_spec(rng, ts.r, ch, std::min(ch, 0.5 - ch) * unit(rng));
      const auto gs = detail::make_random_spec(rng, ts.r, cg, std::min(cg, 0.5 - cg) * unit(rng));
      const auto h = detail::spec_target(hs);
      const auto g = detail::spec_target(gs);
      target_function sum;
      sum.dimension = ts.r;
      sum.fn = [hs, gs](std::span<const double> y) { return hs.eval(y) + gs.eval(y); };
      sum.description = "h+g";
      for (const auto& pt : ts.points) {
        const double lhs = max_min_nn(sum, ts.n, ts.domain, profile, pt);
        const double rhs = max_min_nn(h, ts.n, ts.domain, profile, pt) +
                           max_min_nn(g, ts.n, ts.domain, profile, pt);
        if (lhs > rhs + tol) {
          pr.passed = false;
          pr.detail = detail::describe_failure(ts, lhs, rhs);
        }
      }
      ++pr.trials;
    }
    results.push_back(std::move(pr));
  }

  // B5: contraction through |h - g|
  {
    property_result pr{"maxmin_contraction_B5", true, 0, ""};
    for (int t = 0; t < cfg.trials && pr.passed; ++t) {
      const auto ts = detail::make_trial_setting(rng);
      const auto& profile = profile_for(ts.r);
      const auto hs = detail::make_random_spec(rng, ts.r, 0.5, 0.5 * unit(rng));
      const auto gs = detail::make_random_spec(rng, ts.r, 0.5, 0.5 * unit(rng));
      const auto h = detail::spec_target(hs);
      const auto g = detail::spec_target(gs);
      target_function diff;
      diff.dimension = ts.r;
      diff.fn = [hs, gs](std::span<const double> y) {
        return std::abs(hs.eval(y) - gs.eval(y));
      };
      diff.description = "|h-g|";
      for (const auto& pt : ts.points) {
        const double lhs = std::abs(max_min_nn(h, ts.n, ts.domain, profile, pt) -
                                    max_min_nn(g, ts.n, ts.domain, profile, pt));
        const double rhs = max_min_nn(diff, ts.n, ts.domain, profile, pt);
        if (lhs > rhs + tol) {
          pr.passed = false;
          pr.detail = detail::describe_failure(ts, lhs, rhs);
        }
      }
      ++pr.trials;
    }
    results.push_back(std::move(pr));
  }

  // C1: |max a - max b| <= max |a - b|
  {
    property_result pr{"max_abs_inequality_C1", true, 0, ""};
    for (int t = 0; t < cfg.trials; ++t) {
      const std::size_t len = 1 + rng() % 20;
      double ma = -1e300, mb = -1e300, md = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const double a = -5.0 + 10.0 * unit(rng);
        const double b = -5.0 + 10.0 * unit(rng);
        ma = std::max(ma, a);
        mb = std::max(mb, b);
        md = std::max(md, std::abs(a - b));
      }
      if (std::abs(ma - mb) > md + 1e-15) {
        pr.passed = false;
        pr.detail = "lhs=" + format_double(std::abs(ma - mb)) + " rhs=" + format_double(md);
      }
      ++pr.trials;
    }
    results.push_back(std::move(pr));
  }

  // C2: |x^y - x^z| <= x ^ |y - z| on [0,1]
  {
    property_result pr{"min_abs_inequality_C2", true, 0, ""};
    for (int t = 0; t < cfg.trials; ++t) {
      const double x = unit(rng), y = unit(rng), z = unit(rng);
      const double lhs = std::abs(std::min(x, y) - std::min(x, z));
      const double rhs = std::min(x, std::abs(y - z));
      if (lhs > rhs + 1e-15) {
        pr.passed = false;
        pr.detail = "x=" + format_double(x) + " y=" + format_double(y) + " z=" + format_double(z);
      }
      ++pr.trials;
    }
    results.push_back(std::move(pr));
  }

  // windowed evaluation equals the full lattice
  {
    property_result pr{"truncation_exactness", true, 0, ""};
    const int trials = std::min(cfg.trials, 60);
    for (int t = 0; t < trials && pr.passed; ++t) {
      const auto ts = detail::make_trial_setting(rng, t % 10 == 0 ? 100 : 60);
      const auto& profile = profile_for(ts.r);
      const auto hs = detail::make_random_spec(rng, ts.r, 0.5, 0.45);
      const auto h = detail::spec_target(hs);
      const eval_options full{true};
      for (const auto& pt : ts.points) {
        const double d1 = std::abs(max_min_nn(h, ts.n, ts.domain, profile, pt) -
                                   max_min_nn(h, ts.n, ts.domain, profile, pt, full));
        const double d2 = std::abs(classical_nn(h, ts.n, ts.domain, profile, pt) -
                                   classical_nn(h, ts.n, ts.domain, profile, pt, full));
        const double d3 = std::abs(max_product_nn(h, ts.n, ts.domain, profile, pt) -
                                   max_product_nn(h, ts.n, ts.domain, profile, pt, full));
        if (std::max({d1, d2, d3}) > tol) {
          pr.passed = false;
          pr.detail = detail::describe_failure(ts, std::max({d1, d2, d3}), tol);
        }
      }
      ++pr.trials;
    }
    results.push_back(std::move(pr));
  }

  return results;
}

}  // namespace nnops
