#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nnops/common.hpp"

namespace nnops {

enum class activation_kind { logistic, tanh_sigmoid, ramp, three_step, power_tail, gompertz };

// A non-decreasing sigmoidal activation: value -> 1 as y -> +inf and -> 0 as
// y -> -inf. Immutable after construction; evaluation is a pure function of
// (parameters, y), so instances are freely shareable across threads.
//
// Structural conditions used by the approximation theory:
//   (a) mu(y) - 1/2 is odd,
//   (b) mu is C^2 and concave on y >= 0,
//   (c) mu(y) = O(|y|^-alpha) as y -> -inf for some alpha > 0.
// The flags below are the catalog's declared values; check_conditions()
// measures them numerically.
class sigmoidal_activation {
 public:
  static sigmoidal_activation logistic() {
    return {activation_kind::logistic, 0, 0, true, true, true, std::nullopt, true, 2.0};
  }
  static sigmoidal_activation tanh() {
    return {activation_kind::tanh_sigmoid, 0, 0, true, true, true, std::nullopt, true, 2.0};
  }
  static sigmoidal_activation ramp() {
    return {activation_kind::ramp, 0, 0, true, false, true, std::nullopt, false, 1.5};
  }
  static sigmoidal_activation three_step() {
    return {activation_kind::three_step, 0, 0, true, false, true, std::nullopt, false, 1.5};
  }
  // Continuous, piecewise-defined activation with polynomial left tail
  // ~ |y|^-gamma; condition (c) holds exactly for 0 < alpha <= gamma.
  static sigmoidal_activation power_tail(double gamma) {
    if (!(gamma > 0) || !std::isfinite(gamma))
      throw argument_error("power_tail activation requires gamma > 0");
    return {activation_kind::power_tail, gamma, 0,
            true, false, true, gamma, false, std::pow(2.0, 1.0 / gamma) + 1.0};
  }
  // Gompertz sigmoid exp(-alpha*exp(-beta*y)). Sigmoidal but fails condition
  // (a); kept in the catalog as the worked counter-example. Concave on y >= 0
  // only when the inflection log(alpha)/beta is nonpositive.
  static sigmoidal_activation gompertz(double alpha, double beta) {
    if (!(alpha > 0) || !(beta > 0) || !std::isfinite(alpha) || !std::isfinite(beta))
      throw argument_error("gompertz activation requires alpha > 0 and beta > 0");
    const double inflection = std::log(alpha) / beta;
    return {activation_kind::gompertz, alpha, beta,
            false, inflection <= 0.0, true, std::nullopt, true,
            std::max(2.0, std::abs(inflection) + 2.0)};
  }

  // Catalog entries addressable by name:
  //   "logistic", "tanh", "ramp", "three_step",
  //   "power_tail:gamma=<v>", "gompertz:alpha=<v>,beta=<v>".
  static sigmoidal_activation parse(std::string_view name);

  double operator()(double y) const {
    switch (kind_) {
      case activation_kind::logistic:
        return 1.0 / (1.0 + std::exp(-y));
      case activation_kind::tanh_sigmoid:
        return (std::tanh(y) + 1.0) / 2.0;
      case activation_kind::ramp:
        if (y < -0.5) return 0.0;
        if (y > 0.5) return 1.0;
        return y + 0.5;
      case activation_kind::three_step:
        if (y < -0.5) return 0.0;
        if (y > 0.5) return 1.0;
        return 0.5;
      case activation_kind::power_tail: {
        const double g = p1_;
        const double knee = std::pow(2.0, 1.0 / g);
        if (y < -knee) return 1.0 / (std::pow(-y, g) + 2.0);
        if (y > knee) {
          const double t = std::pow(y, g);
          return (t + 1.0) / (t + 2.0);
        }
        return std::pow(2.0, -1.0 / g - 2.0) * y + 0.5;
      }
      case activation_kind::gompertz:
        return std::exp(-p1_ * std::exp(-p2_ * y));
    }
    return 0.0;  // unreachable
  }

  activation_kind kind() const { return kind_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }

  bool satisfies_a() const { return a_; }
  bool satisfies_b() const { return b_; }
  bool satisfies_c() const { return c_; }
  bool twice_differentiable() const { return c2_; }

  // Largest alpha admissible in condition (c); nullopt means every alpha > 0
  // works (exponential or compactly supported left tail).
  std::optional<double> decay_exponent() const { return decay_; }

  // |y| beyond which phi(y) and phi(-y) decay monotonically. Anchors the
  // truncation scans; for Gompertz it sits past the density bump.
  double tail_monotone_from() const { return tail_from_; }

  std::string name() const {
    switch (kind_) {
      case activation_kind::logistic: return "logistic";
      case activation_kind::tanh_sigmoid: return "tanh";
      case activation_kind::ramp: return "ramp";
      case activation_kind::three_step: return "three_step";
      case activation_kind::power_tail: return "power_tail:gamma=" + format_double_short(p1_);
      case activation_kind::gompertz:
        return "gompertz:alpha=" + format_double_short(p1_) + ",beta=" + format_double_short(p2_);
    }
    return {};
  }

 private:
  sigmoidal_activation(activation_kind k, double p1, double p2, bool a, bool b, bool c,
                       std::optional<double> decay, bool c2, double tail_from)
      : kind_(k), p1_(p1), p2_(p2), a_(a), b_(b), c_(c), decay_(decay), c2_(c2),
        tail_from_(tail_from) {}

  activation_kind kind_;
  double p1_, p2_;
  bool a_, b_, c_;
  std::optional<double> decay_;
  bool c2_;
  double tail_from_;
};

namespace detail {

inline double parse_param(std::string_view text, std::string_view what) {
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw argument_error("cannot parse activation parameter '" + std::string(what) + "'");
  return v;
}

// key=value[,key=value...]; accepts both ASCII names and the Greek spellings.
inline std::vector<std::pair<std::string, double>> parse_params(std::string_view text) {
  std::vector<std::pair<std::string, double>> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw argument_error("activation parameters must look like key=value");
    std::string key(item.substr(0, eq));
    if (key == "γ") key = "gamma";
    if (key == "α") key = "alpha";
    if (key == "β") key = "beta";
    out.emplace_back(key, parse_param(item.substr(eq + 1), key));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
  }
  return out;
}

}  // namespace detail

inline sigmoidal_activation sigmoidal_activation::parse(std::string_view name) {
  const auto colon = name.find(':');
  const auto head = name.substr(0, colon);
  const auto params = colon == std::string_view::npos
                          ? std::vector<std::pair<std::string, double>>{}
                          : detail::parse_params(name.substr(colon + 1));
  auto want = [&](std::initializer_list<std::string_view> keys) {
    if (params.size() != keys.size())
      throw argument_error("activation '" + std::string(head) + "' takes " +
                           std::to_string(keys.size()) + " parameter(s)");
    std::vector<double> vals;
    for (auto k : keys) {
      bool found = false;
      for (const auto& [pk, pv] : params)
        if (pk == k) {
          vals.push_back(pv);
          found = true;
        }
      if (!found) throw argument_error("missing activation parameter '" + std::string(k) + "'");
    }
    return vals;
  };
  if (head == "logistic") { want({}); return logistic(); }
  if (head == "tanh") { want({}); return tanh(); }
  if (head == "ramp") { want({}); return ramp(); }
  if (head == "three_step") { want({}); return three_step(); }
  if (head == "power_tail") { auto v = want({"gamma"}); return power_tail(v[0]); }
  if (head == "gompertz") { auto v = want({"alpha", "beta"}); return gompertz(v[0], v[1]); }
  throw argument_error("unknown activation '" + std::string(name) + "'");
}

// Sampling grid for the numeric condition checks: symmetric range [-Y, Y].
struct condition_grid {
  double half_range = 20.0;
  int points = 4001;
};

struct condition_report {
  double symmetry_defect = 0.0;            // max |mu(y) + mu(-y) - 1|
  bool monotonicity_ok = true;
  std::optional<double> concavity_defect;  // nullopt: activation is not C^2
  std::optional<double> decay_fit;         // nullopt: decays faster than any power
};

// Numeric verification of conditions (a)-(c) by sampling. The report is
// descriptive; tolerances are applied by callers. Concavity uses second
// differences with step 1e-3 (condition (b) is never checked symbolically).
inline condition_report check_conditions(const sigmoidal_activation& act,
                                         condition_grid grid = {}) {
  if (grid.half_range < 10.0) throw argument_error("condition grid must cover [-Y, Y] with Y >= 10");
  if (grid.points < 1000) throw argument_error("condition grid needs at least 1000 points");

  condition_report rep;
  const double Y = grid.half_range;
  const int n = grid.points;
  double prev = act(-Y);
  for (int i = 0; i < n; ++i) {
    const double y = -Y + 2.0 * Y * i / (n - 1);
    const double v = act(y);
    if (v < prev - 1e-15) rep.monotonicity_ok = false;
    prev = v;
    if (y >= 0.0) {
      const double defect = std::abs(v + act(-y) - 1.0);
      rep.symmetry_defect = std::max(rep.symmetry_defect, defect);
    }
  }

  if (act.twice_differentiable()) {
    const double step = 1e-3;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double y = Y * i / (n - 1);
      const double d2 = act(y + step) - 2.0 * act(y) + act(y - step);
      worst = std::max(worst, d2);
    }
    rep.concavity_defect = worst;
  }

  // Log-log regression of the left tail over y in [1e3, 1e6]. Values at or
  // below the subnormal floor mean super-polynomial decay.
  constexpr int samples = 64;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  bool regressable = true;
  for (int i = 0; i < samples; ++i) {
    const double ly = std::log(1e3) + (std::log(1e6) - std::log(1e3)) * i / (samples - 1);
    const double v = act(-std::exp(ly));
    if (!(v > 1e-300)) {
      regressable = false;
      break;
    }
    const double t = -std::log(v);
    sx += ly; sy += t; sxx += ly * ly; sxy += ly * t;
  }
  if (regressable) {
    const double slope = (samples * sxy - sx * sy) / (samples * sxx - sx * sx);
    rep.decay_fit = slope;
  }
  return rep;
}

}  // namespace nnops
