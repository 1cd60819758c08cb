// Command-line front end: error-table reproduction runs, operator surfaces,
// kernel exports, the numeric property suite, and Jackson-bound rate checks.
//
// Exit codes: 0 success, 1 property/bound failure, 2 configuration error,
// 3 computation error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nnops/nnops.hpp"

namespace {

using nlohmann::json;

struct run_config {
  std::string activation = "logistic";
  std::string target = "table1";
  std::vector<double> domain_spec;  // a1,b1[,a2,b2,...]
  std::vector<int> n_list;
  int grid = 0;  // 0: per-command default
  double alpha = 2.0;
  double beta = 1.0;
  double delta_exp = 0.0;  // 0: alpha/(alpha+beta)
  double tail_eps = 1e-15;
  std::string out;
  std::uint64_t seed = 42;
  int threads = 0;
  bool full_lattice = false;
  bool extended = false;
  std::string op = "max_min";
  int trials = 1000;
  double inject_error = 0.0;  // rates test mode: scales observed errors
};

const std::set<std::string> kConfigKeys = {
    "activation", "target", "domain", "n",          "grid",    "alpha",
    "beta",       "delta_exp", "tail_eps", "out",   "seed",    "threads",
    "full_lattice", "extended", "operator", "trials", "inject_error"};

void apply_config_file(const std::string& path, run_config& cfg, const CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw nnops::argument_error("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw nnops::argument_error("config file parse error: " + std::string(e.what()));
  }
  if (!j.is_object()) throw nnops::argument_error("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.count(key))
      throw nnops::argument_error("unknown config key '" + key + "'");
    auto flag_given = [&](const std::string& name) {
      const auto* opt = cmd.get_option_no_throw(name);
      return opt && opt->count() > 0;
    };
    try {
      if (key == "activation" && !flag_given("--activation")) cfg.activation = value.get<std::string>();
      else if (key == "target" && !flag_given("--target")) cfg.target = value.get<std::string>();
      else if (key == "domain" && !flag_given("--domain")) cfg.domain_spec = value.get<std::vector<double>>();
      else if (key == "n" && !flag_given("--n")) cfg.n_list = value.get<std::vector<int>>();
      else if (key == "grid" && !flag_given("--grid")) cfg.grid = value.get<int>();
      else if (key == "alpha" && !flag_given("--alpha")) cfg.alpha = value.get<double>();
      else if (key == "beta" && !flag_given("--beta")) cfg.beta = value.get<double>();
      else if (key == "delta_exp" && !flag_given("--delta-exp")) cfg.delta_exp = value.get<double>();
      else if (key == "tail_eps" && !flag_given("--tail-eps")) cfg.tail_eps = value.get<double>();
      else if (key == "out" && !flag_given("--out")) cfg.out = value.get<std::string>();
      else if (key == "seed" && !flag_given("--seed")) cfg.seed = value.get<std::uint64_t>();
      else if (key == "threads" && !flag_given("--threads")) cfg.threads = value.get<int>();
      else if (key == "full_lattice" && !flag_given("--full-lattice")) cfg.full_lattice = value.get<bool>();
      else if (key == "extended" && !flag_given("--extended")) cfg.extended = value.get<bool>();
      else if (key == "operator" && !flag_given("--operator")) cfg.op = value.get<std::string>();
      else if (key == "trials" && !flag_given("--trials")) cfg.trials = value.get<int>();
      else if (key == "inject_error" && !flag_given("--inject-error")) cfg.inject_error = value.get<double>();
    } catch (const json::exception& e) {
      throw nnops::argument_error("config key '" + key + "': " + std::string(e.what()));
    }
  }
}

nnops::box_domain domain_from_spec(const std::vector<double>& spec, int fallback_dim,
                                   double lo = 0.0, double hi = 1.0) {
  if (spec.empty()) return nnops::box_domain::cube(fallback_dim, lo, hi);
  if (spec.size() % 2 != 0)
    throw nnops::argument_error("--domain wants pairs a1,b1[,a2,b2,...]");
  std::vector<std::array<double, 2>> iv;
  for (std::size_t i = 0; i < spec.size(); i += 2) iv.push_back({spec[i], spec[i + 1]});
  return nnops::box_domain(iv);
}

struct resolved_target {
  nnops::target_function h;
  nnops::box_domain domain;
};

// Builtins carry their own natural domain; expressions take it from --domain.
resolved_target resolve_target(const run_config& cfg) {
  const std::string& t = cfg.target;
  if (t == "table1") {
    auto h = nnops::target_function::table1();
    return {h, domain_from_spec(cfg.domain_spec, 2)};
  }
  if (t == "identity") {
    auto h = nnops::target_function::identity();
    return {h, domain_from_spec(cfg.domain_spec, 1)};
  }
  if (t == "cosine_bump") {
    auto dom = domain_from_spec(cfg.domain_spec, 2, -2.0, 2.0);
    return {nnops::target_function::cosine_bump(dom.dimension()), dom};
  }
  if (t.rfind("const:", 0) == 0) {
    char* end = nullptr;
    const double c = std::strtod(t.c_str() + 6, &end);
    if (end != t.c_str() + t.size())
      throw nnops::argument_error("cannot parse constant target '" + t + "'");
    auto dom = domain_from_spec(cfg.domain_spec, 2);
    return {nnops::target_function::constant(dom.dimension(), c), dom};
  }
  auto dom = domain_from_spec(cfg.domain_spec, 2);
  auto h = nnops::make_expression_target(t, dom.dimension(), dom);
  return {h, dom};
}

// Expression (and constant) targets are validated by sampling before any
// operator run; out-of-[0,1] values are a configuration error unless
// --extended opts into the general-range pipeline, and mixed-regime ranges
// are rejected outright.
void validate_target_range(const run_config& cfg, resolved_target& rt) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int r = rt.domain.dimension();
  std::vector<double> pt(static_cast<std::size_t>(r));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  bool mixed = false;
  std::optional<nnops::range_regime> regime;
  for (int s = 0; s < 10000; ++s) {
    for (int i = 0; i < r; ++i) {
      const auto& iv = rt.domain.intervals()[static_cast<std::size_t>(i)];
      pt[static_cast<std::size_t>(i)] = iv[0] + (iv[1] - iv[0]) * unit(rng);
    }
    const double v = rt.h(pt);
    if (!std::isfinite(v))
      throw nnops::argument_error("target produced a non-finite value during validation");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    const auto rg = nnops::detail::classify_value(v);
    if (!regime) regime = rg;
    else if (*regime != rg) mixed = true;
  }
  if (lo >= 0.0 && hi <= 1.0) return;  // unit range, nothing to declare
  if (!cfg.extended)
    throw nnops::argument_error(
        "target values leave [0,1] (sampled range [" + nnops::format_double_short(lo) + ", " +
        nnops::format_double_short(hi) + "]); pass --extended to use the general-range operator");
  if (mixed)
    throw nnops::argument_error(
        "mixed range unsupported: target values span more than one of [0,1], (1,inf), "
        "[-1,0), (-inf,-1)");
  rt.h.rclass = nnops::range_class::bounded_general;
  rt.h.bound = std::max(std::abs(lo), std::abs(hi)) * 1.5 + 1.0;
}

void warn_if_outside_conditions(const nnops::sigmoidal_activation& act) {
  if (!act.satisfies_a())
    std::cerr << "warning: activation '" << act.name()
              << "' does not satisfy condition (a); convergence guarantees do not apply\n";
}

int cmd_compare(const run_config& cfg) {
  if (cfg.n_list.empty())
    throw nnops::argument_error("compare needs --n n1,n2,...");
  auto rt = resolve_target(cfg);
  validate_target_range(cfg, rt);
  const auto act = nnops::sigmoidal_activation::parse(cfg.activation);
  warn_if_outside_conditions(act);
  for (int n : cfg.n_list) nnops::build_lattice(n, rt.domain);  // config-time check
  const nnops::kernel_profile profile(act, rt.domain.dimension(), cfg.tail_eps);
  const int grid = cfg.grid > 0 ? cfg.grid : 151;
  const auto table = nnops::compare_operators(rt.h, cfg.n_list, rt.domain, profile, grid,
                                              {cfg.full_lattice}, cfg.threads, cfg.extended);
  const std::string path = cfg.out.empty() ? "error_table.csv" : cfg.out;
  nnops::write_text_file(path, nnops::error_table_csv(table));
  std::printf("%8s %14s %14s %14s\n", "n", "classical", "max_product", "max_min");
  for (const auto& row : table.rows)
    std::printf("%8d %14.8g %14.8g %14.8g\n", row.n, row.classical_error,
                row.max_product_error, row.max_min_error);
  std::printf("written: %s (grid %d per axis)\n", path.c_str(), grid);
  return 0;
}

int cmd_surface(const run_config& cfg) {
  if (cfg.n_list.size() != 1)
    throw nnops::argument_error("surface needs a single --n value");
  auto rt = resolve_target(cfg);
  validate_target_range(cfg, rt);
  const auto kind = nnops::parse_operator_kind(cfg.op);
  const auto act = nnops::sigmoidal_activation::parse(cfg.activation);
  warn_if_outside_conditions(act);
  const nnops::kernel_profile profile(act, rt.domain.dimension(), cfg.tail_eps);
  const int grid = cfg.grid > 0 ? cfg.grid : 101;
  nnops::target_function h = rt.h;
  if (kind == nnops::operator_kind::quasi_interpolation && h.domain)
    throw nnops::argument_error("quasi-interpolation surfaces need a target defined on R^r "
                                "(builtin: cosine_bump)");
  const auto field = nnops::evaluate_on_grid(kind, h, cfg.n_list[0], rt.domain, profile, grid,
                                             {cfg.full_lattice}, cfg.threads);
  const std::string path = cfg.out.empty() ? "surface.csv" : cfg.out;
  nnops::write_grid_field(field, path);
  std::printf("written: %s and %s.meta.json\n", path.c_str(), path.c_str());
  return 0;
}

int cmd_kernel(const run_config& cfg) {
  const auto act = nnops::sigmoidal_activation::parse(cfg.activation);
  double lo = -4.0, hi = 4.0;
  if (!cfg.domain_spec.empty()) {
    if (cfg.domain_spec.size() != 2)
      throw nnops::argument_error("kernel wants --domain a,b (one interval)");
    lo = cfg.domain_spec[0];
    hi = cfg.domain_spec[1];
    if (!(lo < hi)) throw nnops::argument_error("kernel interval needs a < b");
  }
  const int grid = cfg.grid > 0 ? cfg.grid : 101;
  const std::string base = cfg.out.empty() ? "kernel" : cfg.out;

  std::string phi_csv = "y,phi\n";
  for (int i = 0; i < grid; ++i) {
    const double y = lo + (hi - lo) * i / (grid - 1);
    phi_csv += nnops::format_double(y);
    phi_csv += ',';
    phi_csv += nnops::format_double(nnops::phi(act, y));
    phi_csv += '\n';
  }
  nnops::write_text_file(base + ".phi.csv", phi_csv);

  std::string rho_csv = "y1,y2,rho\n";
  for (int i = 0; i < grid; ++i) {
    const double y1 = lo + (hi - lo) * i / (grid - 1);
    const double p1 = nnops::phi(act, y1);
    for (int j = 0; j < grid; ++j) {
      const double y2 = lo + (hi - lo) * j / (grid - 1);
      rho_csv += nnops::format_double(y1);
      rho_csv += ',';
      rho_csv += nnops::format_double(y2);
      rho_csv += ',';
      rho_csv += nnops::format_double(p1 * nnops::phi(act, y2));
      rho_csv += '\n';
    }
  }
  nnops::write_text_file(base + ".rho.csv", rho_csv);
  std::printf("written: %s.phi.csv and %s.rho.csv\n", base.c_str(), base.c_str());
  return 0;
}

int cmd_verify(const run_config& cfg) {
  const auto act = nnops::sigmoidal_activation::parse(cfg.activation);
  nnops::verify_config vc;
  vc.seed = cfg.seed;
  vc.trials = cfg.trials;
  vc.tail_epsilon = cfg.tail_eps;
  const auto results = nnops::run_property_suite(act, vc);
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s %-28s (trials=%lld)%s%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.trials, r.detail.empty() ? "" : " ", r.detail.c_str());
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

int cmd_rates(const run_config& cfg) {
  if (cfg.n_list.size() < 3)
    throw nnops::argument_error("rates needs --n with at least 3 values");
  auto rt = resolve_target(cfg);
  validate_target_range(cfg, rt);
  const auto kind = nnops::parse_operator_kind(cfg.op);
  if (kind != nnops::operator_kind::max_min && kind != nnops::operator_kind::quasi_interpolation)
    throw nnops::argument_error("rates supports max_min and quasi_interpolation");
  const auto act = nnops::sigmoidal_activation::parse(cfg.activation);
  warn_if_outside_conditions(act);
  const nnops::kernel_profile profile(act, rt.domain.dimension(), cfg.tail_eps);
  const double dexp = cfg.delta_exp > 0 ? cfg.delta_exp
                                        : nnops::optimal_delta_exponent(cfg.alpha, cfg.beta);
  const int grid = cfg.grid > 0 ? cfg.grid : 151;

  const auto moment = nnops::absolute_moment(profile, cfg.alpha);
  // Quasi-interpolation targets live on R^r; the modulus is estimated on the
  // evaluation box inflated 2x about its center.
  nnops::box_domain omega_domain = rt.domain;
  if (kind == nnops::operator_kind::quasi_interpolation) {
    std::vector<std::array<double, 2>> iv;
    for (const auto& [a, b] : rt.domain.intervals()) {
      const double c = (a + b) / 2, half = (b - a);
      iv.push_back({c - half, c + half});
    }
    omega_domain = nnops::box_domain(iv);
  }

  std::vector<std::pair<double, double>> samples;
  bool violation = false;
  std::string out_lines;
  for (int n : cfg.n_list) {
    if (kind != nnops::operator_kind::quasi_interpolation) nnops::build_lattice(n, rt.domain);
    const auto field = nnops::evaluate_on_grid(kind, rt.h, n, rt.domain, profile, grid,
                                               {cfg.full_lattice}, cfg.threads);
    double observed = nnops::sup_norm_error(field, rt.h);
    if (cfg.inject_error > 0) observed *= cfg.inject_error;
    const double delta_n = std::pow(double(n), -dexp);
    const auto rep = nnops::jackson_bound(rt.h, omega_domain, n, delta_n, cfg.alpha, profile,
                                          moment, observed, cfg.beta);
    auto j = nnops::bound_report_json(rep);
    const bool violated = observed > rep.bound;
    j["violation"] = violated;
    violation = violation || violated;
    out_lines += j.dump();
    out_lines += '\n';
    samples.emplace_back(double(n), observed);
  }
  const double slope = nnops::empirical_order(samples);
  std::fputs(out_lines.c_str(), stdout);
  std::printf("empirical_order %.6g\n", slope);
  if (!cfg.out.empty()) nnops::write_text_file(cfg.out, out_lines);
  if (violation) {
    std::fprintf(stderr, "bound violation: observed error exceeded the Jackson bound\n");
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"max-min / max-product / classical neural network approximation operators"};
  app.require_subcommand(1);

  run_config cfg;
  std::string config_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file; flags override file values");
    cmd->add_option("--activation", cfg.activation,
                    "logistic | tanh | ramp | three_step | power_tail:gamma=<v> | "
                    "gompertz:alpha=<v>,beta=<v>");
    cmd->add_option("--target", cfg.target,
                    "table1 | identity | cosine_bump | const:<v> | expression over y1..yr");
    cmd->add_option("--domain", cfg.domain_spec, "box a1,b1[,a2,b2,...]")->delimiter(',');
    cmd->add_option("--n", cfg.n_list, "lattice scale(s)")->delimiter(',');
    cmd->add_option("--grid", cfg.grid, "evaluation grid points per axis");
    cmd->add_option("--alpha", cfg.alpha, "kernel decay order used in bounds (default 2)");
    cmd->add_option("--beta", cfg.beta, "Lipschitz order of the target (default 1)");
    cmd->add_option("--delta-exp", cfg.delta_exp,
                    "delta_n = n^-exp (default alpha/(alpha+beta))");
    cmd->add_option("--tail-eps", cfg.tail_eps, "kernel truncation epsilon (default 1e-15)");
    cmd->add_option("--out", cfg.out, "output path (or prefix for kernel)");
    cmd->add_option("--seed", cfg.seed, "RNG seed for sampling/property checks");
    cmd->add_option("--threads", cfg.threads, "worker threads; 0 = hardware, 1 = serial");
    cmd->add_flag("--full-lattice", cfg.full_lattice, "disable the truncation window");
    cmd->add_flag("--extended", cfg.extended, "allow general bounded targets (max-min only)");
    cmd->add_option("--operator", cfg.op,
                    "classical | max_product | max_min | quasi_interpolation");
    cmd->add_option("--trials", cfg.trials, "property-suite trials (verify)");
    cmd->add_option("--inject-error", cfg.inject_error,
                    "test mode: scale observed errors in rates");
    return cmd;
  };

  auto* compare = add_common(app.add_subcommand("compare", "error table across operators"));
  auto* surface = add_common(app.add_subcommand("surface", "dense operator evaluation CSV"));
  auto* kernel = add_common(app.add_subcommand("kernel", "phi / rho sample CSVs"));
  auto* verify = add_common(app.add_subcommand("verify", "numeric property suite"));
  auto* rates = add_common(app.add_subcommand("rates", "Jackson bounds vs observed errors"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    CLI::App* active = compare->parsed() ? compare
                       : surface->parsed() ? surface
                       : kernel->parsed() ? kernel
                       : verify->parsed() ? verify
                                          : rates;
    if (!config_path.empty()) apply_config_file(config_path, cfg, *active);
    if (compare->parsed()) return cmd_compare(cfg);
    if (surface->parsed()) return cmd_surface(cfg);
    if (kernel->parsed()) return cmd_kernel(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    return cmd_rates(cfg);
  } catch (const nnops::argument_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nnops::computation_error& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
