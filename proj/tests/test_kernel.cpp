#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nnops/kernel.hpp"

using namespace nnops;
using Catch::Approx;

TEST_CASE("phi closed-form values") {
  const auto logistic = sigmoidal_activation::logistic();
  CHECK(phi(sigmoidal_activation::ramp(), 0.0) == 0.5);
  CHECK(phi(sigmoidal_activation::ramp(), 1.0) == 0.25);
  CHECK(phi(sigmoidal_activation::ramp(), 1.25) == 0.125);
  CHECK(phi(logistic, 0.0) == Approx(0.23105857863000488).margin(1e-15));
  CHECK(phi(logistic, 1.0) == Approx(0.19039853898894122).margin(1e-15));
  CHECK(phi(sigmoidal_activation::tanh(), 0.0) == Approx(0.38079707797788244).margin(1e-15));
  CHECK(phi(sigmoidal_activation::tanh(), 1.0) == Approx(0.24100689501895422).margin(1e-15));
  CHECK(phi(sigmoidal_activation::power_tail(0.4), 0.0) ==
        Approx(0.04419417382415922).margin(1e-15));
  CHECK(phi(sigmoidal_activation::three_step(), 0.0) == 0.5);
}

TEST_CASE("phi is a density factor: bounded and symmetric under (a)") {
  for (const auto& act : {sigmoidal_activation::logistic(), sigmoidal_activation::tanh(),
                          sigmoidal_activation::ramp(), sigmoidal_activation::three_step(),
                          sigmoidal_activation::power_tail(0.4)}) {
    INFO(act.name());
    for (double y : {0.0, 0.3, 1.7, 4.2, -2.6, 9.0}) {
      const double v = phi(act, y);
      CHECK(v >= 0.0);
      CHECK(v <= 0.5);
      CHECK(std::abs(v - phi(act, -y)) <= 1e-12);
    }
  }
}

TEST_CASE("rho is the coordinate product") {
  const kernel_profile p2(sigmoidal_activation::logistic(), 2);
  const double origin[2] = {0.0, 0.0};
  CHECK(rho(p2, origin) == Approx(0.053388066758518147).margin(1e-15));
  const double side[2] = {1.0, 0.0};
  CHECK(rho(p2, side) == Approx(0.043993215792014325).margin(1e-15));

  const kernel_profile ramp2(sigmoidal_activation::ramp(), 2);
  const double out[2] = {2.0, 0.0};
  CHECK(rho(ramp2, out) == 0.0);

  const double wrong[3] = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(rho(p2, wrong), argument_error);
}

TEST_CASE("truncation radius: compact supports end at 1.5") {
  for (double eps : {1e-3, 1e-9, 1e-15}) {
    CHECK(truncation_radius(sigmoidal_activation::ramp(), 1, eps) == Approx(1.5).margin(1e-9));
    CHECK(truncation_radius(sigmoidal_activation::three_step(), 1, eps) ==
          Approx(1.5).margin(1e-9));
  }
}

TEST_CASE("truncation radius: logistic and error paths") {
  const double w = truncation_radius(sigmoidal_activation::logistic(), 1, 1e-15);
  CHECK(w > 30.0);
  CHECK(w <= 40.0);
  CHECK_THROWS_AS(truncation_radius(sigmoidal_activation::logistic(), 1, 0.0), argument_error);
  CHECK_THROWS_AS(truncation_radius(sigmoidal_activation::logistic(), 0, 1e-6), argument_error);
  // polynomial tail with small gamma cannot reach 1e-15 within the scan cap
  CHECK_THROWS_AS(truncation_radius(sigmoidal_activation::power_tail(0.1), 1, 1e-15),
                  computation_error);
}

TEST_CASE("profile tail envelope holds at the certified radius") {
  for (const auto& act : {sigmoidal_activation::logistic(), sigmoidal_activation::tanh(),
                          sigmoidal_activation::gompertz(1.0, 1.0)}) {
    const kernel_profile p(act, 2);
    const double W = p.truncation_radius();
    double worst = 0.0;
    for (int k = 0; k < 512; ++k) {
      const double a = 6.283185307179586 * k / 512.0;
      for (double scale : {1.0, 1.3, 2.0}) {
        const double z[2] = {scale * W * std::cos(a), scale * W * std::sin(a)};
        worst = std::max(worst, rho(p, z));
      }
    }
    INFO(act.name());
    CHECK(worst <= p.tail_epsilon());
  }
}

TEST_CASE("shell maxima decay (logistic, r=2)") {
  const kernel_profile p(sigmoidal_activation::logistic(), 2);
  double prev = 1.0;
  double last = 0.0;
  for (double R : {5.0, 10.0, 20.0, 40.0}) {
    double shell = 0.0;
    for (int k = 0; k < 512; ++k) {
      const double a = 6.283185307179586 * k / 512.0;
      const double z[2] = {R * std::cos(a), R * std::sin(a)};
      shell = std::max(shell, rho(p, z));
    }
    CHECK(shell < prev);
    prev = shell;
    last = shell;
  }
  CHECK(last < 1e-12);
}

TEST_CASE("absolute moment: beta = 0 equals the density peak") {
  const kernel_profile p1(sigmoidal_activation::logistic(), 1);
  const auto m0 = absolute_moment(p1, 0.0);
  CHECK(m0.value == Approx(0.23105857863000488).margin(1e-12));
  CHECK(m0.value >= std::pow(phi(p1.activation(), 0.0), 1));
  CHECK(m0.resolution == 200);
  CHECK(m0.lattice_window >= 4);
}

TEST_CASE("absolute moment: m0 <= 2^-r across the catalog") {
  for (const auto& act : {sigmoidal_activation::logistic(), sigmoidal_activation::tanh(),
                          sigmoidal_activation::ramp(), sigmoidal_activation::three_step(),
                          sigmoidal_activation::gompertz(1.0, 1.0)}) {
    for (int r = 1; r <= 3; ++r) {
      const kernel_profile p(act, r);
      const auto m0 = absolute_moment(p, 0.0, r == 3 ? 50 : 200);
      INFO(act.name() << " r=" << r);
      CHECK(m0.value <= std::pow(2.0, -r));
    }
  }
  // power_tail needs a coarser certified window
  for (int r = 1; r <= 3; ++r) {
    const kernel_profile p(sigmoidal_activation::power_tail(0.4), r, 1e-2);
    const auto m0 = absolute_moment(p, 0.0, r == 3 ? 50 : 200);
    CHECK(m0.value <= std::pow(2.0, -r));
  }
}

TEST_CASE("absolute moment: order-2 logistic value and error paths") {
  const kernel_profile p2(sigmoidal_activation::logistic(), 2);
  const auto m2 = absolute_moment(p2, 2.0);
  CHECK(m2.value == Approx(0.1105720473889632).margin(1e-12));
  CHECK(m2.lattice_window == 8);

  const kernel_profile pt(sigmoidal_activation::power_tail(0.4), 1, 1e-2);
  CHECK_THROWS_AS(absolute_moment(pt, 2.0), argument_error);  // beta > gamma
  CHECK_THROWS_AS(absolute_moment(p2, 2.0, 10), argument_error);
  CHECK_THROWS_AS(absolute_moment(p2, -1.0), argument_error);
}

TEST_CASE("power-tail density peaks at the origin with value 2^-9") {
  const kernel_profile p(sigmoidal_activation::power_tail(0.4), 2, 1e-2);
  const double origin[2] = {0.0, 0.0};
  CHECK(rho(p, origin) == Approx(0.001953125).margin(1e-18));
  // the linear piece makes phi constant near 0, so the peak is a plateau
  for (double y1 = -4.0; y1 <= 4.0; y1 += 0.37) {
    for (double y2 = -4.0; y2 <= 4.0; y2 += 0.41) {
      const double z[2] = {y1, y2};
      CHECK(rho(p, z) <= 0.001953125 * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("lattice max: worked values") {
  const kernel_profile p1(sigmoidal_activation::logistic(), 1);
  const auto domain = box_domain::unit_cube(1);
  const double y = 0.5;
  CHECK(lattice_max_rho(p1, 2, domain, std::span(&y, 1)) ==
        Approx(0.23105857863000488).margin(1e-15));
  // at a lattice point the peak value phi(0)^r is attained
  const double yk = 0.5;  // 1/2 = k/n for n = 2, k = 1
  CHECK(lattice_max_rho(p1, 2, domain, std::span(&yk, 1)) ==
        Approx(phi(p1.activation(), 0.0)).margin(1e-15));
  CHECK_THROWS_AS(lattice_max_rho(p1, 1, box_domain::cube(1, 0.4, 0.6), std::span(&y, 1)),
                  argument_error);
}

TEST_CASE("lattice max is bounded below by phi(1)^r") {
  const auto act = sigmoidal_activation::logistic();
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int r = 1; r <= 2; ++r) {
    const kernel_profile p(act, r);
    const double floor_v = std::pow(phi(act, 1.0), r) * (1.0 - 1e-12);
    for (int t = 0; t < 200; ++t) {
      const double a = -2.0 + 2.0 * unit(rng);
      const double len = 1.0 + unit(rng);
      const auto domain = box_domain::cube(r, a, a + len);
      const int n = 2 + static_cast<int>(rng() % 30);
      std::vector<double> y(static_cast<std::size_t>(r));
      for (auto& c : y) c = a + len * unit(rng);
      CHECK(lattice_max_rho(p, n, domain, y) >= floor_v);
      std::vector<double> anywhere(static_cast<std::size_t>(r));
      for (auto& c : anywhere) c = -7.0 + 14.0 * unit(rng);
      CHECK(lattice_max_rho_integers(p, n, anywhere) >= floor_v);
    }
  }
}

TEST_CASE("windowed lattice max equals the full scan") {
  const auto act = sigmoidal_activation::logistic();
  const kernel_profile p(act, 2);
  const auto domain = box_domain::unit_cube(2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const int n = 50 + static_cast<int>(rng() % 200);
    const double y[2] = {unit(rng), unit(rng)};
    CHECK(lattice_max_rho(p, n, domain, y) ==
          lattice_max_rho(p, n, domain, y, /*full_lattice=*/true));
  }
}
