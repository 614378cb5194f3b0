#include "doctest.h"

#include <cmath>

#include "bautin/error.hpp"
#include "bautin/rdsim.hpp"
#include "bautin/spectral.hpp"

using namespace bautin;

namespace {

SimConfig small_config(double k, double tau) {
  SimConfig c;
  c.params.a = 5;
  c.params.d = 1;
  c.params.l = 1;
  c.params.k = k;
  c.tau = tau;
  c.nx = 64;
  c.m = 200;
  c.t_end = 200;
  const double e = c.params.equilibrium();
  c.ic = {e + 0.05, 0.0, e + 0.05, 0.0, 1};
  return c;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
  return x;
}

}  // namespace

TEST_CASE("substeps respect the explicit stability bound") {
  for (double d : {0.5, 1.0, 3.0}) {
    for (int nx : {64, 128, 256}) {
      auto c = small_config(0.1, 1.05);
      c.params.d = d;
      c.nx = nx;
      int s = substeps_for(c);
      double dx = kPi / (nx - 1);
      double bound = 0.2 * dx * dx / std::max(d, 1.0);
      double frame = c.tau / c.m;
      CHECK(frame / s <= bound * (1 + 1e-12));
      if (s > 1) CHECK(frame / (s - 1) > bound);
    }
  }
}

TEST_CASE("homogeneous data stays homogeneous") {
  auto c = small_config(0.1, 1.05);
  auto o = simulate(c);
  CHECK(o.spatial_variation == 0.0);
  CHECK(o.boundary_jump == 0.0);
}

TEST_CASE("runs are deterministic") {
  auto c = small_config(0.1, 1.05);
  c.ic.u_amp = 0.02;
  CHECK(simulate(c) == simulate(c));
}

TEST_CASE("small perturbations decay below the first Hopf delay") {
  auto c = small_config(0.1, 0.0);
  auto hp = first_hopf(c.params);
  REQUIRE(hp);
  c.tau = hp->tau - 0.2;
  c.ic.u_amp = 0.01;
  c.t_end = 800;
  auto o = simulate(c);
  CHECK(o.kind == SimKind::Equilibrium);
  CHECK(o.final_distance < c.eq_tol);
}

TEST_CASE("oscillation appears just past the first Hopf delay") {
  auto c = small_config(0.1, 0.0);
  auto hp = first_hopf(c.params);
  c.tau = hp->tau + 0.05;
  c.t_end = 1500;
  auto o = simulate(c);
  CHECK(o.kind == SimKind::Periodic);
  // period near 2 pi / omega at onset
  CHECK(o.period == doctest::Approx(2 * kPi / hp->omega).epsilon(0.1));
}

TEST_CASE("zero-flux boundary keeps the profile flat at the ends") {
  auto c = small_config(0.1, 0.8);
  c.ic.u_amp = 0.05;
  c.ic.v_amp = -0.03;
  c.t_end = 20;
  Trajectory tr;
  c.max_trajectory_rows = 100000;
  auto o = simulate(c, &tr);
  const double dx = kPi / (c.nx - 1);
  CHECK(o.boundary_jump < 0.1 * dx);
  // the cosine profile is the first Neumann mode: slope vanishes at x = 0
  REQUIRE(tr.t.size() > 2);
  const std::size_t last = tr.t.size() - 1;
  const double* u = &tr.u[last * c.nx];
  CHECK(std::abs(u[1] - u[0]) < 0.1 * std::abs(u[c.nx / 2 + 1] - u[c.nx / 2 - 1]) + 1e-12);
}

TEST_CASE("trajectory recording respects the row limit") {
  auto c = small_config(0.1, 0.8);
  c.t_end = 50;
  c.max_trajectory_rows = 64 * 30;
  Trajectory tr;
  simulate(c, &tr);
  CHECK(tr.nx == 64);
  CHECK(long(tr.t.size()) * 64 <= c.max_trajectory_rows);
  CHECK(tr.t.size() > 10);
  CHECK(tr.u.size() == tr.t.size() * 64);
  for (std::size_t i = 1; i < tr.t.size(); ++i) CHECK(tr.t[i] > tr.t[i - 1]);
}

TEST_CASE("large data blows up") {
  auto c = small_config(0.1, 1.05);
  c.ic = {10.3, 0.0, 10.3, 0.0, 0};
  auto o = simulate(c);
  CHECK(o.kind == SimKind::Diverged);
  CHECK(o.t_blowup > 0);
  CHECK(o.t_blowup < c.t_end);
}

TEST_CASE("classification of synthetic traces") {
  auto t = linspace(0, 100, 20001);
  std::vector<double> y(t.size());

  SUBCASE("steady oscillation") {
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = 0.3 + 0.2 * std::sin(2 * kPi * t[i] / 7.0);
    auto o = classify(t, y, 1e-6, 0.2);
    CHECK(o.kind == SimKind::Periodic);
    CHECK(o.amplitude == doctest::Approx(0.2).epsilon(1e-4));
    CHECK(o.period == doctest::Approx(7.0).epsilon(1e-4));
  }
  SUBCASE("decaying oscillation is not periodic") {
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = std::exp(-0.05 * t[i]) * std::sin(t[i]);
    CHECK(classify(t, y, 1e-6, 1e-3).kind == SimKind::Undetermined);
  }
  SUBCASE("growing oscillation is not periodic") {
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = std::exp(0.01 * t[i]) * std::sin(t[i]);
    CHECK(classify(t, y, 1e-6, 1.0).kind == SimKind::Undetermined);
  }
  SUBCASE("tiny oscillation is not periodic") {
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = 5e-6 * std::sin(t[i]);
    CHECK(classify(t, y, 1e-6, 5e-6).kind == SimKind::Undetermined);
  }
  SUBCASE("distance below tolerance is equilibrium") {
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = 0.2;
    CHECK(classify(t, y, 1e-6, 1e-8).kind == SimKind::Equilibrium);
  }
  SUBCASE("too few peaks") {
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = std::sin(2 * kPi * t[i] / 30.0);
    CHECK(classify(t, y, 1e-6, 1.0).kind == SimKind::Undetermined);
  }
}

TEST_CASE("amplitude scan is sorted and matches single runs") {
  auto c = small_config(0.1, 0.0);
  c.t_end = 60;
  auto scan = amplitude_scan(c, {1.0, 0.7, 0.85});
  REQUIRE(scan.size() == 3);
  CHECK(scan[0].first == 0.7);
  CHECK(scan[1].first == 0.85);
  CHECK(scan[2].first == 1.0);
  auto single = c;
  single.tau = 0.85;
  CHECK(scan[1].second == simulate(single));
}

TEST_CASE("configuration errors") {
  auto c = small_config(0.1, 1.0);
  c.nx = 32;
  CHECK_THROWS_AS(simulate(c), Error);
  c = small_config(0.1, 1.0);
  c.m = 100;
  CHECK_THROWS_AS(simulate(c), Error);
  c = small_config(0.1, 0.0);
  CHECK_THROWS_AS(simulate(c), Error);
  c = small_config(6.0, 1.0);
  CHECK_THROWS_AS(simulate(c), Error);
}

TEST_CASE("outcome kind names round-trip") {
  for (SimKind k : {SimKind::Equilibrium, SimKind::Periodic, SimKind::Diverged, SimKind::Undetermined}) {
    CHECK(sim_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(sim_kind_from_string("Chaotic"), Error);
}
