#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "bautin/error.hpp"
#include "bautin/io.hpp"

using namespace bautin;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("bautin_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
T round_trip(const T& x) {
  json j = x;
  return json::parse(j.dump()).get<T>();
}

ErrorKind config_kind(const std::string& text) {
  try {
    parse_run_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("model types round-trip exactly") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1, 1);
  ModelParams p{5.0 + U(rng), 1.0 / 3.0, U(rng), 2.0 / 7.0};
  CHECK(round_trip(p) == p);

  HopfPoint hp{2, 0.1 + std::abs(U(rng)), 0.6542141797, Branch::Minus, 3};
  CHECK(round_trip(hp) == hp);

  GTable g{};
  for (const auto& [i, k] : GTable::labels()) g.at(i, k) = cplx(U(rng), U(rng));
  GTable g2 = round_trip(g);
  for (const auto& [i, k] : GTable::labels()) CHECK(g2.at(i, k) == g.at(i, k));

  LyapunovPair lp{1e-17, -0.119, 0.46190000000000001, 0.1, 0.9566, 0.4};
  LyapunovPair lp2 = round_trip(lp);
  CHECK(lp2.nu == lp.nu);
  CHECK(lp2.l1 == lp.l1);
  CHECK(lp2.l2 == lp.l2);
  CHECK(lp2.k == lp.k);
  CHECK(lp2.tau == lp.tau);
  CHECK(lp2.omega == lp.omega);

  BautinResult br;
  br.params = p;
  br.hopf = hp;
  br.k_star = U(rng);
  br.tau_star = U(rng);
  br.omega_star = U(rng);
  br.l1_at = 1e-9 * U(rng);
  br.l2_at = U(rng);
  br.nu_k = U(rng);
  br.nu_tau = U(rng);
  br.l1_k = U(rng);
  br.l1_tau = U(rng);
  br.transversality_det = U(rng);
  br.transversality_det_half_step = U(rng);
  br.diagram_case = DiagramCase::L2Negative;
  br.l1_lo = U(rng);
  br.l1_hi = U(rng);
  br.iterations = 7;
  CHECK(round_trip(br) == br);

  SimConfig sc;
  sc.params = p;
  sc.tau = 1.05;
  sc.ic = {0.2, 0.01, 0.21, -0.003, 2};
  sc.max_trajectory_rows = 1234;
  CHECK(round_trip(sc) == sc);

  SimOutcome o;
  o.kind = SimKind::Periodic;
  o.amplitude = 0.587127;
  o.period = 19.026747;
  o.final_distance = 0.3;
  o.substeps = 22;
  o.kernels = "avx2";
  o.peaks = {{1.5, 0.7, 0.3}, {20.5, 0.71, 0.31}};
  CHECK(round_trip(o) == o);

  SimOutcome d;
  d.kind = SimKind::Diverged;
  d.t_blowup = 89.8;
  d.final_distance = std::numeric_limits<double>::infinity();
  CHECK(round_trip(d) == d);
}

TEST_CASE("strict keys") {
  json j = ModelParams{};
  j["extra"] = 1;
  CHECK_THROWS_AS(j.get<ModelParams>(), Error);
  json h = HopfPoint{0, 1.0, 1.0, Branch::Plus, 0};
  h.erase("j");
  CHECK_THROWS_AS(h.get<HopfPoint>(), Error);
  json g = GTable{};
  g.erase("g32");
  CHECK_THROWS_AS(g.get<GTable>(), Error);
}

TEST_CASE("atomic write replaces the file and leaves no temporary") {
  auto dir = scratch_dir("atomic");
  auto f = dir / "sub" / "x.json";
  write_atomic(f, "first");
  write_atomic(f, "second");
  CHECK(slurp(f) == "second");
  CHECK_FALSE(fs::exists(dir / "sub" / "x.json.tmp"));

  // a regular file where a directory is needed
  write_atomic(dir / "blocker", "x");
  try {
    write_atomic(dir / "blocker" / "y.json", "z");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}

TEST_CASE("curve CSV formats") {
  std::vector<CurveSample> curve{
      {0.1, HopfPoint{0, 0.42337838123, 0.6542141797123, Branch::Plus, 0}},
      {0.2, std::nullopt},
      {0.3, HopfPoint{1, 1.5, 2.0, Branch::Minus, 2}}};
  std::string csv = hopf_curve_csv(curve);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "k,tau,omega,n,branch,j");
  std::getline(is, line);
  CHECK(line == "0.1,0.654214179712,0.42337838123,0,+,0");
  std::getline(is, line);
  CHECK(line == "0.3,2,1.5,1,-,2");
  CHECK_FALSE(std::getline(is, line));
  CHECK(hopf_gaps_csv(curve) == "k\n0.2\n");
}

TEST_CASE("diagram CSV keeps full precision") {
  Diagram d;
  d.grid = 1;
  d.points.push_back({0.1 + 0.2, 0.6, 1.0 / 3.0, -2.0 / 7.0, 0.1, "II"});
  std::string csv = diagram_csv(d);
  std::istringstream is(csv);
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  CHECK(header == "k,tau,nu,l1,region");
  std::istringstream rs(row);
  std::string cell;
  std::getline(rs, cell, ',');
  CHECK(std::stod(cell) == 0.1 + 0.2);
  std::getline(rs, cell, ',');
  std::getline(rs, cell, ',');
  CHECK(std::stod(cell) == 1.0 / 3.0);
  std::getline(rs, cell, ',');
  CHECK(std::stod(cell) == -2.0 / 7.0);
  std::getline(rs, cell, ',');
  CHECK(cell == "II");
}

TEST_CASE("trajectory CSV") {
  Trajectory tr;
  tr.nx = 2;
  tr.dx = 0.5;
  tr.t = {0.0, 1.0};
  tr.u = {1, 2, 3, 4};
  tr.v = {5, 6, 7, 8};
  CHECK(trajectory_csv(tr) == "t,x,u,v\n0,0,1,5\n0,0.5,2,6\n1,0,3,7\n1,0.5,4,8\n");
}

TEST_CASE("run configuration parsing") {
  const std::string ok = R"({
    "model": {"a": 5, "d": 1, "k": 0.1, "l": 1},
    "hopf": {"k_lo": 0.1, "k_hi": 0.8, "k_steps": 8},
    "lyapunov": {"points": [{"k": 0.3}, {"k": 0.3, "tau": 0.7}]},
    "bautin": {"k_lo": 0.1, "k_hi": 0.8},
    "diagram": {"k_lo": 0.29, "k_hi": 0.32, "tau_lo": 0.64, "tau_hi": 0.67, "grid": 5},
    "simulate": {"tau": 1.05, "nx": 64, "m": 200, "t_end": 10,
                 "ic": {"u_base": 0.2, "v_base": 0.2, "u_amp": 0.01}},
    "output": {"dir": "here", "trajectory": false}
  })";
  RunConfig rc = parse_run_config(ok);
  CHECK(rc.model.k == 0.1);
  REQUIRE(rc.hopf);
  CHECK(rc.hopf->k_steps == 8);
  REQUIRE(rc.lyapunov.size() == 2);
  CHECK_FALSE(rc.lyapunov[0].tau);
  CHECK(*rc.lyapunov[1].tau == 0.7);
  REQUIRE(rc.diagram);
  CHECK(rc.diagram->grid == 5);
  CHECK(rc.diagram->bracket.k_lo == 0.1);
  REQUIRE(rc.simulate);
  CHECK(rc.simulate->params == rc.model);
  CHECK(rc.simulate->max_trajectory_rows == 0);
  CHECK(rc.output.dir == "here");

  CHECK(config_kind(R"({"model": {"a": 5}, "hopf": {"k_lo": 0.8, "k_hi": 0.1, "k_steps": 5}})") ==
        ErrorKind::Config);
  CHECK(config_kind(R"({"model": {"a": 5}, "bogus": 1})") == ErrorKind::Config);
  CHECK(config_kind(R"({"model": {"a": 5, "k": 6}})") == ErrorKind::Config);
  CHECK(config_kind(R"({"model": {"a": 5}, "simulate": {"tau": 1, "nx": 10,
        "ic": {"u_base": 0.2, "v_base": 0.2}}})") == ErrorKind::Config);
  CHECK(config_kind(R"({"model": )") == ErrorKind::Config);
  CHECK(config_kind(R"({"model": {"a": "five"}})") == ErrorKind::Config);
  CHECK(config_kind(R"({"hopf": {}})") == ErrorKind::Config);
}

TEST_CASE("significant-digit formatting") {
  CHECK(format_sig(0.123456789012345, 12) == "0.123456789012");
  CHECK(std::stod(format_sig(1.0 / 3.0, 17)) == 1.0 / 3.0);
}
