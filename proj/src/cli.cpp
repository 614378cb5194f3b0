#include "bautin/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "bautin/error.hpp"
#include "bautin/io.hpp"

namespace bautin::cli {

namespace fs = std::filesystem;

namespace {

void configure_logging() {
  static bool done = false;
  if (done) return;
  done = true;
  auto logger = spdlog::stderr_color_mt("bautin");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("BAUTIN_LOG");
  spdlog::set_level(env != nullptr ? spdlog::level::from_str(env) : spdlog::level::warn);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cli-io", "read_config", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <class T>
const T& need(const std::optional<T>& block, const char* name) {
  if (!block) throw Error(ErrorKind::Config, "cli-io", name, std::string("config has no '") + name + "' block");
  return *block;
}

json cmd_hopf(const RunConfig& rc, const fs::path& out) {
  const HopfBlock& b = need(rc.hopf, "hopf");
  const auto curve = hopf_curve(rc.model, b.k_lo, b.k_hi, b.k_steps);
  write_atomic(out / "hopf_curve.csv", hopf_curve_csv(curve));
  write_atomic(out / "hopf_gaps.csv", hopf_gaps_csv(curve));
  std::size_t found = 0;
  for (const auto& s : curve) found += s.point.has_value();
  return {{"samples", curve.size()}, {"with_crossing", found}};
}

json cmd_lyapunov(const RunConfig& rc, const fs::path& out) {
  if (rc.lyapunov.empty()) throw Error(ErrorKind::Config, "cli-io", "lyapunov", "config has no 'lyapunov' block");
  json points = json::array();
  for (const LyapunovPoint& lp : rc.lyapunov) {
    const ModelParams p = rc.model.with_k(lp.k);
    const auto hp = first_hopf(p);
    if (!hp) throw Error(ErrorKind::NoSignChange, "bautin", "lyapunov", "no Hopf delay at this k");
    HopfPoint at = *hp;
    double nu = 0.0;
    ReduceOptions opts;
    if (lp.tau) {
      const cplx lam = track_root(p, *hp, lp.k, *lp.tau);
      at.omega = lam.imag();
      at.tau = *lp.tau;
      nu = lam.real() / lam.imag();
      opts.require_critical = false;
    }
    const CenterData cd = reduce(p, at, opts);
    const LyapunovCoeffs lc = lyapunov_coeffs(cd.g, at.omega * at.tau);
    const LyapunovPair pair{nu, lc.l1, lc.l2, lp.k, at.tau, at.omega};
    points.push_back({{"params", p}, {"hopf", at}, {"gtable", cd.g}, {"lyapunov", pair},
                      {"on_curve", !lp.tau.has_value()}});
  }
  write_atomic(out / "lyapunov.json", dump({{"points", points}}));
  return {{"points", points.size()}};
}

json cmd_bautin(const RunConfig& rc, const fs::path& out) {
  const BracketBlock& b = need(rc.bautin, "bautin");
  const BautinResult r = find_bautin(rc.model, b.k_lo, b.k_hi);
  const json j = r;
  write_atomic(out / "bautin.json", dump(j));
  return {{"k_star", r.k_star}, {"tau_star", r.tau_star}, {"omega_star", r.omega_star},
          {"l2", r.l2_at}, {"transversality_det", r.transversality_det}};
}

json cmd_diagram(const RunConfig& rc, const fs::path& out) {
  const DiagramBlock& db = need(rc.diagram, "diagram");
  const BautinResult r = find_bautin(rc.model, db.bracket.k_lo, db.bracket.k_hi);
  const Diagram d = local_diagram(r, db.window, db.grid);
  json j = d;
  j["bautin"] = r;
  write_atomic(out / "diagram.json", dump(j));
  write_atomic(out / "diagram.csv", diagram_csv(d));
  return {{"points", d.points.size()}, {"fold_points", d.fold_curve.size()},
          {"diagram_case", to_string(r.diagram_case)}};
}

json cmd_simulate(const RunConfig& rc, const fs::path& out) {
  const SimConfig& sc = need(rc.simulate, "simulate");
  Trajectory tr;
  const SimOutcome o = simulate(sc, rc.output.trajectory ? &tr : nullptr);
  const json j = o;
  write_atomic(out / "outcome.json", dump(j));
  if (rc.output.trajectory) write_atomic(out / "trajectory.csv", trajectory_csv(tr));
  return {{"kind", to_string(o.kind)}, {"amplitude", o.amplitude}, {"period", o.period}};
}

int report(int code, const std::string& module, const std::string& op, const std::string& kind,
           const std::string& message) {
  const json err{{"error", {{"module", module}, {"operation", op}, {"kind", kind}, {"message", message}}}};
  std::cerr << err.dump() << std::endl;
  return code;
}

}  // namespace

int run(int argc, const char* const* argv) {
  configure_logging();
  CLI::App app{"Hopf and Bautin analysis of the delayed Segel-Jackson model"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  const char* names[] = {"hopf", "lyapunov", "bautin", "diagram", "simulate"};
  const char* help[] = {"first Hopf delay as a function of k", "g table and Lyapunov coefficients",
                        "locate and classify the Bautin point", "local bifurcation diagram",
                        "simulate the delayed PDE"};
  for (int i = 0; i < 5; ++i) {
    auto* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const RunConfig rc = parse_run_config(read_file(config_path));
    const fs::path out = out_dir.empty() ? fs::path(rc.output.dir) : fs::path(out_dir);
    json summary;
    if (command == "hopf") summary = cmd_hopf(rc, out);
    else if (command == "lyapunov") summary = cmd_lyapunov(rc, out);
    else if (command == "bautin") summary = cmd_bautin(rc, out);
    else if (command == "diagram") summary = cmd_diagram(rc, out);
    else summary = cmd_simulate(rc, out);
    write_atomic(out / "run_meta.json",
                 dump({{"command", command}, {"config", config_path}, {"timestamp", utc_timestamp()}}));
    std::cout << summary.dump() << std::endl;
    return kOk;
  } catch (const Error& e) {
    const int code = e.kind() == ErrorKind::Config ? kConfigError
                     : e.kind() == ErrorKind::Io   ? kIoError
                                                   : kComputeError;
    return report(code, e.module(), e.operation(), std::string(to_string(e.kind())), e.what());
  } catch (const json::exception& e) {
    return report(kConfigError, "cli-io", "parse_run_config", "Config", e.what());
  } catch (const fs::filesystem_error& e) {
    return report(kIoError, "cli-io", command, "Io", e.what());
  } catch (const std::exception& e) {
    return report(kComputeError, "cli-io", command, "Unknown", e.what());
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("bautin");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace bautin::cli
