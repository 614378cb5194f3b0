#include "bautin/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bautin/error.hpp"

namespace bautin {

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& msg) {
  throw Error(ErrorKind::Config, "cli-io", where, msg);
}

json complex_pair(cplx c) { return json::array({c.real(), c.imag()}); }

cplx complex_from(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    config_error(where, "complex values are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

template <class T>
T number(const json& j, const char* key, const char* where) {
  const auto it = j.find(key);
  if (it == j.end()) config_error(where, std::string("missing key '") + key + "'");
  if constexpr (std::is_same_v<T, bool>) {
    if (!it->is_boolean()) config_error(where, std::string("'") + key + "' must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) config_error(where, std::string("'") + key + "' must be an integer");
  } else {
    if (!it->is_number()) config_error(where, std::string("'") + key + "' must be a number");
  }
  return it->get<T>();
}

template <class T>
void optional_number(const json& j, const char* key, const char* where, T& target) {
  if (j.contains(key)) target = number<T>(j, key, where);
}

std::string text(const json& j, const char* key, const char* where) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) config_error(where, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> required, const char* where) {
  if (!j.is_object()) config_error(where, "expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) config_error(where, "unknown key '" + key + "'");
  }
  for (const char* r : required) {
    if (!j.contains(r)) config_error(where, std::string("missing key '") + r + "'");
  }
}

// ---- model types ----

void to_json(json& j, const ModelParams& p) {
  j = json{{"a", p.a}, {"d", p.d}, {"k", p.k}, {"l", p.l}};
}

void from_json(const json& j, ModelParams& p) {
  require_keys(j, {"a", "d", "k", "l"}, {}, "model");
  p = ModelParams{};
  optional_number(j, "a", "model", p.a);
  optional_number(j, "d", "model", p.d);
  optional_number(j, "k", "model", p.k);
  optional_number(j, "l", "model", p.l);
}

void to_json(json& j, const HopfPoint& hp) {
  j = json{{"n", hp.n}, {"omega", hp.omega}, {"tau", hp.tau},
           {"branch", std::string(to_string(hp.branch))}, {"j", hp.j}};
}

void from_json(const json& j, HopfPoint& hp) {
  require_keys(j, {"n", "omega", "tau", "branch", "j"}, {"n", "omega", "tau", "branch", "j"}, "hopf_point");
  hp.n = number<int>(j, "n", "hopf_point");
  hp.omega = number<double>(j, "omega", "hopf_point");
  hp.tau = number<double>(j, "tau", "hopf_point");
  hp.branch = branch_from_string(text(j, "branch", "hopf_point"));
  hp.j = number<int>(j, "j", "hopf_point");
}

namespace {
std::string g_name(int i, int k) { return "g" + std::to_string(i) + std::to_string(k); }
}  // namespace

void to_json(json& j, const GTable& g) {
  j = json::object();
  for (const auto& [a, b] : GTable::labels()) j[g_name(a, b)] = complex_pair(g.at(a, b));
}

void from_json(const json& j, GTable& g) {
  if (!j.is_object() || j.size() != GTable::labels().size()) config_error("gtable", "expected 13 entries");
  for (const auto& [a, b] : GTable::labels()) {
    const std::string name = g_name(a, b);
    if (!j.contains(name)) config_error("gtable", "missing " + name);
    g.at(a, b) = complex_from(j.at(name), "gtable");
  }
}

void to_json(json& j, const LyapunovPair& lp) {
  j = json{{"k", lp.k}, {"tau", lp.tau}, {"omega", lp.omega},
           {"nu", lp.nu}, {"l1", lp.l1}, {"l2", lp.l2}};
}

void from_json(const json& j, LyapunovPair& lp) {
  const char* w = "lyapunov_pair";
  require_keys(j, {"k", "tau", "omega", "nu", "l1", "l2"}, {"k", "tau", "omega", "nu", "l1", "l2"}, w);
  lp.k = number<double>(j, "k", w);
  lp.tau = number<double>(j, "tau", w);
  lp.omega = number<double>(j, "omega", w);
  lp.nu = number<double>(j, "nu", w);
  lp.l1 = number<double>(j, "l1", w);
  lp.l2 = number<double>(j, "l2", w);
}

void to_json(json& j, const BautinResult& r) {
  j = json{{"params", r.params},
           {"hopf", r.hopf},
           {"k_star", r.k_star},
           {"tau_star", r.tau_star},
           {"omega_star", r.omega_star},
           {"l1_at", r.l1_at},
           {"l2_at", r.l2_at},
           {"jacobian", json::array({json::array({r.nu_k, r.nu_tau}), json::array({r.l1_k, r.l1_tau})})},
           {"transversality_det", r.transversality_det},
           {"transversality_det_half_step", r.transversality_det_half_step},
           {"diagram_case", to_string(r.diagram_case)},
           {"l1_lo", r.l1_lo},
           {"l1_hi", r.l1_hi},
           {"iterations", r.iterations}};
}

void from_json(const json& j, BautinResult& r) {
  const char* w = "bautin_result";
  require_keys(j,
               {"params", "hopf", "k_star", "tau_star", "omega_star", "l1_at", "l2_at", "jacobian",
                "transversality_det", "transversality_det_half_step", "diagram_case", "l1_lo",
                "l1_hi", "iterations"},
               {"params", "hopf", "k_star", "tau_star", "omega_star", "l1_at", "l2_at", "jacobian",
                "transversality_det", "transversality_det_half_step", "diagram_case", "l1_lo",
                "l1_hi", "iterations"},
               w);
  r.params = j.at("params").get<ModelParams>();
  r.hopf = j.at("hopf").get<HopfPoint>();
  r.k_star = number<double>(j, "k_star", w);
  r.tau_star = number<double>(j, "tau_star", w);
  r.omega_star = number<double>(j, "omega_star", w);
  r.l1_at = number<double>(j, "l1_at", w);
  r.l2_at = number<double>(j, "l2_at", w);
  const json& jac = j.at("jacobian");
  if (!jac.is_array() || jac.size() != 2 || jac[0].size() != 2 || jac[1].size() != 2) {
    config_error(w, "jacobian must be 2x2");
  }
  r.nu_k = jac[0][0].get<double>();
  r.nu_tau = jac[0][1].get<double>();
  r.l1_k = jac[1][0].get<double>();
  r.l1_tau = jac[1][1].get<double>();
  r.transversality_det = number<double>(j, "transversality_det", w);
  r.transversality_det_half_step = number<double>(j, "transversality_det_half_step", w);
  r.diagram_case = diagram_case_from_string(text(j, "diagram_case", w));
  r.l1_lo = number<double>(j, "l1_lo", w);
  r.l1_hi = number<double>(j, "l1_hi", w);
  r.iterations = number<int>(j, "iterations", w);
}

void to_json(json& j, const InitialProfile& ic) {
  j = json{{"u_base", ic.u_base}, {"u_amp", ic.u_amp}, {"v_base", ic.v_base},
           {"v_amp", ic.v_amp}, {"mode", ic.mode}};
}

void from_json(const json& j, InitialProfile& ic) {
  const char* w = "ic";
  require_keys(j, {"u_base", "u_amp", "v_base", "v_amp", "mode"}, {"u_base", "v_base"}, w);
  ic = InitialProfile{};
  ic.u_base = number<double>(j, "u_base", w);
  ic.v_base = number<double>(j, "v_base", w);
  optional_number(j, "u_amp", w, ic.u_amp);
  optional_number(j, "v_amp", w, ic.v_amp);
  optional_number(j, "mode", w, ic.mode);
}

void to_json(json& j, const SimConfig& c) {
  j = json{{"params", c.params}, {"tau", c.tau}, {"nx", c.nx}, {"m", c.m},
           {"t_end", c.t_end}, {"ic", c.ic}, {"eq_tol", c.eq_tol},
           {"max_trajectory_rows", c.max_trajectory_rows}};
}

void from_json(const json& j, SimConfig& c) {
  const char* w = "sim_config";
  require_keys(j, {"params", "tau", "nx", "m", "t_end", "ic", "eq_tol", "max_trajectory_rows"},
               {"params", "tau", "ic"}, w);
  c = SimConfig{};
  c.params = j.at("params").get<ModelParams>();
  c.tau = number<double>(j, "tau", w);
  optional_number(j, "nx", w, c.nx);
  optional_number(j, "m", w, c.m);
  optional_number(j, "t_end", w, c.t_end);
  c.ic = j.at("ic").get<InitialProfile>();
  optional_number(j, "eq_tol", w, c.eq_tol);
  optional_number(j, "max_trajectory_rows", w, c.max_trajectory_rows);
}

void to_json(json& j, const Peak& p) {
  j = json{{"t", p.t}, {"value", p.value}, {"amplitude", p.amplitude}};
}

void from_json(const json& j, Peak& p) {
  require_keys(j, {"t", "value", "amplitude"}, {"t", "value", "amplitude"}, "peak");
  p.t = number<double>(j, "t", "peak");
  p.value = number<double>(j, "value", "peak");
  p.amplitude = number<double>(j, "amplitude", "peak");
}

void to_json(json& j, const SimOutcome& o) {
  j = json{{"kind", to_string(o.kind)},
           {"amplitude", o.amplitude},
           {"period", o.period},
           {"t_blowup", o.t_blowup},
           {"diagnostics",
            {{"final_distance", o.final_distance},
             {"spatial_variation", o.spatial_variation},
             {"boundary_jump", o.boundary_jump},
             {"substeps", o.substeps},
             {"kernels", o.kernels},
             {"peaks", o.peaks}}}};
}

void from_json(const json& j, SimOutcome& o) {
  const char* w = "sim_outcome";
  require_keys(j, {"kind", "amplitude", "period", "t_blowup", "diagnostics"},
               {"kind", "amplitude", "period", "t_blowup", "diagnostics"}, w);
  o = SimOutcome{};
  o.kind = sim_kind_from_string(text(j, "kind", w));
  o.amplitude = number<double>(j, "amplitude", w);
  o.period = number<double>(j, "period", w);
  o.t_blowup = number<double>(j, "t_blowup", w);
  const json& d = j.at("diagnostics");
  require_keys(d, {"final_distance", "spatial_variation", "boundary_jump", "substeps", "kernels", "peaks"},
               {"final_distance", "spatial_variation", "boundary_jump", "substeps", "kernels", "peaks"},
               "diagnostics");
  // a diverged run may carry an infinite distance, serialized as null
  o.final_distance = d.at("final_distance").is_null() ? std::numeric_limits<double>::infinity()
                                                      : number<double>(d, "final_distance", w);
  o.spatial_variation = number<double>(d, "spatial_variation", w);
  o.boundary_jump = number<double>(d, "boundary_jump", w);
  o.substeps = number<int>(d, "substeps", w);
  o.kernels = text(d, "kernels", w);
  o.peaks = d.at("peaks").get<std::vector<Peak>>();
}

void to_json(json& j, const Diagram& d) {
  json hopf = json::array(), fold = json::array(), pts = json::array();
  for (const auto& [k, t] : d.hopf_curve) hopf.push_back({k, t});
  for (const auto& [k, t] : d.fold_curve) fold.push_back({k, t});
  for (const auto& p : d.points) {
    pts.push_back({{"k", p.k}, {"tau", p.tau}, {"nu", p.nu}, {"l1", p.l1}, {"l2", p.l2},
                   {"region", p.region}});
  }
  j = json{{"hopf_curve", hopf},
           {"fold_curve", fold},
           {"regions",
            {{"grid", d.grid},
             {"window",
              {{"k_lo", d.window.k_lo}, {"k_hi", d.window.k_hi}, {"tau_lo", d.window.tau_lo},
               {"tau_hi", d.window.tau_hi}, {"trust", d.window.trust}}},
             {"points", pts}}}};
}

// ---- files and CSV ----

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorKind::Io, "cli-io", "write_atomic", "cannot create " + path.parent_path().string());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cli-io", "write_atomic", "cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "cli-io", "write_atomic", "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cli-io", "write_atomic", "cannot rename into " + path.string());
  }
}

std::string format_sig(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string hopf_curve_csv(const std::vector<CurveSample>& curve) {
  std::ostringstream os;
  os << "k,tau,omega,n,branch,j\n";
  for (const auto& s : curve) {
    if (!s.point) continue;
    const HopfPoint& p = *s.point;
    os << format_sig(s.k, 12) << ',' << format_sig(p.tau, 12) << ',' << format_sig(p.omega, 12)
       << ',' << p.n << ',' << to_string(p.branch) << ',' << p.j << '\n';
  }
  return os.str();
}

std::string hopf_gaps_csv(const std::vector<CurveSample>& curve) {
  std::ostringstream os;
  os << "k\n";
  for (const auto& s : curve) {
    if (!s.point) os << format_sig(s.k, 12) << '\n';
  }
  return os.str();
}

std::string diagram_csv(const Diagram& d) {
  std::ostringstream os;
  os << "k,tau,nu,l1,region\n";
  for (const auto& p : d.points) {
    os << format_sig(p.k, 17) << ',' << format_sig(p.tau, 17) << ',' << format_sig(p.nu, 17) << ','
       << format_sig(p.l1, 17) << ',' << p.region << '\n';
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << "t,x,u,v\n";
  for (std::size_t f = 0; f < tr.t.size(); ++f) {
    for (int i = 0; i < tr.nx; ++i) {
      const std::size_t idx = f * tr.nx + i;
      os << format_sig(tr.t[f], 12) << ',' << format_sig(i * tr.dx, 12) << ','
         << format_sig(tr.u[idx], 12) << ',' << format_sig(tr.v[idx], 12) << '\n';
    }
  }
  return os.str();
}

// ---- run configuration ----

RunConfig parse_run_config(const std::string& content) {
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    config_error("parse", e.what());
  }
  require_keys(root, {"model", "hopf", "lyapunov", "bautin", "diagram", "simulate", "output"},
               {"model"}, "config");
  RunConfig rc;
  try {
    rc.model = root.at("model").get<ModelParams>();
    rc.model.validate("config");
  } catch (const Error& e) {
    config_error("model", e.what());
  }

  if (root.contains("hopf")) {
    const json& h = root["hopf"];
    require_keys(h, {"k_lo", "k_hi", "k_steps"}, {"k_lo", "k_hi", "k_steps"}, "hopf");
    HopfBlock b{number<double>(h, "k_lo", "hopf"), number<double>(h, "k_hi", "hopf"),
                number<int>(h, "k_steps", "hopf")};
    if (!(b.k_lo < b.k_hi)) config_error("hopf", "empty k-range: k_lo must be below k_hi");
    if (!(b.k_hi < rc.model.a)) config_error("hopf", "k-range must lie below a");
    if (b.k_steps < 2) config_error("hopf", "k_steps must be at least 2");
    rc.hopf = b;
  }
  if (root.contains("lyapunov")) {
    const json& l = root["lyapunov"];
    require_keys(l, {"points"}, {"points"}, "lyapunov");
    if (!l["points"].is_array() || l["points"].empty()) config_error("lyapunov", "points must be a non-empty array");
    for (const json& p : l["points"]) {
      require_keys(p, {"k", "tau"}, {"k"}, "lyapunov.points");
      LyapunovPoint lp;
      lp.k = number<double>(p, "k", "lyapunov.points");
      if (!(lp.k < rc.model.a)) config_error("lyapunov.points", "k must lie below a");
      if (p.contains("tau")) {
        lp.tau = number<double>(p, "tau", "lyapunov.points");
        if (!(*lp.tau > 0.0)) config_error("lyapunov.points", "tau must be positive");
      }
      rc.lyapunov.push_back(lp);
    }
  }
  auto bracket = [&](const json& b, const char* where) {
    require_keys(b, {"k_lo", "k_hi"}, {"k_lo", "k_hi"}, where);
    BracketBlock br{number<double>(b, "k_lo", where), number<double>(b, "k_hi", where)};
    if (!(br.k_lo < br.k_hi)) config_error(where, "empty k-range: k_lo must be below k_hi");
    if (!(br.k_hi < rc.model.a)) config_error(where, "k-range must lie below a");
    return br;
  };
  if (root.contains("bautin")) rc.bautin = bracket(root["bautin"], "bautin");
  if (root.contains("diagram")) {
    const json& d = root["diagram"];
    const char* w = "diagram";
    require_keys(d, {"bracket", "k_lo", "k_hi", "tau_lo", "tau_hi", "grid", "trust"},
                 {"k_lo", "k_hi", "tau_lo", "tau_hi"}, w);
    DiagramBlock db;
    if (d.contains("bracket")) db.bracket = bracket(d["bracket"], "diagram.bracket");
    db.window.k_lo = number<double>(d, "k_lo", w);
    db.window.k_hi = number<double>(d, "k_hi", w);
    db.window.tau_lo = number<double>(d, "tau_lo", w);
    db.window.tau_hi = number<double>(d, "tau_hi", w);
    optional_number(d, "grid", w, db.grid);
    optional_number(d, "trust", w, db.window.trust);
    if (!(db.window.k_lo < db.window.k_hi)) config_error(w, "empty k-range: k_lo must be below k_hi");
    if (!(db.window.tau_lo < db.window.tau_hi) || !(db.window.tau_lo > 0.0)) {
      config_error(w, "tau window must be a positive, non-empty interval");
    }
    if (db.grid < 2) config_error(w, "grid must be at least 2");
    if (!(db.window.trust > 0.0)) config_error(w, "trust must be positive");
    rc.diagram = db;
  }
  if (root.contains("simulate")) {
    const json& s = root["simulate"];
    const char* w = "simulate";
    require_keys(s, {"tau", "nx", "m", "t_end", "ic", "eq_tol"}, {"tau", "ic"}, w);
    SimConfig sc;
    sc.params = rc.model;
    sc.tau = number<double>(s, "tau", w);
    optional_number(s, "nx", w, sc.nx);
    optional_number(s, "m", w, sc.m);
    optional_number(s, "t_end", w, sc.t_end);
    optional_number(s, "eq_tol", w, sc.eq_tol);
    sc.ic = s.at("ic").get<InitialProfile>();
    if (!(sc.tau > 0.0)) config_error(w, "tau must be positive");
    if (sc.nx < 64) config_error(w, "nx must be at least 64");
    if (sc.m < 200) config_error(w, "m must be at least 200");
    if (!(sc.t_end > 0.0)) config_error(w, "t_end must be positive");
    if (!(sc.eq_tol > 0.0)) config_error(w, "eq_tol must be positive");
    rc.simulate = sc;
  }
  if (root.contains("output")) {
    const json& o = root["output"];
    require_keys(o, {"dir", "trajectory"}, {}, "output");
    if (o.contains("dir")) rc.output.dir = text(o, "dir", "output");
    optional_number(o, "trajectory", "output", rc.output.trajectory);
  }
  if (rc.simulate && rc.output.trajectory) rc.simulate->max_trajectory_rows = 1000000;
  return rc;
}

}  // namespace bautin
