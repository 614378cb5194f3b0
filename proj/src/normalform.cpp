#include "bautin/normalform.hpp"

#include <cmath>
#include <set>

#include "bautin/error.hpp"

namespace bautin {

namespace {

const cplx kI(0.0, 1.0);

[[noreturn]] void fail(ErrorKind kind, const char* op, const std::string& msg) {
  throw Error(kind, "normalform", op, msg);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

bool finite(const Vec2c& v) {
  return std::isfinite(v(0).real()) && std::isfinite(v(0).imag()) &&
         std::isfinite(v(1).real()) && std::isfinite(v(1).imag());
}

// Symmetric bilinear form of the quadratic kinetics acting on two history
// segments, evaluated from their values at theta = 0 and theta = -1.
Vec2c quadratic_form(double k, double a, const Vec2c& x0, const Vec2c& y0,
                     const Vec2c& x1, const Vec2c& y1) {
  const cplx f1 = k * x0(0) * y0(0) - 0.5 * a * (x0(0) * y0(1) + x0(1) * y0(0));
  const cplx f2 = -x0(1) * y0(1) + 0.5 * (x1(0) * y1(1) + x1(1) * y1(0));
  return Vec2c(f1, f2);
}

std::vector<int> mode_set(int n0, int order) {
  std::set<int> s{0, 2 * n0};
  if (order >= 3) {
    s.insert(n0);
    s.insert(3 * n0);
  }
  return {s.begin(), s.end()};
}

}  // namespace

// ---- Linearization ----

Mat2 Linearization::undelayed(int n) const {
  const double nn = static_cast<double>(n) * n / (params.l * params.l);
  return tau_star * (B1 - nn * D);
}

Mat2c Linearization::measure_action(int n, cplx lambda) const {
  return undelayed(n).cast<cplx>() + (tau_star * std::exp(-lambda)) * B2.cast<cplx>();
}

Mat2c Linearization::char_matrix(int n, cplx lambda) const {
  return lambda * Mat2c::Identity() - measure_action(n, lambda);
}

Vec2c Linearization::boundary_action(int n, const ExpPoly& phi) const {
  const double w0 = omega0();
  return undelayed(n).cast<cplx>() * phi.eval(0.0, w0) +
         tau_star * B2.cast<cplx>() * phi.eval(-1.0, w0);
}

Linearization build_linearization(const ModelParams& params, const HopfPoint& hp) {
  params.validate("build_linearization");
  if (!(hp.tau > 0.0) || !(hp.omega > 0.0) || hp.n < 0) {
    fail(ErrorKind::InvalidArgument, "build_linearization", "Hopf point needs tau, omega > 0");
  }
  Linearization lin;
  lin.params = params;
  lin.ustar = params.equilibrium();
  lin.vstar = params.equilibrium();
  const double a = params.a, k = params.k, u = lin.ustar, v = lin.vstar;
  lin.B1 << 1.0 + 2.0 * k * u - a * v, -a * u, 0.0, -2.0 * v;
  lin.B2 << 0.0, 0.0, v, u;
  lin.D << params.d, 0.0, 0.0, 1.0;
  lin.tau_star = hp.tau;
  lin.omega_star = hp.omega;
  lin.n0 = hp.n;
  return lin;
}

// ---- eigenvectors and pairing ----

ExpPoly EigenData::q_of_theta() const {
  ExpPoly q;
  q.add(1, 0, q0());
  return q;
}

EigenData eigen_data(const Linearization& lin) {
  const Mat2c delta = lin.char_matrix(lin.n0, cplx(0.0, lin.omega0()));
  EigenData e;
  e.q1 = -delta(0, 0) / delta(0, 1);
  const cplx y1 = -delta(1, 1) / delta(0, 1);
  e.q2 = std::conj(y1);
  const Vec2c q = e.q0();
  const Vec2c y(y1, 1.0);
  const Vec2c tq = q + (lin.tau_star * std::exp(cplx(0.0, -lin.omega0()))) *
                           (lin.B2.cast<cplx>() * q);
  const cplx denom = y.transpose() * tq;
  if (std::abs(denom) < 1e-10) {
    fail(ErrorKind::NonSemisimple, "eigen_data", "normalization denominator vanishes");
  }
  e.M = std::conj(1.0 / denom);
  return e;
}

EigenClosedForm eigen_closed_form(const Linearization& lin) {
  const double nn = static_cast<double>(lin.n0) * lin.n0 / (lin.params.l * lin.params.l);
  const double a = lin.params.a, k = lin.params.k, d = lin.params.d;
  const double u = lin.ustar, v = lin.vstar, w = lin.omega_star, tau = lin.tau_star;
  const double w0 = lin.omega0();
  EigenClosedForm f;
  f.q1 = (1.0 + 2.0 * k * u - a * v - d * nn - kI * w) / (a * u);
  f.q2 = (-2.0 * v - nn + std::exp(kI * w0) * u + kI * w) / (a * u);
  f.Mbar = 1.0 / ((std::conj(f.q2) + f.q1) + std::exp(-kI * w0) * tau * (v + f.q1 * u));
  return f;
}

cplx bilinear(const Linearization& lin, const Vec2c& psi_bar0, int psi_freq,
              const ExpPoly& phi) {
  const double w0 = lin.omega0();
  cplx value = psi_bar0.transpose() * phi.eval(0.0, w0);
  const Eigen::RowVector2cd row = psi_bar0.transpose() * lin.B2.cast<cplx>();
  const cplx shift = std::exp(cplx(0.0, psi_freq * w0));
  for (const auto& t : phi.terms()) {
    const cplx mu(0.0, (t.freq + psi_freq) * w0);
    value += lin.tau_star * shift * exp_moment(mu, t.power) * cplx(row * t.coeff);
  }
  return value;
}

cplx pair_qstar(const Linearization& lin, const EigenData& eig, const ExpPoly& phi) {
  return bilinear(lin, eig.qstar_bar0(), -1, phi);
}

cplx pair_qstar_conj(const Linearization& lin, const EigenData& eig, const ExpPoly& phi) {
  return bilinear(lin, eig.qstar_bar0().conjugate(), 1, phi);
}

QuadDerivs quad_derivs(const Linearization& lin, const EigenData& eig) {
  const double k = lin.params.k, a = lin.params.a, tau = lin.tau_star;
  const cplx q1 = eig.q1, q1b = std::conj(eig.q1);
  const cplx e2 = std::exp(cplx(0.0, -2.0 * lin.omega0()));
  QuadDerivs f;
  f.Fzz = tau * Vec2c(2.0 * k - 2.0 * a * q1, -2.0 * q1 * q1 + 2.0 * q1 * e2);
  f.Fzbzb = f.Fzz.conjugate();
  f.Fzzbar = tau * Vec2c(2.0 * k - a * (q1 + q1b), -2.0 * q1b * q1 + (q1 + q1b));
  return f;
}

Vec2c solve_T(const Linearization& lin, int m, const Vec2c& rhs, int n) {
  const Mat2c A = lin.char_matrix(n, cplx(0.0, m * lin.omega0()));
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if (std::abs(A.determinant()) < 1e-10 * scale * scale) {
    fail(ErrorKind::Resonance, "solve_T", "system matrix is singular at this frequency");
  }
  const Vec2c T = A.partialPivLu().solve(rhs);
  if (!finite(T)) fail(ErrorKind::NonFinite, "solve_T", "non-finite solution");
  return T;
}

// ---- GTable ----

const std::array<std::pair<int, int>, 13>& GTable::labels() {
  static const std::array<std::pair<int, int>, 13> kLabels = {{
      {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3},
      {4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}, {3, 2},
  }};
  return kLabels;
}

cplx& GTable::at(int i, int j) {
  cplx* slots[13] = {&g20, &g11, &g02, &g30, &g21, &g12, &g03,
                     &g40, &g31, &g22, &g13, &g04, &g32};
  const auto& ls = labels();
  for (std::size_t s = 0; s < ls.size(); ++s) {
    if (ls[s] == std::pair{i, j}) return *slots[s];
  }
  throw Error(ErrorKind::InvalidArgument, "normalform", "GTable::at", "no such coefficient");
}

cplx GTable::at(int i, int j) const { return const_cast<GTable*>(this)->at(i, j); }

bool GTable::all_finite() const {
  for (const auto& [i, j] : labels()) {
    const cplx v = at(i, j);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

Vec2c WFunction::eval(int n, double theta, double omega0) const {
  const auto it = modes.find(n);
  return it == modes.end() ? Vec2c::Zero() : it->second.eval(theta, omega0);
}

double triple_projection(int m, int p, int n, double l) {
  const double len = l * kPi;
  auto norm = [len](int r) { return r == 0 ? std::sqrt(1.0 / len) : std::sqrt(2.0 / len); };
  // cos(m)cos(p)cos(n) = 1/4 sum over sign choices of cos(m +- p +- n).
  int hits = 0;
  for (int sp : {1, -1}) {
    for (int sn : {1, -1}) {
      if (m + sp * p + sn * n == 0) ++hits;
    }
  }
  return hits * 0.25 * len * norm(m) * norm(p) * norm(n);
}

// ---- reduction ----

namespace {

using ModeMap = std::map<int, ExpPoly>;

struct Reducer {
  const Linearization& lin;
  const EigenData& eig;
  CenterData& out;
  std::map<Label, ModeMap> U;
  std::map<Label, cplx> g;

  Reducer(const Linearization& l, const EigenData& e, CenterData& o) : lin(l), eig(e), out(o) {
    U[{1, 0}][lin.n0] = eig.q_of_theta();
    U[{0, 1}][lin.n0] = eig.q_of_theta().conj();
  }

  std::map<int, Vec2c> nonlinear(int i, int j, const std::vector<int>& targets) const {
    const double w0 = lin.omega0();
    std::map<int, Vec2c> res;
    for (const auto& [A, UA] : U) {
      const Label C{i - A.first, j - A.second};
      const auto it = U.find(C);
      if (C.first < 0 || C.second < 0 || it == U.end()) continue;
      const double fac = factorial(i) * factorial(j) /
                         (factorial(A.first) * factorial(A.second) *
                          factorial(C.first) * factorial(C.second));
      for (const auto& [m, ea] : UA) {
        for (const auto& [p, ec] : it->second) {
          const Vec2c f = quadratic_form(lin.params.k, lin.params.a, ea.eval(0.0, w0),
                                         ec.eval(0.0, w0), ea.eval(-1.0, w0),
                                         ec.eval(-1.0, w0));
          for (int n : targets) {
            const double c = triple_projection(m, p, n, lin.params.l);
            if (std::abs(c) < 1e-14) continue;
            auto [slot, fresh] = res.try_emplace(n, Vec2c::Zero());
            slot->second += (lin.tau_star * fac * c) * f;
          }
        }
      }
    }
    return res;
  }

  // Coefficient of z^i zbar^j / (i! j!) in U_z g + U_zbar conj-g.
  ModeMap drift(int i, int j) const {
    ModeMap res;
    for (const auto& [A, UA] : U) {
      const auto [a1, b1] = A;
      if (a1 >= 1) {
        const Label c{i - a1 + 1, j - b1};
        const auto gi = g.find(c);
        if (c.first >= 0 && c.second >= 0 && gi != g.end()) {
          const double fac = factorial(i) * factorial(j) /
                             (factorial(a1 - 1) * factorial(b1) * factorial(c.first) *
                              factorial(c.second));
          for (const auto& [n, e] : UA) res[n].add(e, fac * gi->second);
        }
      }
      if (b1 >= 1) {
        // the conjugate equation carries conj(g_cd) on z^d zbar^c
        const int dd = i - a1, cc = j - b1 + 1;
        const auto gi = g.find({cc, dd});
        if (dd >= 0 && cc >= 0 && gi != g.end()) {
          const double fac = factorial(i) * factorial(j) /
                             (factorial(a1) * factorial(b1 - 1) * factorial(dd) * factorial(cc));
          for (const auto& [n, e] : UA) res[n].add(e, fac * std::conj(gi->second));
        }
      }
    }
    return res;
  }

  ExpPoly particular(const ExpPoly& K, cplx lambda) const {
    const double w0 = lin.omega0();
    ExpPoly wp;
    for (const auto& t : K.terms()) {
      const cplx mu(0.0, t.freq * w0);
      const cplx gap = mu - lambda;
      if (std::abs(gap) > 1e-12) {
        if (t.power == 0) {
          wp.add(t.freq, 0, t.coeff / gap);
        } else if (t.power == 1) {
          wp.add(t.freq, 1, t.coeff / gap);
          wp.add(t.freq, 0, -t.coeff / (gap * gap));
        } else {
          fail(ErrorKind::Resonance, "reduce", "theta power above 1 in forcing");
        }
      } else if (t.power == 0) {
        wp.add(t.freq, 1, t.coeff);
      } else {
        fail(ErrorKind::Resonance, "reduce", "secular term of theta power 2");
      }
    }
    return wp;
  }

  // Kernel component for the singular cases at mode n0, lambda = +-i w0: the
  // constraint W in Q selects the solution and the bordering multiplier
  // measures solvability.
  Vec2c bordered(const Mat2c& delta, const Vec2c& rhs, const ExpPoly& wp, int m) {
    const bool plus = m > 0;
    const Vec2c qs = plus ? eig.qstar_bar0() : Vec2c(eig.qstar_bar0().conjugate());
    const int sigma = plus ? -1 : 1;
    ExpPoly probe0, probe1;
    probe0.add(m, 0, Vec2c(1.0, 0.0));
    probe1.add(m, 0, Vec2c(0.0, 1.0));
    const cplx r0 = bilinear(lin, qs, sigma, probe0);
    const cplx r1 = bilinear(lin, qs, sigma, probe1);
    // left null direction of delta
    Vec2c left(-delta(1, 1) / delta(0, 1), 1.0);
    const Vec2c border = left.conjugate();
    Eigen::Matrix3cd sys;
    sys << delta(0, 0), delta(0, 1), border(0),
           delta(1, 0), delta(1, 1), border(1),
           r0, r1, 0.0;
    Eigen::Vector3cd b(rhs(0), rhs(1), -bilinear(lin, qs, sigma, wp));
    const Eigen::Vector3cd x = sys.fullPivLu().solve(b);
    out.solvability_residual = std::max(out.solvability_residual, std::abs(x(2)));
    return Vec2c(x(0), x(1));
  }

  void solve_order(int order) {
    std::vector<Label> pairs;
    for (int i = order; i >= 0; --i) pairs.push_back({i, order - i});
    const std::vector<int> modes = mode_set(lin.n0, order);
    std::vector<int> targets = modes;
    if (order == 5) targets = {lin.n0};

    for (const auto& lab : pairs) {
      std::map<int, Vec2c> F = nonlinear(lab.first, lab.second, targets);
      const auto it = F.find(lin.n0);
      const Vec2c Fn0 = it == F.end() ? Vec2c::Zero() : it->second;
      const cplx gij = eig.qstar_bar0().transpose() * Fn0;
      g[lab] = gij;
      out.F[lab] = std::move(F);
    }
    if (order == 5) return;

    for (const auto& lab : pairs) {
      if (order == 4 && lab != Label{3, 1} && lab != Label{2, 2}) continue;
      const auto [i, j] = lab;
      const int m = i - j;
      const cplx lambda(0.0, m * lin.omega0());
      const ModeMap K = drift(i, j);
      const auto& F = out.F[lab];
      WFunction w;
      w.i = i;
      w.j = j;
      for (int n : modes) {
        const auto ki = K.find(n);
        const auto fi = F.find(n);
        const ExpPoly Kn = ki == K.end() ? ExpPoly{} : ki->second;
        const Vec2c Fn = fi == F.end() ? Vec2c::Zero() : fi->second;
        if (Kn.empty() && Fn.isZero(0.0)) continue;
        ExpPoly W = particular(Kn, lambda);
        const double w0 = lin.omega0();
        const Vec2c rhs = lin.boundary_action(n, W) + Fn - lambda * W.eval(0.0, w0) -
                          Kn.eval(0.0, w0);
        Vec2c kc;
        if (n == lin.n0 && std::abs(m) == 1) {
          kc = bordered(lin.char_matrix(n, lambda), rhs, W, m);
        } else {
          kc = solve_T(lin, m, rhs, n);
        }
        W.add(m, 0, kc);
        for (const auto& t : W.terms()) {
          if (!finite(t.coeff)) fail(ErrorKind::NonFinite, "reduce", "non-finite W coefficient");
        }
        w.modes[n] = std::move(W);
        U[lab][n] = w.modes[n];
      }
      out.W[lab] = std::move(w);
    }
  }
};

}  // namespace

CenterData reduce(const ModelParams& params, const HopfPoint& hp, const ReduceOptions& options) {
  CenterData out;
  out.lin = build_linearization(params, hp);
  if (options.require_critical) {
    const CharCoeffs cc = char_coeffs(params, hp.n);
    const double r = std::abs(characteristic(cc, cplx(0.0, hp.omega), hp.tau));
    if (r > 1e-9) {
      fail(ErrorKind::InvalidArgument, "reduce", "point is not on the Hopf set (residual above 1e-9)");
    }
  }
  out.eig = eigen_data(out.lin);
  out.quad = quad_derivs(out.lin, out.eig);
  Reducer r(out.lin, out.eig, out);
  for (int order = 2; order <= 5; ++order) r.solve_order(order);
  for (const auto& lab : GTable::labels()) out.g.at(lab.first, lab.second) = r.g.at(lab);
  if (!out.g.all_finite()) fail(ErrorKind::NonFinite, "reduce", "non-finite g coefficient");
  return out;
}

}  // namespace bautin
