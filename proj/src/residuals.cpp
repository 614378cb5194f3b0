// Independent check of a reduction: the W equations below are written out
// term by term rather than derived from the generic solver.
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "bautin/normalform.hpp"

namespace bautin {

namespace {

struct Coupling {
  cplx coeff;
  Label w;
};

struct Display {
  Label label;
  int m;  // (A0 - m i w0) W
  std::vector<Coupling> couplings;
};

std::vector<Display> displays(const GTable& g) {
  auto c = [](cplx v) { return std::conj(v); };
  return {
      {{2, 0}, 2, {}},
      {{1, 1}, 0, {}},
      {{0, 2}, -2, {}},
      {{3, 0}, 3, {{3.0 * g.g20, {2, 0}}, {3.0 * c(g.g02), {1, 1}}}},
      {{2, 1}, 1, {{g.g20 + 2.0 * c(g.g11), {1, 1}}, {2.0 * g.g11, {2, 0}}, {c(g.g02), {0, 2}}}},
      {{1, 2}, -1, {{c(g.g20) + 2.0 * g.g11, {1, 1}}, {2.0 * c(g.g11), {0, 2}}, {g.g02, {2, 0}}}},
      {{0, 3}, -3, {{3.0 * g.g02, {1, 1}}, {3.0 * c(g.g20), {0, 2}}}},
      {{3, 1}, 2,
       {{3.0 * (g.g20 + c(g.g11)), {2, 1}},
        {g.g30 + 3.0 * c(g.g12), {1, 1}},
        {3.0 * g.g11, {3, 0}},
        {3.0 * g.g21, {2, 0}},
        {c(g.g03), {0, 2}},
        {3.0 * c(g.g02), {1, 2}}}},
      {{2, 2}, 0,
       {{g.g02, {3, 0}},
        {g.g20 + 4.0 * c(g.g11), {1, 2}},
        {2.0 * (g.g21 + c(g.g21)), {1, 1}},
        {2.0 * g.g12, {2, 0}},
        {c(g.g20) + 4.0 * g.g11, {2, 1}},
        {2.0 * c(g.g12), {0, 2}},
        {c(g.g02), {0, 3}}}},
  };
}

double vmax(const Vec2c& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

ResidualReport check_residuals(const CenterData& cd, unsigned seed) {
  const Linearization& lin = cd.lin;
  const EigenData& eig = cd.eig;
  const double w0 = lin.omega0();
  const int n0 = lin.n0;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 0.0);
  std::vector<double> thetas(10);
  for (auto& t : thetas) t = uni(rng);

  ResidualReport rep;
  const ExpPoly q = eig.q_of_theta();
  const ExpPoly qb = q.conj();
  auto W = [&](const Label& lab, int n, double th) -> Vec2c {
    const auto it = cd.W.find(lab);
    return it == cd.W.end() ? Vec2c::Zero() : it->second.eval(n, th, w0);
  };
  auto Wd = [&](const Label& lab, int n, double th) -> Vec2c {
    const auto it = cd.W.find(lab);
    if (it == cd.W.end()) return Vec2c::Zero();
    const auto m = it->second.modes.find(n);
    return m == it->second.modes.end() ? Vec2c::Zero() : m->second.derivative(th, w0);
  };

  for (const Display& disp : displays(cd.g)) {
    const auto wit = cd.W.find(disp.label);
    if (wit == cd.W.end()) continue;
    const auto [i, j] = disp.label;
    const cplx gij = cd.g.at(i, j);
    const cplx gji_bar = std::conj(cd.g.at(j, i));
    const cplx lambda(0.0, disp.m * w0);

    std::set<int> modes{n0};
    for (const auto& [n, e] : wit->second.modes) modes.insert(n);
    for (const auto& cpl : disp.couplings) {
      const auto it = cd.W.find(cpl.w);
      if (it != cd.W.end()) {
        for (const auto& [n, e] : it->second.modes) modes.insert(n);
      }
    }
    const auto fit = cd.F.find(disp.label);

    for (int n : modes) {
      // -H_ij(theta) restricted to mode n, without the nonlinear jump
      auto minus_h = [&](double th) -> Vec2c {
        if (n != n0) return Vec2c::Zero();
        return gij * q.eval(th, w0) + gji_bar * qb.eval(th, w0);
      };
      auto coupled = [&](double th) -> Vec2c {
        Vec2c s = Vec2c::Zero();
        for (const auto& cpl : disp.couplings) s += cpl.coeff * W(cpl.w, n, th);
        return s;
      };
      for (double th : thetas) {
        const Vec2c r = Wd(disp.label, n, th) - lambda * W(disp.label, n, th) - coupled(th) - minus_h(th);
        rep.interior = std::max(rep.interior, vmax(r));
      }
      ExpPoly wn;
      const auto mit = wit->second.modes.find(n);
      if (mit != wit->second.modes.end()) wn = mit->second;
      Vec2c jump = Vec2c::Zero();
      if (fit != cd.F.end()) {
        const auto f = fit->second.find(n);
        if (f != fit->second.end()) jump = f->second;
      }
      const Vec2c r0 = lin.boundary_action(n, wn) - lambda * wn.eval(0.0, w0) - coupled(0.0) -
                       minus_h(0.0) + jump;
      rep.junction = std::max(rep.junction, vmax(r0));

      if (n == n0) {
        rep.w_in_q = std::max(rep.w_in_q, std::abs(pair_qstar(lin, eig, wn)));
        rep.w_in_q = std::max(rep.w_in_q, std::abs(pair_qstar_conj(lin, eig, wn)));
      }
    }
  }

  const std::pair<Label, Label> mirrors[] = {
      {{2, 0}, {0, 2}}, {{2, 1}, {1, 2}}, {{3, 0}, {0, 3}}};
  for (const auto& [a, b] : mirrors) {
    std::set<int> modes;
    for (const auto& lab : {a, b}) {
      const auto it = cd.W.find(lab);
      if (it == cd.W.end()) continue;
      for (const auto& [n, e] : it->second.modes) modes.insert(n);
    }
    for (int n : modes) {
      for (double th : thetas) {
        rep.w_symmetry = std::max(rep.w_symmetry, vmax(W(b, n, th) - W(a, n, th).conjugate()));
      }
    }
  }
  for (const Label& lab : {Label{1, 1}, Label{2, 2}}) {
    const auto it = cd.W.find(lab);
    if (it == cd.W.end()) continue;
    for (const auto& [n, e] : it->second.modes) {
      for (double th : thetas) {
        rep.w11_real = std::max(rep.w11_real, e.eval(th, w0).imag().cwiseAbs().maxCoeff());
      }
    }
  }

  rep.g02_conj = std::abs(cd.g.g02 - std::conj(cd.g.g20));
  rep.g12_vs_conj_g21 = std::abs(cd.g.g12 - std::conj(cd.g.g21));
  rep.norm_q = std::abs(pair_qstar(lin, eig, q) - 1.0);
  rep.norm_qbar = std::abs(pair_qstar(lin, eig, qb));
  rep.eigen_action = vmax(lin.boundary_action(n0, q) - cplx(0.0, w0) * eig.q0());

  const std::pair<Label, const Vec2c*> quads[] = {
      {{2, 0}, &cd.quad.Fzz}, {{1, 1}, &cd.quad.Fzzbar}, {{0, 2}, &cd.quad.Fzbzb}};
  for (const auto& [lab, vec] : quads) {
    const auto it = cd.F.find(lab);
    if (it == cd.F.end()) continue;
    for (const auto& [n, f] : it->second) {
      const double c = triple_projection(n0, n0, n, lin.params.l);
      rep.quad_match = std::max(rep.quad_match, vmax(f - c * *vec));
    }
  }
  return rep;
}

}  // namespace bautin
