#include "bautin/exppoly.hpp"

#include <algorithm>
#include <cmath>

#include "bautin/error.hpp"

namespace bautin {

void ExpPoly::add(int freq, int power, const Vec2c& coeff) {
  for (auto& t : terms_) {
    if (t.freq == freq && t.power == power) {
      t.coeff += coeff;
      return;
    }
  }
  terms_.push_back({freq, power, coeff});
}

void ExpPoly::add(const ExpPoly& other, cplx factor) {
  for (const auto& t : other.terms_) add(t.freq, t.power, factor * t.coeff);
}

Vec2c ExpPoly::eval(double theta, double omega0) const {
  Vec2c out = Vec2c::Zero();
  for (const auto& t : terms_) {
    const cplx e = std::exp(cplx(0.0, t.freq * omega0 * theta));
    out += (std::pow(theta, t.power) * e) * t.coeff;
  }
  return out;
}

Vec2c ExpPoly::derivative(double theta, double omega0) const {
  Vec2c out = Vec2c::Zero();
  for (const auto& t : terms_) {
    const cplx mu(0.0, t.freq * omega0);
    const cplx e = std::exp(mu * theta);
    cplx f = mu * std::pow(theta, t.power) * e;
    if (t.power > 0) f += static_cast<double>(t.power) * std::pow(theta, t.power - 1) * e;
    out += f * t.coeff;
  }
  return out;
}

ExpPoly ExpPoly::conj() const {
  ExpPoly out;
  for (const auto& t : terms_) out.add(-t.freq, t.power, t.coeff.conjugate());
  return out;
}

ExpPoly ExpPoly::scaled(cplx factor) const {
  ExpPoly out;
  out.add(*this, factor);
  return out;
}

int ExpPoly::max_power() const {
  int p = 0;
  for (const auto& t : terms_) p = std::max(p, t.power);
  return p;
}

cplx exp_moment(cplx mu, int power) {
  if (power < 0 || power > 1) {
    throw Error(ErrorKind::InvalidArgument, "normalform", "exp_moment",
                "theta power above 1");
  }
  if (std::abs(mu) < 0.5) {
    // Taylor series; the closed form cancels badly for small mu.
    cplx sum = 0.0, term = 1.0;
    for (int k = 0; k < 30; ++k) {
      const double sign = ((k + power) % 2 == 0) ? 1.0 : -1.0;
      sum += term * (sign / (k + power + 1));
      term *= mu / double(k + 1);
    }
    return sum;
  }
  const cplx em = std::exp(-mu);
  const cplx i0 = (1.0 - em) / mu;
  if (power == 0) return i0;
  return em / mu - i0 / mu;
}

}  // namespace bautin
