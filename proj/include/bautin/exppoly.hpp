#pragma once

#include <vector>

#include "bautin/model.hpp"

namespace bautin {

/// One term coeff * theta^power * exp(freq * i * omega0 * theta).
struct ExpTerm {
  int freq = 0;
  int power = 0;
  Vec2c coeff = Vec2c::Zero();
};

/// Finite sum of exponential-polynomial terms on theta in [-1, 0]. Terms with
/// equal (freq, power) are merged on insertion.
class ExpPoly {
 public:
  void add(int freq, int power, const Vec2c& coeff);
  void add(const ExpPoly& other, cplx factor = 1.0);

  Vec2c eval(double theta, double omega0) const;
  Vec2c derivative(double theta, double omega0) const;

  ExpPoly conj() const;
  ExpPoly scaled(cplx factor) const;

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int max_power() const;

 private:
  std::vector<ExpTerm> terms_;
};

/// Integral of xi^power * exp(mu * xi) over [-1, 0], power in {0, 1}.
cplx exp_moment(cplx mu, int power);

}  // namespace bautin
