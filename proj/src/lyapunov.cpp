#include <complex>

#include "bautin/bautin.hpp"

namespace bautin {

LyapunovCoeffs lyapunov_coeffs(const GTable& g, double w) {
  auto c = [](cplx v) { return std::conj(v); };
  const cplx g20 = g.g20, g11 = g.g11, g02 = g.g02, g30 = g.g30, g21 = g.g21, g12 = g.g12,
             g03 = g.g03, g40 = g.g40, g31 = g.g31, g22 = g.g22, g13 = g.g13, g32 = g.g32;
  const double w2 = w * w, w3 = w2 * w, w4 = w3 * w;

  LyapunovCoeffs out;
  out.l1 = (g21.real() - (g20 * g11).imag() / w) / (2.0 * w);

  double twelve_l2 = g32.real() / w;
  twelve_l2 += (g20 * c(g31) - g11 * (4.0 * g31 + 3.0 * c(g22)) -
                g02 * (g40 + c(g13)) / 3.0 - g30 * g12).imag() / w2;
  twelve_l2 += (g20 * (c(g11) * (3.0 * g12 - c(g30)) + g02 * (c(g12) - g30 / 3.0) +
                       c(g02) * g03 / 3.0)).real() / w3;
  twelve_l2 += (g11 * (c(g02) * (5.0 / 3.0 * c(g30) + 3.0 * g12) + g02 * c(g03) / 3.0 -
                       4.0 * g11 * g30)).real() / w3;
  twelve_l2 += 3.0 * (g20 * g11).imag() * g21.imag() / w3;
  twelve_l2 += (g11 * c(g02) * (c(g20) * c(g20) - 3.0 * c(g20) * g11 - 4.0 * g11 * g11)).imag() / w4;
  twelve_l2 += (g11 * g20).imag() * (3.0 * (g11 * g20).real() - 2.0 * std::norm(g02)) / w4;
  out.l2 = twelve_l2 / 12.0;
  return out;
}

}  // namespace bautin
