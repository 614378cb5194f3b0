#include "mol_kernels_impl.hpp"

namespace bautin::kernels {

void rhs_scalar(const RhsArgs& p) { rhs_points(p, 0, p.nx); }

void axpy_scalar(double* out, const double* y, double c, const double* k, int n) {
  for (int i = 0; i < n; ++i) out[i] = y[i] + c * k[i];
}

void combine_scalar(double* y, double h6, const double* k1, const double* k2,
                    const double* k3, const double* k4, int n) {
  for (int i = 0; i < n; ++i) y[i] = y[i] + h6 * (((k1[i] + 2.0 * k2[i]) + 2.0 * k3[i]) + k4[i]);
}

}  // namespace bautin::kernels
