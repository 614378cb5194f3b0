#pragma once

#include "bautin/mol_kernels.hpp"

namespace bautin::kernels {

// Reference arithmetic for points [lo, hi). Every variant reproduces this
// operation order so results agree bit for bit.
inline void rhs_points(const RhsArgs& p, int lo, int hi) {
  const int last = p.nx - 1;
  for (int i = lo; i < hi; ++i) {
    // reflected ghost points give zero flux at both ends
    const int il = i == 0 ? 1 : i - 1;
    const int ir = i == last ? last - 1 : i + 1;
    const double u = p.u[i], v = p.v[i];
    const double lap_u = ((p.u[il] - 2.0 * u) + p.u[ir]) * p.inv_dx2;
    const double lap_v = ((p.v[il] - 2.0 * v) + p.v[ir]) * p.inv_dx2;
    const double ud = p.ud0[i] + p.w * (p.ud1[i] - p.ud0[i]);
    const double vd = p.vd0[i] + p.w * (p.vd1[i] - p.vd0[i]);
    p.du[i] = p.d * lap_u + u * ((1.0 + p.k * u) - p.a * v);
    p.dv[i] = lap_v + (ud * vd - v * v);
  }
}

void rhs_scalar(const RhsArgs& p);
void axpy_scalar(double* out, const double* y, double c, const double* k, int n);
void combine_scalar(double* y, double h6, const double* k1, const double* k2,
                    const double* k3, const double* k4, int n);

#if defined(BAUTIN_WITH_AVX2)
void rhs_avx2(const RhsArgs& p);
void axpy_avx2(double* out, const double* y, double c, const double* k, int n);
void combine_avx2(double* y, double h6, const double* k1, const double* k2,
                  const double* k3, const double* k4, int n);
#endif

}  // namespace bautin::kernels
