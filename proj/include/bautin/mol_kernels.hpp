#pragma once

#include <string_view>

namespace bautin::kernels {

/// Inputs of the method-of-lines right-hand side on nx grid points. Delayed
/// fields are interpolated as d0 + w (d1 - d0).
struct RhsArgs {
  const double* u;
  const double* v;
  const double* ud0;
  const double* vd0;
  const double* ud1;
  const double* vd1;
  double w;
  double d;
  double k;
  double a;
  double inv_dx2;
  int nx;
  double* du;
  double* dv;
};

using RhsFn = void (*)(const RhsArgs&);
/// out = y + c * k
using AxpyFn = void (*)(double* out, const double* y, double c, const double* k, int n);
/// y += h6 * (((k1 + 2 k2) + 2 k3) + k4)
using CombineFn = void (*)(double* y, double h6, const double* k1, const double* k2,
                           const double* k3, const double* k4, int n);

struct KernelSet {
  std::string_view name;
  RhsFn rhs;
  AxpyFn axpy;
  CombineFn combine;
};

const KernelSet& scalar_kernels();

/// nullptr when the build has no AVX2 variant or the CPU lacks AVX2.
const KernelSet* avx2_kernels();

/// AVX2 when available unless BAUTIN_SIMD=scalar is set.
const KernelSet& active_kernels();

}  // namespace bautin::kernels
