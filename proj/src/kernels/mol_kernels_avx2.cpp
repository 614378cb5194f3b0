#include <immintrin.h>

#include "mol_kernels_impl.hpp"

namespace bautin::kernels {

void rhs_avx2(const RhsArgs& p) {
  const int nx = p.nx;
  if (nx < 6) {
    rhs_points(p, 0, nx);
    return;
  }
  rhs_points(p, 0, 1);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d inv = _mm256_set1_pd(p.inv_dx2);
  const __m256d w = _mm256_set1_pd(p.w);
  const __m256d d = _mm256_set1_pd(p.d);
  const __m256d k = _mm256_set1_pd(p.k);
  const __m256d a = _mm256_set1_pd(p.a);
  int i = 1;
  for (; i + 4 <= nx - 1; i += 4) {
    const __m256d u = _mm256_loadu_pd(p.u + i);
    const __m256d v = _mm256_loadu_pd(p.v + i);
    const __m256d ul = _mm256_loadu_pd(p.u + i - 1);
    const __m256d ur = _mm256_loadu_pd(p.u + i + 1);
    const __m256d vl = _mm256_loadu_pd(p.v + i - 1);
    const __m256d vr = _mm256_loadu_pd(p.v + i + 1);
    const __m256d lap_u = _mm256_mul_pd(_mm256_add_pd(_mm256_sub_pd(ul, _mm256_mul_pd(two, u)), ur), inv);
    const __m256d lap_v = _mm256_mul_pd(_mm256_add_pd(_mm256_sub_pd(vl, _mm256_mul_pd(two, v)), vr), inv);
    const __m256d ud0 = _mm256_loadu_pd(p.ud0 + i);
    const __m256d vd0 = _mm256_loadu_pd(p.vd0 + i);
    const __m256d ud = _mm256_add_pd(ud0, _mm256_mul_pd(w, _mm256_sub_pd(_mm256_loadu_pd(p.ud1 + i), ud0)));
    const __m256d vd = _mm256_add_pd(vd0, _mm256_mul_pd(w, _mm256_sub_pd(_mm256_loadu_pd(p.vd1 + i), vd0)));
    const __m256d react_u =
        _mm256_mul_pd(u, _mm256_sub_pd(_mm256_add_pd(one, _mm256_mul_pd(k, u)), _mm256_mul_pd(a, v)));
    _mm256_storeu_pd(p.du + i, _mm256_add_pd(_mm256_mul_pd(d, lap_u), react_u));
    _mm256_storeu_pd(p.dv + i, _mm256_add_pd(lap_v, _mm256_sub_pd(_mm256_mul_pd(ud, vd), _mm256_mul_pd(v, v))));
  }
  rhs_points(p, i, nx);
}

void axpy_avx2(double* out, const double* y, double c, const double* k, int n) {
  const __m256d cv = _mm256_set1_pd(c);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(cv, _mm256_loadu_pd(k + i))));
  }
  for (; i < n; ++i) out[i] = y[i] + c * k[i];
}

void combine_avx2(double* y, double h6, const double* k1, const double* k2,
                  const double* k3, const double* k4, int n) {
  const __m256d hv = _mm256_set1_pd(h6);
  const __m256d two = _mm256_set1_pd(2.0);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s12 = _mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_mul_pd(two, _mm256_loadu_pd(k2 + i)));
    const __m256d s123 = _mm256_add_pd(s12, _mm256_mul_pd(two, _mm256_loadu_pd(k3 + i)));
    const __m256d s = _mm256_add_pd(s123, _mm256_loadu_pd(k4 + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(hv, s)));
  }
  for (; i < n; ++i) y[i] = y[i] + h6 * (((k1[i] + 2.0 * k2[i]) + 2.0 * k3[i]) + k4[i]);
}

}  // namespace bautin::kernels
