#ifndef HCC_LINALG_HPP
#define HCC_LINALG_HPP

#include <cstddef>

namespace hcc {

// Row-major float GEMM variants used by the toy model. All of them accumulate
// the k dimension in ascending order with plain 32-bit adds, so results are
// bit-deterministic and independent of the OpenMP thread count (the parallel
// loops split only the independent output rows).

// c[m,n] = a[m,k] * b[k,n]
void mm_nn(const float* a, const float* b, float* c, int m, int k, int n);

// c[m,n] = a[m,k] * b[n,k]^T
void mm_nt(const float* a, const float* b, float* c, int m, int k, int n);

// c[m,n] = a[k,m]^T * b[k,n]
void mm_tn(const float* a, const float* b, float* c, int m, int k, int n);

// Flop count charged to the cost model for any of the above.
inline double matmul_flops(int m, int k, int n) {
  return 2.0 * static_cast<double>(m) * static_cast<double>(k) *
         static_cast<double>(n);
}

// Serial reference loops, bit-identical to the OpenMP kernels.
namespace serial {
void mm_nn(const float* a, const float* b, float* c, int m, int k, int n);
void mm_nt(const float* a, const float* b, float* c, int m, int k, int n);
void mm_tn(const float* a, const float* b, float* c, int m, int k, int n);
}  // namespace serial

}  // namespace hcc

#endif
