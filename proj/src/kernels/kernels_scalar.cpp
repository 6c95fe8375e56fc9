#include "revq/kernels.hpp"

#include <algorithm>

namespace revq::kern {

namespace {

void axpy_scalar(std::size_t n, cd alpha, const cd* x, cd* y) {
  for (std::size_t i = 0; i < n; i++) y[i] += alpha * x[i];
}

void scal_copy_scalar(std::size_t n, cd alpha, const cd* x, cd* y) {
  for (std::size_t i = 0; i < n; i++) y[i] = alpha * x[i];
}

void gemm_scalar(int m, int n, int k, const cd* A, const cd* B, cd* C) {
  std::fill_n(C, static_cast<std::size_t>(m) * n, cd(0, 0));
  for (int i = 0; i < m; i++)
    for (int kk = 0; kk < k; kk++) {
      cd a = A[static_cast<std::size_t>(i) * k + kk];
      if (a == cd(0, 0)) continue;
      const cd* brow = B + static_cast<std::size_t>(kk) * n;
      cd* crow = C + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; j++) crow[j] += a * brow[j];
    }
}

}  // namespace

const Impl& scalar_impl() {
  static Impl impl{"scalar", axpy_scalar, scal_copy_scalar, gemm_scalar};
  return impl;
}

}  // namespace revq::kern
