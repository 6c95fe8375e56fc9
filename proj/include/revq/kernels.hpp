#ifndef REVQ_KERNELS_HPP
#define REVQ_KERNELS_HPP

#include <complex>
#include <cstddef>

// Dense complex kernels behind the matrix backend. A scalar reference
// implementation always exists; an AVX2+FMA (x86-64) or NEON (aarch64)
// variant is selected at runtime when the CPU supports it. The variants are
// equivalence-tested against the reference in the unit suite.
namespace revq::kern {

using cd = std::complex<double>;

struct Impl {
  const char* name;
  // y += alpha * x
  void (*axpy)(std::size_t n, cd alpha, const cd* x, cd* y);
  // y = alpha * x
  void (*scal_copy)(std::size_t n, cd alpha, const cd* x, cd* y);
  // C = A * B, row-major, C is m x n, A is m x k, B is k x n; C overwritten
  void (*gemm)(int m, int n, int k, const cd* A, const cd* B, cd* C);
};

const Impl& scalar_impl();
const Impl& active();           // dispatched once per process
const char* active_name();
bool force(const char* name);   // "scalar", "simd" or "auto"; false if unavailable

inline void axpy(std::size_t n, cd alpha, const cd* x, cd* y) { active().axpy(n, alpha, x, y); }
inline void scal_copy(std::size_t n, cd alpha, const cd* x, cd* y) {
  active().scal_copy(n, alpha, x, y);
}
inline void gemm(int m, int n, int k, const cd* A, const cd* B, cd* C) {
  active().gemm(m, n, k, A, B, C);
}

}  // namespace revq::kern

#endif
