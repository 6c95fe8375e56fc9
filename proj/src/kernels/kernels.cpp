#include "revq/kernels.hpp"

#include <cstring>

namespace revq::kern {

const Impl* simd_impl_probe();  // defined per-arch in kernels_simd.cpp

namespace {
const Impl* g_forced = nullptr;
bool g_force_scalar = false;
}  // namespace

const Impl& active() {
  if (g_force_scalar) return scalar_impl();
  if (g_forced) return *g_forced;
  static const Impl* chosen = []() {
    if (const Impl* s = simd_impl_probe()) return s;
    return &scalar_impl();
  }();
  return *chosen;
}

const char* active_name() { return active().name; }

bool force(const char* name) {
  if (std::strcmp(name, "auto") == 0) {
    g_forced = nullptr;
    g_force_scalar = false;
    return true;
  }
  if (std::strcmp(name, "scalar") == 0) {
    g_force_scalar = true;
    g_forced = nullptr;
    return true;
  }
  if (std::strcmp(name, "simd") == 0) {
    const Impl* s = simd_impl_probe();
    if (!s) return false;
    g_forced = s;
    g_force_scalar = false;
    return true;
  }
  return false;
}

}  // namespace revq::kern
