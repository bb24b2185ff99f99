#include "ndcz/simd.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace ndcz::simd {

namespace {

Backend detect_initial() {
  const char* env = std::getenv("NDCZ_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Backend::avx2;
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

Backend& current() {
  static Backend b = detect_initial();
  return b;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() { return current(); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported())
    throw std::runtime_error("simd: avx2 backend not supported on this host");
  current() = b;
}

std::string backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

const Kernels& active() {
  return current() == Backend::avx2 ? avx2_kernels() : scalar_kernels();
}

}  // namespace ndcz::simd
