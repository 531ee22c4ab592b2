#include "pmorph/kernels/field_table.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace pmorph::kern {

#if defined(__x86_64__) || defined(__i386__)
const KernelOps& avx2_kernels();
#endif

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {

std::atomic<const KernelOps*> g_forced{nullptr};

const KernelOps* pick_default() {
  if (const char* env = std::getenv("PMORPH_KERNEL")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_kernels();
#if defined(__x86_64__) || defined(__i386__)
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return &avx2_kernels();
#endif
    // Unknown or unsupported request in the environment: fall through to
    // auto-selection rather than aborting a whole run.
  }
#if defined(__x86_64__) || defined(__i386__)
  if (avx2_available()) return &avx2_kernels();
#endif
  return &scalar_kernels();
}

}  // namespace

const KernelOps& kernels() {
  const KernelOps* forced = g_forced.load(std::memory_order_acquire);
  if (forced) return *forced;
  static const KernelOps* selected = pick_default();
  return *selected;
}

void force_kernel(const char* name) {
  if (name == nullptr) {
    g_forced.store(nullptr, std::memory_order_release);
    return;
  }
  if (std::strcmp(name, "scalar") == 0) {
    g_forced.store(&scalar_kernels(), std::memory_order_release);
    return;
  }
#if defined(__x86_64__) || defined(__i386__)
  if (std::strcmp(name, "avx2") == 0) {
    if (!avx2_available()) throw std::runtime_error("avx2 kernels not supported on this CPU");
    g_forced.store(&avx2_kernels(), std::memory_order_release);
    return;
  }
#endif
  throw std::runtime_error(std::string("unknown kernel variant: ") + name);
}

}  // namespace pmorph::kern
