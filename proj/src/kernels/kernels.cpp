// Runtime ISA dispatch and the public kernel entry points.

#include "topo/kernels.hpp"

#include <atomic>

#include "kernel_table.hpp"

namespace topo::kernels {
namespace {

using detail::KernelTable;

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

struct Dispatch {
  const KernelTable* table;
  Isa isa;
};

Dispatch pick_best() {
  if (const KernelTable* t = detail::neon_table()) return {t, Isa::neon};
  if (cpu_has_avx2()) {
    if (const KernelTable* t = detail::avx2_table()) return {t, Isa::avx2};
  }
  return {&detail::scalar_table(), Isa::scalar};
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{pick_best().table};
  return table;
}

std::atomic<Isa>& active_isa_slot() {
  static std::atomic<Isa> isa{pick_best().isa};
  return isa;
}

}  // namespace

Isa active_isa() { return active_isa_slot().load(std::memory_order_relaxed); }

Isa best_supported_isa() { return pick_best().isa; }

bool set_isa(Isa isa) {
  const KernelTable* table = nullptr;
  switch (isa) {
    case Isa::scalar:
      table = &detail::scalar_table();
      break;
    case Isa::avx2:
      table = cpu_has_avx2() ? detail::avx2_table() : nullptr;
      break;
    case Isa::neon:
      table = detail::neon_table();
      break;
  }
  if (!table) return false;
  active_table().store(table, std::memory_order_relaxed);
  active_isa_slot().store(isa, std::memory_order_relaxed);
  return true;
}

void gray_from_rgb(const std::uint8_t* r, const std::uint8_t* g,
                   const std::uint8_t* b, float* out, std::size_t n) {
  active_table().load(std::memory_order_relaxed)->gray_from_rgb(r, g, b, out, n);
}

void xyz_from_rgb(const std::uint8_t* r, const std::uint8_t* g,
                  const std::uint8_t* b, float* x, float* y, float* z,
                  std::size_t n) {
  active_table().load(std::memory_order_relaxed)
      ->xyz_from_rgb(r, g, b, x, y, z, n);
}

void threshold_le(const float* v, float t, std::uint8_t* out, std::size_t n) {
  active_table().load(std::memory_order_relaxed)->threshold_le(v, t, out, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  active_table().load(std::memory_order_relaxed)->axpy(a, x, y, n);
}

double sum(const float* v, std::size_t n) {
  return active_table().load(std::memory_order_relaxed)->sum(v, n);
}

double dot(const double* a, const double* b, std::size_t n) {
  return active_table().load(std::memory_order_relaxed)->dot(a, b, n);
}

void central_moments(const double* v, std::size_t n, double mean,
                     double out[3]) {
  active_table().load(std::memory_order_relaxed)
      ->central_moments(v, n, mean, out);
}

}  // namespace topo::kernels
