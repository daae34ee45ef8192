// Runtime selection between kernel tables. No intrinsics in this file.

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "mvx/kernels.hpp"

namespace mvx::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(MVX_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& auto_select() {
  if (const char* forced = std::getenv("MVX_KERNELS"); forced && std::strcmp(forced, "scalar") == 0) {
    return detail::kScalarTable;
  }
  if (const KernelTable* t = avx2_table()) return *t;
  return detail::kScalarTable;
}

std::atomic<const KernelTable*> g_override{nullptr};

}  // namespace

const KernelTable& scalar_table() { return detail::kScalarTable; }

const KernelTable* avx2_table() {
#if defined(MVX_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> out{&detail::kScalarTable};
  if (const KernelTable* t = avx2_table()) out.push_back(t);
  return out;
}

const KernelTable& active() {
  if (const KernelTable* t = g_override.load(std::memory_order_relaxed)) return *t;
  static const KernelTable& chosen = auto_select();
  return chosen;
}

void set_active(const KernelTable* table) { g_override.store(table, std::memory_order_relaxed); }

void gemm_nn(const KernelTable& t, const double* a, const double* b, double* c, std::size_t n, std::size_t k,
             std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = c + i * m;
    std::memset(ci, 0, m * sizeof(double));
    const double* ai = a + i * k;
    for (std::size_t p = 0; p < k; ++p) t.axpy(ai[p], b + p * m, ci, m);
  }
}

void gemm_nt_acc(const KernelTable& t, const double* g, const double* b, double* c, std::size_t n, std::size_t m,
                 std::size_t k) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* gi = g + i * m;
    double* ci = c + i * k;
    for (std::size_t p = 0; p < k; ++p) ci[p] += t.dot(gi, b + p * m, m);
  }
}

void gemm_tn_acc(const KernelTable& t, const double* a, const double* g, double* c, std::size_t n, std::size_t k,
                 std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a + i * k;
    const double* gi = g + i * m;
    for (std::size_t p = 0; p < k; ++p) t.axpy(ai[p], gi, c + p * m, m);
  }
}

}  // namespace mvx::kernels
