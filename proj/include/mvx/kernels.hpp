#pragma once

// Data-parallel inner loops behind the tensor ops. Every kernel has a scalar
// reference implementation; vectorized variants are selected once at runtime
// from the CPU's capabilities and must agree with the reference (bitwise for
// elementwise kernels, to rounding for reductions).

#include <cstddef>
#include <string_view>
#include <vector>

namespace mvx::kernels {

struct KernelTable {
  std::string_view name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  /// y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  void (*add)(const double* x, const double* y, double* out, std::size_t n);
  void (*sub)(const double* x, const double* y, double* out, std::size_t n);
  void (*mul)(const double* x, const double* y, double* out, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();
/// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_tables();

/// Table used by the tensor ops. Chosen on first call: MVX_KERNELS=scalar
/// forces the reference path, otherwise the widest supported variant wins.
const KernelTable& active();
/// Override the active table (tests); pass nullptr to restore auto-selection.
void set_active(const KernelTable* table);

// Row-major matrix products built from the table's dot/axpy.
/// c[n×m] = a[n×k] · b[k×m]
void gemm_nn(const KernelTable& t, const double* a, const double* b, double* c, std::size_t n, std::size_t k,
             std::size_t m);
/// c[n×k] += g[n×m] · b[k×m]ᵀ
void gemm_nt_acc(const KernelTable& t, const double* g, const double* b, double* c, std::size_t n, std::size_t m,
                 std::size_t k);
/// c[k×m] += a[n×k]ᵀ · g[n×m]
void gemm_tn_acc(const KernelTable& t, const double* a, const double* g, double* c, std::size_t n, std::size_t k,
                 std::size_t m);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(MVX_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace mvx::kernels
