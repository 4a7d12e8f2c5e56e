#include "halfspace/stencil_kernels.hpp"

#include <cstdlib>

#include "halfspace/errors.hpp"

namespace halfspace::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

void neg_laplacian_row_scalar(const StencilRow& row) {
  const double* c = row.center;
  for (std::size_t t = 0; t < row.count; ++t) {
    const double radial = (c[t + 1] - 2.0 * c[t] + c[t - 1]) * row.inv_hr2 +
                          row.radial_coef[t] * (c[t + 1] - c[t - 1]);
    const double vertical = (row.up[t] - 2.0 * c[t] + row.down[t]) * row.inv_hz2;
    row.out[t] = -(radial + vertical);
  }
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(HALFSPACE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa selected = [] {
    if (std::getenv("HALFSPACE_FORCE_SCALAR") != nullptr) return Isa::scalar;
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return selected;
}

void neg_laplacian_row(const StencilRow& row, Isa isa) {
  switch (isa) {
    case Isa::scalar:
      neg_laplacian_row_scalar(row);
      return;
    case Isa::avx2:
      if (!isa_available(Isa::avx2)) throw DomainError("AVX2 kernel requested on a CPU without AVX2");
      neg_laplacian_row_avx2(row);
      return;
  }
}

void neg_laplacian_row(const StencilRow& row) { neg_laplacian_row(row, active_isa()); }

#if !defined(HALFSPACE_HAVE_AVX2)
void neg_laplacian_row_avx2(const StencilRow& row) { neg_laplacian_row_scalar(row); }
#endif

}  // namespace halfspace::kernels
