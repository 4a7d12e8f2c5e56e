#pragma once

#include <cstddef>
#include <string_view>

namespace halfspace::kernels {

/// One grid row of the axisymmetric operator, for nodes t = 0 .. count-1:
///
///   out[t] = -[ (c[t+1] - 2 c[t] + c[t-1]) * inv_hr2
///             + radial_coef[t] * (c[t+1] - c[t-1])
///             + (up[t] - 2 c[t] + down[t]) * inv_hz2 ]
///
/// where c = center. center[-1] and center[count] must be readable.
/// radial_coef[t] is (n-2) / (2 h_r r_t).
struct StencilRow {
  const double* center = nullptr;
  const double* up = nullptr;
  const double* down = nullptr;
  const double* radial_coef = nullptr;
  double* out = nullptr;
  std::size_t count = 0;
  double inv_hr2 = 0.0;
  double inv_hz2 = 0.0;
};

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// True if the running CPU (and this build) can execute the given variant.
bool isa_available(Isa isa);

/// Widest variant available on the running CPU, selected once at first call.
/// Setting HALFSPACE_FORCE_SCALAR in the environment pins it to Isa::scalar.
Isa active_isa();

void neg_laplacian_row_scalar(const StencilRow& row);
void neg_laplacian_row_avx2(const StencilRow& row);

/// Explicit variant; Isa::avx2 on a CPU without it throws halfspace::DomainError.
void neg_laplacian_row(const StencilRow& row, Isa isa);
/// Runtime-dispatched.
void neg_laplacian_row(const StencilRow& row);

}  // namespace halfspace::kernels
