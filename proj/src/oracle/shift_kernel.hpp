#pragma once

#include <vector>

#include "tfalg/oracle.hpp"

namespace tfalg::oracle::detail {

/// One-axis time shift as a circulant: (S f)[k] = sum_l column[(k - l) mod n] f[l].
struct AxisKernel {
  std::vector<cplx> column;
  bool permutation = false;
  int offset = 0;  ///< nonzero index of column when permutation is set
};

AxisKernel axis_kernel(const Grid& grid, double t, ShiftMode mode);
void apply_axis(std::vector<cplx>& data, const Grid& grid, int axis, const AxisKernel& kernel);
/// exp(i omega . x_k) for every grid point.
std::vector<cplx> modulation(const Grid& grid, std::span<const double> omega);

}  // namespace tfalg::oracle::detail
