#pragma once

#include <functional>
#include <vector>

namespace tfalg::detail {

/// n_samples / (step / unit); throws GridError unless step is an integer
/// multiple of unit that divides n_samples.
int lattice_period(double step, double unit, int n_samples, const char* what);

/// Calls f for every multi-index in [0, period)^d, last axis fastest.
void for_each_index(int d, int period, const std::function<void(const std::vector<int>&)>& f);

}  // namespace tfalg::detail
