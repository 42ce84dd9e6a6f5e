#include <cmath>
#include <limits>

#include "tfalg/algebra.hpp"
#include "tfalg/errors.hpp"
#include "tfalg/invert.hpp"

namespace tfalg {

double inverse_norm_bound(const TFOperator& t, double c_scale, int m, double a_bound, double b_bound) {
  if (!(a_bound > 0.0) || !std::isfinite(b_bound) || a_bound > b_bound)
    throw PreconditionError("invalid frame bounds: need 0 < A <= B");
  if (m < 0) throw PreconditionError("weight exponent m must be >= 0");
  if (t.empty()) throw PreconditionError("inverse_norm_bound of the zero operator");
  const Weight v = Weight::polynomial(m, c_scale);
  const double rho = std::max(1.0, 2.0 * support_radius(t));
  const double k = static_cast<double>(m) + static_cast<double>(t.size());
  // Logarithms keep (m+N)! finite for large supports.
  const double log_bound = std::log(c_scale) + m * std::log(rho) + std::log(norm_av(t, v)) -
                           std::log(a_bound) + std::lgamma(k + 1.0) +
                           k * std::log((a_bound + b_bound) / (2.0 * a_bound));
  if (log_bound > std::log(std::numeric_limits<double>::max())) return std::numeric_limits<double>::infinity();
  return std::exp(log_bound);
}

}  // namespace tfalg
