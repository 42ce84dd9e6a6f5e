#include <algorithm>
#include <cmath>
#include <limits>

#include "tfalg/errors.hpp"
#include "tfalg/invert.hpp"

namespace tfalg {

double tail_regression_slope(const std::vector<std::pair<double, double>>& tails) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const auto& [r, s] : tails) {
    if (!(s > 0.0)) continue;
    const double y = std::log(s);
    sx += r;
    sy += y;
    sxx += r * r;
    sxy += r * y;
    ++n;
  }
  if (n < 2) return 0.0;
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return 0.0;
  return (n * sxy - sx * sy) / den;
}

DecayCertificate certify_decay(const TFOperator& inverse, double a_bound, double b_bound, double r0,
                               const std::vector<double>& radii) {
  if (!(a_bound > 0.0) || !(b_bound >= a_bound) || !std::isfinite(b_bound))
    throw PreconditionError("invalid frame bounds: need 0 < A <= B");
  if (!(r0 > 0.0)) throw PreconditionError("r0 must be > 0");
  if (radii.empty()) throw PreconditionError("radii must be nonempty");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw PreconditionError("radii must be strictly increasing");

  DecayCertificate c;
  c.r0 = r0;
  std::vector<std::pair<double, double>> terms;  // (|mu|, |d_mu|) sorted by radius
  for (std::size_t i = 0; i < inverse.size(); ++i) terms.emplace_back(inverse.radius(i), std::abs(inverse.coeff(i)));
  std::sort(terms.begin(), terms.end());
  for (double r : radii) {
    double s = 0.0, comp = 0.0;
    for (auto it = std::lower_bound(terms.begin(), terms.end(), std::make_pair(r, 0.0)); it != terms.end(); ++it) {
      const double y = it->second - comp;
      const double t = s + y;
      comp = (t - s) - y;
      s = t;
    }
    c.tails.emplace_back(r, s);
  }
  c.regression_slope = tail_regression_slope(c.tails);

  // ln((B+A)/(2(B-A))) is positive exactly when B < 3A; B = A gives any rate.
  if (b_bound < 3.0 * a_bound) {
    c.certified = true;
    c.delta = b_bound == a_bound ? std::numeric_limits<double>::infinity()
                                 : std::log((b_bound + a_bound) / (2.0 * (b_bound - a_bound))) / r0;
  } else {
    c.certified = false;
    c.delta = std::max(0.0, -c.regression_slope);
  }
  if (std::isinf(c.delta)) {
    // Only finite-rate certificates are serializable; cap at the largest
    // rate the samples themselves support.
    c.delta = std::max(1.0, -c.regression_slope);
  }
  for (const auto& [r, s] : c.tails) c.c_const = std::max(c.c_const, s * std::exp(c.delta * r));
  return c;
}

}  // namespace tfalg
