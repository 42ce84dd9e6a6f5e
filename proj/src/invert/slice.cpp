#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tfalg/errors.hpp"
#include "tfalg/invert.hpp"

namespace tfalg {

TFOperator damped_slice(const TFOperator& t, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != t.dim()) throw DimensionMismatch(t.dim(), static_cast<int>(y.size()));
  return t.map_coefficients([&](std::size_t i, cplx c) { return c * std::exp(-dot(t.omega(i), y)); });
}

namespace {

// Unit directions: normalized sign patterns and the signed axes; in the plane
// also a fine angular sweep.
std::vector<std::vector<double>> probe_directions(int d) {
  std::vector<std::vector<double>> dirs;
  const auto ud = static_cast<std::size_t>(d);
  if (d <= 16) {
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (unsigned long mask = 0; mask < (1ul << d); ++mask) {
      std::vector<double> y(ud);
      for (std::size_t a = 0; a < ud; ++a) y[a] = (mask >> a) & 1ul ? -s : s;
      dirs.push_back(std::move(y));
    }
  }
  if (d > 1) {
    for (std::size_t a = 0; a < ud; ++a)
      for (double sign : {1.0, -1.0}) {
        std::vector<double> y(ud, 0.0);
        y[a] = sign;
        dirs.push_back(std::move(y));
      }
  }
  if (d == 2) {
    constexpr int kAngles = 720;
    for (int k = 0; k < kAngles; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / kAngles;
      dirs.push_back({std::cos(phi), std::sin(phi)});
    }
  }
  return dirs;
}

// log |damped_slice(t, y)|_A without overflow.
double log_slice_norm(const TFOperator& t, const std::vector<double>& y) {
  if (t.empty()) return -std::numeric_limits<double>::infinity();
  std::vector<double> lm(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) lm[i] = std::log(std::abs(t.coeff(i))) - dot(t.omega(i), y);
  const double hi = *std::max_element(lm.begin(), lm.end());
  double s = 0.0;
  for (double x : lm) s += std::exp(x - hi);
  return hi + std::log(s);
}

}  // namespace

SliceProbe slice_support_probe(const TFOperator& t, const std::vector<double>& rho_list) {
  if (rho_list.empty()) throw PreconditionError("rho_list must be nonempty");
  for (std::size_t i = 0; i < rho_list.size(); ++i) {
    if (!(rho_list[i] > 0.0)) throw PreconditionError("rho values must be positive");
    if (i > 0 && !(rho_list[i] > rho_list[i - 1])) throw PreconditionError("rho_list must be increasing");
  }
  SliceProbe p;
  if (t.empty()) return p;
  const auto dirs = probe_directions(t.dim());
  const auto ud = static_cast<std::size_t>(t.dim());
  p.log_m.emplace_back(0.0, log_slice_norm(t, std::vector<double>(ud, 0.0)));
  for (double rho : rho_list) {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> y(ud);
    for (const auto& u : dirs) {
      for (std::size_t a = 0; a < ud; ++a) y[a] = rho * u[a];
      best = std::max(best, log_slice_norm(t, y));
    }
    p.log_m.emplace_back(rho, best);
  }
  for (std::size_t i = 1; i < p.log_m.size(); ++i) {
    const double slope = (p.log_m[i].second - p.log_m[i - 1].second) / (p.log_m[i].first - p.log_m[i - 1].first);
    p.omega_hat = std::max(p.omega_hat, slope);
  }
  return p;
}

}  // namespace tfalg
