#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tfalg/algebra.hpp"
#include "tfalg/errors.hpp"
#include "tfalg/invert.hpp"

namespace tfalg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Weighted mass dropped per power, relative to the power's norm.
constexpr double kRelativeBudget = 1e-13;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

std::vector<double> log_masses(const TFOperator& a, const Weight& v) {
  std::vector<double> lm(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) lm[i] = v.log_radial(a.radius(i)) + std::log(std::abs(a.coeff(i)));
  return lm;
}

double log_norm(const std::vector<double>& lm) {
  if (lm.empty()) return kNegInf;
  const double hi = *std::max_element(lm.begin(), lm.end());
  double s = 0.0;
  for (double x : lm) s += std::exp(x - hi);
  return hi + std::log(s);
}

// A power of t held as scale * op, with the weighted error of op bounded by
// exp(log_err). All norms are kept as logarithms so exponential weights at
// large radii do not overflow.
struct ScaledPower {
  TFOperator op;
  double log_scale = 0.0;
  double log_norm = kNegInf;
  double log_err = kNegInf;
};

// Drops the weighted-smallest terms up to kRelativeBudget of the norm,
// rescales to unit largest coefficient, folds the removed mass into the error.
ScaledPower normalize(TFOperator op, double log_scale, double log_err, const Weight& v,
                      std::size_t cap) {
  ScaledPower out;
  std::vector<double> lm = log_masses(op, v);
  double ln = log_norm(lm);
  if (ln == kNegInf) {
    out.op = std::move(op);
    out.log_scale = log_scale;
    out.log_err = log_err;
    return out;
  }
  std::vector<std::size_t> order(op.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return lm[x] < lm[y]; });
  std::vector<bool> drop(op.size(), false);
  double removed = 0.0;
  for (std::size_t i : order) {
    const double rel = std::exp(lm[i] - ln);
    if (removed + rel > kRelativeBudget) break;
    removed += rel;
    drop[i] = true;
  }
  if (removed > 0.0) log_err = log_add(log_err, ln + std::log(removed));
  double cmax = 0.0;
  for (std::size_t i = 0; i < op.size(); ++i)
    if (!drop[i]) cmax = std::max(cmax, std::abs(op.coeff(i)));
  out.op = op.map_coefficients([&](std::size_t i, cplx c) { return drop[i] ? cplx(0.0) : c / cmax; });
  if (out.op.size() > cap)
    throw ResourceLimit("power of the operator has " + std::to_string(out.op.size()) +
                        " live terms, above the cap of " + std::to_string(cap) +
                        " (set TFALG_TERM_CAP to raise it)");
  const double lc = std::log(cmax);
  out.log_scale = log_scale + lc;
  out.log_err = log_err - lc;
  out.log_norm = log_norm(log_masses(out.op, v));
  return out;
}

double log_dropped(const DropReport& d, const Weight& v) {
  if (d.l1 <= 0.0) return kNegInf;
  return std::log(d.l1) + v.log_radial(d.max_radius);
}

double upper_root(const ScaledPower& p, double n) {
  const double ln = log_add(p.log_norm, p.log_err);
  if (ln == kNegInf) return 0.0;
  return std::exp((p.log_scale + ln) / n);
}

}  // namespace

GelfandResult spectral_radius_gelfand(const TFOperator& t, const Weight& v, int n_max) {
  if (n_max < 2) throw PreconditionError("n_max must be >= 2");
  const std::size_t cap = term_cap();
  GelfandResult res;
  if (t.empty()) {
    res.estimates.assign(static_cast<std::size_t>(n_max), 0.0);
    return res;
  }
  const double log_t = log_norm(log_masses(t, v));
  const ScaledPower base = normalize(t, 0.0, kNegInf, v, cap);

  ScaledPower p = base;
  res.estimates.push_back(upper_root(p, 1.0));
  for (int n = 2; n <= n_max; ++n) {
    DropReport dropped;
    TFOperator next = compose(p.op, t, dropped);
    // |E t| <= |E| |t|, plus what the composition itself dropped.
    const double err = log_add(p.log_err + log_t, log_dropped(dropped, v));
    p = normalize(std::move(next), p.log_scale, err, v, cap);
    res.estimates.push_back(upper_root(p, n));
  }
  res.extrapolated = *std::min_element(res.estimates.begin(), res.estimates.end());

  // Repeated squaring reaches n = 2^k cheaply; stop at the coordinate range or
  // the term cap.
  const double r0 = support_radius(t);
  ScaledPower q = base;
  double n = 1.0;
  while (n < 4.6e18) {
    if (r0 * 2.0 * n > 0.5 * kMaxCoordinate) break;
    if (q.op.size() * q.op.size() > 16 * cap) break;
    DropReport dropped;
    TFOperator sq = compose(q.op, q.op, dropped);
    // (X + E)^2 = X^2 + XE + EX + E^2.
    double err = log_dropped(dropped, v);
    if (q.log_err != kNegInf) {
      err = log_add(err, std::log(2.0) + q.log_norm + q.log_err);
      err = log_add(err, 2.0 * q.log_err);
    }
    try {
      q = normalize(std::move(sq), 2.0 * q.log_scale, err, v, cap);
    } catch (const ResourceLimit&) {
      break;
    }
    n *= 2.0;
    const double est = upper_root(q, n);
    res.dyadic.emplace_back(n, est);
    res.extrapolated = std::min(res.extrapolated, est);
  }
  return res;
}

}  // namespace tfalg
