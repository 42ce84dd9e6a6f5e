#include "tfalg/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tfalg/errors.hpp"

namespace tfalg {

namespace {

void require_same_dim(const TFOperator& a, const TFOperator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
}

double weighted_sum(const TFOperator& a, const Weight& v) {
  // Neumaier: the norm feeds residual certificates
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = v.radial(a.radius(i)) * std::abs(a.coeff(i));
    const double t = sum + x;
    comp += (sum >= x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

TFOperator compose(const TFOperator& a, const TFOperator& b, DropReport& dropped) {
  require_same_dim(a, b);
  const int d = a.dim();
  TermAccumulator acc(d);
  acc.reserve(a.size() * b.size());
  std::vector<double> sum(2 * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto ci = a.coords(i);
    const auto ti = a.t(i);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto cj = b.coords(j);
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = ci[k] + cj[k];
      const double phase = -dot(ti, b.omega(j));
      acc.add(sum, a.coeff(i) * b.coeff(j) * std::polar(1.0, phase));
    }
  }
  return std::move(acc).build(&dropped);
}

TFOperator compose(const TFOperator& a, const TFOperator& b) {
  DropReport ignored;
  return compose(a, b, ignored);
}

TFOperator adjoint(const TFOperator& a) {
  TermAccumulator acc(a.dim());
  acc.reserve(a.size());
  std::vector<double> neg(2 * static_cast<std::size_t>(a.dim()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto c = a.coords(i);
    for (std::size_t k = 0; k < neg.size(); ++k) neg[k] = -c[k];
    acc.add(neg, std::conj(a.coeff(i)) * std::polar(1.0, -dot(a.t(i), a.omega(i))));
  }
  return std::move(acc).build();
}

TFOperator axpy(cplx alpha, const TFOperator& a, const TFOperator& b, DropReport& dropped) {
  require_same_dim(a, b);
  TermAccumulator acc(a.dim());
  acc.reserve(a.size() + b.size());
  acc.add(a, alpha);
  acc.add(b, 1.0);
  return std::move(acc).build(&dropped);
}

TFOperator axpy(cplx alpha, const TFOperator& a, const TFOperator& b) {
  DropReport ignored;
  return axpy(alpha, a, b, ignored);
}

TFOperator scale(cplx alpha, const TFOperator& a) {
  return a.map_coefficients([alpha](std::size_t, cplx c) { return alpha * c; });
}

TFOperator power(const TFOperator& a, int n) {
  if (n < 0) throw PreconditionError("power needs n >= 0");
  TFOperator result = TFOperator::identity(a.dim());
  for (int k = 0; k < n; ++k) result = compose(a, result);
  return result;
}

double norm_av(const TFOperator& a, const Weight& v) { return weighted_sum(a, v); }

CoeffNorms coeff_norms(const TFOperator& a) {
  CoeffNorms n;
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double m = std::abs(a.coeff(i));
    n.linf = std::max(n.linf, m);
    sq += m * m;
  }
  n.l2 = std::sqrt(sq);
  n.l1 = weighted_sum(a, Weight::constant());
  return n;
}

double support_radius(const TFOperator& a) {
  if (a.empty()) throw PreconditionError("support radius of the zero operator is undefined");
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, a.radius(i));
  return r;
}

double frequency_radius(const TFOperator& a) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::sqrt(dot(a.omega(i), a.omega(i))));
  return r;
}

Truncation truncate(const TFOperator& a, const Weight& v, double budget) {
  if (!(budget >= 0.0)) throw PreconditionError("truncation budget must be >= 0");
  if (budget == 0.0 || a.empty()) return {a, 0.0};
  std::vector<double> mass(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) mass[i] = v.radial(a.radius(i)) * std::abs(a.coeff(i));
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return mass[x] < mass[y]; });

  std::vector<bool> drop(a.size(), false);
  double discarded = 0.0;
  for (std::size_t idx : order) {
    if (discarded + mass[idx] > budget) break;
    discarded += mass[idx];
    drop[idx] = true;
  }
  if (discarded == 0.0) return {a, 0.0};
  TFOperator kept = a.map_coefficients([&](std::size_t i, cplx c) { return drop[i] ? cplx(0.0) : c; });
  return {std::move(kept), discarded};
}

double power_norm_bound(const TFOperator& a, const Weight& v, int n, double power_opnorm) {
  if (n < 1) throw PreconditionError("power_norm_bound needs n >= 1");
  if (a.empty()) throw PreconditionError("power_norm_bound of the zero operator");
  const double r0 = support_radius(a);
  const double support = static_cast<double>(a.size());
  return std::pow(static_cast<double>(n) + 1.0, support / 2.0) * v.radial(n * r0) * power_opnorm;
}

}  // namespace tfalg
