#include "tfalg/point.hpp"

#include <cmath>
#include <string>

#include "tfalg/errors.hpp"

namespace tfalg {

std::int64_t quantize(double x) {
  if (!std::isfinite(x)) throw PreconditionError("phase-space coordinate is not finite");
  if (std::abs(x) > kMaxCoordinate)
    throw PreconditionError("phase-space coordinate " + std::to_string(x) + " exceeds 2^30");
  return std::llround(x * 4294967296.0);  // exact: scaling by 2^32
}

TFPoint::TFPoint(int dim) {
  if (dim < 1) throw PreconditionError("phase-space dimension must be >= 1");
  t_.assign(static_cast<std::size_t>(dim), 0.0);
  omega_.assign(static_cast<std::size_t>(dim), 0.0);
}

TFPoint::TFPoint(std::vector<double> t, std::vector<double> omega)
    : t_(std::move(t)), omega_(std::move(omega)) {
  if (t_.empty()) throw PreconditionError("phase-space dimension must be >= 1");
  if (t_.size() != omega_.size())
    throw DimensionMismatch(static_cast<int>(t_.size()), static_cast<int>(omega_.size()));
  for (double x : t_) quantize(x);
  for (double x : omega_) quantize(x);
}

double TFPoint::norm() const {
  double s = 0.0;
  for (double x : t_) s += x * x;
  for (double x : omega_) s += x * x;
  return std::sqrt(s);
}

bool TFPoint::is_origin() const {
  for (auto k : key())
    if (k != 0) return false;
  return true;
}

std::vector<std::int64_t> TFPoint::key() const {
  std::vector<std::int64_t> k;
  k.reserve(2 * t_.size());
  for (double x : t_) k.push_back(quantize(x));
  for (double x : omega_) k.push_back(quantize(x));
  return k;
}

TFPoint TFPoint::operator-() const {
  TFPoint r(*this);
  for (double& x : r.t_) x = -x;
  for (double& x : r.omega_) x = -x;
  return r;
}

TFPoint operator+(const TFPoint& a, const TFPoint& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  TFPoint r(a);
  for (std::size_t i = 0; i < r.t_.size(); ++i) {
    r.t_[i] += b.t_[i];
    r.omega_[i] += b.omega_[i];
  }
  return r;
}

TFPoint operator-(const TFPoint& a, const TFPoint& b) { return a + (-b); }

bool operator==(const TFPoint& a, const TFPoint& b) {
  return a.dim() == b.dim() && a.key() == b.key();
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace tfalg
