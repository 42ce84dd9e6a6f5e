#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tfalg/point.hpp"

namespace tfalg {

using cplx = std::complex<double>;

/// Coefficients with modulus below this are not stored.
inline constexpr double kDropThreshold = 1e-15;

class Weight;

/// Mass removed by the drop threshold while building an operator.
struct DropReport {
  double l1 = 0.0;          ///< sum of |c| of dropped terms
  double max_radius = 0.0;  ///< largest |lambda| among dropped terms
  std::size_t count = 0;

  /// Upper bound on the dropped mass in the weighted norm.
  double weighted(const Weight& v) const;
  DropReport& operator+=(const DropReport& o);
};

/// A finitely supported operator T = sum_lambda c_lambda U_lambda.
///
/// Terms are stored sorted lexicographically by their quantized (t, omega)
/// key; all stored coefficients have modulus >= kDropThreshold. Values are
/// immutable once built.
class TFOperator {
 public:
  explicit TFOperator(int dim = 1);

  static TFOperator identity(int dim);
  static TFOperator single(const TFPoint& p, cplx c = 1.0);

  int dim() const { return dim_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }

  std::span<const double> t(std::size_t i) const {
    return {coords_.data() + i * 2 * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> omega(std::size_t i) const {
    return {coords_.data() + i * 2 * dim_ + dim_, static_cast<std::size_t>(dim_)};
  }
  /// (t, omega) block of term i, length 2d.
  std::span<const double> coords(std::size_t i) const {
    return {coords_.data() + i * 2 * dim_, static_cast<std::size_t>(2 * dim_)};
  }
  std::span<const std::int64_t> key(std::size_t i) const {
    return {keys_.data() + i * 2 * dim_, static_cast<std::size_t>(2 * dim_)};
  }
  cplx coeff(std::size_t i) const { return coeffs_[i]; }
  TFPoint point(std::size_t i) const;
  /// Euclidean norm of the i-th support point.
  double radius(std::size_t i) const;

  /// Coefficient at p (zero when p is not in the support).
  cplx coefficient_at(const TFPoint& p) const;

  /// Same support, coefficients transformed term-wise. Terms that fall below
  /// the drop threshold are removed.
  template <class F>
  TFOperator map_coefficients(F&& f) const;

  friend bool operator==(const TFOperator& a, const TFOperator& b);

 private:
  friend class TermAccumulator;
  void drop_small();

  int dim_;
  std::vector<double> coords_;
  std::vector<std::int64_t> keys_;
  std::vector<cplx> coeffs_;
};

/// Collects (point, coefficient) contributions and merges contributions at
/// coinciding quantized points with compensated summation. The merge order is
/// the insertion order within each key, so results are deterministic.
class TermAccumulator {
 public:
  explicit TermAccumulator(int dim) : dim_(dim) {}

  void reserve(std::size_t n);
  std::size_t size() const { return coeffs_.size(); }

  /// coords is the (t, omega) block of length 2d.
  void add(std::span<const double> coords, cplx c);
  void add(const TFPoint& p, cplx c);
  /// Adds every term of op multiplied by alpha.
  void add(const TFOperator& op, cplx alpha = 1.0);

  TFOperator build(DropReport* dropped = nullptr) &&;

 private:
  int dim_;
  std::vector<double> coords_;
  std::vector<std::int64_t> keys_;
  std::vector<cplx> coeffs_;
};

template <class F>
TFOperator TFOperator::map_coefficients(F&& f) const {
  TFOperator r(*this);
  for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] = f(i, coeffs_[i]);
  r.drop_small();
  return r;
}

}  // namespace tfalg
