#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tfalg {

/// Resolution used to identify phase-space points: coordinates are rounded to
/// integer multiples of 2^-32 before hashing or comparison.
inline constexpr double kQuantum = 1.0 / 4294967296.0;

/// Largest coordinate magnitude whose quantized value fits comfortably in an
/// int64 key.
inline constexpr double kMaxCoordinate = 1073741824.0;  // 2^30

/// Quantized key of one coordinate. Throws PreconditionError on non-finite or
/// out-of-range input.
std::int64_t quantize(double x);

/// A point lambda = (t, omega) of phase space R^d x R^d.
class TFPoint {
 public:
  TFPoint() : TFPoint(1) {}
  /// The origin of R^d x R^d.
  explicit TFPoint(int dim);
  TFPoint(std::vector<double> t, std::vector<double> omega);
  /// Convenience for d = 1.
  TFPoint(double t, double omega) : TFPoint(std::vector<double>{t}, std::vector<double>{omega}) {}

  static TFPoint origin(int dim) { return TFPoint(dim); }

  int dim() const { return static_cast<int>(t_.size()); }
  std::span<const double> t() const { return t_; }
  std::span<const double> omega() const { return omega_; }

  /// Euclidean norm on R^{2d}.
  double norm() const;
  bool is_origin() const;

  /// Quantized coordinates, t first then omega (length 2d).
  std::vector<std::int64_t> key() const;

  TFPoint operator-() const;
  friend TFPoint operator+(const TFPoint& a, const TFPoint& b);
  friend TFPoint operator-(const TFPoint& a, const TFPoint& b);

  /// Equality after quantization.
  friend bool operator==(const TFPoint& a, const TFPoint& b);

 private:
  std::vector<double> t_;
  std::vector<double> omega_;
};

/// <t, omega> for two coordinate blocks of equal length.
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace tfalg
