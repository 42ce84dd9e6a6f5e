#pragma once

#include <string>
#include <string_view>

#include "tfalg/point.hpp"

namespace tfalg {

/// Radial submultiplicative weight v(lambda) = w(|lambda|) on R^{2d}, |.| the
/// Euclidean norm.
///
///   constant        w(r) = 1
///   polynomial      w(r) = C (1 + r)^s
///   subexponential  w(r) = exp(alpha r^beta),  0 < beta < 1
///   exponential     w(r) = exp(alpha r)
///
/// Constant, polynomial and subexponential weights satisfy the GRS condition
/// lim w(nr)^(1/n) = 1 and are admissible; the exponential weight is
/// submultiplicative but not GRS.
class Weight {
 public:
  enum class Kind { constant, polynomial, subexponential, exponential };

  Weight() = default;

  static Weight constant() { return Weight(); }
  static Weight polynomial(double s, double scale = 1.0);
  static Weight subexponential(double alpha, double beta);
  static Weight exponential(double alpha);

  /// Parses "constant", "poly:s", "poly:s,C", "subexp:alpha,beta", "exp:alpha".
  static Weight parse(std::string_view text);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  /// Exponent s (polynomial) or alpha (subexponential, exponential).
  double first() const { return a_; }
  /// Scale C (polynomial) or beta (subexponential).
  double second() const { return b_; }

  /// w(r) for r >= 0.
  double radial(double r) const;
  double operator()(const TFPoint& p) const { return radial(p.norm()); }
  /// log w(r), finite where w(r) itself would overflow.
  double log_radial(double r) const;

  bool admissible() const { return kind_ != Kind::exponential; }
  /// v(x+y) <= v(x) v(y); polynomial weights need C >= 1.
  bool submultiplicative() const { return kind_ != Kind::polynomial || b_ >= 1.0; }

 private:
  Kind kind_ = Kind::constant;
  double a_ = 0.0;
  double b_ = 1.0;
};

}  // namespace tfalg
