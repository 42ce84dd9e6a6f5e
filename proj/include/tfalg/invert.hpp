#pragma once

// Inversion inside the algebra by Neumann series, the closed-form bound on the
// inverse norm, spectral radius by Gelfand's formula, exponential decay
// certificates for inverses and damped slices.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tfalg/operator.hpp"
#include "tfalg/weight.hpp"

namespace tfalg {

inline constexpr std::size_t kDefaultTermCap = 200000;

/// Live-term cap for series and powers: TFALG_TERM_CAP when set to a positive
/// integer, kDefaultTermCap otherwise.
std::size_t term_cap();

enum class InversionMode { contraction, symmetric };
std::string to_string(InversionMode mode);

struct InversionReport {
  TFOperator inverse;
  InversionMode mode = InversionMode::contraction;
  int iterations = 0;          ///< highest power of the series included
  /// Certified bound on max(|T X - 1|_v, |X T - 1|_v) for the returned X,
  /// measured from scratch (products recomputed, dropped mass and a rounding
  /// allowance added).
  double residual_av = 0.0;
  double a_bound = 0.0;        ///< lower bound A of T*T
  double b_bound = 0.0;        ///< upper bound B of T*T
  double ratio = 0.0;          ///< (B - A) / (B + A)
  double truncated_mass = 0.0; ///< weighted mass discarded while summing
  int restarts = 0;            ///< reruns with a tighter truncation budget
  bool converged = false;      ///< residual_av <= tol
};

/// X = (1/c0) sum_n P^n with P = 1 - T/c0. Needs sum_{lambda != 0} v|c| < |c0|;
/// throws PreconditionError otherwise. Returns converged = false when max_iter
/// terms do not reach tol.
InversionReport neumann_invert_contraction(const TFOperator& t, const Weight& v, double tol,
                                           int max_iter);

/// X = k sum_n R^n T* with R = 1 - k T*T, k = 2/(A+B), valid whenever
/// A <= T*T <= B. Throws PreconditionError for A <= 0 or A > B.
InversionReport neumann_invert_symmetric(const TFOperator& t, const Weight& v, double a_bound,
                                         double b_bound, double tol, int max_iter);

/// max(|T X - 1|_v, |X T - 1|_v) plus dropped mass and a rounding allowance.
double inversion_residual(const TFOperator& t, const TFOperator& x, const Weight& v);

/// (C rho^m |T|_v / A) (m+N)! ((A+B)/(2A))^{m+N} with N = |supp T|,
/// rho = max(1, 2 R0), v = C (1+|.|)^m. A is the lower bound of T*T.
/// Returns +inf when the value overflows.
double inverse_norm_bound(const TFOperator& t, double c_scale, int m, double a_bound, double b_bound);

struct GelfandResult {
  std::vector<double> estimates;  ///< estimates[n-1] >= |t^n|_v^{1/n}, n = 1..n_max
  /// (n, bound) pairs for n = 2^k from repeated squaring, as far as the term
  /// cap and the coordinate range allow.
  std::vector<std::pair<double, double>> dyadic;
  double extrapolated = 0.0;  ///< minimum of every upper bound above
};

/// Upper bounds on |t^n|_v^{1/n}; each includes the mass removed by
/// truncation, so every value (and their minimum) bounds the spectral radius
/// from above. Throws ResourceLimit when a power outgrows term_cap().
GelfandResult spectral_radius_gelfand(const TFOperator& t, const Weight& v, int n_max);

struct DecayCertificate {
  double delta = 0.0;    ///< decay rate (certified or empirical)
  double c_const = 0.0;  ///< tail(R) <= c_const exp(-delta R) on every sample
  double r0 = 0.0;
  std::vector<std::pair<double, double>> tails;  ///< (R, sum_{|mu| >= R} |d_mu|)
  bool certified = false;  ///< false: B >= 3A, delta is the regression rate
  double regression_slope = 0.0;  ///< least-squares slope of log tail against R
};

/// Tail sums of an inverse against the rate ln((B+A)/(2(B-A)))/r0, where r0
/// bounds the support radius of 1 - (2/(A+B)) T*T.
DecayCertificate certify_decay(const TFOperator& inverse, double a_bound, double b_bound, double r0,
                               const std::vector<double>& radii);

/// Least-squares slope of log(tail) against R over samples with positive tail.
double tail_regression_slope(const std::vector<std::pair<double, double>>& tails);

/// sum c_lambda exp(-<omega_lambda, y>) U_lambda.
TFOperator damped_slice(const TFOperator& t, const std::vector<double>& y);

struct SliceProbe {
  double omega_hat = 0.0;
  std::vector<std::pair<double, double>> log_m;  ///< (rho, log M(rho)), rho = 0 first
};

/// M(rho) = max over sampled unit y of |damped_slice(t, rho y)|_A; omega_hat is
/// the largest slope of log M between consecutive rho values (starting at 0).
SliceProbe slice_support_probe(const TFOperator& t, const std::vector<double>& rho_list);

nlohmann::json to_json(const InversionReport& r);
nlohmann::json to_json(const DecayCertificate& c);
nlohmann::json to_json(const GelfandResult& g);

}  // namespace tfalg
