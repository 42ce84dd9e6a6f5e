#pragma once

#include "tfalg/operator.hpp"
#include "tfalg/weight.hpp"

namespace tfalg {

/// Product T_a T_b as a coefficient map (twisted convolution):
///   (a # b)_lambda = sum_{mu + nu = lambda} a_mu b_nu exp(-i <t_mu, omega_nu>),
/// from U_{t1,w1} U_{t2,w2} = exp(-i <t1, w2>) U_{t1+t2, w1+w2}.
TFOperator compose(const TFOperator& a, const TFOperator& b);
TFOperator compose(const TFOperator& a, const TFOperator& b, DropReport& dropped);

/// T* with (a*)_{-t,-omega} = conj(c_{t,omega}) exp(-i <t, omega>).
TFOperator adjoint(const TFOperator& a);

/// alpha a + b.
TFOperator axpy(cplx alpha, const TFOperator& a, const TFOperator& b);
TFOperator axpy(cplx alpha, const TFOperator& a, const TFOperator& b, DropReport& dropped);
TFOperator scale(cplx alpha, const TFOperator& a);

/// a^n by repeated composition (n >= 0; a^0 is the identity).
TFOperator power(const TFOperator& a, int n);

/// sum_lambda v(lambda) |c_lambda|.
double norm_av(const TFOperator& a, const Weight& v);

struct CoeffNorms {
  double linf = 0.0;
  double l2 = 0.0;
  double l1 = 0.0;
};
CoeffNorms coeff_norms(const TFOperator& a);

/// max_lambda |lambda| over the support. Throws PreconditionError when empty.
double support_radius(const TFOperator& a);

/// max_lambda |omega_lambda| over the support (0 for the zero operator).
double frequency_radius(const TFOperator& a);

struct Truncation {
  TFOperator op;
  double discarded = 0.0;  ///< exact weighted mass removed
};

/// Greedily drops the terms with the smallest v(lambda)|c_lambda| while the
/// removed weighted mass stays <= budget.
Truncation truncate(const TFOperator& a, const Weight& v, double budget);

/// Lemma-type bound (n+1)^{|supp|/2} w(n R0) ||a^n||_{B(L2)} on ||a^n||_v,
/// where power_opnorm is an estimate of the operator norm of a^n.
double power_norm_bound(const TFOperator& a, const Weight& v, int n, double power_opnorm);

}  // namespace tfalg
