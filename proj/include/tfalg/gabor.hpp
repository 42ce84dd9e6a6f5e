#pragma once

// Gabor frames on the oracle grid and the trace functional
//   gamma(T) = lim (alpha beta)^{-d} (2M+1)^{-d} (2N+1)^{-d}
//              sum_{|m| <= M, |n| <= N} <T g_{m,n}, g~_{m,n}>,
// with g_{m,n} = U_{beta n, 2 pi alpha m} g.

#include <vector>

#include "json.hpp"
#include "tfalg/oracle.hpp"

namespace tfalg {

struct GaborSystem {
  oracle::Grid grid;
  double alpha = 0.0;
  double beta = 0.0;
  oracle::GridFunction window;
  oracle::GridFunction dual;
  /// Lattice periods on the torus: g_{m + period_m, n} = g_{m, n + period_n} = g_{m,n}.
  int period_m = 0;
  int period_n = 0;
  double frame_lower = 0.0;  ///< extreme eigenvalues of the frame operator
  double frame_upper = 0.0;
  double reproduction_error = 0.0;  ///< relative error of analysis + dual synthesis on a test signal
  bool tight = false;
};

/// Gaussian window exp(-pi |x|^2), periodized and L2-normalized, with its
/// canonical dual. With tight = true the window is replaced by S^{-1/2} g, so
/// the frame operator is the identity and the dual equals the window.
///
/// Requires alpha beta < 1, beta a multiple of the spacing h with beta / h
/// dividing n_samples, and 2 pi alpha a multiple of pi / L with 2 alpha L
/// dividing n_samples (so the lattice closes up on the torus). Throws
/// GridError for an incommensurate lattice and PreconditionError when the
/// frame operator has condition number above 1e8.
GaborSystem build_gabor(const oracle::Grid& grid, double alpha, double beta, bool tight = false);

/// g_{m,n} for multi-indices m, n of length d.
oracle::GridFunction lattice_atom(const GaborSystem& sys, const oracle::GridFunction& g,
                                  const std::vector<int>& m, const std::vector<int>& n);

/// Frame operator h G G^H of the window over one torus period.
Eigen::MatrixXcd frame_operator(const GaborSystem& sys, const oracle::GridFunction& g);

/// max over |J|, |K| <= jk_max of |<g~, U_{K/alpha, 2 pi J/beta} g> - (alpha beta)^d delta_{J,0} delta_{K,0}|.
/// Throws GridError when the adjoint lattice is not representable.
double adjoint_lattice_deviation(const GaborSystem& sys, int jk_max);

struct TraceEstimate {
  cplx value;
  int m_trunc = 0;
  int n_trunc = 0;
  struct Partial {
    int m;
    int n;
    cplx value;
  };
  std::vector<Partial> convergence_trace;  ///< nested truncations, ending at (m_trunc, n_trunc)
};

/// a_{M,N}(t) with M = m_max, N = n_max. Time shifts of t are applied exactly
/// when grid-aligned and by trigonometric interpolation otherwise.
TraceEstimate trace_estimate(const TFOperator& t, const GaborSystem& sys, int m_max, int n_max);

/// trace_estimate(U_lambda^* t).value, an estimate of the coefficient c_lambda.
cplx recover_coefficient(const TFOperator& t, const TFPoint& lambda, const GaborSystem& sys, int m_max,
                         int n_max);

struct TraceProperties {
  double commutator_gap = 0.0;  ///< |gamma(ab) - gamma(ba)|
  double norm_gap = 0.0;        ///< |gamma(a* a) - sum |c|^2|
  double positivity = 0.0;      ///< Re gamma(a* a)
  cplx gamma_ab;
  cplx gamma_ba;
  cplx gamma_aa;
};

TraceProperties trace_properties_check(const TFOperator& a, const TFOperator& b, const GaborSystem& sys,
                                       int m_max, int n_max);

nlohmann::json to_json(const TraceEstimate& e);

}  // namespace tfalg
