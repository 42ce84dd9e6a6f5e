#include <cmath>

#include "gabor_detail.hpp"
#include "tfalg/algebra.hpp"
#include "tfalg/errors.hpp"
#include "tfalg/gabor.hpp"

namespace tfalg {

namespace {

// <T g_{m,n}, g~_{m,n}> over one torus period of the lattice, flattened with
// m (then n) multi-indices in for_each_index order.
std::vector<cplx> period_table(const TFOperator& t, const GaborSystem& sys) {
  const oracle::OperatorAction action(t, sys.grid, oracle::natural_mode(t, sys.grid));
  std::vector<cplx> table;
  detail::for_each_index(sys.grid.dim(), sys.period_m, [&](const std::vector<int>& m) {
    detail::for_each_index(sys.grid.dim(), sys.period_n, [&](const std::vector<int>& n) {
      const oracle::GridFunction tg = action(lattice_atom(sys, sys.window, m, n));
      table.push_back(oracle::inner(tg, lattice_atom(sys, sys.dual, m, n)));
    });
  });
  return table;
}

// How many m in [-M, M] fall in each residue class modulo p.
std::vector<double> residue_counts(int big_m, int p) {
  std::vector<double> c(static_cast<std::size_t>(p), 0.0);
  for (int m = -big_m; m <= big_m; ++m) c[static_cast<std::size_t>(((m % p) + p) % p)] += 1.0;
  return c;
}

cplx average(const std::vector<cplx>& table, const GaborSystem& sys, int big_m, int big_n) {
  const int d = sys.grid.dim();
  const auto cm = residue_counts(big_m, sys.period_m);
  const auto cn = residue_counts(big_n, sys.period_n);
  cplx sum = 0.0;
  std::size_t pos = 0;
  detail::for_each_index(d, sys.period_m, [&](const std::vector<int>& m) {
    double wm = 1.0;
    for (int ma : m) wm *= cm[static_cast<std::size_t>(ma)];
    detail::for_each_index(d, sys.period_n, [&](const std::vector<int>& n) {
      double w = wm;
      for (int na : n) w *= cn[static_cast<std::size_t>(na)];
      sum += w * table[pos++];
    });
  });
  const double count = std::pow((2.0 * big_m + 1.0) * (2.0 * big_n + 1.0), d);
  return sum / (count * std::pow(sys.alpha * sys.beta, d));
}

}  // namespace

TraceEstimate trace_estimate(const TFOperator& t, const GaborSystem& sys, int m_max, int n_max) {
  if (t.dim() != sys.grid.dim()) throw DimensionMismatch(sys.grid.dim(), t.dim());
  if (m_max < 0 || n_max < 0) throw PreconditionError("truncations M, N must be >= 0");
  TraceEstimate e;
  e.m_trunc = m_max;
  e.n_trunc = n_max;
  if (t.empty()) {
    e.value = 0.0;
    e.convergence_trace.push_back({m_max, n_max, 0.0});
    return e;
  }
  const std::vector<cplx> table = period_table(t, sys);
  for (int k = 1; k < std::max(m_max, n_max); k *= 2) {
    const int m = std::min(k, m_max), n = std::min(k, n_max);
    e.convergence_trace.push_back({m, n, average(table, sys, m, n)});
  }
  e.value = average(table, sys, m_max, n_max);
  e.convergence_trace.push_back({m_max, n_max, e.value});
  return e;
}

cplx recover_coefficient(const TFOperator& t, const TFPoint& lambda, const GaborSystem& sys, int m_max, int n_max) {
  if (lambda.dim() != t.dim()) throw DimensionMismatch(t.dim(), lambda.dim());
  const TFOperator shifted = compose(adjoint(TFOperator::single(lambda)), t);
  return trace_estimate(shifted, sys, m_max, n_max).value;
}

TraceProperties trace_properties_check(const TFOperator& a, const TFOperator& b, const GaborSystem& sys, int m_max,
                                       int n_max) {
  TraceProperties r;
  r.gamma_ab = trace_estimate(compose(a, b), sys, m_max, n_max).value;
  r.gamma_ba = trace_estimate(compose(b, a), sys, m_max, n_max).value;
  r.gamma_aa = trace_estimate(compose(adjoint(a), a), sys, m_max, n_max).value;
  const double l2 = coeff_norms(a).l2;
  r.commutator_gap = std::abs(r.gamma_ab - r.gamma_ba);
  r.norm_gap = std::abs(r.gamma_aa - l2 * l2);
  r.positivity = r.gamma_aa.real();
  return r;
}

nlohmann::json to_json(const TraceEstimate& e) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& p : e.convergence_trace) trace.push_back({p.m, p.n, p.value.real(), p.value.imag()});
  return nlohmann::json{{"value", {e.value.real(), e.value.imag()}}, {"M", e.m_trunc}, {"N", e.n_trunc},
                        {"trace", std::move(trace)}};
}

}  // namespace tfalg
