#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>

#include "tfalg/algebra.hpp"
#include "tfalg/errors.hpp"
#include "tfalg/invert.hpp"

namespace tfalg {

std::size_t term_cap() {
  if (const char* env = std::getenv("TFALG_TERM_CAP")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultTermCap;
}

std::string to_string(InversionMode mode) {
  return mode == InversionMode::contraction ? "contraction" : "symmetric";
}

double inversion_residual(const TFOperator& t, const TFOperator& x, const Weight& v) {
  const TFOperator one = TFOperator::identity(t.dim());
  auto side = [&](const TFOperator& a, const TFOperator& b) {
    DropReport dropped;
    const TFOperator prod = compose(a, b, dropped);
    const TFOperator diff = axpy(-1.0, one, prod, dropped);
    return norm_av(diff, v) + dropped.weighted(v);
  };
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * norm_av(t, v) * norm_av(x, v);
  return std::max(side(t, x), side(x, t)) + slack;
}

namespace {

void check_cap(const TFOperator& op, std::size_t cap, const char* what) {
  if (op.size() > cap)
    throw ResourceLimit(std::string(what) + " has " + std::to_string(op.size()) +
                        " live terms, above the cap of " + std::to_string(cap) +
                        " (set TFALG_TERM_CAP to raise it)");
}

// Sums S = sum_n Q^n and returns finish(S) once the measured residual of the
// finished operator is below tol. `gain` converts accumulated truncation error
// in S into residual error; `q_norm` bounds |Q|_v for error propagation.
struct Series {
  const TFOperator& t;
  const TFOperator& q;
  const Weight& v;
  double q_norm;
  double gain;
  std::function<TFOperator(const TFOperator&)> finish;
};

struct SeriesOutcome {
  TFOperator x;
  int iterations = 0;
  double residual = 0.0;
  double truncated = 0.0;
  int restarts = 0;
  bool converged = false;
};

SeriesOutcome sum_series(const Series& s, double tol, int max_iter, double per_step) {
  const std::size_t cap = term_cap();
  const int d = s.t.dim();
  constexpr int kMaxRestarts = 3;
  SeriesOutcome out;
  for (int attempt = 0; attempt <= kMaxRestarts; ++attempt) {
    TFOperator sum = TFOperator::identity(d);
    TFOperator term = TFOperator::identity(d);
    double term_err = 0.0;   // bound on |term - Q^n|_v
    double total_err = 0.0;  // bound on |sum - sum_k Q^k|_v
    double truncated = 0.0;
    double last_failed = std::numeric_limits<double>::infinity();
    int next_measure = 0;
    bool restart = false;
    for (int n = 0;; ++n) {
      DropReport dropped;
      TFOperator next = compose(term, s.q, dropped);
      // With |Q|_v >= 1 the propagated bound grows geometrically and says
      // nothing; count each discarded mass once and let the measured
      // residual decide.
      const double carry = s.q_norm < 1.0 ? s.q_norm : 0.0;
      double next_err = term_err * carry + dropped.weighted(s.v);
      Truncation tr = truncate(next, s.v, per_step);
      next = std::move(tr.op);
      next_err += tr.discarded;
      truncated += tr.discarded;
      check_cap(next, cap, "Neumann series term");

      // Residual of the partial sum up to n is |Q^{n+1}| plus the truncation error.
      const double tail = norm_av(next, s.v) + next_err;
      const double gate = tail + s.gain * total_err;
      const bool settled = tail <= 0.25 * tol;  // further terms cannot help much
      if (((gate <= 0.5 * tol || settled) && n >= next_measure) || n >= max_iter) {
        TFOperator x = s.finish(sum);
        const double res = inversion_residual(s.t, x, s.v);
        out = {std::move(x), n, res, truncated, attempt, res <= tol};
        if (out.converged || n >= max_iter) return out;
        const bool stalled = res > 0.5 * last_failed;
        if (s.gain * total_err >= 0.25 * tol || (settled && stalled)) {
          if (attempt < kMaxRestarts && s.gain * total_err > 0.0) {
            restart = true;
            break;
          }
          if (settled && stalled) return out;
        }
        last_failed = res;
        next_measure = n + std::max(1, n / 8);
      }
      sum = axpy(1.0, next, sum);
      check_cap(sum, cap, "Neumann partial sum");
      total_err += next_err;
      term = std::move(next);
      term_err = next_err;
    }
    if (!restart) break;
    per_step /= 16.0;
  }
  return out;
}

int estimated_terms(double ratio, double tol, int max_iter) {
  if (!(ratio > 0.0)) return 1;
  const double n = std::ceil(std::log(tol / 4.0) / std::log(ratio)) + 1.0;
  return static_cast<int>(std::clamp(n, 1.0, static_cast<double>(std::max(1, max_iter))));
}

void check_tol(double tol, int max_iter) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw PreconditionError("tolerance must be > 0");
  if (max_iter < 0) throw PreconditionError("max_iter must be >= 0");
}

}  // namespace

InversionReport neumann_invert_contraction(const TFOperator& t, const Weight& v, double tol,
                                           int max_iter) {
  check_tol(tol, max_iter);
  const cplx c0 = t.coefficient_at(TFPoint::origin(t.dim()));
  if (c0 == 0.0) throw PreconditionError("not contractive: the operator has no identity component");
  const TFOperator p = axpy(-1.0 / c0, t, TFOperator::identity(t.dim()));
  const double q_v = norm_av(p, v);
  if (!(q_v < 1.0))
    throw PreconditionError("not contractive: sum of weighted |c| off the origin relative to |c0| is " +
                            std::to_string(q_v) + " >= 1");
  const double q1 = norm_av(p, Weight::constant());
  const double a0 = std::abs(c0);

  const int n_est = estimated_terms(q_v, tol, max_iter);
  const double gain = (1.0 + q_v) / (1.0 - q_v);
  const double per_step = 0.25 * tol / (gain * n_est);
  Series s{t, p, v, q_v, gain, [&](const TFOperator& sum) { return scale(1.0 / c0, sum); }};
  SeriesOutcome o = sum_series(s, tol, max_iter, per_step);

  InversionReport r;
  r.inverse = std::move(o.x);
  r.mode = InversionMode::contraction;
  r.iterations = o.iterations;
  r.residual_av = o.residual;
  r.a_bound = a0 * a0 * (1.0 - q1) * (1.0 - q1);
  r.b_bound = a0 * a0 * (1.0 + q1) * (1.0 + q1);
  r.ratio = (r.b_bound - r.a_bound) / (r.b_bound + r.a_bound);
  r.truncated_mass = o.truncated;
  r.restarts = o.restarts;
  r.converged = o.converged;
  return r;
}

InversionReport neumann_invert_symmetric(const TFOperator& t, const Weight& v, double a_bound,
                                         double b_bound, double tol, int max_iter) {
  check_tol(tol, max_iter);
  if (!(a_bound > 0.0) || !std::isfinite(b_bound) || a_bound > b_bound)
    throw PreconditionError("invalid frame bounds: need 0 < A <= B, got A = " + std::to_string(a_bound) +
                            ", B = " + std::to_string(b_bound));
  if (t.empty()) throw SingularOperator("zero operator is not invertible");
  const double kappa = 2.0 / (a_bound + b_bound);
  const double theta = (b_bound - a_bound) / (b_bound + a_bound);
  const TFOperator ts = adjoint(t);
  const TFOperator tt = compose(ts, t);
  const TFOperator rem = axpy(-kappa, tt, TFOperator::identity(t.dim()));
  const double r_v = norm_av(rem, v);

  const int n_est = estimated_terms(theta, tol, max_iter);
  const double gain = kappa * norm_av(tt, v) / std::max(1e-3, 1.0 - theta);
  const double per_step = 0.25 * tol / (std::max(gain, 1.0) * n_est);
  Series s{t, rem, v, r_v, gain, [&](const TFOperator& sum) { return scale(kappa, compose(sum, ts)); }};
  SeriesOutcome o = sum_series(s, tol, max_iter, per_step);

  InversionReport r;
  r.inverse = std::move(o.x);
  r.mode = InversionMode::symmetric;
  r.iterations = o.iterations;
  r.residual_av = o.residual;
  r.a_bound = a_bound;
  r.b_bound = b_bound;
  r.ratio = theta;
  r.truncated_mass = o.truncated;
  r.restarts = o.restarts;
  r.converged = o.converged;
  return r;
}

}  // namespace tfalg
