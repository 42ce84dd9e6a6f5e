#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "tfalg/errors.hpp"
#include "tfalg/operator_io.hpp"
#include "tfalg/window.hpp"

namespace tfalg {

namespace {

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

bool is_zero(const std::vector<double>& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return quantize(v) == 0; });
}

std::vector<std::int64_t> vec_key(const std::vector<double>& x) {
  std::vector<std::int64_t> k;
  for (double v : x) k.push_back(quantize(v));
  return k;
}

// Distinct vectors (by quantized value), in key order.
std::vector<std::vector<double>> distinct(const std::vector<std::vector<double>>& xs) {
  std::map<std::vector<std::int64_t>, std::vector<double>> seen;
  for (const auto& x : xs) seen.emplace(vec_key(x), x);
  std::vector<std::vector<double>> out;
  for (auto& [k, v] : seen) out.push_back(v);
  return out;
}

// First nonzero component positive.
bool leading_positive(const std::vector<double>& x) {
  for (double v : x)
    if (quantize(v) != 0) return v > 0.0;
  return false;
}

// Every nonzero component a nonzero multiple of q.
bool on_quantum(const std::vector<double>& t, double q) {
  for (double v : t) {
    const double r = v / q;
    if (std::abs(r - std::round(r)) > 1e-9) return false;
    if (v != 0.0 && std::round(r) == 0.0) return false;
  }
  return true;
}

}  // namespace

double WindowPlan::required_half_length() const {
  double s = tau_min + tau_max;
  for (const auto& t : shifts) s += norm2(t);
  return s;
}

WindowPlan plan_window(const std::vector<TFPoint>& sigma, double time_quantum) {
  if (sigma.empty()) throw PreconditionError("Sigma must be nonempty");
  if (!(time_quantum >= 0.0) || !std::isfinite(time_quantum))
    throw PreconditionError("time quantum must be >= 0");
  WindowPlan plan;
  plan.dim = sigma.front().dim();
  plan.sigma = sigma;
  plan.time_quantum = time_quantum;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i].dim() != plan.dim) throw DimensionMismatch(plan.dim, sigma[i].dim());
    for (std::size_t j = 0; j < i; ++j)
      if (sigma[i] == sigma[j]) throw PreconditionError("Sigma contains a repeated point");
  }

  std::map<std::vector<std::int64_t>, TFPoint> deltas;
  for (const auto& a : sigma)
    for (const auto& b : sigma) {
      TFPoint p = a - b;
      deltas.emplace(p.key(), p);
    }
  std::vector<std::vector<double>> ts, ws;
  for (auto& [k, p] : deltas) {
    plan.delta_set.push_back(p);
    ts.emplace_back(p.t().begin(), p.t().end());
    ws.emplace_back(p.omega().begin(), p.omega().end());
  }
  plan.time_proj = distinct(ts);
  plan.freq_proj = distinct(ws);

  double min_t = std::numeric_limits<double>::infinity(), max_t = 0.0;
  for (const auto& t : plan.time_proj) {
    if (is_zero(t)) continue;
    min_t = std::min(min_t, norm2(t));
    max_t = std::max(max_t, norm2(t));
  }
  // 0.45 < 1/2 leaves a gap between a bump and its translate by any t in T \ {0}.
  plan.tau_min = std::isfinite(min_t) ? 0.45 * min_t : 1.0;
  plan.tau_max = std::isfinite(min_t) ? max_t : plan.tau_min;

  for (const auto& w : plan.freq_proj)
    if (!is_zero(w) && leading_positive(w)) plan.omegas.push_back(w);

  const double big_m = static_cast<double>(plan.omegas.size());
  double used = 0.0;
  for (std::size_t k = 0; k < plan.omegas.size(); ++k) {
    const auto& w = plan.omegas[k];
    const double wn = norm2(w);
    const double bound = k == 0 ? plan.tau_max + 2.0 * plan.tau_min : used + 2.0 * big_m * plan.tau_max;
    // |t_k| = (2n+1) pi / |omega_k| must exceed the bound.
    long long n = std::max(0LL, static_cast<long long>(std::ceil((bound * wn / std::numbers::pi - 1.0) / 2.0)));
    while ((2.0 * n + 1.0) * std::numbers::pi / wn <= bound) ++n;
    auto shift_for = [&](long long nn) {
      std::vector<double> t(w.size());
      const double f = (2.0 * nn + 1.0) * std::numbers::pi / (wn * wn);
      for (std::size_t a = 0; a < w.size(); ++a) t[a] = f * w[a];
      return t;
    };
    std::vector<double> t = shift_for(n);
    if (time_quantum > 0.0) {
      bool found = false;
      for (long long nn = n; nn < n + 100000; ++nn) {
        std::vector<double> cand = shift_for(nn);
        if (on_quantum(cand, time_quantum)) {
          for (double& v : cand) v = std::round(v / time_quantum) * time_quantum;
          t = std::move(cand);
          n = nn;
          found = true;
          break;
        }
      }
      plan.quantized = plan.quantized && found;
    }
    used += norm2(t);
    plan.shifts.push_back(std::move(t));
    plan.parities.push_back(n);
  }
  return plan;
}

WindowSetup plan_on_grid(const std::vector<TFPoint>& sigma, int n_samples) {
  const WindowPlan rough = plan_window(sigma);
  double half = std::exp2(std::ceil(std::log2(std::max(rough.required_half_length(), 1e-6))));
  for (int attempt = 0; attempt < 40; ++attempt, half *= 2.0) {
    const double h = 2.0 * half / n_samples;
    WindowPlan plan = plan_window(sigma, h);
    if (plan.quantized && plan.required_half_length() + h <= half)
      return {std::move(plan), oracle::Grid(rough.dim, n_samples, half)};
  }
  throw GridError("no power-of-two grid half length puts the window shifts on the grid");
}

nlohmann::json to_json(const WindowPlan& plan) {
  nlohmann::json sigma = nlohmann::json::array(), delta = nlohmann::json::array();
  for (const auto& p : plan.sigma) sigma.push_back(to_json(p));
  for (const auto& p : plan.delta_set) delta.push_back(to_json(p));
  return nlohmann::json{{"dim", plan.dim},
                        {"sigma", std::move(sigma)},
                        {"delta_set", std::move(delta)},
                        {"time_proj", plan.time_proj},
                        {"freq_proj", plan.freq_proj},
                        {"tau_min", plan.tau_min},
                        {"tau_max", plan.tau_max},
                        {"M", plan.m()},
                        {"omegas", plan.omegas},
                        {"shifts", plan.shifts},
                        {"parities", plan.parities},
                        {"time_quantum", plan.time_quantum},
                        {"quantized", plan.quantized},
                        {"required_L", plan.required_half_length()}};
}

}  // namespace tfalg
