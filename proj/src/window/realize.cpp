#include <cmath>
#include <map>

#include "tfalg/errors.hpp"
#include "tfalg/window.hpp"

namespace tfalg {

namespace {

using Offset = std::vector<int>;
using Sparse = std::map<Offset, double>;

// Grid offsets z with |z h| <= r.
std::vector<Offset> ball_offsets(int d, double r, double h) {
  const int reach = static_cast<int>(std::floor(r / h + 1e-9));
  std::vector<Offset> out;
  Offset z(static_cast<std::size_t>(d), -reach);
  while (true) {
    double s = 0.0;
    for (int v : z) s += (v * h) * (v * h);
    if (std::sqrt(s) <= r * (1.0 + 1e-12)) out.push_back(z);
    int a = d - 1;
    while (a >= 0 && ++z[static_cast<std::size_t>(a)] > reach) z[static_cast<std::size_t>(a--)] = -reach;
    if (a < 0) break;
  }
  return out;
}

Offset grid_offset(const std::vector<double>& t, double h) {
  Offset z;
  for (double v : t) z.push_back(static_cast<int>(std::lround(v / h)));
  return z;
}

double bump_radius(const WindowPlan& plan) { return plan.m() > 0 ? plan.tau_min / plan.m() : plan.tau_min; }

// h_k = 1_E + 1_{t_k + E} on grid offsets.
Sparse bump_pair(const WindowPlan& plan, int k, const std::vector<Offset>& ball, double h) {
  const Offset s = grid_offset(plan.shifts[static_cast<std::size_t>(k)], h);
  Sparse out;
  for (const auto& z : ball) {
    out[z] += 1.0;
    Offset y = z;
    for (std::size_t a = 0; a < y.size(); ++a) y[a] += s[a];
    out[y] += 1.0;
  }
  return out;
}

Sparse convolve(const Sparse& a, const Sparse& b, double scale) {
  Sparse out;
  for (const auto& [za, va] : a)
    for (const auto& [zb, vb] : b) {
      Offset z = za;
      for (std::size_t i = 0; i < z.size(); ++i) z[i] += zb[i];
      out[z] += scale * va * vb;
    }
  return out;
}

}  // namespace

oracle::GridFunction realize_window(const WindowPlan& plan, const oracle::Grid& grid) {
  if (grid.dim() != plan.dim) throw DimensionMismatch(plan.dim, grid.dim());
  const double h = grid.spacing();
  const double need = plan.required_half_length() + h;
  if (grid.half_length() < need)
    throw GridError("grid too small for the window: need L >= " + std::to_string(need) + ", got L = " +
                    std::to_string(grid.half_length()));
  const auto ball = ball_offsets(plan.dim, bump_radius(plan), h);
  const double cell = std::pow(h, plan.dim);

  Sparse conv;
  if (plan.m() == 0) {
    for (const auto& z : ball) conv[z] = 1.0;
  } else {
    conv = bump_pair(plan, 0, ball, h);
    for (int k = 1; k < plan.m(); ++k) conv = convolve(conv, bump_pair(plan, k, ball, h), cell);
  }

  oracle::GridFunction g(grid);
  const int n = grid.n_samples();
  for (const auto& [z, v] : conv) {
    std::size_t flat = 0;
    for (int za : z) {
      const int k = n / 2 + za;  // x = 0 sits at index n/2
      if (k < 0 || k >= n) throw GridError("window support leaves the grid; increase L");
      flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(k);
    }
    g[flat] = std::sqrt(std::max(0.0, v));
  }
  const double norm = g.norm();
  for (auto& x : g.values()) x /= norm;
  return g;
}

std::vector<double> fourier_zero_residuals(const WindowPlan& plan, const oracle::Grid& grid) {
  const double h = grid.spacing();
  const auto ball = ball_offsets(plan.dim, bump_radius(plan), h);
  const double cell = std::pow(h, plan.dim);
  std::vector<double> out;
  for (int k = 0; k < plan.m(); ++k) {
    const auto& w = plan.omegas[static_cast<std::size_t>(k)];
    cplx s = 0.0;
    for (const auto& [z, v] : bump_pair(plan, k, ball, h)) {
      double phase = 0.0;
      for (std::size_t a = 0; a < z.size(); ++a) phase -= w[a] * z[a] * h;
      s += v * std::polar(1.0, phase);
    }
    out.push_back(std::abs(cell * s));
  }
  return out;
}

GramReport verify_orthonormal(const oracle::GridFunction& g, const std::vector<TFPoint>& sigma, double tol) {
  const oracle::Grid& grid = g.grid();
  bool aligned = true;
  for (const auto& p : sigma) {
    if (p.dim() != grid.dim()) throw DimensionMismatch(grid.dim(), p.dim());
    aligned = aligned && oracle::is_aligned(grid, p.t());
  }
  const auto mode = aligned ? oracle::ShiftMode::aligned : oracle::ShiftMode::bandlimited;
  std::vector<oracle::GridFunction> shifted;
  for (const auto& p : sigma) shifted.push_back(oracle::apply_shift(g, p, mode));
  GramReport r;
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    std::vector<cplx> row;
    for (std::size_t k = 0; k < sigma.size(); ++k) {
      const cplx v = oracle::inner(shifted[j], shifted[k]);
      row.push_back(v);
      r.max_deviation = std::max(r.max_deviation, std::abs(v - (j == k ? cplx(1.0) : cplx(0.0))));
    }
    r.gram.push_back(std::move(row));
  }
  r.pass = r.max_deviation <= tol;
  return r;
}

std::size_t support_overlap(const oracle::GridFunction& g, const std::vector<double>& t) {
  const int d = g.grid().dim();
  if (static_cast<int>(t.size()) != d) throw DimensionMismatch(d, static_cast<int>(t.size()));
  const oracle::GridFunction s =
      oracle::apply_shift(g, TFPoint(t, std::vector<double>(t.size(), 0.0)), oracle::ShiftMode::aligned);
  std::size_t count = 0;
  for (std::size_t k = 0; k < g.grid().size(); ++k)
    if (g[k] != 0.0 && s[k] != 0.0) ++count;
  return count;
}

nlohmann::json to_json(const GramReport& r) {
  nlohmann::json gram = nlohmann::json::array();
  for (const auto& row : r.gram) {
    nlohmann::json jr = nlohmann::json::array();
    for (cplx v : row) jr.push_back({v.real(), v.imag()});
    gram.push_back(std::move(jr));
  }
  return nlohmann::json{{"gram", std::move(gram)}, {"max_deviation", r.max_deviation}, {"pass", r.pass}};
}

}  // namespace tfalg
