#pragma once

// Fixed-seed fixture generators and small oracle helpers shared by the unit
// and acceptance tests.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tfalg/algebra.hpp"
#include "tfalg/oracle.hpp"

namespace tfalg::testing {

using Rng = std::mt19937_64;

inline cplx gaussian_coeff(Rng& rng) {
  std::normal_distribution<double> n;
  return {n(rng), n(rng)};
}

// Point with t a multiple of the spacing and omega a multiple of pi / L, with
// |t| <= t_steps h and |omega| <= w_steps pi / L per axis.
inline TFPoint aligned_point(Rng& rng, const oracle::Grid& grid, int t_steps, int w_steps) {
  std::uniform_int_distribution<int> ti(-t_steps, t_steps), wi(-w_steps, w_steps);
  std::vector<double> t, w;
  for (int a = 0; a < grid.dim(); ++a) {
    t.push_back(ti(rng) * grid.spacing());
    w.push_back(wi(rng) * grid.fundamental_frequency());
  }
  return {t, w};
}

inline TFOperator random_aligned(Rng& rng, const oracle::Grid& grid, int max_terms, int t_steps = 16,
                                 int w_steps = 16) {
  std::uniform_int_distribution<int> count(1, max_terms);
  const int k = count(rng);
  TermAccumulator acc(grid.dim());
  for (int i = 0; i < k; ++i) acc.add(aligned_point(rng, grid, t_steps, w_steps), gaussian_coeff(rng));
  return std::move(acc).build();
}

// Arbitrary real points in [-range, range]^{2d}.
inline TFOperator random_operator(Rng& rng, int dim, int terms, double range) {
  std::uniform_real_distribution<double> u(-range, range);
  TermAccumulator acc(dim);
  for (int i = 0; i < terms; ++i) {
    std::vector<double> t, w;
    for (int a = 0; a < dim; ++a) {
      t.push_back(u(rng));
      w.push_back(u(rng));
    }
    acc.add(TFPoint(t, w), gaussian_coeff(rng));
  }
  return std::move(acc).build();
}

// c0 U_0 plus k - 1 aligned terms with sum |c| = margin |c0|.
inline TFOperator contraction_channel(Rng& rng, const oracle::Grid& grid, int k, double margin,
                                      int t_steps = 8, int w_steps = 8) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const cplx c0 = std::polar(1.0, phase(rng));
  std::vector<TFPoint> pts;
  std::vector<cplx> cs;
  double total = 0.0;
  while (static_cast<int>(pts.size()) < k - 1) {
    TFPoint p = aligned_point(rng, grid, t_steps, w_steps);
    if (p.is_origin()) continue;
    bool seen = false;
    for (const auto& q : pts) seen = seen || q == p;
    if (seen) continue;
    pts.push_back(p);
    cs.push_back(gaussian_coeff(rng));
    total += std::abs(cs.back());
  }
  TermAccumulator acc(grid.dim());
  acc.add(TFPoint::origin(grid.dim()), c0);
  for (std::size_t i = 0; i < pts.size(); ++i) acc.add(pts[i], cs[i] * (margin / total));
  return std::move(acc).build();
}

inline double frobenius_relative(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

inline oracle::GridFunction gaussian(const oracle::Grid& grid, double center = 0.0, double width = 1.0) {
  return oracle::GridFunction::sample(grid, [&](const std::vector<double>& x) {
    double r2 = 0.0;
    for (double v : x) r2 += (v - center) * (v - center);
    return cplx(std::exp(-0.5 * r2 / (width * width)));
  });
}

}  // namespace tfalg::testing
