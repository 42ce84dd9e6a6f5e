#pragma once

// Windows g whose time-frequency shifts {U_sigma g : sigma in Sigma} form an
// orthonormal set, for a finite Sigma:
//   g = sqrt(h_1 * ... * h_M) / |sqrt(h_1 * ... * h_M)|,
//   h_k = 1_E + 1_{t_k + E},  E the ball of radius tau_min / M,
// where <t_k, omega_k> is an odd multiple of pi, so the Fourier transform of
// h_k vanishes at omega_k.

#include <vector>

#include "json.hpp"
#include "tfalg/oracle.hpp"

namespace tfalg {

struct WindowPlan {
  int dim = 1;
  std::vector<TFPoint> sigma;
  std::vector<TFPoint> delta_set;               ///< Sigma - Sigma
  std::vector<std::vector<double>> time_proj;   ///< time components of the delta set
  std::vector<std::vector<double>> freq_proj;   ///< frequency components of the delta set
  double tau_min = 0.0;
  double tau_max = 0.0;
  std::vector<std::vector<double>> omegas;  ///< one representative per +-pair of nonzero frequencies
  std::vector<std::vector<double>> shifts;  ///< t_k, parallel to omega_k
  std::vector<long long> parities;          ///< n_k with <t_k, omega_k> = (2 n_k + 1) pi
  double time_quantum = 0.0;  ///< every t_k is a multiple of this (0: unconstrained)
  bool quantized = true;      ///< false if some t_k could not be put on the quantum

  int m() const { return static_cast<int>(shifts.size()); }
  /// Smallest half length L of a grid holding the window and its shifts.
  double required_half_length() const;
};

/// Builds the plan. t_k is the shortest vector along omega_k with an odd
/// multiple of pi as inner product, a multiple of time_quantum when that is
/// positive, and |t_1| > tau_max + 2 tau_min, |t_{k+1}| > |t_1| + ... + |t_k| + 2 M tau_max.
/// Throws PreconditionError for an empty, mixed-dimension or repeated Sigma.
WindowPlan plan_window(const std::vector<TFPoint>& sigma, double time_quantum = 0.0);

/// Samples the window on the grid (bump sums by sparse discrete convolution).
/// Throws GridError with the required L when the grid is too small.
oracle::GridFunction realize_window(const WindowPlan& plan, const oracle::Grid& grid);

/// Grid with n_samples per axis and the smallest power-of-two L that holds
/// the window, together with a plan quantized to its spacing. The shifts can
/// only land on such a grid when every omega_k is a dyadic rational multiple
/// of pi (up to direction); GridError otherwise.
struct WindowSetup {
  WindowPlan plan;
  oracle::Grid grid;
};
WindowSetup plan_on_grid(const std::vector<TFPoint>& sigma, int n_samples);

struct GramReport {
  std::vector<std::vector<cplx>> gram;  ///< <U_{sigma_j} g, U_{sigma_k} g>
  double max_deviation = 0.0;           ///< max |G - I|
  bool pass = false;
};

GramReport verify_orthonormal(const oracle::GridFunction& g, const std::vector<TFPoint>& sigma, double tol);

/// |h^d sum_x h_k(x) exp(-i <omega_k, x>)| for each k, by direct summation at
/// the exact frequency.
std::vector<double> fourier_zero_residuals(const WindowPlan& plan, const oracle::Grid& grid);

/// Grid points where both g and its time shift by t are nonzero.
std::size_t support_overlap(const oracle::GridFunction& g, const std::vector<double>& t);

nlohmann::json to_json(const WindowPlan& plan);
nlohmann::json to_json(const GramReport& r);

}  // namespace tfalg
