#pragma once

// Brute-force ground truth: L2(R^d) discretized on a periodic grid, dense
// assembly of operators, operator-norm and frame-bound estimates.

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "tfalg/operator.hpp"

namespace tfalg::oracle {

inline constexpr std::size_t kDefaultPointCap = 4096;
/// Dense eigen-decompositions are refused above this many grid points.
inline constexpr std::size_t kDenseCap = 2048;

/// Uniform periodic grid on [-L, L)^d with n samples per axis (n a power of
/// two, n >= 8) and spacing h = 2L / n.
class Grid {
 public:
  Grid(int dim, int n_samples, double half_length, std::size_t point_cap = kDefaultPointCap);

  int dim() const { return dim_; }
  int n_samples() const { return n_; }
  double half_length() const { return L_; }
  double spacing() const { return 2.0 * L_ / n_; }
  /// pi / L: the smallest nonzero frequency that is periodic on the grid.
  double fundamental_frequency() const;
  std::size_t size() const { return size_; }

  /// x_k = -L + k h along one axis.
  double coordinate(int k) const { return -L_ + k * spacing(); }
  /// Per-axis indices of the flat (row-major, axis 0 slowest) index.
  std::vector<int> unflatten(std::size_t index) const;
  std::vector<double> point(std::size_t index) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.L_ == b.L_;
  }

 private:
  int dim_;
  int n_;
  double L_;
  std::size_t size_;
};

/// Complex samples f(x_k) of an L2 function on a grid.
class GridFunction {
 public:
  explicit GridFunction(const Grid& grid);
  GridFunction(const Grid& grid, std::vector<cplx> values);

  template <class F>
  static GridFunction sample(const Grid& grid, F&& f) {
    GridFunction g(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) g.values_[k] = f(grid.point(k));
    return g;
  }

  const Grid& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  cplx operator[](std::size_t k) const { return values_[k]; }
  cplx& operator[](std::size_t k) { return values_[k]; }

  Eigen::VectorXcd to_vector() const;
  static GridFunction from_vector(const Grid& grid, const Eigen::VectorXcd& v);

  /// L2 norm h^{d/2} |f|_2.
  double norm() const;

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

/// <f, g> = h^d sum_k f_k conj(g_k).
cplx inner(const GridFunction& f, const GridFunction& g);

enum class ShiftMode {
  aligned,     ///< every time shift an integer multiple of h (exact permutation)
  bandlimited  ///< trigonometric interpolation for fractional time shifts
};

/// True when every time component of p is an integer multiple of the spacing.
bool is_aligned(const Grid& grid, std::span<const double> t);
/// aligned when every support point is aligned, bandlimited otherwise.
ShiftMode natural_mode(const TFOperator& op, const Grid& grid);

/// (U_lambda f)(x_k) = exp(i omega . x_k) f(x_k - t), periodic wrap-around.
/// Throws GridError for a misaligned t in aligned mode.
GridFunction apply_shift(const GridFunction& f, const TFPoint& lambda, ShiftMode mode);
/// Matrix-free application of sum c_lambda U_lambda.
GridFunction apply(const TFOperator& op, const GridFunction& f, ShiftMode mode);

/// apply() with the per-term shift kernels and phases precomputed, for
/// repeated application of one operator.
class OperatorAction {
 public:
  OperatorAction(const TFOperator& op, const Grid& grid, ShiftMode mode);
  ~OperatorAction();
  OperatorAction(OperatorAction&&) noexcept;
  GridFunction operator()(const GridFunction& f) const;

 private:
  struct Term;
  Grid grid_;
  std::vector<Term> terms_;
};

/// Dense matrix of the operator on the grid (column k = image of the k-th unit
/// sample vector). Throws ResourceLimit above the grid's point cap.
Eigen::MatrixXcd assemble_matrix(const TFOperator& op, const Grid& grid, ShiftMode mode);

struct NormEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Largest singular value. Dense Hermitian eigensolve of M^H M up to kDenseCap
/// points; above that, power iteration on T*T from two fixed-seed starts.
NormEstimate opnorm_estimate(const TFOperator& op, const Grid& grid, int iters, ShiftMode mode);
NormEstimate opnorm_estimate(const TFOperator& op, const Grid& grid, int iters = 500);

struct FrameBounds {
  double a_est = 0.0;    ///< smallest eigenvalue of T*T, deflated by the margin
  double b_est = 0.0;    ///< largest eigenvalue of T*T, inflated by the margin
  double a_exact = 0.0;  ///< undeflated grid value
  double b_exact = 0.0;
};

/// Extreme eigenvalues of the Hermitian matrix of T*T with multiplicative
/// safety margins. Throws SingularOperator when the smallest eigenvalue is not
/// positive relative to the largest.
FrameBounds frame_bounds_estimate(const TFOperator& op, const Grid& grid, ShiftMode mode,
                                  double margin = 0.01);
FrameBounds frame_bounds_estimate(const TFOperator& op, const Grid& grid, double margin = 0.01);

/// Binary little-endian interleaved (re, im) doubles at `path`, JSON sidecar
/// {"d", "n_samples", "L"} at `path` + ".json".
void write_grid_function(const std::filesystem::path& path, const GridFunction& f);
GridFunction read_grid_function(const std::filesystem::path& path);

}  // namespace tfalg::oracle
