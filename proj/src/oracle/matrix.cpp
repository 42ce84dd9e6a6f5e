#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "shift_kernel.hpp"
#include "tfalg/errors.hpp"
#include "tfalg/oracle.hpp"

namespace tfalg::oracle {

namespace {

void check_dim(const TFOperator& op, const Grid& grid) {
  if (op.dim() != grid.dim()) throw DimensionMismatch(grid.dim(), op.dim());
}

// T^H u, using that the adjoint of the circulant for t is the circulant for -t.
// Phases and kernels are prepared once for the power iteration.
class AdjointAction {
 public:
  AdjointAction(const TFOperator& op, const Grid& grid, ShiftMode mode) : grid_(grid) {
    for (std::size_t i = 0; i < op.size(); ++i) {
      Term term{std::conj(op.coeff(i)), detail::modulation(grid, op.omega(i)), {}};
      for (auto& p : term.phase) p = std::conj(p);
      for (int a = 0; a < grid.dim(); ++a) {
        const double t = op.t(i)[static_cast<std::size_t>(a)];
        if (t != 0.0) term.kernels.emplace_back(a, detail::axis_kernel(grid, -t, mode));
      }
      terms_.push_back(std::move(term));
    }
  }

  GridFunction operator()(const GridFunction& u) const {
    GridFunction out(grid_);
    std::vector<cplx> data(grid_.size());
    for (const auto& term : terms_) {
      for (std::size_t k = 0; k < grid_.size(); ++k) data[k] = term.phase[k] * u[k];
      for (const auto& [axis, kernel] : term.kernels) detail::apply_axis(data, grid_, axis, kernel);
      for (std::size_t k = 0; k < grid_.size(); ++k) out[k] += term.coeff * data[k];
    }
    return out;
  }

 private:
  struct Term {
    cplx coeff;
    std::vector<cplx> phase;
    std::vector<std::pair<int, detail::AxisKernel>> kernels;
  };
  Grid grid_;
  std::vector<Term> terms_;
};

Eigen::VectorXd gram_eigenvalues(const TFOperator& op, const Grid& grid, ShiftMode mode) {
  if (grid.size() > kDenseCap)
    throw ResourceLimit("dense eigen-decomposition refused above " + std::to_string(kDenseCap) +
                        " grid points");
  const Eigen::MatrixXcd m = assemble_matrix(op, grid, mode);
  const Eigen::MatrixXcd g = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigen-decomposition failed");
  return es.eigenvalues();
}

}  // namespace

Eigen::MatrixXcd assemble_matrix(const TFOperator& op, const Grid& grid, ShiftMode mode) {
  check_dim(op, grid);
  const std::size_t n_pts = grid.size();
  if (n_pts > kDefaultPointCap)
    throw ResourceLimit("matrix assembly refused above " + std::to_string(kDefaultPointCap) + " points");
  const int d = grid.dim();
  const int n = grid.n_samples();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n_pts),
                                              static_cast<Eigen::Index>(n_pts));
  std::vector<std::vector<int>> idx(n_pts);
  for (std::size_t k = 0; k < n_pts; ++k) idx[k] = grid.unflatten(k);

  for (std::size_t i = 0; i < op.size(); ++i) {
    const auto phase = detail::modulation(grid, op.omega(i));
    std::vector<detail::AxisKernel> kernels;
    bool permutation = true;
    for (int a = 0; a < d; ++a) {
      kernels.push_back(detail::axis_kernel(grid, op.t(i)[static_cast<std::size_t>(a)], mode));
      permutation = permutation && kernels.back().permutation;
    }
    const cplx c = op.coeff(i);
    if (permutation) {
      // Row k receives column l with l_a = k_a - offset_a.
      for (std::size_t k = 0; k < n_pts; ++k) {
        std::size_t l = 0;
        for (int a = 0; a < d; ++a) {
          const int la = (idx[k][static_cast<std::size_t>(a)] - kernels[static_cast<std::size_t>(a)].offset + n) % n;
          l = l * static_cast<std::size_t>(n) + static_cast<std::size_t>(la);
        }
        m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) += c * phase[k];
      }
      continue;
    }
    for (std::size_t k = 0; k < n_pts; ++k) {
      const cplx row = c * phase[k];
      for (std::size_t l = 0; l < n_pts; ++l) {
        cplx v = row;
        for (int a = 0; a < d; ++a) {
          const auto ua = static_cast<std::size_t>(a);
          v *= kernels[ua].column[static_cast<std::size_t>((idx[k][ua] - idx[l][ua] + n) % n)];
        }
        m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) += v;
      }
    }
  }
  return m;
}

NormEstimate opnorm_estimate(const TFOperator& op, const Grid& grid, int iters, ShiftMode mode) {
  check_dim(op, grid);
  if (op.empty()) return {0.0, true, 0};
  if (grid.size() <= kDenseCap) {
    const Eigen::VectorXd ev = gram_eigenvalues(op, grid, mode);
    return {std::sqrt(std::max(0.0, ev.maxCoeff())), true, 0};
  }
  const OperatorAction forward(op, grid, mode);
  const AdjointAction backward(op, grid, mode);
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  NormEstimate best;
  for (int start = 0; start < 2; ++start) {
    GridFunction v(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) v[k] = cplx(gauss(rng), gauss(rng));
    double lambda = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < iters; ++it) {
      const double nv = v.norm();
      for (auto& x : v.values()) x /= nv;
      GridFunction w = backward(forward(v));
      const double next = std::real(inner(w, v));
      const bool done = it > 0 && std::abs(next - lambda) <= 1e-13 * std::abs(next);
      lambda = next;
      v = std::move(w);
      if (done) {
        converged = true;
        break;
      }
    }
    const double value = std::sqrt(std::max(0.0, lambda));
    if (value >= best.value) best = {value, converged, it};
  }
  return best;
}

NormEstimate opnorm_estimate(const TFOperator& op, const Grid& grid, int iters) {
  return opnorm_estimate(op, grid, iters, natural_mode(op, grid));
}

FrameBounds frame_bounds_estimate(const TFOperator& op, const Grid& grid, ShiftMode mode, double margin) {
  check_dim(op, grid);
  if (op.empty()) throw SingularOperator("zero operator has no lower frame bound");
  const Eigen::VectorXd ev = gram_eigenvalues(op, grid, mode);
  FrameBounds fb;
  fb.a_exact = ev.minCoeff();
  fb.b_exact = ev.maxCoeff();
  if (!(fb.a_exact > 1e-12 * fb.b_exact))
    throw SingularOperator("operator is numerically singular on the grid (min eigenvalue of T*T " +
                           std::to_string(fb.a_exact) + ", max " + std::to_string(fb.b_exact) + ")");
  fb.a_est = fb.a_exact * (1.0 - margin);
  fb.b_est = fb.b_exact * (1.0 + margin);
  return fb;
}

FrameBounds frame_bounds_estimate(const TFOperator& op, const Grid& grid, double margin) {
  return frame_bounds_estimate(op, grid, natural_mode(op, grid), margin);
}

}  // namespace tfalg::oracle
