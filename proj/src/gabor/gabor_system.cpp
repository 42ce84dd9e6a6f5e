#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "gabor_detail.hpp"
#include "tfalg/errors.hpp"
#include "tfalg/gabor.hpp"

namespace tfalg {

namespace detail {

int lattice_period(double step, double unit, int n_samples, const char* what) {
  const double q = step / unit;
  const long long k = std::llround(q);
  if (k < 1 || std::abs(q - static_cast<double>(k)) > 1e-9 * std::max(1.0, q))
    throw GridError(std::string(what) + " is not an integer multiple of the grid unit " + std::to_string(unit));
  if (n_samples % k != 0)
    throw GridError(std::string(what) + " / grid unit = " + std::to_string(k) + " does not divide n_samples = " +
                    std::to_string(n_samples));
  return static_cast<int>(n_samples / k);
}

void for_each_index(int d, int period, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    f(idx);
    int a = d - 1;
    while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == period) idx[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) return;
  }
}

}  // namespace detail

oracle::GridFunction lattice_atom(const GaborSystem& sys, const oracle::GridFunction& g, const std::vector<int>& m,
                                  const std::vector<int>& n) {
  const auto d = static_cast<std::size_t>(sys.grid.dim());
  std::vector<double> t(d), w(d);
  for (std::size_t a = 0; a < d; ++a) {
    // Residues keep coordinates small; the torus makes the atom periodic in m and n.
    const int na = ((n[a] % sys.period_n) + sys.period_n) % sys.period_n;
    const int ma = ((m[a] % sys.period_m) + sys.period_m) % sys.period_m;
    t[a] = sys.beta * na;
    w[a] = 2.0 * std::numbers::pi * sys.alpha * ma;
  }
  return oracle::apply_shift(g, TFPoint(std::move(t), std::move(w)), oracle::ShiftMode::aligned);
}

Eigen::MatrixXcd frame_operator(const GaborSystem& sys, const oracle::GridFunction& g) {
  // Summing the modulations over one period leaves
  //   S_kl = h^d P_m^d [k - l divisible by P_m] sum_n g(x_k - beta n) conj g(x_l - beta n).
  const oracle::Grid& grid = sys.grid;
  const int d = grid.dim();
  const auto size = static_cast<Eigen::Index>(grid.size());
  std::vector<std::vector<int>> idx(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) idx[k] = grid.unflatten(k);
  std::vector<oracle::GridFunction> shifted;
  detail::for_each_index(d, sys.period_n, [&](const std::vector<int>& n) {
    shifted.push_back(lattice_atom(sys, g, std::vector<int>(static_cast<std::size_t>(d), 0), n));
  });
  const double factor = std::pow(grid.spacing() * sys.period_m, d);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(size, size);
  for (Eigen::Index k = 0; k < size; ++k) {
    for (Eigen::Index l = 0; l < size; ++l) {
      bool linked = true;
      for (int a = 0; a < d && linked; ++a)
        linked = (idx[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)] -
                  idx[static_cast<std::size_t>(l)][static_cast<std::size_t>(a)]) %
                     sys.period_m ==
                 0;
      if (!linked) continue;
      cplx acc = 0.0;
      for (const auto& gn : shifted)
        acc += gn[static_cast<std::size_t>(k)] * std::conj(gn[static_cast<std::size_t>(l)]);
      s(k, l) = factor * acc;
    }
  }
  return s;
}

GaborSystem build_gabor(const oracle::Grid& grid, double alpha, double beta, bool tight) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw PreconditionError("alpha and beta must be positive");
  if (!(alpha * beta < 1.0)) throw PreconditionError("alpha * beta must be < 1 for a redundant Gabor frame");
  if (grid.size() > oracle::kDenseCap)
    throw ResourceLimit("Gabor frame operator refused above " + std::to_string(oracle::kDenseCap) + " grid points");

  const int period_n = detail::lattice_period(beta, grid.spacing(), grid.n_samples(), "time step beta");
  const int period_m =
      detail::lattice_period(2.0 * std::numbers::pi * alpha, grid.fundamental_frequency(), grid.n_samples(),
                             "frequency step 2 pi alpha");

  const double two_l = 2.0 * grid.half_length();
  oracle::GridFunction g = oracle::GridFunction::sample(grid, [&](const std::vector<double>& x) {
    double v = 1.0;
    for (double xa : x) {
      double s = 0.0;
      for (int k = -3; k <= 3; ++k) s += std::exp(-std::numbers::pi * (xa + k * two_l) * (xa + k * two_l));
      v *= s;
    }
    return cplx(v);
  });
  const double gn = g.norm();
  for (auto& z : g.values()) z /= gn;

  GaborSystem sys{grid, alpha, beta, g, g, period_m, period_n, 0.0, 0.0, 0.0, tight};
  Eigen::MatrixXcd s = frame_operator(sys, g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
  if (es.info() != Eigen::Success) throw Error("eigen-decomposition of the frame operator failed");
  sys.frame_lower = es.eigenvalues().minCoeff();
  sys.frame_upper = es.eigenvalues().maxCoeff();
  if (!(sys.frame_lower > 0.0) || sys.frame_upper / sys.frame_lower > 1e8)
    throw PreconditionError("frame operator is ill-conditioned (eigenvalues " + std::to_string(sys.frame_lower) +
                            " .. " + std::to_string(sys.frame_upper) + "); reduce alpha * beta");

  if (tight) {
    const Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
    const Eigen::VectorXcd gt =
        es.eigenvectors() * (inv_sqrt.cast<cplx>().asDiagonal() * (es.eigenvectors().adjoint() * g.to_vector()));
    sys.window = oracle::GridFunction::from_vector(grid, gt);
    sys.dual = sys.window;
    sys.frame_lower = sys.frame_upper = 1.0;
  } else {
    Eigen::LLT<Eigen::MatrixXcd> llt(s);
    sys.dual = oracle::GridFunction::from_vector(grid, llt.solve(g.to_vector()));
  }

  // Analysis with the window, synthesis with the dual, over one period.
  const oracle::GridFunction f = oracle::GridFunction::sample(grid, [&](const std::vector<double>& x) {
    double r2 = 0.0, phase = 0.0;
    for (double xa : x) {
      r2 += (xa - 0.3) * (xa - 0.3);
      phase += 1.7 * xa;
    }
    return std::polar(std::exp(-0.5 * r2), phase);
  });
  oracle::GridFunction recon(grid);
  detail::for_each_index(grid.dim(), sys.period_m, [&](const std::vector<int>& m) {
    detail::for_each_index(grid.dim(), sys.period_n, [&](const std::vector<int>& n) {
      const cplx c = oracle::inner(f, lattice_atom(sys, sys.window, m, n));
      const oracle::GridFunction dn = lattice_atom(sys, sys.dual, m, n);
      for (std::size_t k = 0; k < grid.size(); ++k) recon[k] += c * dn[k];
    });
  });
  double err2 = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) err2 += std::norm(recon[k] - f[k]);
  sys.reproduction_error = std::sqrt(err2 * std::pow(grid.spacing(), grid.dim())) / f.norm();
  if (sys.reproduction_error > 1e-6)
    throw PreconditionError("Gabor frame reproduction error " + std::to_string(sys.reproduction_error) +
                            " exceeds 1e-6");
  return sys;
}

double adjoint_lattice_deviation(const GaborSystem& sys, int jk_max) {
  const oracle::Grid& grid = sys.grid;
  const auto d = static_cast<std::size_t>(grid.dim());
  const double volume = std::pow(sys.alpha * sys.beta, grid.dim());
  double worst = 0.0;
  const int width = 2 * jk_max + 1;
  detail::for_each_index(grid.dim(), width, [&](const std::vector<int>& jj) {
    detail::for_each_index(grid.dim(), width, [&](const std::vector<int>& kk) {
      std::vector<double> t(d), w(d);
      bool origin = true;
      for (std::size_t a = 0; a < d; ++a) {
        const int ja = jj[a] - jk_max, ka = kk[a] - jk_max;
        origin = origin && ja == 0 && ka == 0;
        t[a] = ka / sys.alpha;
        w[a] = 2.0 * std::numbers::pi * ja / sys.beta;
      }
      // Reduce modulo the torus periods 2L (time) and 2 pi / h (frequency).
      for (std::size_t a = 0; a < d; ++a) {
        const double tp = 2.0 * grid.half_length(), wp = 2.0 * std::numbers::pi / grid.spacing();
        t[a] -= tp * std::floor(t[a] / tp + 0.5);
        w[a] -= wp * std::floor(w[a] / wp + 0.5);
      }
      const oracle::GridFunction atom =
          oracle::apply_shift(sys.window, TFPoint(std::move(t), std::move(w)), oracle::ShiftMode::aligned);
      const cplx ip = oracle::inner(sys.dual, atom);
      worst = std::max(worst, std::abs(ip - (origin ? cplx(volume) : cplx(0.0))));
    });
  });
  return worst;
}

}  // namespace tfalg
