#include <cmath>
#include <numbers>

#include "tfalg/errors.hpp"
#include "tfalg/oracle.hpp"

namespace tfalg::oracle {

Grid::Grid(int dim, int n_samples, double half_length, std::size_t point_cap)
    : dim_(dim), n_(n_samples), L_(half_length), size_(1) {
  if (dim < 1) throw GridError("grid dimension must be >= 1");
  if (n_samples < 8 || (n_samples & (n_samples - 1)) != 0)
    throw GridError("n_samples must be a power of two >= 8, got " + std::to_string(n_samples));
  if (!(half_length > 0.0) || !std::isfinite(half_length)) throw GridError("half length L must be > 0");
  for (int a = 0; a < dim; ++a) {
    size_ *= static_cast<std::size_t>(n_samples);
    if (size_ > point_cap)
      throw ResourceLimit("grid has more than " + std::to_string(point_cap) + " points");
  }
}

double Grid::fundamental_frequency() const { return std::numbers::pi / L_; }

std::vector<int> Grid::unflatten(std::size_t index) const {
  std::vector<int> k(static_cast<std::size_t>(dim_));
  for (int a = dim_ - 1; a >= 0; --a) {
    k[static_cast<std::size_t>(a)] = static_cast<int>(index % static_cast<std::size_t>(n_));
    index /= static_cast<std::size_t>(n_);
  }
  return k;
}

std::vector<double> Grid::point(std::size_t index) const {
  auto k = unflatten(index);
  std::vector<double> x(k.size());
  for (std::size_t a = 0; a < k.size(); ++a) x[a] = coordinate(k[a]);
  return x;
}

GridFunction::GridFunction(const Grid& grid) : grid_(grid), values_(grid.size(), cplx(0.0)) {}

GridFunction::GridFunction(const Grid& grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw GridError("grid function has " + std::to_string(values_.size()) + " samples, grid has " +
                    std::to_string(grid_.size()));
}

Eigen::VectorXcd GridFunction::to_vector() const {
  return Eigen::Map<const Eigen::VectorXcd>(values_.data(), static_cast<Eigen::Index>(values_.size()));
}

GridFunction GridFunction::from_vector(const Grid& grid, const Eigen::VectorXcd& v) {
  return GridFunction(grid, std::vector<cplx>(v.data(), v.data() + v.size()));
}

double GridFunction::norm() const { return std::sqrt(std::real(inner(*this, *this))); }

cplx inner(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) throw GridError("inner product of functions on different grids");
  cplx s = 0.0;
  for (std::size_t k = 0; k < f.grid().size(); ++k) s += f[k] * std::conj(g[k]);
  return s * std::pow(f.grid().spacing(), f.grid().dim());
}

}  // namespace tfalg::oracle
