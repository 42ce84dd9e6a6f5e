#include <cmath>
#include <numbers>

#include "shift_kernel.hpp"
#include "tfalg/errors.hpp"
#include "tfalg/oracle.hpp"

namespace tfalg::oracle {

bool is_aligned(const Grid& grid, std::span<const double> t) {
  const double h = grid.spacing();
  for (double x : t) {
    const double q = x / h;
    if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, std::abs(q))) return false;
  }
  return true;
}

ShiftMode natural_mode(const TFOperator& op, const Grid& grid) {
  for (std::size_t i = 0; i < op.size(); ++i)
    if (!is_aligned(grid, op.t(i))) return ShiftMode::bandlimited;
  return ShiftMode::aligned;
}

namespace detail {

AxisKernel axis_kernel(const Grid& grid, double t, ShiftMode mode) {
  const int n = grid.n_samples();
  const double h = grid.spacing();
  AxisKernel k;
  k.column.assign(static_cast<std::size_t>(n), cplx(0.0));
  if (mode == ShiftMode::aligned || is_aligned(grid, std::span<const double>(&t, 1))) {
    if (!is_aligned(grid, std::span<const double>(&t, 1)))
      throw GridError("time shift " + std::to_string(t) + " is not a multiple of the grid spacing " +
                      std::to_string(h));
    const long long s = std::llround(t / h);
    const long long m = ((s % n) + n) % n;
    k.permutation = true;
    k.offset = static_cast<int>(m);
    k.column[static_cast<std::size_t>(m)] = 1.0;
    return k;
  }
  // Trigonometric interpolation: frequencies xi_j = 2 pi j / (n h), j in [-n/2, n/2).
  for (int m = 0; m < n; ++m) {
    cplx s = 0.0;
    for (int j = -n / 2; j < n / 2; ++j) {
      const double xi = 2.0 * std::numbers::pi * j / (n * h);
      s += std::polar(1.0, xi * (m * h - t));
    }
    k.column[static_cast<std::size_t>(m)] = s / static_cast<double>(n);
  }
  return k;
}

void apply_axis(std::vector<cplx>& data, const Grid& grid, int axis, const AxisKernel& kernel) {
  const std::size_t n = static_cast<std::size_t>(grid.n_samples());
  std::size_t stride = 1;
  for (int a = grid.dim() - 1; a > axis; --a) stride *= n;
  const std::size_t block = stride * n;
  std::vector<cplx> line(n), out(n);
  for (std::size_t base = 0; base < data.size(); base += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      for (std::size_t k = 0; k < n; ++k) line[k] = data[base + inner + k * stride];
      if (kernel.permutation) {
        for (std::size_t k = 0; k < n; ++k) out[(k + static_cast<std::size_t>(kernel.offset)) % n] = line[k];
      } else {
        for (std::size_t k = 0; k < n; ++k) {
          cplx s = 0.0;
          for (std::size_t l = 0; l < n; ++l) s += kernel.column[(k + n - l) % n] * line[l];
          out[k] = s;
        }
      }
      for (std::size_t k = 0; k < n; ++k) data[base + inner + k * stride] = out[k];
    }
  }
}

std::vector<cplx> modulation(const Grid& grid, std::span<const double> omega) {
  std::vector<cplx> phase(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) phase[k] = std::polar(1.0, dot(omega, grid.point(k)));
  return phase;
}

}  // namespace detail

GridFunction apply_shift(const GridFunction& f, const TFPoint& lambda, ShiftMode mode) {
  const Grid& grid = f.grid();
  if (lambda.dim() != grid.dim()) throw DimensionMismatch(grid.dim(), lambda.dim());
  std::vector<cplx> data(f.values().begin(), f.values().end());
  for (int a = 0; a < grid.dim(); ++a) {
    const double t = lambda.t()[static_cast<std::size_t>(a)];
    if (t == 0.0) continue;
    detail::apply_axis(data, grid, a, detail::axis_kernel(grid, t, mode));
  }
  bool modulated = false;
  for (double w : lambda.omega()) modulated = modulated || w != 0.0;
  if (modulated) {
    const auto phase = detail::modulation(grid, lambda.omega());
    for (std::size_t k = 0; k < data.size(); ++k) data[k] *= phase[k];
  }
  return GridFunction(grid, std::move(data));
}

GridFunction apply(const TFOperator& op, const GridFunction& f, ShiftMode mode) {
  return OperatorAction(op, f.grid(), mode)(f);
}

struct OperatorAction::Term {
  cplx coeff;
  std::vector<detail::AxisKernel> kernels;  // empty kernel list: no time shift on that axis
  std::vector<bool> shifted;
  std::vector<cplx> phase;                  // empty: no modulation
};

OperatorAction::OperatorAction(const TFOperator& op, const Grid& grid, ShiftMode mode) : grid_(grid) {
  if (op.dim() != grid.dim()) throw DimensionMismatch(grid.dim(), op.dim());
  for (std::size_t i = 0; i < op.size(); ++i) {
    Term term;
    term.coeff = op.coeff(i);
    for (int a = 0; a < grid.dim(); ++a) {
      const double t = op.t(i)[static_cast<std::size_t>(a)];
      term.shifted.push_back(t != 0.0);
      term.kernels.push_back(t != 0.0 ? detail::axis_kernel(grid, t, mode) : detail::AxisKernel{});
    }
    bool modulated = false;
    for (double w : op.omega(i)) modulated = modulated || w != 0.0;
    if (modulated) term.phase = detail::modulation(grid, op.omega(i));
    terms_.push_back(std::move(term));
  }
}

OperatorAction::~OperatorAction() = default;
OperatorAction::OperatorAction(OperatorAction&&) noexcept = default;

GridFunction OperatorAction::operator()(const GridFunction& f) const {
  if (!(f.grid() == grid_)) throw GridError("operator action prepared for a different grid");
  GridFunction out(grid_);
  std::vector<cplx> data;
  for (const Term& term : terms_) {
    data.assign(f.values().begin(), f.values().end());
    for (int a = 0; a < grid_.dim(); ++a)
      if (term.shifted[static_cast<std::size_t>(a)])
        detail::apply_axis(data, grid_, a, term.kernels[static_cast<std::size_t>(a)]);
    if (term.phase.empty()) {
      for (std::size_t k = 0; k < data.size(); ++k) out[k] += term.coeff * data[k];
    } else {
      for (std::size_t k = 0; k < data.size(); ++k) out[k] += term.coeff * term.phase[k] * data[k];
    }
  }
  return out;
}

}  // namespace tfalg::oracle
