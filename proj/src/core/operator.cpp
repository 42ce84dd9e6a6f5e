#include "tfalg/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tfalg/errors.hpp"
#include "tfalg/weight.hpp"

namespace tfalg {

double DropReport::weighted(const Weight& v) const { return l1 * v.radial(max_radius); }

DropReport& DropReport::operator+=(const DropReport& o) {
  l1 += o.l1;
  max_radius = std::max(max_radius, o.max_radius);
  count += o.count;
  return *this;
}

TFOperator::TFOperator(int dim) : dim_(dim) {
  if (dim < 1) throw PreconditionError("phase-space dimension must be >= 1");
}

TFOperator TFOperator::identity(int dim) { return single(TFPoint(dim), 1.0); }

TFOperator TFOperator::single(const TFPoint& p, cplx c) {
  TermAccumulator acc(p.dim());
  acc.add(p, c);
  return std::move(acc).build();
}

TFPoint TFOperator::point(std::size_t i) const {
  auto tt = t(i);
  auto ww = omega(i);
  return TFPoint(std::vector<double>(tt.begin(), tt.end()), std::vector<double>(ww.begin(), ww.end()));
}

double TFOperator::radius(std::size_t i) const {
  double s = 0.0;
  for (double x : coords(i)) s += x * x;
  return std::sqrt(s);
}

cplx TFOperator::coefficient_at(const TFPoint& p) const {
  if (p.dim() != dim_) throw DimensionMismatch(dim_, p.dim());
  const auto k = p.key();
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto km = key(mid);
    if (std::lexicographical_compare(km.begin(), km.end(), k.begin(), k.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size()) {
    auto kl = key(lo);
    if (std::equal(kl.begin(), kl.end(), k.begin())) return coeffs_[lo];
  }
  return 0.0;
}

void TFOperator::drop_small() {
  const std::size_t w = 2 * static_cast<std::size_t>(dim_);
  std::size_t out = 0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (std::abs(coeffs_[i]) < kDropThreshold) continue;
    if (out != i) {
      std::copy_n(coords_.begin() + i * w, w, coords_.begin() + out * w);
      std::copy_n(keys_.begin() + i * w, w, keys_.begin() + out * w);
      coeffs_[out] = coeffs_[i];
    }
    ++out;
  }
  coeffs_.resize(out);
  coords_.resize(out * w);
  keys_.resize(out * w);
}

bool operator==(const TFOperator& a, const TFOperator& b) {
  return a.dim_ == b.dim_ && a.keys_ == b.keys_ && a.coeffs_ == b.coeffs_;
}

void TermAccumulator::reserve(std::size_t n) {
  const std::size_t w = 2 * static_cast<std::size_t>(dim_);
  coords_.reserve(n * w);
  keys_.reserve(n * w);
  coeffs_.reserve(n);
}

void TermAccumulator::add(std::span<const double> coords, cplx c) {
  if (coords.size() != 2 * static_cast<std::size_t>(dim_))
    throw DimensionMismatch(dim_, static_cast<int>(coords.size() / 2));
  for (double x : coords) {
    const auto k = quantize(x);
    keys_.push_back(k);
    coords_.push_back(k == 0 ? 0.0 : x);
  }
  coeffs_.push_back(c);
}

void TermAccumulator::add(const TFPoint& p, cplx c) {
  if (p.dim() != dim_) throw DimensionMismatch(dim_, p.dim());
  std::vector<double> buf(p.t().begin(), p.t().end());
  buf.insert(buf.end(), p.omega().begin(), p.omega().end());
  add(buf, c);
}

void TermAccumulator::add(const TFOperator& op, cplx alpha) {
  if (op.dim() != dim_) throw DimensionMismatch(dim_, op.dim());
  for (std::size_t i = 0; i < op.size(); ++i) {
    auto kk = op.key(i);
    auto cc = op.coords(i);
    keys_.insert(keys_.end(), kk.begin(), kk.end());
    coords_.insert(coords_.end(), cc.begin(), cc.end());
    coeffs_.push_back(alpha * op.coeff(i));
  }
}

namespace {

// Neumaier compensated sum of one component.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

std::uint64_t mix(std::uint64_t h, std::uint64_t k) {
  // splitmix64 finalizer over a running combination
  h ^= k + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

}  // namespace

TFOperator TermAccumulator::build(DropReport* dropped) && {
  const std::size_t w = 2 * static_cast<std::size_t>(dim_);
  const std::size_t n = coeffs_.size();
  const std::int64_t* keys = keys_.data();

  // Group equal keys through an open-addressing table; each group sums its
  // contributions in insertion order.
  std::size_t cap = 16;
  while (cap < 2 * n) cap *= 2;
  std::vector<std::size_t> slot(cap, 0);  // group index + 1
  std::vector<std::size_t> first;
  std::vector<CompensatedSum> re, im;
  first.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t* ki = keys + i * w;
    std::uint64_t h = 0;
    for (std::size_t k = 0; k < w; ++k) h = mix(h, static_cast<std::uint64_t>(ki[k]));
    std::size_t s = h & (cap - 1);
    while (slot[s] != 0 && !std::equal(ki, ki + w, keys + first[slot[s] - 1] * w)) s = (s + 1) & (cap - 1);
    if (slot[s] == 0) {
      first.push_back(i);
      re.emplace_back();
      im.emplace_back();
      slot[s] = first.size();
    }
    const std::size_t g = slot[s] - 1;
    re[g].add(coeffs_[i].real());
    im[g].add(coeffs_[i].imag());
  }

  std::vector<std::size_t> order(first.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const std::int64_t* ka = keys + first[a] * w;
    const std::int64_t* kb = keys + first[b] * w;
    return std::lexicographical_compare(ka, ka + w, kb, kb + w);
  });

  TFOperator out(dim_);
  out.coords_.reserve(order.size() * w);
  out.keys_.reserve(order.size() * w);
  out.coeffs_.reserve(order.size());
  for (std::size_t g : order) {
    const std::size_t f = first[g];
    const cplx c(re[g].value(), im[g].value());
    const double mag = std::abs(c);
    if (mag >= kDropThreshold) {
      out.keys_.insert(out.keys_.end(), keys + f * w, keys + (f + 1) * w);
      out.coords_.insert(out.coords_.end(), coords_.begin() + f * w, coords_.begin() + (f + 1) * w);
      out.coeffs_.push_back(c);
    } else if (dropped && mag > 0.0) {
      double r2 = 0.0;
      for (std::size_t k = 0; k < w; ++k) r2 += coords_[f * w + k] * coords_[f * w + k];
      dropped->l1 += mag;
      dropped->max_radius = std::max(dropped->max_radius, std::sqrt(r2));
      ++dropped->count;
    }
  }
  return out;
}

}  // namespace tfalg
