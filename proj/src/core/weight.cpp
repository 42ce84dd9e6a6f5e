#include "tfalg/weight.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "tfalg/errors.hpp"

namespace tfalg {

Weight Weight::polynomial(double s, double scale) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw PreconditionError("polynomial weight needs s >= 0");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw PreconditionError("polynomial weight needs C > 0");
  Weight w;
  w.kind_ = Kind::polynomial;
  w.a_ = s;
  w.b_ = scale;
  return w;
}

Weight Weight::subexponential(double alpha, double beta) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw PreconditionError("subexponential weight needs alpha >= 0");
  if (!(beta > 0.0 && beta < 1.0)) throw PreconditionError("subexponential weight needs 0 < beta < 1");
  Weight w;
  w.kind_ = Kind::subexponential;
  w.a_ = alpha;
  w.b_ = beta;
  return w;
}

Weight Weight::exponential(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw PreconditionError("exponential weight needs alpha > 0");
  Weight w;
  w.kind_ = Kind::exponential;
  w.a_ = alpha;
  w.b_ = 0.0;
  return w;
}

double Weight::radial(double r) const {
  switch (kind_) {
    case Kind::constant:
      return 1.0;
    case Kind::polynomial:
      return b_ * std::pow(1.0 + r, a_);
    case Kind::subexponential:
      return std::exp(a_ * std::pow(r, b_));
    case Kind::exponential:
      return std::exp(a_ * r);
  }
  return 1.0;
}

double Weight::log_radial(double r) const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::polynomial:
      return std::log(b_) + a_ * std::log1p(r);
    case Kind::subexponential:
      return a_ * std::pow(r, b_);
    case Kind::exponential:
      return a_ * r;
  }
  return 0.0;
}

namespace {

std::vector<double> parse_numbers(std::string_view text, std::string_view whole) {
  std::vector<double> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto piece = text.substr(0, comma);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc() || ptr != piece.data() + piece.size())
      throw ParseError("bad number in weight '" + std::string(whole) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

Weight Weight::parse(std::string_view text) {
  if (text == "constant" || text == "const") return constant();
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("unknown weight '" + std::string(text) + "'");
  auto name = text.substr(0, colon);
  auto args = parse_numbers(text.substr(colon + 1), text);
  try {
    if ((name == "poly" || name == "polynomial") && (args.size() == 1 || args.size() == 2))
      return polynomial(args[0], args.size() == 2 ? args[1] : 1.0);
    if ((name == "subexp" || name == "subexponential") && args.size() == 2)
      return subexponential(args[0], args[1]);
    if ((name == "exp" || name == "exponential") && args.size() == 1) return exponential(args[0]);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown weight '" + std::string(text) + "'");
}

std::string Weight::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::constant:
      os << "constant";
      break;
    case Kind::polynomial:
      os << "poly:" << a_ << ',' << b_;
      break;
    case Kind::subexponential:
      os << "subexp:" << a_ << ',' << b_;
      break;
    case Kind::exponential:
      os << "exp:" << a_;
      break;
  }
  return os.str();
}

}  // namespace tfalg
