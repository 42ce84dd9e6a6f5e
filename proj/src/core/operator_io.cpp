#include "tfalg/operator_io.hpp"

#include <fstream>
#include <sstream>

#include "tfalg/errors.hpp"

namespace tfalg {

using nlohmann::json;

namespace {

std::vector<double> real_array(const json& j, const char* field, int dim) {
  if (!j.contains(field) || !j.at(field).is_array())
    throw ParseError(std::string("missing array field '") + field + "'");
  const auto& a = j.at(field);
  if (static_cast<int>(a.size()) != dim)
    throw ParseError(std::string("field '") + field + "' must have " + std::to_string(dim) + " entries");
  std::vector<double> out;
  for (const auto& x : a) {
    if (!x.is_number()) throw ParseError(std::string("non-numeric entry in '") + field + "'");
    out.push_back(x.get<double>());
  }
  return out;
}

double real_field(const json& j, const char* field) {
  if (!j.contains(field)) return 0.0;
  if (!j.at(field).is_number()) throw ParseError(std::string("field '") + field + "' must be a number");
  return j.at(field).get<double>();
}

}  // namespace

json to_json(const TFPoint& p) {
  return json{{"t", std::vector<double>(p.t().begin(), p.t().end())},
              {"omega", std::vector<double>(p.omega().begin(), p.omega().end())}};
}

TFPoint point_from_json(const json& j, int dim) {
  if (!j.is_object()) throw ParseError("point must be an object with 't' and 'omega'");
  try {
    return TFPoint(real_array(j, "t", dim), real_array(j, "omega", dim));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

json to_json(const TFOperator& op) {
  json terms = json::array();
  for (std::size_t i = 0; i < op.size(); ++i) {
    auto t = op.t(i);
    auto w = op.omega(i);
    terms.push_back(json{{"t", std::vector<double>(t.begin(), t.end())},
                         {"omega", std::vector<double>(w.begin(), w.end())},
                         {"re", op.coeff(i).real()},
                         {"im", op.coeff(i).imag()}});
  }
  return json{{"dim", op.dim()}, {"terms", std::move(terms)}};
}

TFOperator operator_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("operator must be a JSON object");
  if (!j.contains("dim") || !j.at("dim").is_number_integer()) throw ParseError("missing integer 'dim'");
  const int dim = j.at("dim").get<int>();
  if (dim < 1) throw ParseError("'dim' must be >= 1");
  if (!j.contains("terms") || !j.at("terms").is_array()) throw ParseError("missing array 'terms'");
  TermAccumulator acc(dim);
  for (const auto& term : j.at("terms")) {
    TFPoint p = point_from_json(term, dim);
    acc.add(p, cplx(real_field(term, "re"), real_field(term, "im")));
  }
  return std::move(acc).build();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

TFOperator read_operator(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
  return operator_from_json(j);
}

void write_operator(const std::filesystem::path& path, const TFOperator& op) {
  write_text_file(path, to_json(op).dump(1) + "\n");
}

}  // namespace tfalg
