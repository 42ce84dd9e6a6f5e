#include <bit>
#include <cstring>
#include <fstream>
#include "json.hpp"

#include "tfalg/errors.hpp"
#include "tfalg/operator_io.hpp"
#include "tfalg/oracle.hpp"

namespace tfalg::oracle {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

void put_le(std::ostream& out, double x) {
  unsigned char b[8];
  std::memcpy(b, &x, 8);
  if constexpr (std::endian::native == std::endian::big)
    for (int i = 0; i < 4; ++i) std::swap(b[i], b[7 - i]);
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw ParseError("grid function file is truncated");
  if constexpr (std::endian::native == std::endian::big)
    for (int i = 0; i < 4; ++i) std::swap(b[i], b[7 - i]);
  double x;
  std::memcpy(&x, b, 8);
  return x;
}

std::filesystem::path sidecar(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".json");
}

}  // namespace

void write_grid_function(const std::filesystem::path& path, const GridFunction& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  for (cplx z : f.values()) {
    put_le(out, z.real());
    put_le(out, z.imag());
  }
  const Grid& g = f.grid();
  nlohmann::json meta{{"d", g.dim()}, {"n_samples", g.n_samples()}, {"L", g.half_length()}};
  write_text_file(sidecar(path), meta.dump(1) + "\n");
}

GridFunction read_grid_function(const std::filesystem::path& path) {
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_text_file(sidecar(path)));
    Grid grid(meta.at("d").get<int>(), meta.at("n_samples").get<int>(), meta.at("L").get<double>());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::vector<cplx> values(grid.size());
    for (auto& z : values) {
      const double re = get_le(in);
      z = cplx(re, get_le(in));
    }
    return GridFunction(grid, std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("grid function metadata '" + sidecar(path).string() + "': " + e.what());
  }
}

}  // namespace tfalg::oracle
