#include "gkdv/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gkdv/error.hpp"
#include "json.hpp"

namespace gkdv {

using nlohmann::json;

namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

}  // namespace

void write_snapshot(const std::filesystem::path& dir, const std::string& stem, const SimState& s,
                    const ModelParams& model) {
  const GridSpec& g = s.u.grid();
  const std::string bin_name = stem + ".bin";
  {
    std::ofstream out(dir / bin_name, std::ios::binary);
    if (!out) throw IntegrityError((dir / bin_name).string(), "cannot open for writing");
    for (double v : s.u.samples()) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      bits = to_little(bits);
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
    if (!out) throw IntegrityError((dir / bin_name).string(), "write failed");
  }
  json h = {{"n", g.size()},
            {"L", g.length()},
            {"t", s.t},
            {"model", {{"mu", model.mu}, {"alpha", model.alpha}}},
            {"endianness", "little"},
            {"dtype", "float64"},
            {"samples", bin_name},
            {"boundary_mass_fraction", s.boundary_mass_fraction}};
  std::ofstream out(dir / (stem + ".json"));
  if (!out) throw IntegrityError((dir / (stem + ".json")).string(), "cannot open for writing");
  out << h.dump(2) << '\n';
}

Snapshot read_snapshot(const std::filesystem::path& header) {
  const std::string hname = header.string();
  std::ifstream in(header);
  if (!in) throw IntegrityError(hname, "missing snapshot header");
  json h;
  try {
    h = json::parse(in);
  } catch (const json::exception& e) {
    throw IntegrityError(hname, std::string("corrupt header: ") + e.what());
  }
  std::size_t n = 0;
  double L = 0.0, t = 0.0;
  ModelParams model;
  std::string samples;
  try {
    n = h.at("n").get<std::size_t>();
    L = h.at("L").get<double>();
    t = h.at("t").get<double>();
    model.mu = h.at("model").at("mu").get<double>();
    model.alpha = h.at("model").at("alpha").get<double>();
    if (h.at("endianness").get<std::string>() != "little") throw IntegrityError(hname, "unsupported endianness");
    if (h.at("dtype").get<std::string>() != "float64") throw IntegrityError(hname, "unsupported dtype");
    samples = h.at("samples").get<std::string>();
  } catch (const json::exception& e) {
    throw IntegrityError(hname, std::string("incomplete header: ") + e.what());
  }
  const std::filesystem::path bin = header.parent_path() / samples;
  std::ifstream bin_in(bin, std::ios::binary);
  if (!bin_in) throw IntegrityError(bin.string(), "missing sample file");
  std::error_code ec;
  const auto bytes = std::filesystem::file_size(bin, ec);
  if (ec || bytes != n * sizeof(double)) {
    throw IntegrityError(bin.string(), "expected " + std::to_string(n * sizeof(double)) + " bytes");
  }
  GridSpec grid = [&] {
    try {
      return GridSpec(n, L);
    } catch (const Error& e) {
      throw IntegrityError(hname, e.what());
    }
  }();
  std::vector<double> data(n);
  for (double& v : data) {
    std::uint64_t bits;
    bin_in.read(reinterpret_cast<char*>(&bits), sizeof bits);
    bits = to_little(bits);
    std::memcpy(&v, &bits, sizeof v);
  }
  if (!bin_in) throw IntegrityError(bin.string(), "truncated sample file");
  RealField u(grid, std::move(data));
  if (!u.all_finite()) throw IntegrityError(bin.string(), "non-finite samples");
  return {make_state(t, std::move(u)), model};
}

}  // namespace gkdv
