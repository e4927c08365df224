#include "pgl/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "pgl/errors.hpp"

namespace pgl {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace io {

void write_u32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }

void write_f64(std::ostream& out, double v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error("snapshot truncated");
  return v;
}

double read_f64(std::istream& in) {
  double v = 0.0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error("snapshot truncated");
  return v;
}

}  // namespace io

void write_field(std::ostream& out, const Field& f) {
  const Torus& t = f.torus();
  out.write("PGLF", 4);
  io::write_u32(out, kSnapshotVersion);
  io::write_u32(out, static_cast<std::uint32_t>(t.dim()));
  io::write_u32(out, static_cast<std::uint32_t>(t.n()));
  io::write_f64(out, t.side_length());
  io::write_u32(out, static_cast<std::uint32_t>(f.components()));
  auto v = f.values();
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!out) throw Error("failed to write snapshot");
}

Field read_field(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "PGLF", 4) != 0) throw Error("not a PGLF snapshot");
  const auto version = io::read_u32(in);
  if (version != kSnapshotVersion) throw Error("unsupported snapshot version " + std::to_string(version));
  const int dim = static_cast<int>(io::read_u32(in));
  const int n = static_cast<int>(io::read_u32(in));
  const double side = io::read_f64(in);
  const int comps = static_cast<int>(io::read_u32(in));
  Torus torus(dim, side, n);
  if (comps < 1 || comps > 27) throw Error("snapshot has an invalid component count");
  std::vector<double> values(static_cast<std::size_t>(comps) * torus.num_points());
  if (!in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double))))
    throw Error("snapshot truncated");
  return Field(torus, comps, std::move(values));
}

void save_field(const std::string& path, const Field& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_field(out, f);
}

Field load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_field(in);
}

}  // namespace pgl
