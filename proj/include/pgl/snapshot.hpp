#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "pgl/field.hpp"

namespace pgl {

inline constexpr std::uint32_t kSnapshotVersion = 1;

// Binary layout (little-endian): "PGLF", u32 version, u32 dim, u32 N,
// f64 L, u32 components, then components * N^dim f64 values, row-major.
void write_field(std::ostream& out, const Field& f);
Field read_field(std::istream& in);

void save_field(const std::string& path, const Field& f);
Field load_field(const std::string& path);

namespace io {
void write_u32(std::ostream& out, std::uint32_t v);
void write_f64(std::ostream& out, double v);
std::uint32_t read_u32(std::istream& in);
double read_f64(std::istream& in);
}  // namespace io

}  // namespace pgl
