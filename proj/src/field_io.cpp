#include "xlra/binary_io.hpp"
#include "xlra/elasticity.hpp"

namespace xlra {

namespace {
constexpr std::string_view kMagic = "XFD1";
}

// Layout: "XFD1" | ndim u8 | dims u32 x ndim | n_components u16 |
// mean f64 x n_components | per component: label length u16 + bytes |
// payload f64, row-major cells with components fastest.
void write_field(const std::filesystem::path& path, const TensorField& field) {
  require(field.values.size() == field.grid.size() * field.n_components, "write_field: payload size mismatch");
  io::Writer w;
  w.put_bytes(kMagic);
  w.put(static_cast<std::uint8_t>(field.grid.ndim()));
  for (auto d : field.grid.dims()) w.put(static_cast<std::uint32_t>(d));
  w.put(static_cast<std::uint16_t>(field.n_components));
  for (std::size_t k = 0; k < field.n_components; ++k) w.put(k < field.mean.size() ? field.mean[k] : 0.0);
  for (std::size_t k = 0; k < field.n_components; ++k) {
    const std::string label = k < field.labels.size() ? field.labels[k] : "c" + std::to_string(k);
    w.put(static_cast<std::uint16_t>(label.size()));
    w.put_bytes(label);
  }
  for (double v : field.values) w.put(v);
  io::write_file_atomic(path, w.bytes());
}

TensorField read_field(const std::filesystem::path& path) {
  io::Reader r(io::read_file(path));
  require(r.get_bytes(4) == kMagic, "read_field: bad magic in " + path.string());
  const auto ndim = r.get<std::uint8_t>();
  require(ndim == 2 || ndim == 3, "read_field: ndim must be 2 or 3");
  std::vector<std::size_t> dims(ndim);
  for (auto& d : dims) d = r.get<std::uint32_t>();
  TensorField f;
  f.grid = PeriodicGrid(dims);
  f.n_components = r.get<std::uint16_t>();
  f.mean.resize(f.n_components);
  for (auto& m : f.mean) m = r.get<double>();
  f.labels.resize(f.n_components);
  for (auto& l : f.labels) l = r.get_bytes(r.get<std::uint16_t>());
  f.values.resize(f.grid.size() * f.n_components);
  for (auto& v : f.values) v = r.get<double>();
  require(r.at_end(), "read_field: trailing bytes in " + path.string());
  return f;
}

}  // namespace xlra
