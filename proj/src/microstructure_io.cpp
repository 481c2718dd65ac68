#include <fstream>

#include "xlra/binary_io.hpp"
#include "xlra/error.hpp"
#include "xlra/microstructure.hpp"

namespace xlra {

namespace io {

const char* Reader::take(std::size_t n) {
  if (n > bytes_.size() - pos_) throw ValidationError("truncated file");
  const char* p = bytes_.data() + pos_;
  pos_ += n;
  return p;
}

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::filesystem::path& path, const std::vector<char>& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ValidationError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  write_file_atomic(path, std::vector<char>(text.begin(), text.end()));
}

}  // namespace io

namespace {
constexpr std::string_view kMagic = "XMS1";
constexpr std::uint8_t kHasPhase = 1;
constexpr std::uint8_t kHasOrientation = 2;
}  // namespace

void write_microstructure(const std::filesystem::path& path, const Microstructure& ms) {
  ms.validate();
  io::Writer w;
  w.put_bytes(kMagic);
  w.put(static_cast<std::uint8_t>(ms.grid.ndim()));
  for (auto d : ms.grid.dims()) w.put(static_cast<std::uint32_t>(d));
  std::uint8_t flags = 0;
  if (ms.phase) flags |= kHasPhase;
  if (ms.orientation) flags |= kHasOrientation;
  w.put(flags);
  w.put(static_cast<std::uint16_t>(ms.n_phases));
  if (ms.phase)
    for (auto p : *ms.phase) w.put(p);
  if (ms.orientation)
    for (const auto& o : *ms.orientation) {
      w.put(o.phi1);
      w.put(o.Phi);
      w.put(o.phi2);
    }
  io::write_file_atomic(path, w.bytes());
}

Microstructure read_microstructure(const std::filesystem::path& path) {
  io::Reader r(io::read_file(path));
  require(r.get_bytes(4) == kMagic, "read_microstructure: bad magic in " + path.string());
  const auto ndim = r.get<std::uint8_t>();
  require(ndim == 2 || ndim == 3, "read_microstructure: ndim must be 2 or 3");
  std::vector<std::size_t> dims(ndim);
  for (auto& d : dims) d = r.get<std::uint32_t>();
  const auto flags = r.get<std::uint8_t>();
  Microstructure ms;
  ms.grid = PeriodicGrid(dims);
  ms.n_phases = r.get<std::uint16_t>();
  if (flags & kHasPhase) {
    ms.phase.emplace(ms.grid.size());
    for (auto& p : *ms.phase) p = r.get<std::uint16_t>();
  }
  if (flags & kHasOrientation) {
    ms.orientation.emplace(ms.grid.size());
    for (auto& o : *ms.orientation) {
      o.phi1 = r.get<double>();
      o.Phi = r.get<double>();
      o.phi2 = r.get<double>();
    }
  }
  require(r.at_end(), "read_microstructure: trailing bytes in " + path.string());
  ms.validate();
  return ms;
}

}  // namespace xlra
