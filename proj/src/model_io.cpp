#include "xlra/binary_io.hpp"
#include "xlra/error.hpp"
#include "xlra/xlra.hpp"

namespace xlra {

namespace {
constexpr std::string_view kMagic = "XLM1";
constexpr int kFormatVersion = 1;
}  // namespace

void write_model(const std::filesystem::path& path, const XlraModel& model) {
  model.validate();
  nlohmann::json h;
  h["format_version"] = kFormatVersion;
  h["basis"] = to_json(model.basis);
  h["dims"] = model.dims;
  h["target"] = model.target;
  h["scale"] = model.scale;
  h["applied_mean"] = model.applied_mean;
  h["config"] = to_json(model.config);
  h["rank"] = model.ranks.size();
  std::vector<double> betas;
  for (const auto& r : model.ranks) betas.push_back(r.beta);
  h["betas"] = betas;
  h["provenance"] = model.provenance;
  const std::string header = h.dump();

  io::Writer w;
  w.put_bytes(kMagic);
  w.put(static_cast<std::uint64_t>(header.size()));
  w.put_bytes(header);
  for (const auto& r : model.ranks)
    for (const auto& c : r.coeffs)
      for (const auto& z : c) {
        w.put(z.real());
        w.put(z.imag());
      }
  io::write_file_atomic(path, w.bytes());
}

XlraModel read_model(const std::filesystem::path& path) {
  io::Reader r(io::read_file(path));
  require(r.get_bytes(4) == kMagic, "read_model: bad magic in " + path.string());
  const auto len = r.get<std::uint64_t>();
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(r.get_bytes(static_cast<std::size_t>(len)));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("read_model: bad header: ") + e.what());
  }
  require(h.value("format_version", 0) == kFormatVersion, "read_model: unsupported format version");

  XlraModel m;
  try {
    m.basis = basis_from_json(h.at("basis"));
    m.dims = h.at("dims").get<std::vector<std::size_t>>();
    m.target = h.at("target").get<std::string>();
    m.scale = h.at("scale").get<double>();
    m.applied_mean = h.at("applied_mean").get<std::vector<double>>();
    m.config = train_config_from_json(h.at("config"));
    m.provenance = h.value("provenance", nlohmann::json::object());
    const auto betas = h.at("betas").get<std::vector<double>>();
    require(betas.size() == h.at("rank").get<std::size_t>(), "read_model: rank/beta count mismatch");
    const PeriodicGrid grid(m.dims);
    for (double b : betas) {
      RankTerm t;
      t.beta = b;
      t.coeffs.assign(m.basis.size(), ComplexField(grid.size()));
      for (auto& c : t.coeffs)
        for (auto& z : c) {
          const double re = r.get<double>();
          const double im = r.get<double>();
          z = Complex{re, im};
        }
      m.ranks.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("read_model: bad header: ") + e.what());
  }
  require(r.at_end(), "read_model: trailing bytes in " + path.string());
  m.validate();
  return m;
}

}  // namespace xlra
