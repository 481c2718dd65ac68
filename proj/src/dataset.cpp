#include "xlra/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "xlra/binary_io.hpp"
#include "xlra/error.hpp"

namespace xlra {

std::string to_string(EntryStatus s) {
  switch (s) {
    case EntryStatus::generated: return "generated";
    case EntryStatus::solved: return "solved";
    case EntryStatus::failed: return "failed";
  }
  return "generated";
}

EntryStatus entry_status_from_string(const std::string& s) {
  if (s == "generated") return EntryStatus::generated;
  if (s == "solved") return EntryStatus::solved;
  if (s == "failed") return EntryStatus::failed;
  throw ValidationError("manifest: unknown entry status '" + s + "'");
}

void DatasetManifest::validate() const {
  require(!entries.empty(), "manifest: no entries");
  static_cast<void>(PeriodicGrid(dims));
  material.validate();
  std::set<std::string> ids;
  for (const auto& e : entries) {
    require(!e.id.empty(), "manifest: entry without id");
    require(ids.insert(e.id).second, "manifest: duplicate entry id " + e.id);
    require(e.split == "train" || e.split == "test", "manifest: split must be train or test (entry " + e.id + ")");
    require(!e.microstructure.empty(), "manifest: entry " + e.id + " has no microstructure path");
    require(e.status != EntryStatus::solved || !e.field.empty(), "manifest: solved entry " + e.id + " has no field");
  }
}

std::vector<std::size_t> DatasetManifest::split_indices(const std::string& split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].split == split) out.push_back(i);
  return out;
}

nlohmann::json to_json(const DatasetManifest& m) {
  nlohmann::json j;
  j["format"] = "xlra-dataset/1";
  j["dims"] = m.dims;
  j["material"] = to_json(m.material);
  j["applied_strain"] = std::vector<double>(m.applied_strain.data(), m.applied_strain.data() + 6);
  j["config"] = m.config;
  auto& entries = j["entries"] = nlohmann::json::array();
  for (const auto& e : m.entries) {
    nlohmann::json je{{"id", e.id},
                      {"microstructure", e.microstructure.generic_string()},
                      {"field", e.field.empty() ? nlohmann::json(nullptr) : nlohmann::json(e.field.generic_string())},
                      {"split", e.split},
                      {"seed", e.seed},
                      {"status", to_string(e.status)}};
    if (e.status != EntryStatus::generated) {
      je["iterations"] = e.iterations;
      je["residual"] = e.residual;
    }
    if (!e.error.empty()) je["error"] = e.error;
    entries.push_back(std::move(je));
  }
  return j;
}

DatasetManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  DatasetManifest m;
  m.base_dir = base_dir;
  try {
    require(j.value("format", std::string{}) == "xlra-dataset/1", "manifest: unknown format");
    m.dims = j.at("dims").get<std::vector<std::size_t>>();
    m.material = material_from_json(j.at("material"));
    const auto e = j.at("applied_strain").get<std::vector<double>>();
    require(e.size() == 6, "manifest: applied_strain needs 6 components");
    for (int k = 0; k < 6; ++k) m.applied_strain(k) = e[static_cast<std::size_t>(k)];
    m.config = j.value("config", nlohmann::json::object());
    for (const auto& je : j.at("entries")) {
      DatasetEntry d;
      d.id = je.at("id").get<std::string>();
      d.microstructure = je.at("microstructure").get<std::string>();
      if (!je.at("field").is_null()) d.field = je.at("field").get<std::string>();
      d.split = je.at("split").get<std::string>();
      d.seed = je.at("seed").get<std::uint64_t>();
      d.status = entry_status_from_string(je.at("status").get<std::string>());
      d.iterations = je.value("iterations", std::size_t{0});
      d.residual = je.value("residual", 0.0);
      d.error = je.value("error", std::string{});
      m.entries.push_back(std::move(d));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  m.validate();
  return m;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
  m.validate();
  io::write_text_atomic(path, to_json(m).dump(2) + "\n");
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("manifest " + path.string() + ": " + e.what());
  }
  return manifest_from_json(j, path.parent_path());
}

void check_no_leakage(const DatasetManifest& m, const std::vector<std::string>& train_ids) {
  std::set<std::string> train(train_ids.begin(), train_ids.end());
  std::set<std::string> train_files;
  for (const auto& e : m.entries)
    if (e.split == "train") {
      train.insert(e.id);
      train_files.insert(e.microstructure.lexically_normal().generic_string());
    }
  for (const auto& e : m.entries) {
    if (e.split != "test") continue;
    if (train.count(e.id) || train_files.count(e.microstructure.lexically_normal().generic_string()))
      throw ValidationError("split leakage: test entry " + e.id + " is also a training instance");
  }
}

void validate_target(const std::string& target, int ndim) {
  if (target == "vm") return;
  const auto labels = strain_labels(ndim);
  require(std::find(labels.begin(), labels.end(), target) != labels.end(),
          "unknown target '" + target + "' for a " + std::to_string(ndim) + "D grid");
}

std::vector<double> target_field(const std::string& target, const StiffnessField& c, const StrainField& strain) {
  validate_target(target, strain.grid.ndim());
  if (target == "vm") return von_mises(hooke(c, strain));
  return strain.component(strain.component_index(target));
}

double target_scale(const Voigt6& applied) {
  const double s = applied.cwiseAbs().maxCoeff();
  require(s > 0.0, "applied strain must be nonzero");
  return s;
}

LoadedSplit load_split(const DatasetManifest& m, const std::string& split, const std::string& target) {
  LoadedSplit out;
  validate_target(target, static_cast<int>(m.dims.size()));
  for (std::size_t i : m.split_indices(split)) {
    const auto& e = m.entries[i];
    if (e.status != EntryStatus::solved) continue;
    auto ms = read_microstructure(m.base_dir / e.microstructure);
    require(ms.grid.dims() == m.dims, "entry " + e.id + ": grid does not match the manifest");
    const auto strain = read_field(m.base_dir / e.field);
    require(strain.grid.dims() == m.dims, "entry " + e.id + ": field grid does not match the manifest");
    const auto c = assemble_stiffness_field(ms, m.material);
    out.targets.push_back(target_field(target, c, strain));
    out.microstructures.push_back(std::move(ms));
    out.ids.push_back(e.id);
  }
  return out;
}

}  // namespace xlra
