#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xlra/elasticity.hpp"
#include "xlra/microstructure.hpp"

namespace xlra {

enum class EntryStatus { generated, solved, failed };

struct DatasetEntry {
  std::string id;
  std::filesystem::path microstructure;  // relative to the manifest directory
  std::filesystem::path field;           // empty until solved
  std::string split;                     // "train" or "test"
  std::uint64_t seed = 0;
  EntryStatus status = EntryStatus::generated;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::string error;
};

/// JSON index of a dataset directory. Paths are stored relative to the
/// manifest so a dataset directory can be moved as a whole.
struct DatasetManifest {
  std::vector<DatasetEntry> entries;
  std::vector<std::size_t> dims;
  MaterialSpec material;
  Voigt6 applied_strain = Voigt6::Zero();
  nlohmann::json config = nlohmann::json::object();  // effective config echo
  std::filesystem::path base_dir;                    // not serialized

  void validate() const;
  std::vector<std::size_t> split_indices(const std::string& split) const;
};

std::string to_string(EntryStatus s);
EntryStatus entry_status_from_string(const std::string& s);

nlohmann::json to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

void write_manifest(const std::filesystem::path& path, const DatasetManifest& m);
DatasetManifest read_manifest(const std::filesystem::path& path);

/// Throws ValidationError if any test entry shares an id or microstructure
/// file with a training entry, or with `train_ids` from a model.
void check_no_leakage(const DatasetManifest& m, const std::vector<std::string>& train_ids = {});

/// Scalar target extracted from a solved strain field: a strain component
/// label ("e11", ...) or "vm" for the von Mises stress.
std::vector<double> target_field(const std::string& target, const StiffnessField& c, const StrainField& strain);
void validate_target(const std::string& target, int ndim);

/// Scale used to normalize targets: max |applied strain component|.
double target_scale(const Voigt6& applied);

struct LoadedSplit {
  std::vector<std::string> ids;
  std::vector<Microstructure> microstructures;
  std::vector<std::vector<double>> targets;
};

/// Read the solved entries of one split and extract the target.
LoadedSplit load_split(const DatasetManifest& m, const std::string& split, const std::string& target);

}  // namespace xlra
