#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "xlra/dataset.hpp"
#include "xlra/metrics.hpp"
#include "xlra/xlra.hpp"

namespace xlra {

struct GeneratorConfig {
  std::string kind = "two_phase";  // two_phase | porous | polycrystal | dual_phase
  double hard_vf = 0.2;
  double sigma = kDefaultBlurSigma;
  double porosity = 0.15;
  std::size_t n_grains = 10;
  std::vector<double> elongation;
  std::string sampling = "auto";  // auto | so3 | planar; auto means planar in 2D
};

/// Effective configuration of a run. Built from a JSON document layered on
/// default_config_json(); every CLI flag overrides one JSON path.
struct RunConfig {
  std::uint64_t seed = 1;
  std::vector<std::size_t> dims{31, 31};
  GeneratorConfig generator;
  MaterialSpec material;
  Voigt6 applied_strain = Voigt6::Zero();
  SolverOptions solver;
  ReferenceRule reference = ReferenceRule::mean;
  TrainConfig train;
  BasisSpec basis;
  std::string target = "e11";
  std::size_t n_instances = 200;
  double train_fraction = 0.05;
  std::filesystem::path output_dir = "out";
  std::string sweep_axis = "train_size";
  std::vector<double> sweep_values;
  EvalOptions eval;
  bool parallel = true;
  nlohmann::json source;  // the merged JSON this config was parsed from
};

nlohmann::json default_config_json();
RunConfig run_config_from_json(const nlohmann::json& j);
/// Apply "a.b.c=value" to a JSON document; value is parsed as JSON when it
/// parses, else taken as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Material presets: {"preset": "two_phase", "contrast": EC},
/// {"preset": "porous", "contrast": EC}, {"preset": "polycrystal", "metal": name},
/// {"preset": "dual_phase"}, or an explicit {"phases": [...]}.
MaterialSpec resolve_material(const nlohmann::json& j);
/// "auto" picks the basis that matches the generator and dimension.
BasisSpec resolve_basis(const nlohmann::json& j, const GeneratorConfig& gen, std::size_t ndim);

Microstructure generate_instance(const RunConfig& cfg, std::size_t index);
std::string instance_id(std::size_t index);
/// Training indices: the first round(train_fraction * n) entries (at least one)
/// of a seeded permutation of [0, n).
std::vector<std::size_t> train_indices(std::uint64_t seed, std::size_t n, double train_fraction);

struct SolvedInstance {
  Microstructure ms;
  StrainField strain;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool ok = false;
  std::string error;
};

/// Generate and solve every instance in memory. Instances are independent, so
/// the parallel path gives results identical to the serial one.
std::vector<SolvedInstance> build_instances(const RunConfig& cfg, std::size_t count, double* seconds_generate = nullptr,
                                            double* seconds_solve = nullptr);

/// Normalization used for MASE: the applied strain scale for strain targets,
/// the pooled oracle mean for von Mises stress.
double mase_scale(const std::string& target, const Voigt6& applied, const FieldSet& oracle);

/// Train on `train` and evaluate on `test` (indices into `data`).
struct TrainEvalResult {
  FitResult fit;
  EvalReport report;
  double seconds_train = 0.0;
  double seconds_predict = 0.0;
};
TrainEvalResult train_and_evaluate(const RunConfig& cfg, const std::vector<SolvedInstance>& data,
                                   const std::vector<std::size_t>& train, const std::vector<std::size_t>& test);

// File-based commands.
DatasetManifest generate_dataset(const RunConfig& cfg, const std::filesystem::path& dir);
struct SolveSummary {
  std::size_t solved = 0;
  std::size_t failed = 0;
};
SolveSummary solve_dataset(DatasetManifest& m, const SolverOptions& opts, ReferenceRule rule, bool parallel);
FitResult train_from_manifest(const DatasetManifest& m, const RunConfig& cfg);
EvalReport evaluate_on_manifest(const XlraModel& model, const DatasetManifest& m, const EvalOptions& opts);

struct SweepRow {
  std::string axis;
  double value = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::size_t rank = 0;
  double r2 = 0.0;
  double r2_rank1 = 0.0;
  double relative_l2 = 0.0;
  double seconds_generate = 0.0;
  double seconds_solve = 0.0;
  double seconds_train = 0.0;
  double seconds_predict = 0.0;
  std::string error;
};

/// One row per value along `cfg.sweep_axis` (train_size, delta_t, ec, zener,
/// basis_count). Errors are recorded per row and the sweep continues.
std::vector<SweepRow> run_sweep(const RunConfig& cfg);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace xlra
