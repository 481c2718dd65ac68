#pragma once

#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "xlra/basis.hpp"
#include "xlra/regression.hpp"

namespace xlra {

struct TrainConfig {
  double delta_t = 0.5;  // percent relative error threshold
  std::size_t r_max = 4;
  double ridge = 1e-8;
  double stop_fraction = 0.005;
  double beta_floor_rel = 1e-3;  // beta floor relative to max |target|
  bool parallel = true;

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig defaults = {});

/// One summand of the expansion: exp(IDFT(sum_j conj(A_j) Psi_j)) - beta.
struct RankTerm {
  double beta = 0.0;
  std::vector<ComplexField> coeffs;  // [basis j][frequency]
};

struct XlraModel {
  BasisSpec basis;
  std::vector<std::size_t> dims;
  std::string target;  // "e11", "e22", ..., or "vm"
  double scale = 1.0;  // targets are divided by this before training
  std::vector<double> applied_mean;
  TrainConfig config;
  std::vector<RankTerm> ranks;
  nlohmann::json provenance = nlohmann::json::object();

  std::size_t rank() const { return ranks.size(); }
  void validate() const;
};

/// Spectra Psi_j of the basis fields of `ms`.
FeatureSet featurize(const Microstructure& ms, const BasisSpec& basis);

struct LogShift {
  std::vector<double> values;
  double beta = 0.0;
};

/// beta = beta_floor + max(0, -min(field)); returns log(field + beta).
LogShift log_shift(std::span<const double> field, double beta_floor);
std::vector<double> log_shift_inverse(std::span<const double> log_values, double beta);

/// Fit one rank term on shared-beta log-shifted targets. `beta_floor` < 0
/// selects beta_floor_rel * max |target| over all instances.
RankTerm train_rank(std::span<const std::vector<double>> targets, std::span<const FeatureSet> features,
                    const PeriodicGrid& grid, double ridge, double beta_floor, bool parallel = true);

/// Spatial contribution of one rank term for the given features.
std::vector<double> rank_contribution(const RankTerm& term, const FeatureSet& features, const PeriodicGrid& grid);

struct RankDiagnostics {
  std::size_t rank = 0;
  double beta = 0.0;
  double unresolved_fraction_before = 0.0;  // cells above delta_t before this rank was added
  double train_relative_l2 = 0.0;           // percent, after this rank
};

struct DeltaField {
  std::vector<double> percent;
  std::size_t flagged = 0;  // cells whose oracle value was below the clamp
};

/// 100 |(oracle - prediction) / oracle| per cell, denominator clamped at
/// machine epsilon times max |oracle|.
DeltaField delta_field(std::span<const double> oracle, std::span<const double> prediction);

struct FitResult {
  XlraModel model;
  std::vector<RankDiagnostics> diagnostics;
  std::size_t flagged_cells = 0;
  std::size_t rejected_rank = 0;  // rank whose term raised the training error, 0 if none
};

/// Adaptive-rank training. `targets` are raw target fields (same units as the
/// oracle); they are divided by `scale` internally.
FitResult fit(std::span<const Microstructure> microstructures, std::span<const std::vector<double>> targets,
              const BasisSpec& basis, const std::string& target_label, double scale, const TrainConfig& config);

std::vector<double> predict(const XlraModel& model, const Microstructure& ms);
std::vector<double> predict_rank1(const XlraModel& model, const Microstructure& ms);
/// Prediction using the first `n_ranks` terms.
std::vector<double> predict_ranks(const XlraModel& model, const Microstructure& ms, std::size_t n_ranks);

/// Diagnostic mode: rank r is applied only at cells where the partial sum of
/// ranks < r still misses the oracle by more than delta_t percent.
std::vector<double> predict_oracle_masked(const XlraModel& model, const Microstructure& ms,
                                          std::span<const double> oracle);

// "XLM1" model file: magic | u64 header length | JSON header | complex
// blocks per (rank, basis), f64 real/imag interleaved, row-major frequencies.
void write_model(const std::filesystem::path& path, const XlraModel& model);
XlraModel read_model(const std::filesystem::path& path);

}  // namespace xlra
