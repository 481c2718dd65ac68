#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace xlra {

/// A set of scalar fields (one per instance); metrics pool every cell.
using FieldSet = std::vector<std::vector<double>>;

double r2(const FieldSet& oracle, const FieldSet& prediction);
/// 100 * ||oracle - prediction||_2 / ||oracle||_2.
double relative_l2(const FieldSet& oracle, const FieldSet& prediction);
/// Unnormalized ||oracle - prediction||_2^2.
double squared_l2(const FieldSet& oracle, const FieldSet& prediction);
double relative_mae(const FieldSet& oracle, const FieldSet& prediction);
double relative_mse(const FieldSet& oracle, const FieldSet& prediction);
/// 100 * sum |oracle - prediction| / (N * mean_strain), N the pooled cell count.
double mase(const FieldSet& oracle, const FieldSet& prediction, double mean_strain);
/// Largest cellwise |oracle - prediction| / |oracle| in percent, over cells
/// whose oracle magnitude exceeds machine epsilon times max |oracle|.
double max_relative_error(const std::vector<double>& oracle, const std::vector<double>& prediction);

inline constexpr std::size_t kDefaultHistogramBins = 128;

struct Histogram {
  std::vector<double> edges;  // n_bins + 1
  std::vector<std::uint64_t> oracle;
  std::vector<std::uint64_t> prediction;
};

/// Pooled histograms of oracle and prediction on one shared binning. The
/// range defaults to [min, max] of the oracle; values outside are clipped
/// into the end bins.
Histogram histogram(const FieldSet& oracle, const FieldSet& prediction, std::size_t n_bins = kDefaultHistogramBins,
                    std::optional<std::pair<double, double>> range = std::nullopt);
/// Counts of a single field set on `n_bins` bins spanning its own range.
std::vector<std::uint64_t> histogram_counts(const FieldSet& values, std::size_t n_bins,
                                            std::optional<std::pair<double, double>> range = std::nullopt);

/// (oracle, prediction) pairs whose oracle value lies in the lowest or highest
/// ceil(tail_fraction * total) cells.
std::vector<std::pair<double, double>> parity_tail(const FieldSet& oracle, const FieldSet& prediction,
                                                   double tail_fraction);

struct FlopBreakdown {
  std::uint64_t coefficients = 0;  // {a} = 2k
  double fft_term = 0.0;           // 5 ({a} + 180) N log2 N
  double coefficient_term = 0.0;   // 72 {a} N
  double constant_term = 0.0;      // 648 N
  std::uint64_t total = 0;
};

FlopBreakdown xlra_train_flops_breakdown(std::uint64_t k, std::uint64_t n);
std::uint64_t xlra_train_flops(std::uint64_t k, std::uint64_t n);

struct InstanceMetrics {
  std::string id;
  double r2 = 0.0;  // NaN when the oracle field is constant
  double relative_l2 = 0.0;
  double relative_mae = 0.0;
  double mase = 0.0;
  double max_relative_error = 0.0;
  double max_relative_error_rank1 = 0.0;
  double mean_oracle = 0.0;
  double mean_prediction = 0.0;
};

struct EvalReport {
  std::string target;
  std::size_t rank = 0;
  std::size_t n_instances = 0;
  double r2 = 0.0;
  double r2_rank1 = 0.0;
  double relative_l2 = 0.0;
  double squared_l2 = 0.0;
  double relative_mae = 0.0;
  double relative_mse = 0.0;
  double mase = 0.0;
  /// Mean over instances of the relative error of the volume average, percent.
  double mean_relative_error_of_average = 0.0;
  std::size_t flagged_cells = 0;
  std::vector<InstanceMetrics> instances;
  Histogram hist;
  std::vector<std::pair<double, double>> parity;
};

struct EvalOptions {
  std::size_t n_bins = kDefaultHistogramBins;
  double tail_fraction = 0.01;
};

/// Full report. `rank1` may be empty; ids may be empty.
EvalReport evaluate_fields(const std::string& target, std::size_t rank, const FieldSet& oracle,
                           const FieldSet& prediction, const FieldSet& rank1, double mean_strain,
                           const std::vector<std::string>& ids = {}, const EvalOptions& opts = {});

nlohmann::json to_json(const EvalReport& r);
void write_histogram_csv(const std::filesystem::path& path, const Histogram& h);
void write_parity_csv(const std::filesystem::path& path, const std::vector<std::pair<double, double>>& pairs);

}  // namespace xlra
