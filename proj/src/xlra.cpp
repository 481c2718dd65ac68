#include "xlra/xlra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xlra/error.hpp"

namespace xlra {

void TrainConfig::validate() const {
  require(delta_t > 0.0, "train: delta_t must be > 0");
  require(r_max >= 1, "train: r_max must be >= 1");
  require(ridge >= 0.0 && std::isfinite(ridge), "train: ridge must be finite and >= 0");
  require(stop_fraction >= 0.0 && stop_fraction <= 1.0, "train: stop_fraction must be in [0, 1]");
  require(beta_floor_rel > 0.0 && std::isfinite(beta_floor_rel), "train: beta_floor_rel must be finite and > 0");
}

nlohmann::json to_json(const TrainConfig& c) {
  nlohmann::json j;
  // JSON has no infinity; null stands for delta_t = inf.
  j["delta_t"] = std::isfinite(c.delta_t) ? nlohmann::json(c.delta_t) : nlohmann::json(nullptr);
  j["r_max"] = c.r_max;
  j["ridge"] = c.ridge;
  j["stop_fraction"] = c.stop_fraction;
  j["beta_floor_rel"] = c.beta_floor_rel;
  j["parallel"] = c.parallel;
  return j;
}

TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig c) {
  require(j.is_object(), "train config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "delta_t") {
      if (value.is_null() || (value.is_string() && (value == "inf" || value == "infinity")))
        c.delta_t = std::numeric_limits<double>::infinity();
      else
        c.delta_t = value.get<double>();
    } else if (key == "r_max") {
      c.r_max = value.get<std::size_t>();
    } else if (key == "ridge") {
      c.ridge = value.get<double>();
    } else if (key == "stop_fraction") {
      c.stop_fraction = value.get<double>();
    } else if (key == "beta_floor_rel") {
      c.beta_floor_rel = value.get<double>();
    } else if (key == "parallel") {
      c.parallel = value.get<bool>();
    } else {
      throw ValidationError("train config: unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

void XlraModel::validate() const {
  basis.validate();
  const PeriodicGrid grid(dims);
  require(!ranks.empty(), "model: no rank terms");
  require(scale > 0.0 && std::isfinite(scale), "model: scale must be finite and > 0");
  for (const auto& r : ranks) {
    require(std::isfinite(r.beta) && r.beta > 0.0, "model: beta must be finite and > 0");
    require(r.coeffs.size() == basis.size(), "model: coefficient count does not match basis");
    for (const auto& c : r.coeffs) require(c.size() == grid.size(), "model: coefficient grid mismatch");
  }
}

FeatureSet featurize(const Microstructure& ms, const BasisSpec& basis) {
  const auto fields = basis_fields(ms, basis);
  const Fft fft(ms.grid);
  FeatureSet out;
  out.reserve(fields.size());
  for (const auto& f : fields) out.push_back(fft.forward_real(f));
  return out;
}

LogShift log_shift(std::span<const double> field, double beta_floor) {
  require(beta_floor > 0.0, "log_shift: beta_floor must be > 0");
  require(!field.empty(), "log_shift: empty field");
  const double lo = *std::min_element(field.begin(), field.end());
  LogShift out;
  out.beta = beta_floor + std::max(0.0, -lo);
  out.values.resize(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) out.values[i] = std::log(field[i] + out.beta);
  return out;
}

std::vector<double> log_shift_inverse(std::span<const double> log_values, double beta) {
  std::vector<double> out(log_values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(log_values[i]) - beta;
  return out;
}

namespace {

double max_abs(std::span<const std::vector<double>> fields) {
  double m = 0.0;
  for (const auto& f : fields)
    for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(std::span<const double> field) {
  double m = 0.0;
  for (double v : field) m = std::max(m, std::abs(v));
  return m;
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw NumericalError(std::string(what) + ": non-finite value");
}

}  // namespace

RankTerm train_rank(std::span<const std::vector<double>> targets, std::span<const FeatureSet> features,
                    const PeriodicGrid& grid, double ridge, double beta_floor, bool parallel) {
  require(!targets.empty() && targets.size() == features.size(), "train_rank: targets/features count mismatch");
  for (const auto& t : targets) {
    require(t.size() == grid.size(), "train_rank: target size does not match grid");
    check_finite(t, "train_rank target");
  }
  if (beta_floor < 0.0) beta_floor = 1e-3 * max_abs(targets);
  if (!(beta_floor > 0.0)) beta_floor = std::numeric_limits<double>::min();

  // One beta shared across instances so the log map is the same for all.
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& t : targets) lo = std::min(lo, *std::min_element(t.begin(), t.end()));

  RankTerm term;
  term.beta = beta_floor + std::max(0.0, -lo);
  const Fft fft(grid);
  std::vector<ComplexField> spectra;
  spectra.reserve(targets.size());
  for (const auto& t : targets) {
    std::vector<double> logt(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) logt[i] = std::log(t[i] + term.beta);
    spectra.push_back(fft.forward_real(logt));
  }
  term.coeffs = parallel ? fit_frequencies_parallel(features, spectra, ridge)
                         : fit_frequencies_serial(features, spectra, ridge);
  return term;
}

std::vector<double> rank_contribution(const RankTerm& term, const FeatureSet& features, const PeriodicGrid& grid) {
  const ComplexField spec = combine_parallel(term.coeffs, features);
  const Fft fft(grid);
  auto out = fft.inverse_real(spec);
  for (auto& v : out) v = std::exp(v) - term.beta;
  check_finite(out, "rank contribution");
  return out;
}

DeltaField delta_field(std::span<const double> oracle, std::span<const double> prediction) {
  require(oracle.size() == prediction.size(), "delta_field: size mismatch");
  const double floor = std::numeric_limits<double>::epsilon() * max_abs(oracle);
  DeltaField d;
  d.percent.resize(oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    double denom = std::abs(oracle[i]);
    if (denom < floor || denom == 0.0) {
      denom = floor > 0.0 ? floor : 1.0;
      ++d.flagged;
    }
    d.percent[i] = 100.0 * std::abs(oracle[i] - prediction[i]) / denom;
  }
  return d;
}

namespace {

double relative_l2_percent(std::span<const std::vector<double>> truth, std::span<const std::vector<double>> pred) {
  double num = 0.0, den = 0.0;
  for (std::size_t p = 0; p < truth.size(); ++p)
    for (std::size_t i = 0; i < truth[p].size(); ++i) {
      num += (truth[p][i] - pred[p][i]) * (truth[p][i] - pred[p][i]);
      den += truth[p][i] * truth[p][i];
    }
  return den > 0.0 ? 100.0 * std::sqrt(num / den) : 0.0;
}

}  // namespace

FitResult fit(std::span<const Microstructure> microstructures, std::span<const std::vector<double>> targets,
              const BasisSpec& basis, const std::string& target_label, double scale, const TrainConfig& config) {
  config.validate();
  basis.validate();
  require(!microstructures.empty(), "fit: empty training set");
  require(microstructures.size() == targets.size(), "fit: microstructure/target count mismatch");
  require(scale > 0.0 && std::isfinite(scale), "fit: scale must be finite and > 0");
  const PeriodicGrid& grid = microstructures[0].grid;
  for (const auto& ms : microstructures)
    require(ms.grid.dims() == grid.dims(), "fit: all training instances must share one grid");

  FitResult result;
  XlraModel& model = result.model;
  model.basis = basis;
  model.dims = grid.dims();
  model.target = target_label;
  model.scale = scale;
  model.config = config;

  std::vector<FeatureSet> features(microstructures.size());
  for (std::size_t p = 0; p < microstructures.size(); ++p) features[p] = featurize(microstructures[p], basis);

  std::vector<std::vector<double>> norm(targets.size());
  for (std::size_t p = 0; p < targets.size(); ++p) {
    require(targets[p].size() == grid.size(), "fit: target size does not match grid");
    norm[p] = targets[p];
    for (auto& v : norm[p]) v /= scale;
  }

  std::vector<std::vector<double>> current(norm.size(), std::vector<double>(grid.size(), 0.0));
  std::vector<std::vector<double>> residual = norm;
  double unresolved = 1.0;
  for (std::size_t r = 1; r <= config.r_max; ++r) {
    if (r > 1) {
      // Decide whether another rank is needed from the training-set residual.
      std::size_t above = 0, total = 0;
      for (std::size_t p = 0; p < norm.size(); ++p) {
        const auto d = delta_field(norm[p], current[p]);
        for (double v : d.percent) above += v > config.delta_t ? 1 : 0;
        total += d.percent.size();
      }
      unresolved = static_cast<double>(above) / static_cast<double>(total);
      if (unresolved <= config.stop_fraction) break;
      for (std::size_t p = 0; p < norm.size(); ++p)
        for (std::size_t i = 0; i < grid.size(); ++i) residual[p][i] = norm[p][i] - current[p][i];
    }
    RankTerm term = train_rank(residual, features, grid, config.ridge, config.beta_floor_rel * max_abs(residual),
                               config.parallel);
    auto next = current;
    for (std::size_t p = 0; p < norm.size(); ++p) {
      const auto c = rank_contribution(term, features[p], grid);
      for (std::size_t i = 0; i < grid.size(); ++i) next[p][i] += c[i];
    }
    const double l2 = relative_l2_percent(norm, next);
    // The log-domain fit does not minimize the linear error, so a correction
    // can make the training fit worse; such a term is discarded.
    if (r > 1 && l2 > result.diagnostics.back().train_relative_l2) {
      result.rejected_rank = r;
      break;
    }
    current = std::move(next);
    RankDiagnostics diag;
    diag.rank = r;
    diag.beta = term.beta;
    diag.unresolved_fraction_before = unresolved;
    diag.train_relative_l2 = l2;
    result.diagnostics.push_back(diag);
    model.ranks.push_back(std::move(term));
    // delta_t = inf can never leave unresolved cells.
    if (!std::isfinite(config.delta_t)) break;
  }
  // The clamp depends on the oracle only, so any prediction gives the count.
  for (std::size_t p = 0; p < norm.size(); ++p) result.flagged_cells += delta_field(norm[p], norm[p]).flagged;
  return result;
}

std::vector<double> predict_ranks(const XlraModel& model, const Microstructure& ms, std::size_t n_ranks) {
  require(ms.grid.dims() == model.dims, "predict: microstructure grid does not match the model");
  require(n_ranks >= 1 && n_ranks <= model.ranks.size(), "predict: rank count out of range");
  const FeatureSet features = featurize(ms, model.basis);
  std::vector<double> out(ms.grid.size(), 0.0);
  for (std::size_t r = 0; r < n_ranks; ++r) {
    const auto c = rank_contribution(model.ranks[r], features, ms.grid);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i];
  }
  for (auto& v : out) v *= model.scale;
  return out;
}

std::vector<double> predict(const XlraModel& model, const Microstructure& ms) {
  return predict_ranks(model, ms, model.ranks.size());
}

std::vector<double> predict_rank1(const XlraModel& model, const Microstructure& ms) {
  return predict_ranks(model, ms, 1);
}

std::vector<double> predict_oracle_masked(const XlraModel& model, const Microstructure& ms,
                                          std::span<const double> oracle) {
  require(ms.grid.dims() == model.dims, "predict: microstructure grid does not match the model");
  require(oracle.size() == ms.grid.size(), "predict: oracle size mismatch");
  const FeatureSet features = featurize(ms, model.basis);
  std::vector<double> out(ms.grid.size(), 0.0);
  for (std::size_t r = 0; r < model.ranks.size(); ++r) {
    const auto c = rank_contribution(model.ranks[r], features, ms.grid);
    if (r == 0) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = c[i] * model.scale;
      continue;
    }
    const auto d = delta_field(oracle, out);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (d.percent[i] > model.config.delta_t) out[i] += c[i] * model.scale;
  }
  return out;
}

}  // namespace xlra
