#include "xlra/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "xlra/binary_io.hpp"
#include "xlra/error.hpp"

namespace xlra {

namespace {

std::size_t check_pair(const FieldSet& oracle, const FieldSet& prediction) {
  require(oracle.size() == prediction.size(), "metrics: instance count mismatch");
  std::size_t n = 0;
  for (std::size_t p = 0; p < oracle.size(); ++p) {
    require(oracle[p].size() == prediction[p].size(), "metrics: field size mismatch");
    n += oracle[p].size();
  }
  require(n > 0, "metrics: empty input");
  return n;
}

template <typename F>
void each_pair(const FieldSet& oracle, const FieldSet& prediction, F&& f) {
  for (std::size_t p = 0; p < oracle.size(); ++p)
    for (std::size_t i = 0; i < oracle[p].size(); ++i) f(oracle[p][i], prediction[p][i]);
}

}  // namespace

double r2(const FieldSet& oracle, const FieldSet& prediction) {
  const std::size_t n = check_pair(oracle, prediction);
  double mean = 0.0;
  for (const auto& f : oracle) mean = std::accumulate(f.begin(), f.end(), mean);
  mean /= static_cast<double>(n);
  double ss_res = 0.0, ss_tot = 0.0;
  each_pair(oracle, prediction, [&](double o, double p) {
    ss_res += (o - p) * (o - p);
    ss_tot += (o - mean) * (o - mean);
  });
  if (ss_tot == 0.0) throw ValidationError("r2: oracle is constant");
  return 1.0 - ss_res / ss_tot;
}

double relative_l2(const FieldSet& oracle, const FieldSet& prediction) {
  check_pair(oracle, prediction);
  double num = 0.0, den = 0.0;
  each_pair(oracle, prediction, [&](double o, double p) {
    num += (o - p) * (o - p);
    den += o * o;
  });
  if (den == 0.0) throw ValidationError("relative_l2: oracle norm is zero");
  return 100.0 * std::sqrt(num / den);
}

double squared_l2(const FieldSet& oracle, const FieldSet& prediction) {
  check_pair(oracle, prediction);
  double num = 0.0;
  each_pair(oracle, prediction, [&](double o, double p) { num += (o - p) * (o - p); });
  return num;
}

double relative_mae(const FieldSet& oracle, const FieldSet& prediction) {
  check_pair(oracle, prediction);
  double num = 0.0, den = 0.0;
  each_pair(oracle, prediction, [&](double o, double p) {
    num += std::abs(o - p);
    den += std::abs(o);
  });
  if (den == 0.0) throw ValidationError("relative_mae: oracle is zero");
  return num / den;
}

double relative_mse(const FieldSet& oracle, const FieldSet& prediction) {
  check_pair(oracle, prediction);
  double num = 0.0, den = 0.0;
  each_pair(oracle, prediction, [&](double o, double p) {
    num += (o - p) * (o - p);
    den += o * o;
  });
  if (den == 0.0) throw ValidationError("relative_mse: oracle is zero");
  return num / den;
}

double mase(const FieldSet& oracle, const FieldSet& prediction, double mean_strain) {
  const std::size_t n = check_pair(oracle, prediction);
  if (mean_strain == 0.0) throw ValidationError("mase: mean strain is zero");
  double sum = 0.0;
  each_pair(oracle, prediction, [&](double o, double p) { sum += std::abs(o - p); });
  return 100.0 * sum / (static_cast<double>(n) * std::abs(mean_strain));
}

double max_relative_error(const std::vector<double>& oracle, const std::vector<double>& prediction) {
  require(oracle.size() == prediction.size(), "max_relative_error: size mismatch");
  double scale = 0.0;
  for (double o : oracle) scale = std::max(scale, std::abs(o));
  const double floor = std::numeric_limits<double>::epsilon() * scale;
  double worst = 0.0;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    const double d = std::abs(oracle[i]);
    if (d > floor) worst = std::max(worst, 100.0 * std::abs(oracle[i] - prediction[i]) / d);
  }
  return worst;
}

namespace {

std::pair<double, double> value_range(const FieldSet& values) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& f : values)
    for (double v : f) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  require(lo <= hi, "histogram: empty input");
  return {lo, hi};
}

std::vector<double> make_edges(std::pair<double, double> range, std::size_t n_bins) {
  auto [lo, hi] = range;
  require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi, "histogram: invalid range");
  if (lo == hi) {
    // Degenerate range: centre the value in the first bin.
    const double half = lo == 0.0 ? 0.5 : 0.5 * std::abs(lo);
    hi = lo + half * static_cast<double>(2 * n_bins - 1);
    lo -= half;
  }
  std::vector<double> edges(n_bins + 1);
  for (std::size_t b = 0; b <= n_bins; ++b)
    edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(n_bins);
  return edges;
}

std::vector<std::uint64_t> bin(const FieldSet& values, const std::vector<double>& edges) {
  const std::size_t n_bins = edges.size() - 1;
  const double lo = edges.front(), width = (edges.back() - edges.front()) / static_cast<double>(n_bins);
  std::vector<std::uint64_t> counts(n_bins, 0);
  for (const auto& f : values)
    for (double v : f) {
      double pos = std::floor((v - lo) / width);
      if (!(pos >= 0.0)) pos = 0.0;
      const auto b = std::min(static_cast<std::size_t>(pos), n_bins - 1);
      ++counts[b];
    }
  return counts;
}

}  // namespace

std::vector<std::uint64_t> histogram_counts(const FieldSet& values, std::size_t n_bins,
                                            std::optional<std::pair<double, double>> range) {
  require(n_bins >= 2, "histogram: n_bins must be >= 2");
  return bin(values, make_edges(range ? *range : value_range(values), n_bins));
}

Histogram histogram(const FieldSet& oracle, const FieldSet& prediction, std::size_t n_bins,
                    std::optional<std::pair<double, double>> range) {
  require(n_bins >= 2, "histogram: n_bins must be >= 2");
  Histogram h;
  h.edges = make_edges(range ? *range : value_range(oracle), n_bins);
  h.oracle = bin(oracle, h.edges);
  h.prediction = bin(prediction, h.edges);
  return h;
}

std::vector<std::pair<double, double>> parity_tail(const FieldSet& oracle, const FieldSet& prediction,
                                                   double tail_fraction) {
  const std::size_t n = check_pair(oracle, prediction);
  require(tail_fraction > 0.0 && tail_fraction <= 0.5, "parity_tail: tail_fraction must be in (0, 0.5]");
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(n);
  each_pair(oracle, prediction, [&](double o, double p) { pairs.emplace_back(o, p); });
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const auto k = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
  if (2 * k >= n) return pairs;
  std::vector<std::pair<double, double>> out(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(k));
  out.insert(out.end(), pairs.end() - static_cast<std::ptrdiff_t>(k), pairs.end());
  return out;
}

FlopBreakdown xlra_train_flops_breakdown(std::uint64_t k, std::uint64_t n) {
  require(k >= 1, "flops: k must be >= 1");
  require(n >= 1, "flops: N must be >= 1");
  FlopBreakdown b;
  b.coefficients = 2 * k;
  const double a = static_cast<double>(b.coefficients);
  const double dn = static_cast<double>(n);
  b.fft_term = 5.0 * (a + 180.0) * dn * std::log2(dn);
  b.coefficient_term = 72.0 * a * dn;
  b.constant_term = 648.0 * dn;
  b.total = static_cast<std::uint64_t>(std::llround(b.fft_term + b.coefficient_term + b.constant_term));
  return b;
}

std::uint64_t xlra_train_flops(std::uint64_t k, std::uint64_t n) { return xlra_train_flops_breakdown(k, n).total; }

EvalReport evaluate_fields(const std::string& target, std::size_t rank, const FieldSet& oracle,
                           const FieldSet& prediction, const FieldSet& rank1, double mean_strain,
                           const std::vector<std::string>& ids, const EvalOptions& opts) {
  check_pair(oracle, prediction);
  EvalReport r;
  r.target = target;
  r.rank = rank;
  r.n_instances = oracle.size();
  r.r2 = xlra::r2(oracle, prediction);
  r.r2_rank1 = rank1.empty() ? r.r2 : xlra::r2(oracle, rank1);
  r.relative_l2 = xlra::relative_l2(oracle, prediction);
  r.squared_l2 = xlra::squared_l2(oracle, prediction);
  r.relative_mae = xlra::relative_mae(oracle, prediction);
  r.relative_mse = xlra::relative_mse(oracle, prediction);
  r.mase = xlra::mase(oracle, prediction, mean_strain);

  double avg_err = 0.0;
  for (std::size_t p = 0; p < oracle.size(); ++p) {
    const FieldSet o{oracle[p]}, q{prediction[p]};
    InstanceMetrics m;
    m.id = p < ids.size() ? ids[p] : std::to_string(p);
    try {
      m.r2 = xlra::r2(o, q);
    } catch (const ValidationError&) {
      m.r2 = std::numeric_limits<double>::quiet_NaN();
    }
    m.relative_l2 = xlra::relative_l2(o, q);
    m.relative_mae = xlra::relative_mae(o, q);
    m.mase = xlra::mase(o, q, mean_strain);
    m.max_relative_error = max_relative_error(oracle[p], prediction[p]);
    m.max_relative_error_rank1 = rank1.empty() ? m.max_relative_error : max_relative_error(oracle[p], rank1[p]);
    const double n = static_cast<double>(oracle[p].size());
    m.mean_oracle = std::accumulate(oracle[p].begin(), oracle[p].end(), 0.0) / n;
    m.mean_prediction = std::accumulate(prediction[p].begin(), prediction[p].end(), 0.0) / n;
    avg_err += 100.0 * std::abs(m.mean_prediction - m.mean_oracle) / std::abs(m.mean_oracle);

    double scale = 0.0;
    for (double v : oracle[p]) scale = std::max(scale, std::abs(v));
    for (double v : oracle[p])
      if (std::abs(v) < std::numeric_limits<double>::epsilon() * scale || v == 0.0) ++r.flagged_cells;
    r.instances.push_back(m);
  }
  r.mean_relative_error_of_average = avg_err / static_cast<double>(oracle.size());
  r.hist = histogram(oracle, prediction, opts.n_bins);
  r.parity = parity_tail(oracle, prediction, opts.tail_fraction);
  return r;
}

nlohmann::json to_json(const EvalReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["target"] = r.target;
  j["rank"] = r.rank;
  j["n_instances"] = r.n_instances;
  j["r2"] = num(r.r2);
  j["r2_rank1"] = num(r.r2_rank1);
  j["relative_l2_percent"] = num(r.relative_l2);
  j["squared_l2"] = num(r.squared_l2);
  j["relative_mae"] = num(r.relative_mae);
  j["relative_mse"] = num(r.relative_mse);
  j["mase_percent"] = num(r.mase);
  j["mean_relative_error_of_average_percent"] = num(r.mean_relative_error_of_average);
  j["flagged_cells"] = r.flagged_cells;
  auto& inst = j["instances"] = nlohmann::json::array();
  for (const auto& m : r.instances) {
    inst.push_back({{"id", m.id},
                    {"r2", num(m.r2)},
                    {"relative_l2_percent", num(m.relative_l2)},
                    {"relative_mae", num(m.relative_mae)},
                    {"mase_percent", num(m.mase)},
                    {"max_relative_error_percent", num(m.max_relative_error)},
                    {"max_relative_error_rank1_percent", num(m.max_relative_error_rank1)},
                    {"mean_oracle", num(m.mean_oracle)},
                    {"mean_prediction", num(m.mean_prediction)}});
  }
  j["histogram_bins"] = r.hist.oracle.size();
  j["parity_pairs"] = r.parity.size();
  return j;
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram& h) {
  std::ostringstream os;
  os.precision(17);
  os << "bin_low,bin_high,oracle_count,prediction_count\n";
  for (std::size_t b = 0; b < h.oracle.size(); ++b)
    os << h.edges[b] << ',' << h.edges[b + 1] << ',' << h.oracle[b] << ',' << h.prediction[b] << '\n';
  io::write_text_atomic(path, os.str());
}

void write_parity_csv(const std::filesystem::path& path, const std::vector<std::pair<double, double>>& pairs) {
  std::ostringstream os;
  os.precision(17);
  os << "oracle,prediction\n";
  for (const auto& [o, p] : pairs) os << o << ',' << p << '\n';
  io::write_text_atomic(path, os.str());
}

}  // namespace xlra
