// xlra: command-line driver for dataset generation, the spectral oracle,
// surrogate training, prediction, evaluation and sweeps.

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "xlra/binary_io.hpp"
#include "xlra/error.hpp"
#include "xlra/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace xlra;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct ConfigArgs {
  std::string file;
  std::vector<std::string> sets;
  int threads = 0;
};

void add_config_args(CLI::App* cmd, ConfigArgs& a) {
  cmd->add_option("-c,--config", a.file, "JSON config file");
  cmd->add_option("--set", a.sets, "Override one config path, e.g. --set train.r_max=2")->take_all();
  cmd->add_option("--threads", a.threads, "OpenMP worker count (0 = runtime default)");
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

/// Layer: base (defaults or a manifest's config echo), then the config file,
/// then --set overrides, then the per-command flags already folded into sets.
RunConfig load_config(const json& base, const ConfigArgs& a) {
  if (a.threads > 0) omp_set_num_threads(a.threads);
  json doc = base;
  if (!a.file.empty()) {
    const json file = read_json(a.file);
    require(file.is_object(), "config file must hold a JSON object");
    for (const auto& [k, v] : file.items()) {
      if ((k == "material" || k == "basis") || !v.is_object() || !doc.contains(k) || !doc[k].is_object())
        doc[k] = v;
      else
        doc[k].merge_patch(v);
    }
  }
  for (const auto& s : a.sets) apply_override(doc, s);
  return run_config_from_json(doc);
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_generate(const ConfigArgs& a) {
  const RunConfig cfg = load_config(json::object(), a);
  const auto m = generate_dataset(cfg, cfg.output_dir);
  io::write_text_atomic(cfg.output_dir / "config.json", cfg.source.dump(2) + "\n");
  print_json({{"manifest", (cfg.output_dir / "manifest.json").string()},
              {"instances", m.entries.size()},
              {"train", m.split_indices("train").size()},
              {"test", m.split_indices("test").size()}});
  return kExitOk;
}

int cmd_solve(const fs::path& manifest_path, const ConfigArgs& a) {
  auto m = read_manifest(manifest_path);
  const RunConfig cfg = load_config(m.config, a);
  const auto s = solve_dataset(m, cfg.solver, cfg.reference, cfg.parallel);
  json log = json::array();
  for (const auto& e : m.entries) {
    json row{{"id", e.id}, {"status", to_string(e.status)}, {"iterations", e.iterations}, {"residual", e.residual}};
    if (!e.error.empty()) row["error"] = e.error;
    log.push_back(row);
  }
  io::write_text_atomic(m.base_dir / "solve_log.json", log.dump(2) + "\n");
  print_json({{"solved", s.solved}, {"failed", s.failed}, {"log", (m.base_dir / "solve_log.json").string()}});
  // Failed entries do not stop the batch, but they are reported as a
  // numerical failure.
  return s.failed == 0 ? kExitOk : kExitNumerical;
}

int cmd_train(const fs::path& manifest_path, const fs::path& model_out, const ConfigArgs& a) {
  const auto m = read_manifest(manifest_path);
  const RunConfig cfg = load_config(m.config, a);
  const auto r = train_from_manifest(m, cfg);
  const fs::path out = model_out.empty() ? m.base_dir / ("model_" + cfg.target + ".xlm") : model_out;
  write_model(out, r.model);
  json diag = json::array();
  for (const auto& d : r.diagnostics)
    diag.push_back({{"rank", d.rank},
                    {"beta", d.beta},
                    {"unresolved_fraction_before", d.unresolved_fraction_before},
                    {"train_relative_l2_percent", d.train_relative_l2}});
  json report{{"model", out.string()},
              {"target", r.model.target},
              {"rank", r.model.rank()},
              {"train_instances", r.model.provenance["train_ids"].size()},
              {"ranks", diag},
              {"rejected_rank", r.rejected_rank},
              {"flagged_cells", r.flagged_cells},
              {"config", cfg.source}};
  io::write_text_atomic(fs::path(out).replace_extension(".train.json"), report.dump(2) + "\n");
  report.erase("config");
  print_json(report);
  return kExitOk;
}

int cmd_predict(const fs::path& model_path, const std::vector<std::string>& inputs, const fs::path& out_dir) {
  const auto model = read_model(model_path);
  fs::create_directories(out_dir);
  json written = json::array();
  for (const auto& in : inputs) {
    const auto ms = read_microstructure(in);
    require(ms.grid.dims() == model.dims, "predict: " + in + " has a grid that does not match the model");
    auto values = predict(model, ms);
    const fs::path out = out_dir / (fs::path(in).stem().string() + "." + model.target + ".xfd");
    write_field(out, scalar_field(ms.grid, std::move(values), model.target));
    written.push_back(out.string());
  }
  print_json({{"written", written}});
  return kExitOk;
}

int cmd_evaluate(const fs::path& model_path, const fs::path& manifest_path, fs::path out_dir, const ConfigArgs& a) {
  const auto model = read_model(model_path);
  const auto m = read_manifest(manifest_path);
  const RunConfig cfg = load_config(m.config, a);
  if (out_dir.empty()) out_dir = m.base_dir / ("eval_" + model.target);
  const auto report = evaluate_on_manifest(model, m, cfg.eval);
  fs::create_directories(out_dir);
  json j = to_json(report);
  j["model"] = model_path.string();
  j["config"] = cfg.source;
  io::write_text_atomic(out_dir / "report.json", j.dump(2) + "\n");
  write_histogram_csv(out_dir / "histogram.csv", report.hist);
  write_parity_csv(out_dir / "parity.csv", report.parity);
  print_json({{"target", report.target},
              {"rank", report.rank},
              {"test_instances", report.n_instances},
              {"r2", report.r2},
              {"r2_rank1", report.r2_rank1},
              {"relative_l2_percent", report.relative_l2},
              {"squared_l2", report.squared_l2},
              {"relative_mae", report.relative_mae},
              {"relative_mse", report.relative_mse},
              {"mase_percent", report.mase},
              {"report", (out_dir / "report.json").string()}});
  return kExitOk;
}

int cmd_sweep(const std::string& axis, const std::vector<std::string>& values, fs::path out, ConfigArgs a) {
  if (!axis.empty()) a.sets.push_back("sweep.axis=\"" + axis + "\"");
  if (!values.empty()) {
    std::string list = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
      const bool inf = values[i] == "inf" || values[i] == "infinity";
      list += (i ? "," : "") + (inf ? std::string("null") : values[i]);
    }
    a.sets.push_back("sweep.values=" + list + "]");
  }
  const RunConfig cfg = load_config(json::object(), a);
  const auto rows = run_sweep(cfg);
  if (out.empty()) out = cfg.output_dir / ("sweep_" + cfg.sweep_axis + ".csv");
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  io::write_text_atomic(out, sweep_csv(rows));
  io::write_text_atomic(fs::path(out).replace_extension(".config.json"), cfg.source.dump(2) + "\n");
  std::cout << sweep_csv(rows);
  for (const auto& r : rows)
    if (!r.error.empty()) return kExitNumerical;
  return kExitOk;
}

int cmd_flops(std::uint64_t k, std::uint64_t n) {
  const auto b = xlra_train_flops_breakdown(k, n);
  print_json({{"k", k},
              {"N", n},
              {"coefficients", b.coefficients},
              {"fft_term", b.fft_term},
              {"coefficient_term", b.coefficient_term},
              {"constant_term", b.constant_term},
              {"total", b.total}});
  return kExitOk;
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

int cmd_export_csv(const fs::path& in, const fs::path& out) {
  const auto bytes = io::read_file(in);
  const std::string magic(bytes.begin(), bytes.begin() + std::min<std::size_t>(4, bytes.size()));
  std::ostringstream os;
  if (magic == "XFD1") {
    const auto f = read_field(in);
    os << "cell";
    for (std::size_t d = 0; d < static_cast<std::size_t>(f.grid.ndim()); ++d) os << ",x" << d;
    for (const auto& l : f.labels) os << ',' << l;
    os << '\n';
    for (std::size_t c = 0; c < f.grid.size(); ++c) {
      os << c;
      const auto at = f.grid.unravel(c);
      for (std::size_t d = 0; d < static_cast<std::size_t>(f.grid.ndim()); ++d) os << ',' << at[d];
      for (std::size_t k = 0; k < f.n_components; ++k) os << ',' << csv_number(f.at(c, k));
      os << '\n';
    }
  } else if (magic == "XMS1") {
    const auto ms = read_microstructure(in);
    os << "cell";
    for (std::size_t d = 0; d < static_cast<std::size_t>(ms.grid.ndim()); ++d) os << ",x" << d;
    if (ms.phase) os << ",phase";
    if (ms.orientation) os << ",phi1,Phi,phi2";
    os << '\n';
    for (std::size_t c = 0; c < ms.grid.size(); ++c) {
      os << c;
      const auto at = ms.grid.unravel(c);
      for (std::size_t d = 0; d < static_cast<std::size_t>(ms.grid.ndim()); ++d) os << ',' << at[d];
      if (ms.phase) os << ',' << (*ms.phase)[c];
      if (ms.orientation) {
        const auto& g = (*ms.orientation)[c];
        os << ',' << csv_number(g.phi1) << ',' << csv_number(g.Phi) << ',' << csv_number(g.phi2);
      }
      os << '\n';
    }
  } else {
    throw ValidationError("export-csv: " + in.string() + " is neither a field nor a microstructure file");
  }
  io::write_text_atomic(out, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xLRA surrogate for local elastic fields in heterogeneous microstructures"};
  app.require_subcommand(1);

  ConfigArgs gen_args, solve_args, train_args, eval_args, sweep_args;
  std::string out_dir, manifest, model, target, axis, out_path;
  std::vector<std::string> inputs, values;
  std::uint64_t flops_k = 1, flops_n = 1;
  std::size_t n_instances = 0;
  double train_fraction = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto* gen = app.add_subcommand("generate", "Generate a microstructure dataset and its manifest");
  add_config_args(gen, gen_args);
  gen->add_option("-o,--out", out_dir, "Output directory");
  gen->add_option("-n,--instances", n_instances, "Number of instances");
  gen->add_option("--train-fraction", train_fraction, "Fraction of instances in the train split");
  gen->add_option("--seed", seed, "Global seed")->each([&](const std::string&) { seed_set = true; });

  auto* solve = app.add_subcommand("solve", "Run the spectral oracle on every dataset entry");
  add_config_args(solve, solve_args);
  solve->add_option("-m,--manifest", manifest, "Dataset manifest")->required();

  auto* train = app.add_subcommand("train", "Fit an xLRA model on the train split");
  add_config_args(train, train_args);
  train->add_option("-m,--manifest", manifest, "Dataset manifest")->required();
  train->add_option("-o,--out", out_path, "Model file (default <dataset>/model_<target>.xlm)");
  train->add_option("-t,--target", target, "Target: e11, e22, e33, e23, e13, e12 or vm");

  auto* pred = app.add_subcommand("predict", "Predict fields for microstructure files");
  pred->add_option("--model", model, "Model file")->required();
  pred->add_option("-i,--input", inputs, "Microstructure files")->required()->take_all();
  pred->add_option("-o,--out", out_dir, "Output directory")->required();

  auto* eval = app.add_subcommand("evaluate", "Evaluate a model on the test split");
  add_config_args(eval, eval_args);
  eval->add_option("--model", model, "Model file")->required();
  eval->add_option("-m,--manifest", manifest, "Dataset manifest")->required();
  eval->add_option("-o,--out", out_dir, "Report directory (default <dataset>/eval_<target>)");

  auto* sweep = app.add_subcommand("sweep", "Generate, solve, train and evaluate along one axis");
  add_config_args(sweep, sweep_args);
  sweep->add_option("--axis", axis, "train_size, delta_t, ec, zener or basis_count");
  sweep->add_option("--values", values, "Axis values (inf allowed for delta_t)")->take_all();
  sweep->add_option("-o,--out", out_path, "CSV path");

  auto* flops = app.add_subcommand("flops", "Training FLOP estimate for max rank k and N cells");
  flops->add_option("-k", flops_k, "Maximum rank")->required();
  flops->add_option("-n,-N", flops_n, "Total cell count")->required();

  auto* exp = app.add_subcommand("export-csv", "Convert a field or microstructure file to CSV");
  exp->add_option("-i,--input", out_dir, "Field (.xfd) or microstructure (.xms) file")->required();
  exp->add_option("-o,--out", out_path, "CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*gen) {
      if (!out_dir.empty()) gen_args.sets.push_back("output_dir=\"" + out_dir + "\"");
      if (n_instances) gen_args.sets.push_back("dataset.n_instances=" + std::to_string(n_instances));
      if (train_fraction > 0.0) gen_args.sets.push_back("dataset.train_fraction=" + csv_number(train_fraction));
      if (seed_set) gen_args.sets.push_back("seed=" + std::to_string(seed));
      return cmd_generate(gen_args);
    }
    if (*solve) return cmd_solve(manifest, solve_args);
    if (*train) {
      if (!target.empty()) train_args.sets.push_back("target=\"" + target + "\"");
      return cmd_train(manifest, out_path, train_args);
    }
    if (*pred) return cmd_predict(model, inputs, out_dir);
    if (*eval) return cmd_evaluate(model, manifest, out_dir, eval_args);
    if (*sweep) return cmd_sweep(axis, values, out_path, sweep_args);
    if (*flops) return cmd_flops(flops_k, flops_n);
    if (*exp) return cmd_export_csv(out_dir, out_path);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
