#include "xlra/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "xlra/error.hpp"
#include "xlra/random.hpp"

namespace xlra {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <typename T>
T get_or_throw(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("config: unknown key '" + key + "' in " + where);
  }
}

/// Sweep values accept null or "inf" for an infinite threshold.
double sweep_value(const nlohmann::json& v) {
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw ValidationError("config: sweep value '" + s + "' is not a number");
  }
  return v.get<double>();
}

}  // namespace

nlohmann::json default_config_json() {
  return {
      {"seed", 1},
      {"dims", {31, 31}},
      {"generator",
       {{"kind", "two_phase"},
        {"hard_vf", 0.2},
        {"sigma", kDefaultBlurSigma},
        {"porosity", 0.15},
        {"n_grains", 10},
        {"elongation", nlohmann::json::array()},
        {"sampling", "auto"}}},
      {"material", {{"preset", "two_phase"}, {"contrast", 10.0}}},
      {"applied_strain", {1e-4, 0.0, 0.0, 0.0, 0.0, 0.0}},
      {"solver", {{"tol", 1e-8}, {"max_iter", 10000}, {"scheme", "auto"}, {"reference", "mean"}}},
      {"train", to_json(TrainConfig{})},
      {"basis", "auto"},
      {"target", "e11"},
      {"dataset", {{"n_instances", 200}, {"train_fraction", 0.05}}},
      {"output_dir", "out"},
      {"sweep", {{"axis", "train_size"}, {"values", {0.01, 0.02, 0.05, 0.1}}}},
      {"eval", {{"n_bins", kDefaultHistogramBins}, {"tail_fraction", 0.01}}},
      {"parallel", true},
  };
}

MaterialSpec resolve_material(const nlohmann::json& j) {
  require(j.is_object(), "config: material must be an object");
  if (j.contains("phases")) return material_from_json(j);
  const auto preset = get_or_throw<std::string>(j, "preset");
  if (preset == "two_phase" || preset == "porous") {
    reject_unknown(j, {"preset", "contrast", "poisson"}, "material");
    const double fallback = preset == "porous" ? 1e4 : 10.0;
    auto m = MaterialSpec::two_phase(j.value("contrast", fallback), j.value("poisson", 0.3));
    m.label = preset;
    return m;
  }
  if (preset == "polycrystal") {
    reject_unknown(j, {"preset", "metal", "zener"}, "material");
    PhaseMaterial crystal = fcc_metal(j.value("metal", std::string("Ni")));
    if (j.contains("zener")) {
      // Same C11 and C12, C44 chosen for the requested anisotropy ratio.
      const double z = get_or_throw<double>(j, "zener");
      require(z > 0.0, "config: zener must be > 0");
      crystal.c44 = 0.5 * z * (crystal.c11 - crystal.c12);
    }
    return MaterialSpec::polycrystal(crystal);
  }
  if (preset == "dual_phase") {
    reject_unknown(j, {"preset"}, "material");
    return MaterialSpec::dual_phase_steel();
  }
  throw ValidationError("config: unknown material preset '" + preset + "'");
}

BasisSpec resolve_basis(const nlohmann::json& j, const GeneratorConfig& gen, std::size_t ndim) {
  if (!(j.is_string() && j.get<std::string>() == "auto")) return basis_from_json(j);
  const BasisSpec orientation = ndim == 2 ? BasisSpec::planar(1) : BasisSpec::gsh(10);
  if (gen.kind == "two_phase" || gen.kind == "porous") return BasisSpec::primitive(2);
  if (gen.kind == "polycrystal") return orientation;
  if (gen.kind == "dual_phase") return BasisSpec::dual(orientation);
  throw ValidationError("config: unknown generator kind '" + gen.kind + "'");
}

RunConfig run_config_from_json(const nlohmann::json& user) {
  require(user.is_object(), "config must be a JSON object");
  nlohmann::json j = default_config_json();
  for (const auto& [key, value] : user.items()) {
    if (!j.contains(key)) throw ValidationError("config: unknown key '" + key + "'");
    // Material and basis are replaced wholesale so presets never mix with
    // explicit phase lists.
    if (key == "material" || key == "basis" || !value.is_object())
      j[key] = value;
    else
      j[key].merge_patch(value);
  }

  RunConfig c;
  c.source = j;
  try {
    c.seed = j.at("seed").get<std::uint64_t>();
    c.dims = j.at("dims").get<std::vector<std::size_t>>();
    static_cast<void>(PeriodicGrid(c.dims));

    const auto& g = j.at("generator");
    reject_unknown(g, {"kind", "hard_vf", "sigma", "porosity", "n_grains", "elongation", "sampling"}, "generator");
    c.generator.kind = g.at("kind").get<std::string>();
    c.generator.hard_vf = g.at("hard_vf").get<double>();
    c.generator.sigma = g.at("sigma").get<double>();
    c.generator.porosity = g.at("porosity").get<double>();
    c.generator.n_grains = g.at("n_grains").get<std::size_t>();
    c.generator.elongation = g.at("elongation").get<std::vector<double>>();
    c.generator.sampling = g.at("sampling").get<std::string>();
    require(c.generator.sampling == "auto" || c.generator.sampling == "so3" || c.generator.sampling == "planar",
            "config: generator.sampling must be auto, so3 or planar");

    c.material = resolve_material(j.at("material"));

    const auto e = j.at("applied_strain").get<std::vector<double>>();
    require(e.size() == 6, "config: applied_strain needs 6 Voigt components");
    for (int k = 0; k < 6; ++k) c.applied_strain(k) = e[static_cast<std::size_t>(k)];
    target_scale(c.applied_strain);
    if (c.dims.size() == 2)
      require(e[2] == 0.0 && e[3] == 0.0 && e[4] == 0.0, "config: 2D runs are plane strain; e33, e23, e13 must be 0");

    const auto& s = j.at("solver");
    reject_unknown(s, {"tol", "max_iter", "scheme", "reference", "accelerate_above_contrast"}, "solver");
    c.solver.tol = s.at("tol").get<double>();
    c.solver.max_iter = s.at("max_iter").get<std::size_t>();
    c.solver.scheme = solver_scheme_from_string(s.at("scheme").get<std::string>());
    c.solver.accelerate_above_contrast = s.value("accelerate_above_contrast", c.solver.accelerate_above_contrast);
    c.reference = reference_rule_from_string(s.at("reference").get<std::string>());
    require(c.solver.tol > 0.0, "config: solver.tol must be > 0");
    require(c.solver.max_iter >= 1, "config: solver.max_iter must be >= 1");

    c.train = train_config_from_json(j.at("train"));
    c.basis = resolve_basis(j.at("basis"), c.generator, c.dims.size());
    c.target = j.at("target").get<std::string>();
    validate_target(c.target, static_cast<int>(c.dims.size()));

    const auto& d = j.at("dataset");
    reject_unknown(d, {"n_instances", "train_fraction"}, "dataset");
    c.n_instances = d.at("n_instances").get<std::size_t>();
    c.train_fraction = d.at("train_fraction").get<double>();
    require(c.n_instances >= 1, "config: dataset.n_instances must be >= 1");
    require(c.train_fraction > 0.0 && c.train_fraction <= 1.0, "config: dataset.train_fraction must be in (0, 1]");

    c.output_dir = j.at("output_dir").get<std::string>();

    const auto& sw = j.at("sweep");
    reject_unknown(sw, {"axis", "values"}, "sweep");
    c.sweep_axis = sw.at("axis").get<std::string>();
    for (const auto& v : sw.at("values")) c.sweep_values.push_back(sweep_value(v));

    const auto& ev = j.at("eval");
    reject_unknown(ev, {"n_bins", "tail_fraction"}, "eval");
    c.eval.n_bins = ev.at("n_bins").get<std::size_t>();
    c.eval.tail_fraction = ev.at("tail_fraction").get<double>();
    require(c.eval.n_bins >= 2, "config: eval.n_bins must be >= 2");
    require(c.eval.tail_fraction > 0.0 && c.eval.tail_fraction <= 0.5, "config: eval.tail_fraction must be in (0, 0.5]");

    c.parallel = j.at("parallel").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }

  // Check that the generator and material agree on the phase count.
  const auto& kind = c.generator.kind;
  require(kind == "two_phase" || kind == "porous" || kind == "polycrystal" || kind == "dual_phase",
          "config: unknown generator kind '" + kind + "'");
  const std::size_t phases = kind == "polycrystal" ? 1 : 2;
  require(c.material.phases.size() >= phases, "config: material has fewer phases than the generator produces");
  return c;
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos && eq > 0, "override must look like path=value: '" + assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    require(!key.empty(), "override has an empty path component: '" + assignment + "'");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = nlohmann::json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
}

std::string instance_id(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return buf;
}

Microstructure generate_instance(const RunConfig& cfg, std::size_t index) {
  const std::uint64_t seed = derive_seed(cfg.seed, index);
  const auto& g = cfg.generator;
  VoronoiOptions vo;
  vo.elongation = g.elongation;
  const bool planar = g.sampling == "planar" || (g.sampling == "auto" && cfg.dims.size() == 2);
  vo.sampling = planar ? OrientationSampling::planar : OrientationSampling::so3;
  if (g.kind == "two_phase") return gen_two_phase(seed, cfg.dims, g.hard_vf, g.sigma);
  if (g.kind == "porous") return gen_porous(seed, cfg.dims, g.porosity, g.sigma);
  if (g.kind == "polycrystal") return gen_voronoi_polycrystal(seed, cfg.dims, g.n_grains, vo);
  if (g.kind == "dual_phase") return gen_dual_phase(seed, cfg.dims, g.n_grains, g.hard_vf, vo);
  throw ValidationError("unknown generator kind '" + g.kind + "'");
}

std::vector<std::size_t> train_indices(std::uint64_t seed, std::size_t n, double train_fraction) {
  require(n >= 1, "split: empty dataset");
  require(train_fraction > 0.0 && train_fraction <= 1.0, "split: train_fraction must be in (0, 1]");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 0xA11CE));
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.next() % (i + 1)]);
  const auto k = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n))),
                                         1, n);
  perm.resize(k);
  std::sort(perm.begin(), perm.end());
  return perm;
}

std::vector<SolvedInstance> build_instances(const RunConfig& cfg, std::size_t count, double* seconds_generate,
                                            double* seconds_solve) {
  std::vector<SolvedInstance> out(count);
  const auto n = static_cast<long>(count);
  const VoigtVec mean = reduced_strain(cfg.applied_strain, static_cast<int>(cfg.dims.size()));

  auto t0 = Clock::now();
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)].ms = generate_instance(cfg, static_cast<std::size_t>(i));
  if (seconds_generate) *seconds_generate = seconds_since(t0);

  t0 = Clock::now();
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
  for (long i = 0; i < n; ++i) {
    auto& inst = out[static_cast<std::size_t>(i)];
    try {
      const auto c = assemble_stiffness_field(inst.ms, cfg.material, cfg.reference);
      auto res = solve_local_strain(c, mean, cfg.solver);
      inst.strain = std::move(res.strain);
      inst.iterations = res.iterations;
      inst.residual = res.residual;
      inst.ok = true;
    } catch (const ConvergenceError& e) {
      inst.iterations = e.iterations();
      inst.residual = e.residual();
      inst.error = e.what();
    } catch (const NumericalError& e) {
      inst.error = e.what();
    }
  }
  if (seconds_solve) *seconds_solve = seconds_since(t0);
  return out;
}

double mase_scale(const std::string& target, const Voigt6& applied, const FieldSet& oracle) {
  if (target != "vm") return target_scale(applied);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& f : oracle) {
    sum = std::accumulate(f.begin(), f.end(), sum);
    n += f.size();
  }
  require(n > 0 && sum > 0.0, "mase: von Mises oracle has zero mean");
  return sum / static_cast<double>(n);
}

namespace {

struct Predictions {
  FieldSet full, rank1;
};

Predictions predict_all(const XlraModel& model, const std::vector<const Microstructure*>& ms, bool parallel) {
  Predictions p;
  p.full.resize(ms.size());
  p.rank1.resize(ms.size());
  const auto n = static_cast<long>(ms.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    p.full[u] = predict(model, *ms[u]);
    p.rank1[u] = model.rank() > 1 ? predict_rank1(model, *ms[u]) : p.full[u];
  }
  return p;
}

}  // namespace

TrainEvalResult train_and_evaluate(const RunConfig& cfg, const std::vector<SolvedInstance>& data,
                                   const std::vector<std::size_t>& train, const std::vector<std::size_t>& test) {
  require(!train.empty(), "train split is empty");
  require(!test.empty(), "test split is empty");
  for (std::size_t i : train) require(std::find(test.begin(), test.end(), i) == test.end(), "split leakage");

  auto targets_for = [&](const std::vector<std::size_t>& idx, std::vector<Microstructure>* ms, FieldSet& out,
                         std::vector<std::string>& ids) {
    for (std::size_t i : idx) {
      const auto& inst = data.at(i);
      if (!inst.ok) continue;
      const auto c = assemble_stiffness_field(inst.ms, cfg.material, cfg.reference);
      out.push_back(target_field(cfg.target, c, inst.strain));
      if (ms) ms->push_back(inst.ms);
      ids.push_back(instance_id(i));
    }
  };

  std::vector<Microstructure> train_ms;
  FieldSet train_targets, test_targets;
  std::vector<std::string> train_ids, test_ids;
  targets_for(train, &train_ms, train_targets, train_ids);
  targets_for(test, nullptr, test_targets, test_ids);
  require(!train_ms.empty(), "no solved training instances");
  require(!test_targets.empty(), "no solved test instances");

  TrainEvalResult r;
  auto t0 = Clock::now();
  TrainConfig tc = cfg.train;
  tc.parallel = cfg.parallel;
  r.fit = fit(train_ms, train_targets, cfg.basis, cfg.target, target_scale(cfg.applied_strain), tc);
  r.seconds_train = seconds_since(t0);
  r.fit.model.applied_mean.assign(cfg.applied_strain.data(), cfg.applied_strain.data() + 6);
  r.fit.model.provenance["train_ids"] = train_ids;

  std::vector<const Microstructure*> test_ms;
  for (std::size_t i : test)
    if (data.at(i).ok) test_ms.push_back(&data[i].ms);
  t0 = Clock::now();
  const auto pred = predict_all(r.fit.model, test_ms, cfg.parallel);
  r.seconds_predict = seconds_since(t0);
  r.report = evaluate_fields(cfg.target, r.fit.model.rank(), test_targets, pred.full, pred.rank1,
                             mase_scale(cfg.target, cfg.applied_strain, test_targets), test_ids, cfg.eval);
  return r;
}

DatasetManifest generate_dataset(const RunConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "microstructures");
  DatasetManifest m;
  m.dims = cfg.dims;
  m.material = cfg.material;
  m.applied_strain = cfg.applied_strain;
  m.config = cfg.source;
  m.base_dir = dir;
  const auto train = train_indices(cfg.seed, cfg.n_instances, cfg.train_fraction);
  m.entries.resize(cfg.n_instances);
  for (std::size_t i = 0; i < cfg.n_instances; ++i) {
    auto& e = m.entries[i];
    e.id = instance_id(i);
    e.seed = derive_seed(cfg.seed, i);
    e.microstructure = std::filesystem::path("microstructures") / (e.id + ".xms");
    e.split = std::binary_search(train.begin(), train.end(), i) ? "train" : "test";
  }
  const auto n = static_cast<long>(cfg.n_instances);
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
  for (long i = 0; i < n; ++i) {
    const auto& e = m.entries[static_cast<std::size_t>(i)];
    write_microstructure(dir / e.microstructure, generate_instance(cfg, static_cast<std::size_t>(i)));
  }
  write_manifest(dir / "manifest.json", m);
  return m;
}

SolveSummary solve_dataset(DatasetManifest& m, const SolverOptions& opts, ReferenceRule rule, bool parallel) {
  const auto dir = m.base_dir;
  std::filesystem::create_directories(dir / "fields");
  const VoigtVec mean = reduced_strain(m.applied_strain, static_cast<int>(m.dims.size()));
  const auto n = static_cast<long>(m.entries.size());
  // Validation problems (unreadable or mismatched inputs) abort the batch;
  // non-convergence only marks the entry failed.
  std::vector<std::string> fatal(m.entries.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < n; ++i) {
    auto& e = m.entries[static_cast<std::size_t>(i)];
    try {
      const auto ms = read_microstructure(dir / e.microstructure);
      require(ms.grid.dims() == m.dims, "entry " + e.id + ": grid does not match the manifest");
      const auto c = assemble_stiffness_field(ms, m.material, rule);
      const auto res = solve_local_strain(c, mean, opts);
      e.field = std::filesystem::path("fields") / (e.id + ".xfd");
      write_field(dir / e.field, res.strain);
      e.status = EntryStatus::solved;
      e.iterations = res.iterations;
      e.residual = res.residual;
      e.error.clear();
    } catch (const ConvergenceError& err) {
      e.status = EntryStatus::failed;
      e.field.clear();
      e.iterations = err.iterations();
      e.residual = err.residual();
      e.error = err.what();
    } catch (const NumericalError& err) {
      e.status = EntryStatus::failed;
      e.field.clear();
      e.error = err.what();
    } catch (const std::exception& err) {
      fatal[static_cast<std::size_t>(i)] = err.what();
    }
  }
  for (const auto& f : fatal)
    if (!f.empty()) throw ValidationError(f);
  SolveSummary s;
  for (const auto& e : m.entries) (e.status == EntryStatus::solved ? s.solved : s.failed) += 1;
  write_manifest(dir / "manifest.json", m);
  return s;
}

FitResult train_from_manifest(const DatasetManifest& m, const RunConfig& cfg) {
  check_no_leakage(m);
  const auto split = load_split(m, "train", cfg.target);
  require(!split.microstructures.empty(), "train: no solved training entries in the manifest");
  TrainConfig tc = cfg.train;
  tc.parallel = cfg.parallel;
  auto r = fit(split.microstructures, split.targets, cfg.basis, cfg.target, target_scale(m.applied_strain), tc);
  r.model.applied_mean.assign(m.applied_strain.data(), m.applied_strain.data() + 6);
  r.model.provenance["train_ids"] = split.ids;
  r.model.provenance["config"] = cfg.source;
  return r;
}

EvalReport evaluate_on_manifest(const XlraModel& model, const DatasetManifest& m, const EvalOptions& opts) {
  require(model.dims == m.dims, "evaluate: model grid does not match the dataset grid");
  std::vector<std::string> train_ids;
  if (model.provenance.contains("train_ids")) train_ids = model.provenance["train_ids"].get<std::vector<std::string>>();
  check_no_leakage(m, train_ids);
  const auto split = load_split(m, "test", model.target);
  require(!split.microstructures.empty(), "evaluate: no solved test entries in the manifest");
  std::vector<const Microstructure*> ms;
  for (const auto& x : split.microstructures) ms.push_back(&x);
  const auto pred = predict_all(model, ms, true);
  return evaluate_fields(model.target, model.rank(), split.targets, pred.full, pred.rank1,
                         mase_scale(model.target, m.applied_strain, split.targets), split.ids, opts);
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
  const auto& axis = cfg.sweep_axis;
  require(axis == "train_size" || axis == "delta_t" || axis == "ec" || axis == "zener" || axis == "basis_count",
          "sweep: unknown axis '" + axis + "'");
  require(!cfg.sweep_values.empty(), "sweep: no values given");

  // Axes that leave the material alone share one dataset.
  const bool shared = axis == "train_size" || axis == "delta_t" || axis == "basis_count";
  std::vector<SolvedInstance> data;
  double t_gen = 0.0, t_solve = 0.0;
  if (shared) data = build_instances(cfg, cfg.n_instances, &t_gen, &t_solve);

  std::vector<SweepRow> rows;
  for (double v : cfg.sweep_values) {
    SweepRow row;
    row.axis = axis;
    row.value = v;
    try {
      RunConfig rc = cfg;
      double fraction = cfg.train_fraction;
      if (axis == "train_size") {
        fraction = v;
      } else if (axis == "delta_t") {
        rc.train.delta_t = v;
        rc.train.validate();
      } else if (axis == "basis_count") {
        const auto m = static_cast<std::size_t>(std::llround(v));
        if (rc.basis.kind == BasisKind::planar_fourier_2d) {
          require(m % 2 == 1, "sweep: planar basis size must be odd");
          rc.basis = BasisSpec::planar((m - 1) / 2);
        } else if (rc.basis.kind == BasisKind::gsh_cubic_3d) {
          rc.basis = BasisSpec::gsh(m);
        } else {
          throw ValidationError("sweep: basis_count needs an orientation basis");
        }
        rc.basis.validate();
      } else if (axis == "ec") {
        require(rc.material.phases.size() == 2 && rc.generator.kind != "polycrystal",
                "sweep: ec axis needs a two-phase material");
        rc.material = MaterialSpec::two_phase(v, rc.material.phases[1].poisson);
      } else if (axis == "zener") {
        require(rc.generator.kind == "polycrystal", "sweep: zener axis needs a polycrystal");
        auto crystal = rc.material.phases[0];
        crystal.c44 = 0.5 * v * (crystal.c11 - crystal.c12);
        rc.material = MaterialSpec::polycrystal(crystal);
      }
      const std::vector<SolvedInstance>* set = &data;
      std::vector<SolvedInstance> own;
      if (!shared) {
        own = build_instances(rc, rc.n_instances, &row.seconds_generate, &row.seconds_solve);
        set = &own;
      } else {
        row.seconds_generate = t_gen;
        row.seconds_solve = t_solve;
      }
      const auto train = train_indices(rc.seed, rc.n_instances, fraction);
      std::vector<std::size_t> test;
      for (std::size_t i = 0; i < rc.n_instances; ++i)
        if (!std::binary_search(train.begin(), train.end(), i)) test.push_back(i);
      const auto r = train_and_evaluate(rc, *set, train, test);
      row.n_train = train.size();
      row.n_test = r.report.n_instances;
      row.rank = r.fit.model.rank();
      row.r2 = r.report.r2;
      row.r2_rank1 = r.report.r2_rank1;
      row.relative_l2 = r.report.relative_l2;
      row.seconds_train = r.seconds_train;
      row.seconds_predict = r.seconds_predict;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os.precision(10);
  os << "axis,value,n_train,n_test,rank,r2,r2_rank1,relative_l2_percent,seconds_generate,seconds_solve,"
        "seconds_train,seconds_predict,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    os << r.axis << ',' << r.value << ',' << r.n_train << ',' << r.n_test << ',' << r.rank << ',' << r.r2 << ','
       << r.r2_rank1 << ',' << r.relative_l2 << ',' << r.seconds_generate << ',' << r.seconds_solve << ','
       << r.seconds_train << ',' << r.seconds_predict << ',' << err << '\n';
  }
  return os.str();
}

}  // namespace xlra
