#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>

#include "doctest.h"
#include "xlra/metrics.hpp"
#include "xlra/pipeline.hpp"

using namespace xlra;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

RunConfig small_config(std::size_t n, double fraction) {
  nlohmann::json j = {{"dims", {12, 12}}, {"dataset", {{"n_instances", n}, {"train_fraction", fraction}}}};
  return run_config_from_json(j);
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("default config") {
  const auto c = run_config_from_json(nlohmann::json::object());
  CHECK(c.dims == std::vector<std::size_t>{31, 31});
  CHECK(c.applied_strain(0) == 1e-4);
  CHECK(c.train.r_max == 4);
  CHECK(c.train.ridge == 1e-8);
  CHECK(c.train.stop_fraction == 0.005);
  CHECK(c.basis == BasisSpec::primitive(2));
  CHECK(c.material.phases[1].youngs == 2000.0);
  CHECK(c.material.phases[0].youngs == doctest::Approx(200.0));
  CHECK(c.eval.n_bins == 128);
}

TEST_CASE("config overrides and validation") {
  auto doc = nlohmann::json::object();
  apply_override(doc, "train.delta_t=2.5");
  apply_override(doc, "material={\"preset\":\"polycrystal\",\"metal\":\"Cu\"}");
  apply_override(doc, "generator.kind=polycrystal");
  apply_override(doc, "dims=[10,10,10]");
  const auto c = run_config_from_json(doc);
  CHECK(c.train.delta_t == 2.5);
  CHECK(c.generator.kind == "polycrystal");
  CHECK(c.material.phases[0].c11 == doctest::Approx(168.4));
  CHECK(c.basis == BasisSpec::gsh(10));
  CHECK(run_config_from_json({{"generator", {{"kind", "polycrystal"}}}, {"material", {{"preset", "polycrystal"}}}})
            .basis == BasisSpec::planar(1));

  CHECK_THROWS_AS(run_config_from_json({{"bogus", 1}}), ValidationError);
  CHECK_THROWS_AS(run_config_from_json({{"train", {{"r_max", 0}}}}), ValidationError);
  CHECK_THROWS_AS(run_config_from_json({{"dims", {1, 5}}}), ValidationError);
  CHECK_THROWS_AS(run_config_from_json({{"target", "e33"}}), ValidationError);
  CHECK_THROWS_AS(run_config_from_json({{"applied_strain", {0, 0, 0, 0, 0, 0}}}), ValidationError);
  CHECK_THROWS_AS(run_config_from_json({{"material", {{"preset", "plasma"}}}}), ValidationError);
  CHECK_THROWS_AS(apply_override(doc, "novalue"), ValidationError);
}

TEST_CASE("train split selection") {
  CHECK(train_indices(1, 100, 0.05).size() == 5);
  CHECK(train_indices(9, 200, 0.15).size() == 30);
  CHECK(train_indices(1, 10, 0.01).size() == 1);
  CHECK(train_indices(3, 50, 0.1) == train_indices(3, 50, 0.1));
  CHECK(train_indices(3, 50, 0.1) != train_indices(4, 50, 0.1));
}

TEST_CASE("dataset generation and solving are deterministic") {
  TempDir a("xlra_pipe_a"), b("xlra_pipe_b");
  const auto cfg = small_config(10, 0.3);
  auto ma = generate_dataset(cfg, a.path);
  auto mb = generate_dataset(cfg, b.path);
  CHECK(slurp(a.path / "manifest.json") == slurp(b.path / "manifest.json"));
  for (const auto& e : ma.entries) CHECK(slurp(a.path / e.microstructure) == slurp(b.path / e.microstructure));
  CHECK(ma.split_indices("train").size() == 3);

  const auto sa = solve_dataset(ma, cfg.solver, cfg.reference, true);
  CHECK(sa.solved == 10);
  CHECK(sa.failed == 0);
  const auto first = slurp(a.path / ma.entries[0].field);
  auto again = read_manifest(a.path / "manifest.json");
  solve_dataset(again, cfg.solver, cfg.reference, false);
  CHECK(slurp(a.path / again.entries[0].field) == first);
  for (const auto& e : again.entries) CHECK(e.residual <= cfg.solver.tol);
}

TEST_CASE("five training instances are interpolated by a seven-function basis") {
  // A constant basis function has no spectrum off the mean, so exact
  // interpolation needs more basis functions than instances.
  TempDir d("xlra_pipe_interp");
  nlohmann::json j = {{"dims", {12, 12}},
                      {"generator", {{"kind", "polycrystal"}}},
                      {"material", {{"preset", "polycrystal"}, {"metal", "Cu"}}},
                      {"basis", {{"kind", "planar_fourier_2d"}, {"n_harmonics", 3}}},
                      {"dataset", {{"n_instances", 8}, {"train_fraction", 5.0 / 8.0}}}};
  const auto cfg = run_config_from_json(j);
  auto m = generate_dataset(cfg, d.path);
  solve_dataset(m, cfg.solver, cfg.reference, true);
  const auto r = train_from_manifest(m, cfg);
  const auto train = load_split(m, "train", "e11");
  REQUIRE(train.targets.size() == 5);
  FieldSet pred;
  for (const auto& ms : train.microstructures) pred.push_back(predict(r.model, ms));
  CHECK(xlra::r2(train.targets, pred) >= 0.999);
}

TEST_CASE("train, evaluate, and reject bad inputs") {
  TempDir d("xlra_pipe_train");
  auto cfg = small_config(12, 5.0 / 12.0);
  auto m = generate_dataset(cfg, d.path);
  solve_dataset(m, cfg.solver, cfg.reference, true);
  const auto r = train_from_manifest(m, cfg);
  CHECK(r.model.provenance["train_ids"].size() == 5);

  const auto rep = evaluate_on_manifest(r.model, m, cfg.eval);
  CHECK(rep.n_instances == 7);
  CHECK(rep.r2 <= 1.0);

  auto wrong = r.model;
  wrong.dims = {10, 10};
  CHECK_THROWS_AS(evaluate_on_manifest(wrong, m, cfg.eval), ValidationError);

  auto leaky = m;
  const auto ti = leaky.split_indices("train").front();
  const auto te = leaky.split_indices("test").front();
  leaky.entries[te].microstructure = leaky.entries[ti].microstructure;
  CHECK_THROWS_AS(check_no_leakage(leaky), ValidationError);

  auto relabel = m;
  relabel.entries[ti].split = "test";  // model was trained on it
  CHECK_THROWS_AS(evaluate_on_manifest(r.model, relabel, cfg.eval), ValidationError);
}

TEST_CASE("von Mises target and MASE scale") {
  auto cfg = small_config(6, 0.5);
  cfg.target = "vm";
  const auto data = build_instances(cfg, 6);
  const auto r = train_and_evaluate(cfg, data, {0, 1, 2}, {3, 4, 5});
  CHECK(r.report.target == "vm");
  CHECK(std::isfinite(r.report.r2));
  CHECK(mase_scale("e11", cfg.applied_strain, {}) == 1e-4);
  CHECK(mase_scale("vm", cfg.applied_strain, {{1.0, 3.0}}) == 2.0);
}

TEST_CASE("sweep: rows per value, infinite threshold equals rank 1") {
  auto cfg = small_config(12, 0.34);
  cfg.sweep_axis = "delta_t";
  cfg.sweep_values = {std::numeric_limits<double>::infinity(), 0.5};
  cfg.train.r_max = 2;
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error.empty());
  CHECK(rows[0].rank == 1);
  CHECK(rows[0].r2 == rows[0].r2_rank1);
  CHECK(rows[1].r2_rank1 == rows[0].r2);

  cfg.sweep_axis = "zener";
  cfg.sweep_values = {2.0};
  const auto bad = run_sweep(cfg);
  REQUIRE(bad.size() == 1);
  CHECK_FALSE(bad[0].error.empty());
  const auto csv = sweep_csv(rows);
  CHECK(csv.rfind("axis,value,", 0) == 0);
}
