// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "xlra/basis.hpp"
#include "xlra/elasticity.hpp"
#include "xlra/metrics.hpp"
#include "xlra/pipeline.hpp"
#include "xlra/random.hpp"
#include "xlra/xlra.hpp"

using namespace xlra;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

VoigtVec uniaxial(int ndim) {
  Voigt6 e = Voigt6::Zero();
  e(0) = 1e-4;
  return reduced_strain(e, ndim);
}

Microstructure laminate(const std::vector<std::size_t>& dims, int axis) {
  Microstructure ms;
  ms.grid = PeriodicGrid(dims);
  ms.n_phases = 2;
  ms.phase.emplace(ms.grid.size(), kSoftPhase);
  for (std::size_t c = 0; c < ms.grid.size(); ++c)
    if (2 * ms.grid.unravel(c)[static_cast<std::size_t>(axis)] < dims[static_cast<std::size_t>(axis)])
      (*ms.phase)[c] = kHardPhase;
  return ms;
}

// 1. Oracle correctness.
Outcome oracle_correctness() {
  const auto t0 = Clock::now();
  double uniform_dev = 0.0;
  for (const auto& dims : {std::vector<std::size_t>{31, 31}, std::vector<std::size_t>{15, 15, 15}}) {
    Microstructure ms;
    ms.grid = PeriodicGrid(dims);
    ms.n_phases = 2;
    ms.phase.emplace(ms.grid.size(), kHardPhase);
    const auto c = assemble_stiffness_field(ms, MaterialSpec::two_phase(10.0));
    const auto e = uniaxial(static_cast<int>(dims.size()));
    const auto sol = solve_local_strain(c, e);
    for (std::size_t cell = 0; cell < ms.grid.size(); ++cell)
      for (std::size_t a = 0; a < sol.strain.n_components; ++a)
        uniform_dev = std::max(uniform_dev, std::abs(sol.strain.at(cell, a) - e(static_cast<Eigen::Index>(a))) / 1e-4);
  }

  const auto ms = gen_two_phase(1, {31, 31}, 0.2, 2.0);
  const auto c = assemble_stiffness_field(ms, MaterialSpec::two_phase(10.0));
  const auto sol = solve_local_strain(c, uniaxial(2));
  const double resid = equilibrium_residual(c, sol.strain);
  double mean_dev = 0.0;
  const auto avg = sol.strain.volume_average();
  for (std::size_t a = 0; a < 3; ++a) mean_dev = std::max(mean_dev, std::abs(avg[a] - uniaxial(2)(static_cast<Eigen::Index>(a))) / 1e-4);

  SolverOptions tight;
  tight.tol = 1e-10;
  const auto lam = laminate({32, 4}, 0);
  const auto cl = assemble_stiffness_field(lam, MaterialSpec::two_phase(10.0));
  const auto sl = solve_local_strain(cl, uniaxial(2), tight);
  double soft = 0.0, hard = 0.0;
  for (std::size_t cell = 0; cell < lam.grid.size(); ++cell)
    ((*lam.phase)[cell] == kHardPhase ? hard : soft) = sl.strain.at(cell, 0);
  const double ratio_err = std::abs(soft / hard - 10.0) / 10.0;

  const auto lam2 = laminate({4, 32}, 1);
  const auto c2 = assemble_stiffness_field(lam2, MaterialSpec::two_phase(10.0, 0.0));
  const auto s2 = solve_local_strain(c2, uniaxial(2), tight);
  double iso_dev = 0.0;
  for (std::size_t cell = 0; cell < lam2.grid.size(); ++cell)
    for (std::size_t a = 0; a < 3; ++a)
      iso_dev = std::max(iso_dev, std::abs(s2.strain.at(cell, a) - uniaxial(2)(static_cast<Eigen::Index>(a))) / 1e-4);

  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = uniform_dev < 1e-12 && resid <= 1e-8 && mean_dev < 1e-12 && ratio_err < 1e-6 && iso_dev < 1e-6 && secs < 10.0;
  o.detail = fmt("homogeneous dev %.2e, residual %.2e, mean dev %.2e, iso-stress ratio err %.2e, iso-strain dev %.2e, %.1f s",
                 uniform_dev, resid, mean_dev, ratio_err, iso_dev, secs);
  return o;
}

// 2. Zener ratios against the tabulated values.
Outcome zener_ratios() {
  Outcome o{true, ""};
  std::ostringstream os;
  for (const auto& m : fcc_metals()) {
    const double z = zener_ratio(m.c11, m.c12, m.c44);
    os << m.name << ' ' << fmt("%.3f", z) << ' ';
    if (m.name == "Ni") {
      // The table prints 2.586; its own constants give 2.449.
      const bool flagged = std::abs(z - 2.449) <= 0.005 && std::abs(z - m.tabulated_zener) > 0.1;
      o.pass = o.pass && flagged;
      os << fmt("(table %.3f, flagged inconsistent) ", m.tabulated_zener);
    } else {
      o.pass = o.pass && std::abs(z - m.tabulated_zener) <= 0.005;
    }
  }
  o.detail = os.str();
  return o;
}

struct DeskData {
  RunConfig cfg;
  std::vector<SolvedInstance> data;
  double seconds = 0.0;
};

DeskData build(const RunConfig& cfg) {
  DeskData d;
  d.cfg = cfg;
  const auto t0 = Clock::now();
  d.data = build_instances(cfg, cfg.n_instances);
  d.seconds = seconds_since(t0);
  return d;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split(const RunConfig& cfg, double fraction) {
  const auto train = train_indices(cfg.seed, cfg.n_instances, fraction);
  std::vector<std::size_t> test;
  for (std::size_t i = 0; i < cfg.n_instances; ++i)
    if (!std::binary_search(train.begin(), train.end(), i)) test.push_back(i);
  return {train, test};
}

std::size_t failed(const DeskData& d) {
  return static_cast<std::size_t>(std::count_if(d.data.begin(), d.data.end(), [](const auto& s) { return !s.ok; }));
}

RunConfig two_phase_config(double contrast) {
  nlohmann::json j = {{"material", {{"preset", "two_phase"}, {"contrast", contrast}}}};
  return run_config_from_json(j);
}

// 3. Two-phase desk reproduction.
Outcome two_phase_desk(const DeskData& d) {
  const auto t0 = Clock::now();
  RunConfig cfg = d.cfg;
  cfg.train.r_max = 2;
  cfg.train.delta_t = 0.5;
  const auto [train, test] = split(cfg, 0.05);
  const auto r = train_and_evaluate(cfg, d.data, train, test);
  const double secs = d.seconds + seconds_since(t0);
  Outcome o;
  o.pass = r.report.r2 >= 0.95 && r.report.r2 > r.report.r2_rank1 && secs < 300.0;
  o.detail = fmt("n_train %zu, n_test %zu, rank %zu, R2 %.4f, rank-1 R2 %.4f, rejected rank %zu, %.1f s", train.size(),
                 r.report.n_instances, r.fit.model.rank(), r.report.r2, r.report.r2_rank1, r.fit.rejected_rank, secs);
  return o;
}

// 4. Data-efficiency trend.
Outcome data_efficiency(const DeskData& d) {
  const auto t0 = Clock::now();
  RunConfig cfg = d.cfg;
  std::ostringstream os;
  double prev = -std::numeric_limits<double>::infinity();
  bool ok = true;
  for (double f : {0.01, 0.02, 0.05, 0.10}) {
    const auto [train, test] = split(cfg, f);
    const auto r = train_and_evaluate(cfg, d.data, train, test);
    ok = ok && r.report.r2 >= prev - 0.01;
    prev = r.report.r2;
    os << fmt("%g%% (%zu) R2 %.4f; ", 100.0 * f, train.size(), r.report.r2);
  }
  const double secs = d.seconds + seconds_since(t0);
  os << fmt("%.1f s", secs);
  return {ok && secs < 600.0, os.str()};
}

struct HighContrastResult {
  bool pass = false;
  std::string detail;
};

HighContrastResult high_contrast_case(const std::string& label, const RunConfig& cfg) {
  const auto d = build(cfg);
  RunConfig rc = cfg;
  rc.train.r_max = 4;
  const auto [train, test] = split(rc, rc.train_fraction);
  const auto r = train_and_evaluate(rc, d.data, train, test);
  std::size_t better = 0;
  for (const auto& m : r.report.instances) better += m.max_relative_error < m.max_relative_error_rank1 ? 1 : 0;
  const bool pass = r.report.r2 >= 0.90 && better == r.report.instances.size() && failed(d) == 0;
  return {pass, fmt("%s: rank %zu, R2 %.4f (rank-1 %.4f), max-error improved on %zu/%zu, unsolved %zu, %.0f s",
                    label.c_str(), r.fit.model.rank(), r.report.r2, r.report.r2_rank1, better,
                    r.report.instances.size(), failed(d), d.seconds)};
}

// 5. High-contrast robustness.
Outcome high_contrast() {
  const auto a = high_contrast_case("EC=1000", two_phase_config(1000.0));
  nlohmann::json j = {{"generator", {{"kind", "porous"}, {"porosity", 0.15}}},
                      {"material", {{"preset", "porous"}, {"contrast", 1e4}}}};
  const auto b = high_contrast_case("porous 15%", run_config_from_json(j));
  return {a.pass && b.pass, a.detail + "; " + b.detail};
}

// 6. Polycrystal desk case and 3D smoke test.
Outcome polycrystal() {
  nlohmann::json j2 = {{"generator", {{"kind", "polycrystal"}, {"n_grains", 10}}},
                       {"material", {{"preset", "polycrystal"}, {"metal", "Ni"}}},
                       {"train", {{"r_max", 3}}},
                       {"dataset", {{"n_instances", 200}, {"train_fraction", 0.15}}}};
  const auto c2 = run_config_from_json(j2);
  const auto d2 = build(c2);
  const auto [train, test] = split(c2, c2.train_fraction);
  const auto r2d = train_and_evaluate(c2, d2.data, train, test);

  nlohmann::json j3 = {{"dims", {15, 15, 15}},
                       {"generator", {{"kind", "polycrystal"}, {"n_grains", 10}}},
                       {"material", {{"preset", "polycrystal"}, {"metal", "Ni"}}},
                       {"basis", {{"kind", "gsh_cubic_3d"}, {"gsh_count", 10}}},
                       {"applied_strain", {1e-4, 0, 0, 0, 0, 0}},
                       {"dataset", {{"n_instances", 20}, {"train_fraction", 0.5}}}};
  const auto c3 = run_config_from_json(j3);
  const auto d3 = build(c3);
  const auto [train3, test3] = split(c3, c3.train_fraction);
  std::vector<Microstructure> ms;
  FieldSet targets;
  for (std::size_t i : train3) {
    if (!d3.data[i].ok) continue;
    ms.push_back(d3.data[i].ms);
    targets.push_back(d3.data[i].strain.component(0));
  }
  TrainConfig tc = c3.train;
  const auto fit3 = fit(ms, targets, c3.basis, "e11", target_scale(c3.applied_strain), tc);
  FieldSet pred;
  for (const auto& m : ms) pred.push_back(predict(fit3.model, m));
  const double train_r2 = r2(targets, pred);

  Outcome o;
  o.pass = r2d.report.r2 >= 0.90 && train_r2 >= 0.99 && failed(d2) == 0 && failed(d3) == 0;
  o.detail = fmt("2D planar Ni: n_train %zu, rank %zu, held-out R2 %.4f (%.0f s); 3D 15^3 GSH10: train R2 %.4f, rank %zu (%.0f s)",
                 train.size(), r2d.fit.model.rank(), r2d.report.r2, d2.seconds, train_r2, fit3.model.rank(), d3.seconds);
  return o;
}

// 7. Spectral prediction against a brute-force spatial evaluation.
Outcome spectral_spatial() {
  RunConfig cfg = run_config_from_json({{"dims", {8, 8}}, {"generator", {{"sigma", 1.0}}}, {"dataset", {{"n_instances", 6}}}});
  const auto d = build(cfg);
  std::vector<Microstructure> ms;
  FieldSet t;
  for (std::size_t i = 0; i < 4; ++i) {
    ms.push_back(d.data[i].ms);
    t.push_back(d.data[i].strain.component(0));
  }
  TrainConfig tc;
  tc.r_max = 1;
  auto model = fit(ms, t, BasisSpec::primitive(2), "e11", 1e-4, tc).model;
  // a second rank from a different target so the rank sum is exercised
  FieldSet t2 = t;
  for (auto& f : t2)
    for (auto& v : f) v = 0.5e-4 - 0.2 * v;
  model.ranks.push_back(fit(ms, t2, BasisSpec::primitive(2), "e11", 1e-4, tc).model.ranks[0]);

  const PeriodicGrid g({8, 8});
  const std::size_t n = g.size();
  double worst = 0.0;
  for (std::size_t k = 4; k < 6; ++k) {
    const auto& test = d.data[k].ms;
    const auto phi = basis_fields(test, model.basis);
    std::vector<double> brute(n, 0.0);
    for (const auto& term : model.ranks) {
      for (std::size_t x = 0; x < n; ++x) {
        const auto xx = g.unravel(x);
        Complex s = 0.0;
        for (std::size_t j = 0; j < phi.size(); ++j)
          for (std::size_t y = 0; y < n; ++y) {
            const auto yy = g.unravel(y);
            // alpha_j(y) by direct inverse DFT
            Complex a = 0.0;
            for (std::size_t q = 0; q < n; ++q) {
              const auto kk = g.unravel(q);
              const double ph = 2.0 * std::numbers::pi * (static_cast<double>(kk[0] * yy[0] + kk[1] * yy[1]) / 8.0);
              a += std::conj(term.coeffs[j][q]) * std::exp(Complex(0.0, ph));
            }
            const std::size_t src = g.ravel({(xx[0] + 8 - yy[0]) % 8, (xx[1] + 8 - yy[1]) % 8, 0});
            s += a / static_cast<double>(n) * phi[j][src];
          }
        brute[x] += std::exp(s.real()) - term.beta;
      }
    }
    const auto fast = predict(model, test);
    double scale = 0.0, diff = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      scale = std::max(scale, std::abs(brute[x] * model.scale));
      diff = std::max(diff, std::abs(brute[x] * model.scale - fast[x]));
    }
    worst = std::max(worst, diff / scale);
  }
  return {worst < 1e-10, fmt("max relative deviation %.2e over 2 held-out 8x8 instances, 2 ranks", worst)};
}

// 8. GSH invariance and orthogonality.
Outcome gsh_suite() {
  Rng rng(2024);
  double inv = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
    const auto g = uniform_orientation(u1, u2, u3);
    const auto ref = eval_gsh_cubic(g);
    for (const auto& q : cubic_rotations()) {
      const auto v = eval_gsh_cubic(compose(g, q));
      for (std::size_t j = 0; j < 10; ++j) inv = std::max(inv, std::abs(v[j] - ref[j]));
    }
  }
  // 48^3 Euler grid: trapezoid in phi1 and phi2, Gauss-Legendre in cos Phi.
  const int n = 48;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  Eigen::Matrix<double, 10, 10> gram = Eigen::Matrix<double, 10, 10>::Zero();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const auto v = eval_gsh_cubic({2.0 * std::numbers::pi * a / n, std::acos(x[static_cast<std::size_t>(b)]),
                                       2.0 * std::numbers::pi * c / n});
        const Eigen::Map<const Eigen::Matrix<double, 10, 1>> f(v.data());
        gram += (w[static_cast<std::size_t>(b)] / 2.0 / (n * n)) * f * f.transpose();
      }
  double off = 0.0, min_diag = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 10; ++i) {
    min_diag = std::min(min_diag, gram(i, i));
    for (int j = 0; j < 10; ++j)
      if (i != j) off = std::max(off, std::abs(gram(i, j)));
  }
  return {inv < 1e-10 && off < 1e-6 && min_diag > 0.0 && cubic_rotations().size() == 24,
          fmt("invariance error %.2e (24 x 100), Gram off-diagonal %.2e, min diagonal %.4f", inv, off, min_diag)};
}

// 9. FLOP model.
Outcome flops() {
  const auto v = xlra_train_flops(2, 1024);
  bool mono = true;
  for (std::uint64_t k = 1; k <= 8; ++k)
    for (std::uint64_t n = 1; n <= (1u << 16); n *= 2) {
      mono = mono && xlra_train_flops(k + 1, n) > xlra_train_flops(k, n);
      mono = mono && xlra_train_flops(k, n + 1) > xlra_train_flops(k, n);
    }
  return {v == 10379264ull && xlra_train_flops(1, 1) == 792ull && mono,
          fmt("flops(k=2, N=1024) = %llu, flops(1, 1) = %llu, monotone %s", static_cast<unsigned long long>(v),
              static_cast<unsigned long long>(xlra_train_flops(1, 1)), mono ? "yes" : "no")};
}

// 10. Metric examples and scale invariance.
Outcome metric_suite() {
  int bad = 0;
  auto expect = [&](bool c) { bad += c ? 0 : 1; };
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  const FieldSet o3{{1.0, 2.0, 3.0}};
  expect(r2(o3, o3) == 1.0);
  expect(r2(o3, FieldSet{{2.0, 2.0, 2.0}}) == 0.0);
  expect(r2(o3, FieldSet{{1.0, 2.0, 4.0}}) == 0.5);
  bool threw = false;
  try {
    r2(FieldSet{{1.0, 1.0}}, FieldSet{{1.0, 2.0}});
  } catch (const ValidationError&) {
    threw = true;
  }
  expect(threw);
  expect(relative_l2(o3, o3) == 0.0);
  expect(close(relative_l2(o3, FieldSet{{1.01, 2.02, 3.03}}), 1.0));
  expect(close(relative_l2(FieldSet{{3.0, 4.0}}, FieldSet{{3.0, 0.0}}), 80.0));
  const FieldSet ones{{1.0, 1.0}}, pm{{0.9, 1.1}};
  expect(relative_mae(ones, ones) == 0.0);
  expect(relative_mse(ones, ones) == 0.0);
  expect(close(relative_mae(FieldSet{{4.0, 4.0}}, FieldSet{{5.0, 5.0}}), 0.25));
  expect(close(relative_mae(ones, pm), 0.1));
  expect(mase(ones, ones, 1.0) == 0.0);
  expect(close(mase(ones, pm, 1.0), 10.0));
  expect(close(mase(FieldSet{{2.0, 3.0}}, FieldSet{{3.0, 4.0}}, 1.0), 100.0));
  const FieldSet cst{{5.0, 5.0, 5.0}};
  const auto hc = histogram(cst, cst, 16);
  expect(std::count_if(hc.oracle.begin(), hc.oracle.end(), [](auto c) { return c > 0; }) == 1);
  std::vector<double> big(1000);
  for (std::size_t i = 0; i < big.size(); ++i) big[i] = static_cast<double>(i);
  const FieldSet bo{big};
  expect(parity_tail(bo, bo, 0.5).size() == 1000);
  expect(parity_tail(bo, bo, 0.01).size() == 20);
  for (const auto& [a, b] : parity_tail(bo, bo, 0.05)) expect(a == b);
  expect(xlra_train_flops(2, 1024) == 10379264ull);
  expect(xlra_train_flops(1, 1) == 792ull);

  Rng rng(10);
  int invariance_fail = 0;
  for (int t = 0; t < 100; ++t) {
    FieldSet o(2, std::vector<double>(50)), p(2, std::vector<double>(50));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t c = 0; c < 50; ++c) {
        o[i][c] = rng.normal();
        p[i][c] = o[i][c] + 0.2 * rng.normal();
      }
    const double k = (t % 2 ? -1.0 : 1.0) * std::exp(3.0 * rng.normal());
    FieldSet os = o, ps = p;
    for (auto* s : {&os, &ps})
      for (auto& f : *s)
        for (auto& v : f) v *= k;
    auto rel = [](double a, double b) { return std::abs(a - b) <= 1e-10 * std::abs(b); };
    const auto h = histogram(o, p, 32);
    std::uint64_t total = 0;
    for (auto c : h.oracle) total += c;
    if (!rel(relative_l2(os, ps), relative_l2(o, p)) || !rel(relative_mae(os, ps), relative_mae(o, p)) ||
        !rel(r2(os, ps), r2(o, p)) || total != 100)
      ++invariance_fail;
  }
  return {bad == 0 && invariance_fail == 0,
          fmt("%d example mismatches, %d of 100 random pairs broke scale invariance or histogram conservation", bad,
              invariance_fail)};
}

// 11. Von Mises stress model on the two-phase desk dataset.
Outcome von_mises_model(const DeskData& d) {
  RunConfig cfg = d.cfg;
  cfg.target = "vm";
  const auto [train, test] = split(cfg, 0.05);
  const auto r = train_and_evaluate(cfg, d.data, train, test);
  double bias = 0.0;
  for (const auto& m : r.report.instances) bias += (m.mean_prediction - m.mean_oracle) / m.mean_oracle;
  bias *= 100.0 / static_cast<double>(r.report.instances.size());
  return {r.report.mean_relative_error_of_average < 1.0,
          fmt("mean relative error of the volume-averaged von Mises stress %.3f%% (signed bias %.3f%%), "
              "pooled relative L2 %.2f%%, R2 %.4f, rank %zu",
              r.report.mean_relative_error_of_average, bias, r.report.relative_l2, r.report.r2, r.fit.model.rank())};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  };

  report(1, "oracle correctness", oracle_correctness);
  report(2, "Zener ratios", zener_ratios);
  DeskData desk;
  std::string desk_error;
  try {
    desk = build(two_phase_config(10.0));
  } catch (const std::exception& e) {
    desk_error = e.what();
  }
  auto with_desk = [&](std::function<Outcome(const DeskData&)> fn) {
    return [&, fn]() -> Outcome {
      if (!desk_error.empty()) return {false, "desk dataset failed: " + desk_error};
      return fn(desk);
    };
  };
  report(3, "two-phase desk reproduction", with_desk(two_phase_desk));
  report(4, "data-efficiency trend", with_desk(data_efficiency));
  report(5, "high-contrast robustness", high_contrast);
  report(6, "polycrystal desk case", polycrystal);
  report(7, "spectral/spatial equivalence", spectral_spatial);
  report(8, "GSH suite", gsh_suite);
  report(9, "FLOP formula", flops);
  report(10, "metric suite", metric_suite);
  report(11, "von Mises stress model", with_desk(von_mises_model));
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
