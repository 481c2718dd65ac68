#include <cmath>
#include <filesystem>
#include <numbers>

#include <Eigen/Dense>

#include "doctest.h"
#include "xlra/elasticity.hpp"
#include "xlra/random.hpp"

using namespace xlra;

namespace {

// Two-phase laminate: phase depends only on the coordinate along `axis`.
Microstructure laminate(const std::vector<std::size_t>& dims, int axis) {
  Microstructure ms;
  ms.grid = PeriodicGrid(dims);
  ms.n_phases = 2;
  ms.phase.emplace(ms.grid.size(), kSoftPhase);
  for (std::size_t c = 0; c < ms.grid.size(); ++c)
    if (ms.grid.unravel(c)[static_cast<std::size_t>(axis)] < dims[static_cast<std::size_t>(axis)] / 4)
      (*ms.phase)[c] = kHardPhase;
  return ms;
}

Microstructure uniform_phase(const std::vector<std::size_t>& dims, std::uint16_t p) {
  Microstructure ms;
  ms.grid = PeriodicGrid(dims);
  ms.n_phases = 2;
  ms.phase.emplace(ms.grid.size(), p);
  return ms;
}

VoigtVec uniaxial(int ndim, double e = 1e-4) {
  Voigt6 full = Voigt6::Zero();
  full(0) = e;
  return reduced_strain(full, ndim);
}

StressField stress_of(const PeriodicGrid& g, const Voigt6& s) {
  StressField f;
  f.grid = g;
  f.n_components = 6;
  f.labels = stress_labels();
  f.values.resize(g.size() * 6);
  for (std::size_t c = 0; c < g.size(); ++c)
    for (std::size_t a = 0; a < 6; ++a) f.at(c, a) = s(static_cast<Eigen::Index>(a));
  return f;
}

}  // namespace

TEST_CASE("cubic stiffness and zener ratio") {
  const auto ni = cubic_stiffness(251.0, 150.0, 123.7);
  CHECK(ni(0, 0) == 251.0);
  CHECK(ni(3, 3) == 123.7);
  CHECK(ni(0, 1) == 150.0);
  CHECK(is_positive_definite(cubic_stiffness(106.75, 60.41, 28.34)));
  CHECK(zener_ratio(106.75, 60.41, 28.34) == doctest::Approx(1.223).epsilon(0.001 / 1.223));
  CHECK(std::abs(zener_ratio(49.5, 42.3, 14.9) - 4.14) < 0.01);
  CHECK(zener_ratio(200.0, 100.0, 50.0) == 1.0);
  CHECK_THROWS_AS(zener_ratio(100.0, 100.0, 30.0), ValidationError);
  CHECK_THROWS_AS(cubic_stiffness(100.0, 150.0, 30.0), ValidationError);
}

TEST_CASE("named FCC metals: computed Zener ratios") {
  for (const auto& m : fcc_metals()) {
    const double z = zener_ratio(m.c11, m.c12, m.c44);
    if (m.name == "Ni") {
      // The tabulated 2.586 does not follow from the tabulated constants.
      CHECK(z == doctest::Approx(2.449).epsilon(1e-3));
      CHECK(std::abs(z - m.tabulated_zener) > 0.1);
    } else {
      CHECK(std::abs(z - m.tabulated_zener) < 0.005);
    }
  }
  CHECK_THROWS_AS(fcc_metal("Unobtainium"), ValidationError);
}

TEST_CASE("isotropic stiffness") {
  const auto c = isotropic_stiffness(2000.0, 0.3);
  CHECK(zener_ratio(c(0, 0), c(0, 1), c(3, 3)) == doctest::Approx(1.0));
  CHECK(c(0, 0) == doctest::Approx(2000.0 * 0.7 / (1.3 * 0.4)));
  CHECK_THROWS_AS(isotropic_stiffness(-1.0, 0.3), ValidationError);
  CHECK_THROWS_AS(isotropic_stiffness(1.0, 0.5), ValidationError);
}

TEST_CASE("rotation matrices") {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto g = uniform_orientation(rng.uniform(), rng.uniform(), rng.uniform());
    const auto r = rotation_matrix(g);
    CHECK((r * r.transpose() - Matrix3::Identity()).norm() < 1e-12);
    CHECK(r.determinant() == doctest::Approx(1.0));
    CHECK((rotation_matrix(from_rotation_matrix(r)) - r).norm() < 1e-10);
  }
  for (const auto& q : cubic_rotations()) CHECK(q.determinant() == doctest::Approx(1.0));
}

TEST_CASE("rotate_stiffness") {
  const auto cu = cubic_stiffness(168.4, 121.4, 75.4);
  CHECK((rotate_stiffness(cu, Orientation{}) - cu).norm() < 1e-12);
  for (const auto& q : cubic_rotations()) CHECK((rotate_stiffness(cu, q) - cu).norm() < 1e-10);
  const auto iso = isotropic_stiffness(100.0, 0.25);
  CHECK((rotate_stiffness(iso, Orientation{0.3, 1.2, 2.2}) - iso).norm() < 1e-10);
  const auto rot = rotate_stiffness(cu, Orientation{0.3, 1.2, 2.2});
  CHECK((rot - rot.transpose()).norm() < 1e-10);
  CHECK(is_positive_definite(rot));
  CHECK((rot - cu).norm() > 1.0);
  // 45 degrees about z: C11' = (C11 + C12)/2 + C44
  const auto r45 = rotate_stiffness(cu, Orientation{std::numbers::pi / 4.0, 0.0, 0.0});
  CHECK(r45(0, 0) == doctest::Approx((168.4 + 121.4) / 2.0 + 75.4));
}

TEST_CASE("assembled reference is the volume average") {
  const auto ms = gen_two_phase(3, {20, 20}, 0.2, 2.0);
  const auto spec = MaterialSpec::two_phase(100.0);
  const auto f = assemble_stiffness_field(ms, spec);
  const auto hard = isotropic_stiffness(2000.0, 0.3), soft = isotropic_stiffness(20.0, 0.3);
  CHECK(f.reference(0, 0) == doctest::Approx(0.2 * hard(0, 0) + 0.8 * soft(0, 0)));
  CHECK(spec.phases[kSoftPhase].youngs == doctest::Approx(20.0));
  const auto single = assemble_stiffness_field(uniform_phase({4, 4}, kHardPhase), spec);
  CHECK((single.reference - hard).norm() < 1e-9);
}

TEST_CASE("hooke") {
  const auto ms = uniform_phase({4, 4}, kHardPhase);
  const auto c = assemble_stiffness_field(ms, MaterialSpec::two_phase(10.0));
  const auto sol = solve_local_strain(c, uniaxial(2));
  const auto s = hooke(c, sol.strain);
  CHECK(s.n_components == 6);
  CHECK(s.at(5, 0) == doctest::Approx(2000.0 * 0.7 / (1.3 * 0.4) * 1e-4).epsilon(1e-12));
  CHECK(s.at(5, 0) == doctest::Approx(0.2692).epsilon(1e-3));
  auto zero = sol.strain;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  for (double v : hooke(c, zero).values) CHECK(v == 0.0);

  const auto ni = MaterialSpec::polycrystal(fcc_metal("Ni"));
  Microstructure poly = gen_voronoi_polycrystal(1, {4, 4, 4}, 1);
  for (auto& o : *poly.orientation) o = Orientation{};
  const auto cn = assemble_stiffness_field(poly, ni);
  const auto sn = hooke(cn, solve_local_strain(cn, uniaxial(3)).strain);
  CHECK(sn.at(0, 0) == doctest::Approx(251.0e-4));
}

TEST_CASE("gamma_hat: zero frequency, symmetry, projection, isotropic closed form") {
  Rng rng(4);
  for (int ndim : {2, 3}) {
    const double lambda = 70.0, mu = 30.0;
    const VoigtMat ref = reduce(isotropic_lame(lambda, mu), ndim);
    CHECK(gamma_hat(ref, {0.0, 0.0, 0.0}).norm() == 0.0);
    const VoigtMat aniso = reduce(rotate_stiffness(cubic_stiffness(168.4, 121.4, 75.4), Orientation{0.3, 0.9, 0.2}), ndim);
    for (int t = 0; t < 20; ++t) {
      std::array<double, 3> xi{rng.normal(), rng.normal(), ndim == 3 ? rng.normal() : 0.0};
      const VoigtMat g = gamma_hat(ref, xi);
      const VoigtMat iso = gamma_hat_isotropic(lambda, mu, xi, ndim);
      CHECK((g - iso).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, iso.cwiseAbs().maxCoeff()));
      const VoigtMat ga = gamma_hat(aniso, xi);
      CHECK((ga - ga.transpose()).norm() < 1e-12 * ga.norm());
      CHECK((ga * aniso * ga - ga).norm() < 1e-10 * ga.norm());
    }
  }
}

TEST_CASE("solver: homogeneous medium gives a uniform field in one iteration") {
  for (const auto& dims : {std::vector<std::size_t>{8, 8}, std::vector<std::size_t>{6, 6, 6}}) {
    const auto c = assemble_stiffness_field(uniform_phase(dims, kSoftPhase), MaterialSpec::two_phase(10.0));
    const auto e = uniaxial(static_cast<int>(dims.size()));
    const auto sol = solve_local_strain(c, e);
    CHECK(sol.iterations == 1);
    CHECK(sol.residual < 1e-12);
    for (std::size_t cell = 0; cell < c.grid.size(); ++cell)
      for (std::size_t a = 0; a < sol.strain.n_components; ++a)
        CHECK(std::abs(sol.strain.at(cell, a) - e(static_cast<Eigen::Index>(a))) < 1e-12 * 1e-4);
  }
}

TEST_CASE("solver: laminate iso-stress strain ratio equals the contrast") {
  for (auto scheme : {SolverScheme::basic, SolverScheme::eyre_milton}) {
    const auto ms = laminate({16, 4}, 0);
    const auto c = assemble_stiffness_field(ms, MaterialSpec::two_phase(10.0));
    SolverOptions opts;
    opts.scheme = scheme;
    opts.tol = 1e-10;
    const auto sol = solve_local_strain(c, uniaxial(2), opts);
    double soft = 0.0, hard = 0.0;
    for (std::size_t cell = 0; cell < ms.grid.size(); ++cell)
      ((*ms.phase)[cell] == kHardPhase ? hard : soft) = sol.strain.at(cell, 0);
    CHECK(soft / hard == doctest::Approx(10.0).epsilon(1e-6));
  }
}

TEST_CASE("solver: laminate iso-strain keeps the applied strain") {
  const auto ms = laminate({4, 16}, 1);
  const auto c = assemble_stiffness_field(ms, MaterialSpec::two_phase(10.0, 0.0));
  SolverOptions opts;
  opts.tol = 1e-10;
  const auto sol = solve_local_strain(c, uniaxial(2), opts);
  for (std::size_t cell = 0; cell < ms.grid.size(); ++cell) {
    CHECK(std::abs(sol.strain.at(cell, 0) - 1e-4) < 1e-6 * 1e-4);
    CHECK(std::abs(sol.strain.at(cell, 1)) < 1e-6 * 1e-4);
  }
  // with a Poisson effect only the tangential component stays uniform
  const auto c3 = assemble_stiffness_field(ms, MaterialSpec::two_phase(10.0));
  const auto s3 = solve_local_strain(c3, uniaxial(2), opts);
  for (std::size_t cell = 0; cell < ms.grid.size(); ++cell)
    CHECK(std::abs(s3.strain.at(cell, 0) - 1e-4) < 1e-6 * 1e-4);
}

TEST_CASE("solver: random composite converges, keeps the mean, and is linear") {
  const auto ms = gen_two_phase(5, {24, 24}, 0.2, 2.0);
  const auto c = assemble_stiffness_field(ms, MaterialSpec::two_phase(10.0));
  const auto e = uniaxial(2);
  const auto sol = solve_local_strain(c, e);
  CHECK(sol.residual <= 1e-8);
  CHECK(equilibrium_residual(c, sol.strain) <= 1e-8);
  const auto avg = sol.strain.volume_average();
  for (std::size_t a = 0; a < 3; ++a) CHECK(std::abs(avg[a] - e(static_cast<Eigen::Index>(a))) < 1e-12 * 1e-4);

  const auto sol2 = solve_local_strain(c, VoigtVec(2.0 * e));
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.strain.values.size(); ++i)
    worst = std::max(worst, std::abs(sol2.strain.values[i] - 2.0 * sol.strain.values[i]));
  CHECK(worst < 1e-10 * 2e-4);
}

TEST_CASE("solver: effective modulus lies within Voigt-Reuss bounds") {
  const auto ms = gen_two_phase(6, {24, 24}, 0.2, 2.0);
  const auto c = assemble_stiffness_field(ms, MaterialSpec::two_phase(100.0));
  const auto sol = solve_local_strain(c, uniaxial(2));
  const auto s = hooke(c, sol.strain).volume_average();
  Eigen::Matrix3d voigt = Eigen::Matrix3d::Zero(), reuss = Eigen::Matrix3d::Zero();
  for (const auto& cell : c.cells) {
    const Eigen::Matrix3d r = reduce(cell, 2);
    voigt += r / static_cast<double>(c.cells.size());
    reuss += r.inverse() / static_cast<double>(c.cells.size());
  }
  const double eff = s[0] / 1e-4;
  CHECK(eff <= voigt(0, 0));
  CHECK(eff >= reuss.inverse()(0, 0));
}

TEST_CASE("solver: basic and Eyre-Milton agree, automatic switches on contrast") {
  const auto ms = gen_two_phase(2, {20, 20}, 0.2, 2.0);
  const auto c = assemble_stiffness_field(ms, MaterialSpec::two_phase(100.0));
  SolverOptions a, b;
  a.scheme = SolverScheme::basic;
  b.scheme = SolverScheme::eyre_milton;
  a.tol = b.tol = 1e-10;
  const auto sa = solve_local_strain(c, uniaxial(2), a);
  const auto sb = solve_local_strain(c, uniaxial(2), b);
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < sa.strain.values.size(); ++i) {
    diff = std::max(diff, std::abs(sa.strain.values[i] - sb.strain.values[i]));
    norm = std::max(norm, std::abs(sa.strain.values[i]));
  }
  CHECK(diff < 1e-6 * norm);
  CHECK(solve_local_strain(c, uniaxial(2)).scheme_used == SolverScheme::eyre_milton);
  const auto c10 = assemble_stiffness_field(ms, MaterialSpec::two_phase(10.0));
  CHECK(solve_local_strain(c10, uniaxial(2)).scheme_used == SolverScheme::basic);
}

TEST_CASE("solver: porous medium converges with the accelerated scheme") {
  const auto ms = gen_porous(3, {24, 24}, 0.15, 2.0);
  const auto c = assemble_stiffness_field(ms, MaterialSpec::two_phase(1e4));
  const auto sol = solve_local_strain(c, uniaxial(2));
  CHECK(sol.residual <= 1e-8);
  CHECK(sol.iterations < 10000);
}

TEST_CASE("solver: non-convergence raises a numerical error") {
  const auto ms = gen_two_phase(2, {16, 16}, 0.2, 2.0);
  const auto c = assemble_stiffness_field(ms, MaterialSpec::two_phase(100.0));
  SolverOptions o;
  o.max_iter = 2;
  o.scheme = SolverScheme::basic;
  CHECK_THROWS_AS(solve_local_strain(c, uniaxial(2), o), ConvergenceError);
}

TEST_CASE("equilibrium residual") {
  PeriodicGrid g({8, 8});
  Voigt6 s0;
  s0 << 1.0, 2.0, 0.5, 0.0, 0.0, 0.3;
  CHECK(equilibrium_residual(stress_of(g, s0)) < 1e-14);
  CHECK(equilibrium_residual(stress_of(g, Voigt6::Zero())) == 0.0);
  auto noise = stress_of(g, Voigt6::Zero());
  Rng rng(1);
  for (auto& v : noise.values) v = rng.normal();
  CHECK(equilibrium_residual(noise) > 0.1);
}

TEST_CASE("von Mises") {
  PeriodicGrid g({2, 2});
  Voigt6 s;
  s << 3.0, 3.0, 3.0, 0.0, 0.0, 0.0;
  CHECK(std::abs(von_mises(stress_of(g, s))[0]) < 1e-12);
  s << 2.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  CHECK(von_mises(stress_of(g, s))[0] == doctest::Approx(2.0));
  s << 0.0, 0.0, 0.0, 0.0, 0.0, 2.0;
  CHECK(von_mises(stress_of(g, s))[0] == doctest::Approx(std::sqrt(3.0) * 2.0));
}

TEST_CASE("material json round trip and validation") {
  for (const auto& m : {MaterialSpec::two_phase(1000.0), MaterialSpec::polycrystal(fcc_metal("Cu")),
                        MaterialSpec::dual_phase_steel()}) {
    const auto back = material_from_json(to_json(m));
    REQUIRE(back.phases.size() == m.phases.size());
    for (std::size_t p = 0; p < m.phases.size(); ++p)
      CHECK((back.phases[p].stiffness() - m.phases[p].stiffness()).norm() < 1e-12);
  }
  const auto dp = MaterialSpec::dual_phase_steel();
  CHECK(dp.phases[kFerrite].c11 == 233.3);
  CHECK(dp.phases[kMartensite].c11 == 417.4);
}

TEST_CASE("field file round trip") {
  const auto ms = gen_two_phase(5, {6, 5, 4}, 0.3, 1.0);
  const auto c = assemble_stiffness_field(ms, MaterialSpec::two_phase(10.0));
  const auto sol = solve_local_strain(c, uniaxial(3));
  const auto path = std::filesystem::temp_directory_path() / "xlra_field_test.xfd";
  write_field(path, sol.strain);
  const auto back = read_field(path);
  CHECK(back.grid == sol.strain.grid);
  CHECK(back.values == sol.strain.values);
  CHECK(back.mean == sol.strain.mean);
  CHECK(back.labels == sol.strain.labels);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_field(path), ValidationError);
}
