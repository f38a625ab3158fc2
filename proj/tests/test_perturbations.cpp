#include <doctest.h>

#include <cmath>

#include "phasegeo/perturb.hpp"
#include "phasegeo/sampling.hpp"

using namespace phasegeo;

namespace {

const PhasePoint kP{{0.2, -0.1, 0.4, 0.3}, {0.2, 0.1, -0.3}};
const PhasePoint kSchwP{{0.0, 4.5, 1.3, 0.2}, {0.04, -0.01, 0.02}};

// F = x^2 dt ^ dx, not closed
struct OpenF {
  template <class S>
  Mat4<S> operator()(const Vec4<S>& x) const {
    Mat4<S> f{};
    for (auto& r : f)
      for (auto& v : r) v = S(0.0);
    f[0][1] = x[2];
    f[1][0] = -x[2];
    return f;
  }
};

class OpenField : public EMField {
 public:
  Mat4<double> T(const Vec4<double>& x) const override { return OpenF{}(x); }
  Mat4<D1> T(const Vec4<D1>& x) const override { return OpenF{}(x); }
  Mat4<D2> T(const Vec4<D2>& x) const override { return OpenF{}(x); }
  std::string name() const override { return "open"; }
};

Mat4<double> mat(const TensorField& T, const Vec4<double>& x) { return T.T(x); }

}  // namespace

TEST_CASE("catalog fields are closed and an open field is caught") {
  for (const auto& id : em_catalog()) {
    EMPtr F = make_em_field(id, {});
    CHECK(closedness_residual(*F, kSchwP.x) < 1e-14);
  }
  Mat4<double> u = mat(*uniform_field(2.0), kP.x);
  CHECK(u[0][1] == 2.0);
  CHECK(u[1][0] == -2.0);
  Mat4<double> cf = mat(*coulomb_field(0.5), kSchwP.x);
  CHECK(cf[0][1] == doctest::Approx(0.5 / (4.5 * 4.5)).epsilon(1e-15));
  CHECK_THROWS_AS(make_em_field("dipole", {}), UnknownId);

  auto open = std::make_shared<OpenField>();
  CHECK(closedness_residual(*open, kP.x) == doctest::Approx(1.0));
  CHECK_THROWS_AS(em_structure(make_minkowski(), open, 1.0, 1.0, kP, 1.0), ClosednessError);
}

TEST_CASE("EM perturbation adds (q/2m) F to Omega") {
  const double q = 0.3, m = 2.0, E = 1.5;
  for (double c : {1.0, 2.0}) {
    MetricPtr g = make_minkowski();
    PhasePtr G = em_connection(g, uniform_field(E), q, m, c);
    Blade<double> Oa = omega_a(*g, *split_connection(G, g), kP, c);
    CHECK(std::abs(Oa({0, 1})) == doctest::Approx(0.5 * q / m * E).epsilon(1e-13));
    for (size_t k = 0; k < Oa.size(); ++k)
      if (Oa.mask_at(k) != 0b11) CHECK(std::abs(Oa.c[k]) < 1e-14);
    EMStructure s = em_structure(g, uniform_field(E), q, m, kP, c);
    CHECK(max_abs(s.omega - omega_at(*g, *G, kP, c)) == 0.0);
  }
}

TEST_CASE("symmetric sigma leaves Omega and Lambda unchanged") {
  MetricPtr g = make_metric("wavy");
  const double c = 1.3;
  Constants k{c, 0.8, 1.5};
  for (SigmaPtr s : {sigma_psi(random_symmetric_tensor(3, 0.3)), sigma_nu_tau(k, 0.4)}) {
    PhasePtr S = sigma_only(g, s, c);
    CHECK(max_abs(omega_a(*g, *S, kP, c)) < 1e-14);
    CHECK(max_abs(lambda_a(*g, *S, kP, c)) < 1e-14);
    Kinematics<double> kin = kinematics(*g, kP, c);
    Mat4<double> b = bracket_sigma(kin, s->sigma(kin, kP));
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) CHECK(b[l][m] == doctest::Approx(b[m][l]).epsilon(1e-12));
  }
}

TEST_CASE("antisymmetric sigma: Omega^a = -alt Sigma_ and Lambda^a in closed form") {
  MetricPtr g = make_metric("generic");
  const double c = 1.1;
  TensorPtr phi = random_antisymmetric_tensor(5, 0.3);
  PhasePtr S = sigma_only(g, sigma_phi(phi), c);
  Kinematics<double> k = kinematics(*g, kP, c);
  Mat4<double> Sb = sigma_bar(k, S->Gamma(kP));
  CHECK(max_abs(omega_a(*g, *S, kP, c) + alt_form(Sb)) < 1e-13);
  CHECK(max_abs(lambda_a(*g, *S, kP, c) - lambda_a_phi_printed(*g, mat(*phi, kP.x), kP, c)) < 1e-13);
  // Omega^a = (1/2) phi_{lm} d^l ^ d^m summed over all l, m
  Mat4<double> ph = mat(*phi, kP.x);
  Blade<double> Oa = omega_a(*g, *S, kP, c);
  for (int l = 0; l < 4; ++l)
    for (int m = l + 1; m < 4; ++m) CHECK(std::abs(Oa({l, m})) == doctest::Approx(std::abs(ph[l][m])).epsilon(1e-12));
}

TEST_CASE("Sigma_ is sigma projected along ker tau") {
  MetricPtr g = make_metric("generic");
  const double c = 1.4;
  SigmaPtr s = sigma_random(7, 0.4);
  Kinematics<double> k = kinematics(*g, kP, c);
  Mat4<double> sg = s->sigma(k, kP);
  Mat4<double> Sb = sigma_bar(k, sigma_to_Sigma(*g, *s, kP, c));
  Mat4<double> th = theta(*g, kP, c);
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      double want = 0;
      for (int r = 0; r < 4; ++r) want += sg[l][r] * th[r][m];
      CHECK(Sb[l][m] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("connection assembly") {
  MetricPtr g = make_metric("wavy");
  const double c = 1.0;
  TensorPtr psi = random_symmetric_tensor(1, 0.2), phi = random_antisymmetric_tensor(2, 0.2);
  Mat43<double> a = split_connection(printed_mixed_connection(g, psi, phi, c), g)->Gamma(kP);
  Mat43<double> b = sigma_only(g, sigma_mixed(psi, phi), c)->Gamma(kP);
  Mat43<double> s = sigma_only(g, sigma_psi(psi), c)->Gamma(kP), t = sigma_only(g, sigma_phi(phi), c)->Gamma(kP);
  Mat43<double> sp = split_connection(sigma_connection(g, sigma_phi(phi), c), g)->Gamma(kP);
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i) {
      CHECK(a[l][i] == doctest::Approx(b[l][i]).epsilon(1e-13));
      CHECK(b[l][i] == doctest::Approx(s[l][i] + t[l][i]).epsilon(1e-13));
      CHECK(sp[l][i] == doctest::Approx(t[l][i]).epsilon(1e-13));
    }
}

TEST_CASE("symmetry of the sigma avatars is enforced") {
  MetricPtr g = make_minkowski();
  CHECK_THROWS_AS(sigma_to_Sigma(*g, *sigma_psi(random_antisymmetric_tensor(1, 0.3)), kP, 1.0), SymmetryError);
  CHECK_THROWS_AS(sigma_to_Sigma(*g, *sigma_phi(random_symmetric_tensor(1, 0.3)), kP, 1.0), SymmetryError);
  CHECK(sigma_psi(random_symmetric_tensor(1, 0.3))->symmetry() == Symmetry::symmetric);
}

TEST_CASE("potentials: spacetime potential recovers Omega, a phase-dependent one does not") {
  MetricPtr g = make_minkowski();
  const double q = 0.2, m = 1.0, E = 0.8, c = 1.0;
  PhasePtr G = em_connection(g, uniform_field(E), q, m, c);
  CHECK(potential_residual(*g, *G, uniform_potential(E, q, m), kP, c) < 1e-14);
  CHECK(potential_residual(*g, *G, phase_dependent_potential(E, q, m), kP, c) > 1e-3);
}

TEST_CASE("the regular volume does not depend on Gamma") {
  MetricPtr g = make_metric("generic");
  PhasePtr G = sum(metric_phase_connection(g), random_sigma(9, 0.4));
  RegularVolume v = invariance_of_regular_volume(g, *G, {0.1, -0.3, 0.2, 0.05}, kP, 1.2);
  CHECK(v.regular);
  CHECK(v.perturbed == doctest::Approx(v.metric).epsilon(1e-12));
  CHECK(std::abs(v.metric) > 1e-3);
}

TEST_CASE("condition for L_chi(K) tau = 0") {
  MetricPtr g = make_metric("wavy");
  Vec4<double> x = {0.1, 0.3, -0.2, 0.4};
  Vec4<double> X = {0.2, 1.0, -0.4, 0.3}, Y = {-0.5, 0.1, 0.9, 0.2}, Z = {1.3, 0.2, 0.1, -0.1};
  LinearPtr lc = levi_civita(g);
  CHECK(std::abs(dKg_eval(*g, *lc, x, X, Y, Z)) < 1e-14);
  CHECK(std::abs(condition_C(*g, *lc, x, X, Y, Z)) < 1e-14);

  LinearPtr pr = plus_projective(lc, {0.1, 0.2, -0.1, 0.3}, {0.2, 0.0, 0.1, 0.0});
  CHECK(std::abs(condition_C(*g, *pr, x, X, Y, Z)) < 1e-13);
  CHECK(std::abs(condition_C_swapped(*g, *pr, x, X, Y, Z)) > 1e-3);

  Rank3<double> phi{};
  for (int l = 0; l < 4; ++l)
    for (int n = 0; n < 4; ++n)
      for (int m = l; m < 4; ++m) phi[l][n][m] = phi[m][n][l] = 0.03 * (1 + l - n + 2 * m);
  LinearPtr nc = plus_constant(lc, phi);
  CHECK(std::abs(condition_C(*g, *nc, x, X, Y, Z)) > 1e-4);

  // agreement with the phase-space statement at a point over x
  PhasePoint p{x, {0.1, 0.05, -0.1}};
  CHECK(max_abs(lie_gamma_tau(*g, *chi(pr), p, 1.0)) < 1e-13);
  CHECK(max_abs(lie_gamma_tau(*g, *chi(nc), p, 1.0)) > 1e-4);
}

TEST_CASE("EM structures over the catalog on Schwarzschild") {
  MetricPtr g = make_schwarzschild(1.0);
  SamplingOptions o;
  o.count = 8;
  o.seed = 4;
  auto pts = sample_phase_points(*g, o).points;
  for (EMPtr F : {uniform_field(1.0), coulomb_field(0.5)}) {
    StructureVerdict v = classify_phase_structure(*g, *em_connection(g, F, 0.1, 1.0, 1.0), pts, 1e-9);
    CHECK(v.acc);
    CHECK(v.acpj);
    CHECK_FALSE(v.contact);
    CHECK_FALSE(v.jacobi);
    CHECK(v.dual_pair);
  }
}
