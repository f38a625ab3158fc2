#include <doctest.h>

#include <cmath>

#include "phasegeo/phase.hpp"
#include "phasegeo/sampling.hpp"

using namespace phasegeo;

namespace {

std::vector<PhasePoint> samples(const Metric& g, int n, uint64_t seed) {
  SamplingOptions o;
  o.count = n;
  o.seed = seed;
  return sample_phase_points(g, o).points;
}

const PhasePoint kFlatP{{0.1, -0.2, 0.3, 0.0}, {0.3, -0.4, 0.2}};
const PhasePoint kSchwP{{0.0, 4.2, 1.2, 0.3}, {0.05, 0.01, -0.02}};

// Gamma_0^1 = x^2
struct Lin : ExactPartials {
  template <class S>
  Mat43<S> operator()(const PhasePointT<S>& p) const {
    Mat43<S> G = zero43<S>();
    G[0][0] = p.x[2];
    return G;
  }
};

}  // namespace

TEST_CASE("flat Omega, tau, Lambda and gamma in closed form") {
  MetricPtr g = make_minkowski();
  PhasePtr G = metric_phase_connection(g);
  const double c = 1.6;
  const auto& v = kFlatP.v;
  double v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2], a = 1 / std::sqrt(1 - v2);
  Blade<double> O = omega_at(*g, *G, kFlatP, c);
  // Omega = c a (g_{i mu} + a^2 v_i gbar_{0 mu}) d^i_0 ^ d^mu with gbar_0 = (-1, v)
  for (int i = 0; i < 3; ++i) {
    CHECK(O({4 + i, 0}) == doctest::Approx(-c * a * a * a * v[i]).epsilon(1e-14));
    for (int j = 0; j < 3; ++j)
      CHECK(O({4 + i, 1 + j}) == doctest::Approx(c * a * ((i == j) + a * a * v[i] * v[j])).epsilon(1e-14));
    for (int j = 0; j < 3; ++j) CHECK(O({4 + i, 4 + j}) == 0.0);
  }
  Blade<double> t = tau_at(*g, kFlatP, c);
  CHECK(t({0}) == doctest::Approx(a / c).epsilon(1e-15));
  for (int i = 0; i < 3; ++i) CHECK(t({1 + i}) == doctest::Approx(-a * v[i] / c).epsilon(1e-15));
  std::vector<double> gm = gamma_at(*g, *G, kFlatP, c);
  CHECK(gm[0] == doctest::Approx(c * a).epsilon(1e-15));
  for (int i = 0; i < 3; ++i) {
    CHECK(gm[1 + i] == doctest::Approx(c * a * v[i]).epsilon(1e-15));
    CHECK(gm[4 + i] == 0.0);
  }

  PhasePoint rest{{0, 0, 0, 0}, {0, 0, 0}};
  Blade<double> L = lambda_at(*g, *G, rest, c);
  for (int j = 0; j < 3; ++j) CHECK(L({1 + j, 4 + j}) == doctest::Approx(1 / c).epsilon(1e-15));
  CHECK(L({0, 4}) == 0.0);
}

TEST_CASE("flat Omega is minus c^2 d tau by direct differentiation") {
  MetricPtr g = make_minkowski();
  const double c = 1.3;
  const auto& v = kFlatP.v;
  double v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2], a = 1 / std::sqrt(1 - v2);
  // tau = (a/c)(dt - v.dx): d tau has (d^i_0, d^0) = a^3 v^i / c and (d^i_0, d^j) = -(a^3 v^i v^j + a delta_ij)/c
  Blade<double> O = omega_at(*g, *metric_phase_connection(g), kFlatP, c);
  for (int i = 0; i < 3; ++i) {
    CHECK(O({4 + i, 0}) == doctest::Approx(-c * c * a * a * a * v[i] / c).epsilon(1e-14));
    for (int j = 0; j < 3; ++j)
      CHECK(O({4 + i, 1 + j}) == doctest::Approx(c * c * (a * a * a * v[i] * v[j] + a * (i == j)) / c).epsilon(1e-14));
  }
}

TEST_CASE("duality anchors and the phase musical isomorphisms") {
  Constants k{1.4, 0.7, 2.0};
  for (const char* id : {"minkowski", "schwarzschild", "generic"}) {
    MetricPtr g = make_metric(id);
    PhasePtr G = sum(metric_phase_connection(g), random_sigma(3, 0.2));
    for (const auto& p : samples(*g, 5, 8)) {
      Blade<double> O = omega_at(*g, *G, p, k.c), L = lambda_at(*g, *G, p, k.c), t = tau_at(*g, p, k.c);
      std::vector<double> gm = gamma_at(*g, *G, p, k.c);
      CHECK(pairing(L, O) == doctest::Approx(-3.0).epsilon(1e-12));
      double tg = 0;
      for (int a = 0; a < kPhaseDim; ++a) tg += t.c[a] * gm[a];
      CHECK(tg == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(max_abs(interior(gm, O)) < 1e-12);
      for (int a = 0; a < kPhaseDim; ++a) {
        std::vector<double> X(kPhaseDim, 0.0);
        X[a] = 1.0;
        std::vector<double> Y = phase_sharp(L, gm, phase_flat(O, t.c, X, k), k);
        for (int b = 0; b < kPhaseDim; ++b) CHECK(Y[b] == doctest::Approx(X[b]).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("volume coefficients on the flat chart at rest") {
  MetricPtr g = make_minkowski();
  PhasePoint rest{{0, 0, 0, 0}, {0, 0, 0}};
  const double c = 1.5;
  VolumeCoefficients v = volume_checks(*g, *metric_phase_connection(g), rest, c);
  CHECK(std::abs(v.covariant) == doctest::Approx(6 * std::pow(c, 4)).epsilon(1e-14));
  CHECK(std::abs(v.contravariant) == doctest::Approx(6 / std::pow(c, 4)).epsilon(1e-14));
  CHECK(v.covariant == doctest::Approx(v.covariant_expected).epsilon(1e-14));
  CHECK(v.contravariant == doctest::Approx(v.contravariant_expected).epsilon(1e-14));
  VolumeCoefficients w = volume_checks(*g, *sum(metric_phase_connection(g), random_sigma(4, 0.5)), rest, c);
  CHECK(w.covariant == doctest::Approx(v.covariant).epsilon(1e-14));
  CHECK(w.contravariant == doctest::Approx(v.contravariant).epsilon(1e-14));
}

TEST_CASE("Schwarzschild metric connection: contact and Jacobi by direct brackets") {
  MetricPtr g = make_schwarzschild(1.0);
  PhasePtr G = metric_phase_connection(g);
  const double c = 1.0;
  auto st = phase_state<D1>(*g, *G, kSchwP, c);
  Blade<D1> Od = omega_form(st.k, st.G), Ld = lambda_vec(st.k, st.G), gd = gamma_vec(st.k, st.G);
  Blade<D1> td = tau_form(st.k);
  Blade<double> O = values_of(Od), L = values_of(Ld), gm = values_of(gd);
  CHECK(max_abs(exterior_derivative(Od)) < 1e-13);
  CHECK(max_abs(O + (c * c) * exterior_derivative(td)) < 1e-13);
  CHECK(max_abs(schouten(gd, Ld)) < 1e-13);
  CHECK(max_abs(schouten(Ld, Ld) - (2.0 / (c * c)) * wedge(gm, L)) < 1e-13);
}

TEST_CASE("printed expansions agree with generic brackets for perturbed Gamma") {
  MetricPtr g = make_metric("wavy");
  PhasePtr G = sum(metric_phase_connection(g), random_sigma(21, 0.3));
  PhasePtr dg = random_sigma(22, 0.1);
  const double c = 1.2;
  for (const auto& p : samples(*g, 5, 9)) {
    auto st = phase_state<D1>(*g, *G, p, c);
    Blade<D1> Od = omega_form(st.k, st.G), Ld = lambda_vec(st.k, st.G), gd = gamma_vec(st.k, st.G);
    CHECK(max_abs(exterior_derivative(Od) - d_omega_printed(*g, *G, p, c)) < 1e-12);
    CHECK(max_abs(schouten(gd, Ld) - gamma_lambda_printed(*g, *G, *zero_phase_connection(), p, c)) < 1e-12);
    CHECK(max_abs(schouten(Ld, Ld) - lambda_lambda_printed(*g, *G, p, c)) < 1e-12);
    CHECK(max_abs(gamma_lambda_generic(*g, *G, *dg, p, c) - gamma_lambda_printed(*g, *G, *dg, p, c)) < 1e-12);
    CHECK(max_abs(gamma_lambda_adapted_printed(*g, *G, p, c) - schouten(gd, Ld)) < 1e-12);
    CHECK(max_abs(lambda_lambda_adapted_printed(*g, *G, p, c) - schouten(Ld, Ld)) < 1e-12);
    CHECK(max_abs(lie_gamma_tau(*g, *G, p, c) - lie_gamma_tau_printed(*g, *G, p, c)) < 1e-12);
    CHECK(max_abs(lie_R_tau(*g, *G, p, c) - lie_R_tau_printed(*g, *G, p, c)) < 1e-12);
  }
}

TEST_CASE("curvature of the flat and metric phase connections") {
  MetricPtr g = make_minkowski();
  Rank43 F = phase_curvature(*metric_phase_connection(g), kFlatP);
  for (auto& a : F)
    for (auto& b : a)
      for (double x : b) CHECK(x == 0.0);
  Rank43 F2 = phase_curvature(*make_phase(Lin{}, "lin"), kFlatP);
  CHECK(std::abs(F2[2][0][0]) == doctest::Approx(2.0));
  CHECK(F2[2][0][0] == -F2[0][2][0]);
  CHECK(F2[1][0][0] == 0.0);
}

TEST_CASE("adapted frames are dual and the gamma projector annihilates the fibre") {
  MetricPtr g = make_metric("generic");
  PhasePtr G = sum(metric_phase_connection(g), random_sigma(5, 0.2));
  auto st = phase_state<double>(*g, *G, kFlatP, 1.1);
  PhaseFrames f = adapted_phase_frames(st.k, st.G);
  for (int a = 0; a < kPhaseDim; ++a)
    for (int b = 0; b < kPhaseDim; ++b) {
      double s = 0;
      for (int k = 0; k < kPhaseDim; ++k) s += f.E[a][k] * f.Eps[b][k];
      CHECK(s == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-13));
    }
  Mat7 P = gamma_projector(st.G);
  for (int i = 0; i < 3; ++i)
    for (int b = 0; b < kPhaseDim; ++b) CHECK(P[4 + i][b] == 0.0);
  CHECK(P[1][1] == 1.0);
  CHECK(P[1][4] == st.G[1][0]);
}

TEST_CASE("push, derivation and full components") {
  Blade<double> F(kPhaseDim, 2);
  F.add({0, 3}, 2.0);
  F.add({1, 5}, -1.0);
  Mat7 I{};
  for (int a = 0; a < kPhaseDim; ++a) I[a][a] = 1.0;
  CHECK(push_blade(F, I).c == F.c);
  Blade<double> D = derivation(F, I);
  for (size_t k = 0; k < F.size(); ++k) CHECK(D.c[k] == 2 * F.c[k]);
  CHECK(full_component(F, {3, 0}) == -2.0);
  CHECK(full_component(F, {5, 1}) == 1.0);
  Mat7 S = I;
  S[0][0] = 3.0;
  CHECK(push_blade(F, S)({0, 3}) == 6.0);
}

TEST_CASE("contact pullbacks of the tangent 2-form") {
  MetricPtr g = make_schwarzschild(1.0);
  LinearPtr K = levi_civita(g);
  for (double c : {1.0, 2.0}) {
    ContactPullbacks cp = contact_pullbacks(*g, *K, kSchwP, c);
    CHECK(max_abs(cp.full - cp.direct) < 1e-12);
    CHECK(max_abs(cp.parallel + cp.perp - cp.full) < 1e-12);
    CHECK(max_abs(cp.perp - omega_at(*g, *chi(K), kSchwP, c)) < 1e-12);
  }
}

TEST_CASE("Omega has a one-dimensional kernel spanned by gamma") {
  MetricPtr g = make_metric("generic");
  PhasePtr G = sum(metric_phase_connection(g), random_sigma(6, 0.3));
  OmegaKernel k = omega_kernel(*g, *G, kFlatP, 1.0);
  CHECK(k.ratio < 1e-12);
  CHECK(k.alignment < 1e-12);
}

TEST_CASE("classifier flags") {
  MetricPtr g = make_schwarzschild(1.0);
  auto pts = samples(*g, 10, 12);
  StructureVerdict m = classify_phase_structure(*g, *metric_phase_connection(g), pts, 1e-9);
  CHECK(m.acc);
  CHECK(m.contact);
  CHECK(m.acpj);
  CHECK(m.jacobi);
  CHECK(m.dual_pair);
  CHECK(m.points == 10);
  StructureVerdict r = classify_phase_structure(*g, *sum(metric_phase_connection(g), random_sigma(1, 0.2)), pts, 1e-9);
  CHECK_FALSE(r.contact);
  CHECK_FALSE(r.jacobi);
  CHECK(r.dual_pair);
  CHECK(r.residuals.at("omega_exact") > 1e-3);
  CHECK(r.worst.count("omega_exact") == 1);
  CHECK_THROWS_AS(classify_phase_structure(*g, *metric_phase_connection(g), {}, 1e-9), std::invalid_argument);

  StructureVerdict bad;
  bad.contact = true;
  CHECK_THROWS_AS(check_implications(bad), InternalError);
}

TEST_CASE("finite-difference connections are flagged") {
  MetricPtr g = make_minkowski();
  PhasePtr G = finite_difference_connection([](const PhasePoint&) { return zero43<double>(); }, "fd");
  CHECK(G->finite_difference());
  StructureVerdict v = classify_phase_structure(*g, *G, samples(*g, 3, 2), 1e-6);
  CHECK(v.finite_difference);
  CHECK(v.contact);
}

TEST_CASE("scale laws of the anchored quantities") {
  CHECK(scale_anchors().size() == 9);
  CHECK_THROWS_AS(scale_law("nope"), UnknownId);
  // tau ~ 1/c, Omega ~ c, Lambda ~ 1/c, gamma ~ c with alpha independent of c
  MetricPtr g = make_metric("wavy");
  PhasePtr G = metric_phase_connection(g);
  const double s = 2.5;
  auto ratio = [](const Blade<double>& a, const Blade<double>& b) {
    size_t k = 0;
    while (std::abs(a.c[k]) < 1e-6) ++k;
    return b.c[k] / a.c[k];
  };
  CHECK(ratio(tau_at(*g, kFlatP, 1.0), tau_at(*g, kFlatP, s)) == doctest::Approx(scale_law("tau").factor(s, 1, 1)));
  CHECK(ratio(omega_at(*g, *G, kFlatP, 1.0), omega_at(*g, *G, kFlatP, s)) ==
        doctest::Approx(scale_law("omega").factor(s, 1, 1)));
  CHECK(ratio(lambda_at(*g, *G, kFlatP, 1.0), lambda_at(*g, *G, kFlatP, s)) ==
        doctest::Approx(scale_law("lambda").factor(s, 1, 1)));
  CHECK(scale_law("gamma").factor(s, 1, 1) == doctest::Approx(s));
  CHECK(scale_law("flat_tau_term").factor(s, 2.0, 3.0) == doctest::Approx(s * s * 3.0 / 2.0));
  CHECK(scale_law("omega").dim() == ScaleDim::c() + ScaleDim::metric() * Rational(1, 2));
}
