#include <doctest.h>

#include <cmath>

#include "phasegeo/sampling.hpp"
#include "phasegeo/spacetime.hpp"

using namespace phasegeo;

namespace {

const Vec4<double> kSchwX = {0.2, 3.7, 1.1, 0.4};

double max3(const Rank3<double>& t) {
  double m = 0;
  for (const auto& a : t)
    for (const auto& b : a)
      for (double v : b) m = std::max(m, std::abs(v));
  return m;
}

TanPoint<double> tan_point(const Vec4<double>& x, const Vec4<double>& xd) {
  TanPoint<double> z;
  for (int a = 0; a < 4; ++a) {
    z[a] = x[a];
    z[4 + a] = xd[a];
  }
  return z;
}

}  // namespace

TEST_CASE("catalog metrics and their jets") {
  MetricPtr w = make_metric("wavy", {{"eps", 0.3}});
  Vec4<double> x = {0.4, -0.2, 0.1, 0.7};
  Rank3<double> dg;
  Mat4<double> g = w->g(x, dg);
  CHECK(g[0][0] == doctest::Approx(-1 - 0.3 * std::sin(-0.2)));
  CHECK(dg[1][0][0] == doctest::Approx(-0.3 * std::cos(-0.2)).epsilon(1e-14));
  CHECK(dg[0][3][3] == doctest::Approx(-0.3 * std::sin(0.4)).epsilon(1e-14));
  CHECK(dg[2][3][3] == 0.0);

  MetricPtr s = make_metric("schwarzschild", {{"rs", 1.0}});
  Mat4<double> gi = inverse_metric(*s, kSchwX);
  CHECK(gi[1][1] == doctest::Approx(1 - 1 / 3.7).epsilon(1e-14));
  CHECK(gi[3][3] == doctest::Approx(1 / (3.7 * 3.7 * std::sin(1.1) * std::sin(1.1))).epsilon(1e-14));
  CHECK(s->in_domain(kSchwX));
  CHECK_FALSE(s->in_domain({0, 0.5, 1, 0}));

  CHECK_THROWS_AS(make_metric("kerr"), UnknownId);
  CHECK_THROWS_AS(make_metric("schwarzschild", {{"rs", -1.0}}), std::invalid_argument);
  CHECK(metric_catalog().size() == 4);
}

TEST_CASE("Levi-Civita coefficients are minus the Christoffel symbols") {
  const double rs = 1.0, r = kSchwX[1], th = kSchwX[2], f = 1 - rs / r;
  Rank3<double> K = connection_at(*levi_civita(make_schwarzschild(rs)), kSchwX);
  // K[l][n][m] = K_l^n_m = -Gamma^n_{lm}
  CHECK(K[0][1][0] == doctest::Approx(-rs * f / (2 * r * r)).epsilon(1e-13));
  CHECK(K[0][0][1] == doctest::Approx(-rs / (2 * r * r * f)).epsilon(1e-13));
  CHECK(K[1][1][1] == doctest::Approx(rs / (2 * r * r * f)).epsilon(1e-13));
  CHECK(K[2][1][2] == doctest::Approx(r * f).epsilon(1e-13));
  CHECK(K[2][2][1] == doctest::Approx(-1 / r).epsilon(1e-13));
  CHECK(K[3][3][2] == doctest::Approx(-std::cos(th) / std::sin(th)).epsilon(1e-13));
  CHECK(K[3][2][3] == doctest::Approx(std::sin(th) * std::cos(th)).epsilon(1e-13));
  CHECK(K[1][2][3] == 0.0);
}

TEST_CASE("Levi-Civita is torsion free and metric, with d_K g = 0") {
  for (const char* id : {"schwarzschild", "wavy", "generic"}) {
    MetricPtr g = make_metric(id);
    LinearPtr K = levi_civita(g);
    Vec4<double> x = std::string(id) == "schwarzschild" ? kSchwX : Vec4<double>{0.3, -0.5, 0.2, 0.8};
    CHECK(max3(torsion(*K, x)) < 1e-14);
    CHECK(max3(nabla_g(*K, *g, x)) < 1e-13);
    CHECK(max3(dK_g(*K, *g, x)) < 1e-13);
  }
}

TEST_CASE("curvature: flat, Ricci-flat and the Kretschmann scalar") {
  Rank4 R0 = curvature(*levi_civita(make_minkowski()), {0.1, 0.2, 0.3, 0.4});
  for (auto& a : R0)
    for (auto& b : a)
      for (auto& c : b)
        for (double v : c) CHECK(v == 0.0);

  const double rs = 1.0, r = kSchwX[1];
  MetricPtr g = make_schwarzschild(rs);
  Rank4 R = curvature(*levi_civita(g), kSchwX);
  // R[l][m][n][s] = 2 Riem^n_{s l m}
  for (int m = 0; m < 4; ++m)
    for (int s = 0; s < 4; ++s) {
      double ric = 0;
      for (int l = 0; l < 4; ++l) ric += R[l][m][l][s];
      CHECK(std::abs(ric) < 1e-12);
    }
  Mat4<double> gg = g->g(kSchwX), gi = inverse(gg);
  // diagonal metric: raise/lower by diagonal factors
  double kret = 0;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        for (int s = 0; s < 4; ++s) {
          double v = 0.5 * R[l][m][n][s];
          kret += v * v * gg[n][n] * gi[s][s] * gi[l][l] * gi[m][m];
        }
  CHECK(kret == doctest::Approx(12 * rs * rs / std::pow(r, 6)).epsilon(1e-12));
}

TEST_CASE("projective perturbation: torsion free with a predicted non-metricity") {
  MetricPtr g = make_metric("wavy");
  Vec4<double> a = {0.1, -0.2, 0.3, 0.05}, b = {0.2, 0.1, 0.0, -0.1};
  LinearPtr K = plus_projective(levi_civita(g), a, b);
  Vec4<double> x = {0.3, 0.6, -0.4, 0.2};
  CHECK(max3(torsion(*K, x)) < 1e-14);
  Mat4<double> gg = g->g(x);
  Vec4<double> psi;
  for (int l = 0; l < 4; ++l) psi[l] = a[l] + b[l] * std::sin(x[l]);
  Rank3<double> N = nabla_g(*K, *g, x);
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        CHECK(N[l][m][n] == doctest::Approx(2 * gg[m][n] * psi[l] + gg[l][n] * psi[m] + gg[m][l] * psi[n]).epsilon(1e-13));
}

TEST_CASE("constant non-symmetric Phi has torsion") {
  Rank3<double> phi{};
  phi[0][1][2] = 0.3;
  LinearPtr K = plus_constant(flat_connection(), phi);
  Rank3<double> T = torsion(*K, {0, 0, 0, 0});
  CHECK(T[1][0][2] == doctest::Approx(-0.6));
  CHECK(T[1][2][0] == doctest::Approx(0.6));
}

TEST_CASE("tangent structures of the Levi-Civita connection") {
  MetricPtr g = make_schwarzschild(1.0);
  TangentPtr K = tangent_connection(levi_civita(g));
  TanPoint<double> z = tan_point(kSchwX, {1.3, 0.2, 0.05, -0.03});
  TangentResiduals r = tangent_residuals(*g, *K, z);
  CHECK(r.d_upsilon < 1e-13);
  CHECK(r.xi_xi < 1e-13);
  CHECK(r.lie_K_gflat < 1e-13);
  CHECK(r.upsilon_minus_dgflat < 1e-13);
  CHECK(r.lie_I_lie_K < 1e-13);
  CHECK(r.lie_R_gflat < 1e-13);
  CHECK(r.duality < 1e-13);
  CHECK(r.sharp_flat < 1e-13);
  CHECK(r.nabla_g_asym < 1e-13);

  // Upsilon on the flat chart: g_{l mu} dot-d^l ^ d^mu
  MetricPtr m = make_minkowski();
  Blade<double> U = upsilon(*m, *tangent_connection(flat_connection()), z);
  CHECK(U({4, 0}) == -1.0);
  CHECK(U({5, 1}) == 1.0);
  CHECK(U({0, 1}) == 0.0);
}

TEST_CASE("tangent classifier separates symmetric non-metricity") {
  MetricPtr g = make_metric("wavy");
  Rank3<double> phi{};
  for (int l = 0; l < 4; ++l)
    for (int n = 0; n < 4; ++n)
      for (int m = l; m < 4; ++m) phi[l][n][m] = phi[m][n][l] = 0.02 * (1 + l + 2 * n + 3 * m);
  std::vector<TanPoint<double>> pts;
  for (int k = 0; k < 5; ++k) pts.push_back(tan_point({0.1 * k, -0.2, 0.3, 0.1}, {1.2, 0.1 * k, 0.0, 0.2}));
  TangentVerdict lc = classify_tangent_structure(*g, *tangent_connection(levi_civita(g)), pts, 1e-9);
  CHECK(lc.symplectic);
  CHECK(lc.poisson);
  CHECK(lc.points == 5);
  TangentVerdict bad = classify_tangent_structure(*g, *tangent_connection(plus_constant(levi_civita(g), phi)), pts, 1e-9);
  CHECK_FALSE(bad.symplectic);
  CHECK(bad.worst.d_upsilon > 1e-3);
  CHECK(bad.worst.nabla_g_asym > 1e-3);
  CHECK(bad.worst.duality < 1e-12);
}

TEST_CASE("shifted tangent connection K[g] + upsilon") {
  MetricPtr g = make_metric("wavy");
  TangentPtr K = tangent_connection(levi_civita(g), 1.0);
  CHECK_FALSE(K->linear());
  TanPoint<double> z = tan_point({0.1, 0.2, -0.3, 0.4}, {1.1, 0.2, -0.1, 0.3});
  TangentResiduals r = tangent_residuals(*g, *K, z);
  CHECK(r.duality < 1e-13);
  CHECK(r.sharp_flat < 1e-13);
  CHECK(r.nabla_g_asym == -1.0);
}
