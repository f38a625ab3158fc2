#include <doctest.h>

#include <cmath>

#include "phasegeo/sampling.hpp"

using namespace phasegeo;

namespace {

const PhasePoint kP{{0.1, 0.2, -0.3, 0.4}, {0.3, -0.2, 0.1}};

double dot4(const Vec4<double>& a, const Vec4<double>& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

}  // namespace

TEST_CASE("Minkowski kinematics in closed form") {
  MetricPtr g = make_minkowski();
  const double c = 2.0, v2 = 0.09 + 0.04 + 0.01, a = 1 / std::sqrt(1 - v2);
  CHECK(alpha0(*g, kP) == doctest::Approx(a).epsilon(1e-15));
  Vec4<double> d = contact_map(*g, kP, c), t = time_form(*g, kP, c);
  Vec4<double> u = {1, 0.3, -0.2, 0.1};
  for (int l = 0; l < 4; ++l) CHECK(d[l] == doctest::Approx(c * a * u[l]).epsilon(1e-15));
  CHECK(t[0] == doctest::Approx(a / c).epsilon(1e-15));
  CHECK(t[1] == doctest::Approx(-a * 0.3 / c).epsilon(1e-15));
  CHECK(dot4(t, d) == doctest::Approx(1.0).epsilon(1e-15));
  double gdd = -d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3];
  CHECK(gdd == doctest::Approx(-c * c).epsilon(1e-14));
}

TEST_CASE("alpha derivative along the velocity fibre") {
  MetricPtr g = make_minkowski();
  Kinematics<D1> k = kinematics(*g, seed_phase<D1>(kP), 1.0);
  double a = value(k.alpha);
  // d alpha / d v^i = alpha^3 v^i for the flat metric
  for (int i = 0; i < 3; ++i) CHECK(partial(k.alpha, 4 + i) == doctest::Approx(a * a * a * kP.v[i]).epsilon(1e-14));
  for (int l = 0; l < 4; ++l) CHECK(partial(k.alpha, l) == 0.0);
}

TEST_CASE("contact map and time form on a curved metric") {
  MetricPtr g = make_metric("generic");
  const double c = 1.7;
  Vec4<double> d = contact_map(*g, kP, c), t = time_form(*g, kP, c);
  Mat4<double> gg = g->g(kP.x);
  double gdd = 0;
  Vec4<double> low{};
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      gdd += gg[l][m] * d[l] * d[m];
      low[m] += gg[l][m] * d[l];
    }
  CHECK(gdd == doctest::Approx(-c * c).epsilon(1e-14));
  for (int m = 0; m < 4; ++m) CHECK(t[m] == doctest::Approx(-low[m] / (c * c)).epsilon(1e-14));
  CHECK(d[0] > 0);
}

TEST_CASE("projectors split vectors along the contact map") {
  MetricPtr g = make_metric("wavy");
  const double c = 1.3;
  Projections pr = projections(*g, kP, c);
  Mat4<double> th = theta(*g, kP, c);
  Vec4<double> d = contact_map(*g, kP, c), t = time_form(*g, kP, c);
  for (int m = 0; m < 4; ++m)
    for (int l = 0; l < 4; ++l) {
      double pp = 0, qq = 0, pq = 0;
      for (int r = 0; r < 4; ++r) {
        pp += pr.par_up[m][r] * pr.par_up[r][l];
        qq += pr.perp_up[m][r] * pr.perp_up[r][l];
        pq += pr.par_up[m][r] * pr.perp_up[r][l];
      }
      CHECK(pp == doctest::Approx(pr.par_up[m][l]).epsilon(1e-14));
      CHECK(qq == doctest::Approx(pr.perp_up[m][l]).epsilon(1e-14));
      CHECK(std::abs(pq) < 1e-14);
      CHECK(th[m][l] == pr.perp_up[m][l]);
      CHECK(pr.par_low[l][m] == pr.par_up[m][l]);
    }
  for (int m = 0; m < 4; ++m) {
    double s = 0, w = 0;
    for (int l = 0; l < 4; ++l) {
      s += th[m][l] * d[l];
      w += t[l] * th[l][m];
    }
    CHECK(std::abs(s) < 1e-14);
    CHECK(std::abs(w) < 1e-14);
  }
}

TEST_CASE("nu_tau inverts on ker tau") {
  MetricPtr g = make_metric("schwarzschild");
  PhasePoint p{{0.0, 4.0, 1.0, 0.5}, {0.1, 0.02, -0.03}};
  const double c = 1.0;
  Vec3<double> Y = {0.4, -1.1, 0.7};
  Vec4<double> X = nu_tau_inv(*g, p, c, Y);
  Vec4<double> t = time_form(*g, p, c);
  CHECK(std::abs(dot4(t, X)) < 1e-14);
  Vec3<double> back = nu_tau(*g, p, c, X);
  for (int i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(Y[i]).epsilon(1e-14));
  // the contact direction is in the kernel of nu_tau
  Vec3<double> z = nu_tau(*g, p, c, contact_map(*g, p, c));
  for (double v : z) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("hatted blocks are mutually inverse and the frames are dual") {
  MetricPtr g = make_metric("generic");
  Kinematics<double> k = kinematics(*g, kP, 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int r = 0; r < 3; ++r) s += k.ghat[i][r] * k.ghatu[r][j];
      CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13));
    }
  CHECK(k.ghat00 * k.ghatu00 == doctest::Approx(1.0).epsilon(1e-15));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(dot4(k.b[a], k.beta[b]) == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-14));
}

TEST_CASE("timelike guard") {
  MetricPtr g = make_minkowski();
  PhasePoint p{{0, 0, 0, 0}, {1.2, 0, 0}};
  CHECK_THROWS_AS(kinematics(*g, p, 1.0), AdmissibilityError);
}

TEST_CASE("identity suites") {
  for (const char* id : {"minkowski", "schwarzschild", "wavy", "generic"}) {
    MetricPtr g = make_metric(id);
    SamplingOptions o;
    o.count = 10;
    o.seed = 3;
    LinearPtr K = plus_projective(levi_civita(g), {0.1, 0, 0.2, 0}, {0, 0.3, 0, 0.1});
    for (const auto& p : sample_phase_points(*g, o).points) {
      auto u = useful_identities(*g, p, 1.4);
      CHECK(u.size() == 20);
      for (const auto& r : u) CHECK_MESSAGE(r.value < 1e-10, id, " ", r.name);
      for (const auto& r : frame_identities(*g, p, 1.4)) CHECK_MESSAGE(r.value < 1e-10, id, " ", r.name);
      for (const auto& r : nabla_hat_identities(*g, *K, p, 1.4)) CHECK_MESSAGE(r.value < 1e-10, id, " ", r.name);
    }
  }
}

TEST_CASE("sampling is deterministic, admissible and prefix-stable") {
  MetricPtr g = make_metric("schwarzschild");
  SamplingOptions o;
  o.count = 20;
  o.seed = 42;
  SampleSet a = sample_phase_points(*g, o), b = sample_phase_points(*g, o);
  REQUIRE(a.points.size() == 20);
  for (size_t n = 0; n < a.points.size(); ++n) {
    CHECK(a.points[n].x == b.points[n].x);
    CHECK(a.points[n].v == b.points[n].v);
    CHECK(g->in_domain(a.points[n].x));
    CHECK(alpha0(*g, a.points[n]) <= o.max_alpha);
  }
  o.count = 7;
  SampleSet c = sample_phase_points(*g, o);
  for (size_t n = 0; n < c.points.size(); ++n) CHECK(c.points[n].x == a.points[n].x);
  o.seed = 43;
  CHECK(sample_phase_points(*g, o).points[0].x != a.points[0].x);

  auto tan = tangent_points(*g, c.points, 2.0);
  Vec4<double> d = contact_map(*g, c.points[0], 2.0);
  for (int l = 0; l < 4; ++l) {
    CHECK(tan[0][l] == c.points[0].x[l]);
    CHECK(tan[0][4 + l] == doctest::Approx(d[l]).epsilon(1e-15));
  }
}

TEST_CASE("an empty admissible region yields no points") {
  MetricPtr g = make_metric("schwarzschild");
  SamplingOptions o;
  Box b = g->box();
  b.lo[1] = 0.2;
  b.hi[1] = 0.5;
  o.box = b;
  SampleSet s = sample_phase_points(*g, o);
  CHECK(s.points.empty());
  CHECK(s.rejected == s.attempts);
}
