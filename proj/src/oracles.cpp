#include "phasegeo/phase.hpp"

namespace phasegeo {

namespace {

struct Ctx {
  Kinematics<D1> kd;
  Kinematics<double> k;
  Mat43<D1> Gd;
  Mat43<double> G;
  Rank43 A;
  double c, a, a2;
};

Ctx context(const Metric& g, const PhaseConnection& Gc, const PhasePoint& p, double c) {
  auto st = phase_state<D1>(g, Gc, p, c);
  Ctx x{st.k, kinematics(g, p, c), st.G, {}, curvature_coeff(st.G), c, 0, 0};
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i) x.G[l][i] = x.Gd[l][i].v;
  x.a = x.k.alpha;
  x.a2 = x.a * x.a;
  return x;
}

double dhat00(const Ctx& x, int r) { return x.kd.ghat00.d[r]; }

// Frame blade with indices e_0 -> 0, e_i -> 1+i, e^0_i -> 4+i, mapped to coordinates.
Blade<double> from_frame(const Blade<double>& f, const Ctx& x) {
  return push_blade(f, adapted_phase_frames(x.k, x.G).E);
}

}  // namespace

Blade<double> d_omega_printed(const Metric& g, const PhaseConnection& Gc, const PhasePoint& p, double c) {
  Ctx x = context(g, Gc, p, c);
  Blade<double> r(kPhaseDim, 3);
  for (int mu = 0; mu < 4; ++mu) {
    for (int j = 0; j < 3; ++j)
      for (int n = 0; n < 4; ++n)
        for (int l = 0; l < 4; ++l) r.add({n, l, mu}, 0.5 * c * x.a * x.k.gbi[j][mu] * x.A[n][l][j]);
    for (int i = 0; i < 3; ++i)
      for (int l = 0; l < 4; ++l) {
        double w = (x.kd.alpha * x.kd.gbi[i][mu]).d[l];
        for (int j = 0; j < 3; ++j) w += x.a * x.k.gbi[j][mu] * x.Gd[l][j].d[4 + i];
        w *= -c;
        r.add({4 + i, l, mu}, w);
        for (int n = 0; n < 4; ++n) r.add({n, l, mu}, -w * x.G[n][i]);
      }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double w = c * (x.kd.alpha * x.kd.gbi[j][mu]).d[4 + i];
        r.add({4 + i, 4 + j, mu}, w);
        for (int l = 0; l < 4; ++l) r.add({4 + i, l, mu}, -w * x.G[l][j]);
      }
  }
  return r;
}

namespace {
Vec3<D1> full_gamma(const Ctx& x, const PhaseConnection& dgam, const PhasePoint& p) {
  Vec3<D1> gm = gamma_coeffs(x.kd, x.Gd);
  Mat43<D1> e = dgam.Gamma(seed_phase<D1>(p));
  for (int i = 0; i < 3; ++i) gm[i] += e[0][i];
  return gm;
}
}  // namespace

Blade<double> gamma_lambda_generic(const Metric& g, const PhaseConnection& Gc, const PhaseConnection& dgam,
                                   const PhasePoint& p, double c) {
  Ctx x = context(g, Gc, p, c);
  Blade<D1> gv = dynamical_vec(x.kd, full_gamma(x, dgam, p));
  return schouten(gv, lambda_vec(x.kd, x.Gd));
}

Blade<double> gamma_lambda_printed(const Metric& g, const PhaseConnection& Gc, const PhaseConnection& dgam,
                                   const PhasePoint& p, double c) {
  Ctx x = context(g, Gc, p, c);
  Vec3<D1> gmd = full_gamma(x, dgam, p);
  Vec3<double> gm;
  for (int i = 0; i < 3; ++i) gm[i] = gmd[i].v;
  const auto& k = x.k;
  const auto& kd = x.kd;
  double a2 = x.a2;
  auto udh = [&] {
    double s = 0;
    for (int r = 0; r < 4; ++r) s += k.u[r] * dhat00(x, r);
    return s;
  }();
  Blade<double> r(kPhaseDim, 2, true);
  for (int l = 0; l < 4; ++l)
    for (int j = 0; j < 3; ++j) {
      double gp = 0;
      for (int q = 0; q < 3; ++q) gp += gm[q] * k.gb0[q + 1];
      double c1 = -a2 * (0.5 * k.gbui[j][l] * udh + k.gbui[j][l] * gp + k.u[l] * gm[j]) - 2 * k.gi[0][l] * gm[j];
      for (int rr = 0; rr < 4; ++rr) c1 += k.u[rr] * kd.gbui[j][l].d[rr];
      for (int q = 0; q < 3; ++q) c1 -= k.gbui[q][l] * gmd[j].d[4 + q];
      r.add({l, 4 + j}, c1);
      for (int i = 0; i < 3; ++i) r.add({4 + i, 4 + j}, c1 * x.G[l][i]);

      double s1 = 0, s2 = 0, s3 = 0;
      for (int rr = 0; rr < 4; ++rr) s1 += k.gbui[j][rr] * dhat00(x, rr);
      for (int n = 0; n < 4; ++n)
        for (int q = 0; q < 3; ++q) s2 += k.gbui[j][n] * x.G[n][q] * k.gb0[q + 1];
      for (int n = 0; n < 4; ++n) s3 += k.u[n] * x.G[n][j];
      double c2 = -a2 * (0.5 * s1 * k.u[l] + k.u[l] * s2 - k.u[l] * s3);
      for (int n = 0; n < 4; ++n) c2 += k.gi[l][n] * x.G[n][j];
      if (l >= 1)
        for (int n = 0; n < 4; ++n) c2 -= k.gbui[j][n] * x.G[n][l - 1];
      r.add({l, 4 + j}, c2);
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s1 = 0, s2 = 0;
      for (int rr = 0; rr < 4; ++rr) s1 += k.gbui[j][rr] * dhat00(x, rr);
      for (int l = 0; l < 4; ++l)
        for (int q = 0; q < 3; ++q) s2 += k.gbui[j][l] * k.gb0[q + 1] * x.G[l][q];
      double c3 = -a2 * (0.5 * gm[i] * s1 + gm[i] * s2);
      for (int l = 0; l < 4; ++l) {
        for (int rr = 0; rr < 4; ++rr) c3 += k.gbui[j][l] * k.u[rr] * x.Gd[l][i].d[rr];
        for (int q = 0; q < 3; ++q) c3 += k.gbui[j][l] * gm[q] * x.Gd[l][i].d[4 + q];
        c3 -= k.gbui[j][l] * gmd[i].d[l];
        for (int q = 0; q < 3; ++q) c3 += k.gbui[i][l] * x.G[l][q] * gmd[j].d[4 + q];
      }
      r.add({4 + i, 4 + j}, c3);
    }
  return r;
}

Blade<double> gamma_lambda_adapted_printed(const Metric& g, const PhaseConnection& Gc, const PhasePoint& p,
                                           double c) {
  Ctx x = context(g, Gc, p, c);
  const auto& k = x.k;
  const auto& kd = x.kd;
  double a2 = x.a2;
  Blade<double> f(kPhaseDim, 2, true);
  for (int j = 0; j < 3; ++j) {
    double s = 0;
    for (int rr = 0; rr < 4; ++rr) {
      s += 0.5 * k.gbui[j][rr] * dhat00(x, rr) - k.u[rr] * x.G[rr][j];
      for (int l = 0; l < 4; ++l) s += k.gb0[l] * k.u[rr] * kd.gbui[j][l].d[rr];
    }
    f.add({0, 4 + j}, -a2 * s);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int rr = 0; rr < 4; ++rr) {
        double q = 0.5 * dhat00(x, rr);
        for (int pp = 0; pp < 3; ++pp) q += k.gb0[pp + 1] * x.G[rr][pp];
        s += a2 * k.ghatu[i][j] * k.u[rr] * q;
        s += k.gbui[j][rr] * x.G[rr][i];
        double w = kd.ghatu[j][i].d[rr] - k.gbui[i][0] * x.G[rr][j];
        for (int pp = 0; pp < 3; ++pp) w -= k.ghatu[pp][i] * x.Gd[rr][j].d[4 + pp];
        s -= k.u[rr] * w;
      }
      f.add({1 + i, 4 + j}, -s);
      double t = 0;
      for (int l = 0; l < 4; ++l)
        for (int rr = 0; rr < 4; ++rr) t += k.gbui[j][l] * k.u[rr] * x.A[l][rr][i];
      f.add({4 + i, 4 + j}, t);
    }
  return from_frame(f, x);
}

Blade<double> lambda_lambda_printed(const Metric& g, const PhaseConnection& Gc, const PhasePoint& p, double c) {
  Ctx x = context(g, Gc, p, c);
  const auto& k = x.k;
  const auto& kd = x.kd;
  const double a2 = x.a2, w = 2.0 / (c * c);
  Blade<double> r(kPhaseDim, 3, true);
  auto h = [&](int rr) {
    double q = 0.5 * dhat00(x, rr);
    for (int pp = 0; pp < 3; ++pp) q += k.gb0[pp + 1] * x.G[rr][pp];
    return q;
  };
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int j = 0; j < 3; ++j) r.add({l, m, 4 + j}, w * k.u[l] * k.gbui[j][m]);
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int rr = 0; rr < 4; ++rr) {
          s += k.gbui[i][rr] * k.gbui[j][l] * h(rr);
          s += (k.u[l] * k.gbui[j][rr] - k.u[rr] * k.gbui[j][l]) * x.G[rr][i];
          double q = kd.gbui[i][l].d[rr] - k.gi[0][l] * x.G[rr][i];
          for (int pp = 0; pp < 3; ++pp) q -= k.gbui[pp][l] * x.Gd[rr][i].d[4 + pp];
          s += k.gbui[j][rr] * q / a2;
        }
        r.add({l, 4 + i, 4 + j}, w * s);
      }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int kk = 0; kk < 3; ++kk) {
        double s = 0;
        for (int sg = 0; sg < 4; ++sg)
          for (int rr = 0; rr < 4; ++rr) {
            s += k.gbui[i][sg] * k.gbui[j][rr] * x.G[rr][kk] * h(sg);
            s += k.u[sg] * k.gbui[kk][rr] * x.G[sg][i] * x.G[rr][j];
            double q = kd.gbui[kk][rr].d[sg] - k.gi[0][rr] * x.G[sg][kk];
            for (int pp = 0; pp < 3; ++pp) q -= k.gbui[pp][rr] * x.Gd[sg][kk].d[4 + pp];
            s += (-0.5 * k.gbui[i][sg] * k.gbui[kk][rr] * x.A[sg][rr][j] + k.gbui[i][sg] * x.G[rr][j] * q) / a2;
          }
        r.add({4 + i, 4 + j, 4 + kk}, w * s);
      }
  return r;
}

Blade<double> lambda_lambda_adapted_printed(const Metric& g, const PhaseConnection& Gc, const PhasePoint& p,
                                            double c) {
  Ctx x = context(g, Gc, p, c);
  const auto& k = x.k;
  const auto& kd = x.kd;
  const double a2 = x.a2, w = 2.0 / (c * c);
  Blade<double> f(kPhaseDim, 3, true);
  for (int j = 0; j < 3; ++j)
    for (int kk = 0; kk < 3; ++kk) {
      f.add({0, 1 + j, 4 + kk}, w * k.ghatu[kk][j]);
      double s = 0;
      for (int rr = 0; rr < 4; ++rr) {
        double q = x.G[rr][j];
        for (int l = 0; l < 4; ++l) q -= k.gb0[l] * kd.gbui[j][l].d[rr];
        s += k.gbui[kk][rr] * q;
      }
      f.add({0, 4 + j, 4 + kk}, w * s);
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int kk = 0; kk < 3; ++kk) {
        double s = 0;
        for (int rr = 0; rr < 4; ++rr) {
          double h = 0.5 * dhat00(x, rr);
          for (int pp = 0; pp < 3; ++pp) h += k.gb0[pp + 1] * x.G[rr][pp];
          s += k.ghatu[kk][i] * k.gbui[j][rr] * h;
          double q = kd.ghatu[j][i].d[rr] - k.gbui[i][0] * x.G[rr][j];
          for (int pp = 0; pp < 3; ++pp) q -= k.ghatu[pp][i] * x.Gd[rr][j].d[4 + pp];
          s += k.gbui[kk][rr] * q / a2;
        }
        f.add({1 + i, 4 + j, 4 + kk}, w * s);
        double t = 0;
        for (int rr = 0; rr < 4; ++rr)
          for (int sg = 0; sg < 4; ++sg) t += k.gbui[i][rr] * k.gbui[j][sg] * x.A[rr][sg][kk];
        f.add({4 + i, 4 + j, 4 + kk}, 0.5 * w * t / a2);
      }
  return from_frame(f, x);
}

}  // namespace phasegeo
