#include "phasegeo/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "phasegeo/spacetime.hpp"

namespace phasegeo {

namespace {

Kinematics<double> kin(const Metric& g, const PhasePoint& p, double c) { return kinematics(g, p, c); }

struct Acc {
  std::vector<NamedResidual> out;
  std::string cur;
  double m = 0;
  void begin(std::string name) {
    cur = std::move(name);
    m = 0;
  }
  void diff(double a, double b) { m = std::max(m, std::abs(a - b)); }
  void end() { out.push_back({cur, m}); }
};

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

}  // namespace

double alpha0(const Metric& g, const PhasePoint& p) { return kin(g, p, 1.0).alpha; }

Vec4<double> contact_map(const Metric& g, const PhasePoint& p, double c) { return kin(g, p, c).dd; }

Vec4<double> time_form(const Metric& g, const PhasePoint& p, double c) { return kin(g, p, c).tau; }

Mat4<double> theta(const Metric& g, const PhasePoint& p, double c) {
  auto k = kin(g, p, c);
  Mat4<double> t;
  for (int m = 0; m < 4; ++m)
    for (int l = 0; l < 4; ++l) t[m][l] = delta(m, l) - k.dd[m] * k.tau[l];
  return t;
}

Projections projections(const Metric& g, const PhasePoint& p, double c) {
  auto k = kin(g, p, c);
  Projections pr;
  for (int m = 0; m < 4; ++m)
    for (int l = 0; l < 4; ++l) {
      pr.par_up[m][l] = k.dd[m] * k.tau[l];
      pr.perp_up[m][l] = delta(m, l) - pr.par_up[m][l];
      pr.par_low[l][m] = pr.par_up[m][l];
      pr.perp_low[l][m] = pr.perp_up[m][l];
    }
  return pr;
}

Vec3<double> nu_tau(const Metric& g, const PhasePoint& p, double c, const Vec4<double>& X) {
  auto k = kin(g, p, c);
  Vec3<double> y;
  for (int i = 0; i < 3; ++i) y[i] = (X[i + 1] - p.v[i] * X[0]) / (c * k.alpha);
  return y;
}

Vec4<double> nu_tau_inv(const Metric& g, const PhasePoint& p, double c, const Vec3<double>& Y) {
  auto k = kin(g, p, c);
  Vec4<double> x{};
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i) x[l] += c * k.alpha * Y[i] * k.b[i + 1][l];
  return x;
}

std::vector<NamedResidual> useful_identities(const Metric& g, const PhasePoint& p, double c) {
  Kinematics<D1> kd = kinematics(g, seed_phase<D1>(p), c);
  Kinematics<double> k = kin(g, p, c);
  double a2 = k.alpha * k.alpha;
  Acc A;

  A.begin("gbar0_d=ghat00_beta0");
  for (int l = 0; l < 4; ++l) A.diff(k.gb0[l], k.ghat00 * k.beta[0][l]);
  A.end();

  A.begin("gbari_d=ghatij_betaj");
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 4; ++l) {
      double s = 0;
      for (int j = 0; j < 3; ++j) s += k.ghat[i][j] * k.beta[j + 1][l];
      A.diff(k.gbi[i][l], s);
    }
  A.end();

  A.begin("gbarup0_d=ghatup00_b0");
  for (int l = 0; l < 4; ++l) A.diff(k.gbu0[l], k.ghatu00 * k.b[0][l]);
  A.end();

  A.begin("gbarupi_d=ghatupij_bj");
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 4; ++l) {
      double s = 0;
      for (int j = 0; j < 3; ++j) s += k.ghatu[i][j] * k.b[j + 1][l];
      A.diff(k.gbui[i][l], s);
    }
  A.end();

  A.begin("gbari_gbarupi=delta+a2_gbar0_dbar0");
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      double s = 0;
      for (int i = 0; i < 3; ++i) s += k.gbi[i][l] * k.gbui[i][m];
      A.diff(s, delta(l, m) + a2 * k.gb0[l] * k.u[m]);
    }
  A.end();

  A.begin("gbar0i_gbarupi=dbar0-ghat00_gup0");
  for (int l = 0; l < 4; ++l) {
    double s = 0;
    for (int i = 0; i < 3; ++i) s += k.gb0[i + 1] * k.gbui[i][l];
    A.diff(s, k.u[l] - k.ghat00 * k.gi[0][l]);
  }
  A.end();

  A.begin("gbari_gup0=a2_gbar0i");
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (int m = 0; m < 4; ++m) s += k.gbi[i][m] * k.gi[0][m];
    A.diff(s, a2 * k.gb0[i + 1]);
  }
  A.end();

  A.begin("gbar0_gbarupi=0");
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (int n = 0; n < 4; ++n) s += k.gb0[n] * k.gbui[i][n];
    A.diff(s, 0);
  }
  A.end();

  A.begin("gbari_gbarup0=0");
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (int n = 0; n < 4; ++n) s += k.gbi[i][n] * k.gbu0[n];
    A.diff(s, 0);
  }
  A.end();

  A.begin("gbari_dbar0=0");
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (int n = 0; n < 4; ++n) s += k.gbi[i][n] * k.u[n];
    A.diff(s, 0);
  }
  A.end();

  A.begin("gbari_dbari=g+a2_gbar0_gbar0");
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      double s = 0;
      for (int i = 0; i < 3; ++i) s += k.gbi[i][m] * k.dbi[i][l];
      A.diff(s, k.g[l][m] + a2 * k.gb0[l] * k.gb0[m]);
    }
  A.end();

  A.begin("gbarupi_dbarj=ghatupij");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int l = 0; l < 4; ++l) s += k.gbui[i][l] * k.dbi[j][l];
      A.diff(s, k.ghatu[i][j]);
    }
  A.end();

  A.begin("ghatup4_ghat4=delta");
  {
    Mat4<double> lo, up;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double s = 0, t = 0;
        for (int l = 0; l < 4; ++l)
          for (int m = 0; m < 4; ++m) {
            s += k.g[l][m] * k.b[a][l] * k.b[b][m];
            t += k.gi[l][m] * k.beta[a][l] * k.beta[b][m];
          }
        lo[a][b] = s;
        up[a][b] = t;
      }
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) {
        double s = 0, t = 0;
        for (int n = 0; n < 4; ++n) {
          s += up[l][n] * lo[m][n];
          t += up[n][l] * lo[n][m];
        }
        A.diff(s, delta(l, m));
        A.diff(t, delta(l, m));
      }
  }
  A.end();

  A.begin("ghatupih_ghatjh=delta");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0, t = 0;
      for (int h = 0; h < 3; ++h) {
        s += k.ghatu[i][h] * k.ghat[j][h];
        t += k.ghatu[h][i] * k.ghat[h][j];
      }
      A.diff(s, delta(i, j));
      A.diff(t, delta(i, j));
    }
  A.end();

  A.begin("ghatupij_gjs=dbaris-gbarupi0_gbar0s");
  for (int i = 0; i < 3; ++i)
    for (int s = 0; s < 4; ++s) {
      double v = 0;
      for (int j = 0; j < 3; ++j) v += k.ghatu[i][j] * k.g[j + 1][s];
      A.diff(v, k.dbi[i][s] - k.gbui[i][0] * k.gb0[s]);
    }
  A.end();

  A.begin("ghatupij_deltaj=gbarupi-gbarupi0_dbar0");
  for (int i = 0; i < 3; ++i)
    for (int r = 0; r < 4; ++r) {
      double v = 0;
      for (int j = 0; j < 3; ++j) v += k.ghatu[i][j] * delta(r, j + 1);
      A.diff(v, k.gbui[i][r] - k.gbui[i][0] * k.u[r]);
    }
  A.end();

  A.begin("gbar0_dbar0=ghat00");
  {
    double s = 0;
    for (int n = 0; n < 4; ++n) s += k.gb0[n] * k.u[n];
    A.diff(s, k.ghat00);
  }
  A.end();

  A.begin("ghatupij_gbar0j=-ghat00_gbarupi0");
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (int j = 0; j < 3; ++j) s += k.ghatu[i][j] * k.gb0[j + 1];
    A.diff(s, -k.ghat00 * k.gbui[i][0]);
  }
  A.end();

  A.begin("d0i_alpha=a3_gbar0i");
  for (int i = 0; i < 3; ++i) A.diff(kd.alpha.d[4 + i], a2 * k.alpha * k.gb0[i + 1]);
  A.end();

  A.begin("dl_alpha=half_a3_dl_ghat00");
  for (int l = 0; l < 4; ++l) A.diff(kd.alpha.d[l], 0.5 * a2 * k.alpha * kd.ghat00.d[l]);
  A.end();

  return A.out;
}

std::vector<NamedResidual> frame_identities(const Metric& g, const PhasePoint& p, double c) {
  auto k = kin(g, p, c);
  double a2 = k.alpha * k.alpha, ca = c * k.alpha;
  Acc A;

  A.begin("beta_b_duality");
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0;
      for (int l = 0; l < 4; ++l) s += k.beta[a][l] * k.b[b][l];
      A.diff(s, delta(a, b));
    }
  A.end();

  A.begin("ghat0j=0");
  for (int j = 1; j < 4; ++j) {
    double s = 0;
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) s += k.g[l][m] * k.b[0][l] * k.b[j][m];
    A.diff(s, 0);
  }
  A.end();

  A.begin("ghat00=-1/a2");
  {
    double s = 0;
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) s += k.g[l][m] * k.u[l] * k.u[m];
    A.diff(s, -1.0 / a2);
  }
  A.end();

  A.begin("inverse_relation_vectors");
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      double s = ca * k.tau[l] * k.b[0][m];
      for (int i = 0; i < 3; ++i) s += k.dbi[i][l] * k.b[i + 1][m];
      A.diff(s, delta(l, m));
    }
  A.end();

  A.begin("inverse_relation_covectors");
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      double s = k.beta[0][n];
      for (int j = 0; j < 3; ++j) s -= ca * k.tau[j + 1] * k.beta[j + 1][n];
      s *= k.u[m];
      for (int j = 0; j < 3; ++j) s += delta(m, j + 1) * k.beta[j + 1][n];
      A.diff(s, delta(m, n));
    }
  A.end();

  A.begin("g(d,d)=-c2");
  {
    double s = 0;
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) s += k.g[l][m] * k.dd[l] * k.dd[m];
    A.diff(s / (c * c), -1.0);
  }
  A.end();

  A.begin("tau(d)=1");
  {
    double s = 0;
    for (int l = 0; l < 4; ++l) s += k.tau[l] * k.dd[l];
    A.diff(s, 1.0);
  }
  A.end();

  A.begin("gbar(tau,tau)=-1/c2");
  {
    double s = 0;
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) s += k.gi[l][m] * k.tau[l] * k.tau[m];
    A.diff(s * c * c, -1.0);
  }
  A.end();

  Mat4<double> th = theta(g, p, c);
  A.begin("theta_idempotent");
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0;
      for (int m = 0; m < 4; ++m) s += th[a][m] * th[m][b];
      A.diff(s, th[a][b]);
    }
  A.end();

  A.begin("theta(d)=0");
  for (int a = 0; a < 4; ++a) {
    double s = 0;
    for (int l = 0; l < 4; ++l) s += th[a][l] * k.dd[l];
    A.diff(s / c, 0);
  }
  A.end();

  Projections pr = projections(g, p, c);
  A.begin("projector_printed");
  for (int m = 0; m < 4; ++m)
    for (int l = 0; l < 4; ++l) {
      A.diff(pr.par_up[m][l], -a2 * k.gb0[l] * k.u[m]);
      double s = 0;
      for (int i = 0; i < 3; ++i) s += k.gbui[i][m] * k.gbi[i][l];
      A.diff(pr.perp_up[m][l], s);
    }
  A.end();

  A.begin("projector_orthogonality");
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0;
      for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m) s += k.g[l][m] * pr.par_up[l][a] * pr.perp_up[m][b];
      A.diff(s, 0);
    }
  A.end();

  A.begin("g_par=-c2_tau_tau");
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0, t = 0;
      for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m) {
          s += k.g[l][m] * pr.par_up[l][a] * pr.par_up[m][b];
          t += k.g[l][m] * pr.perp_up[l][a] * pr.perp_up[m][b];
        }
      A.diff(s, -c * c * k.tau[a] * k.tau[b]);
      A.diff(t, k.g[a][b] + c * c * k.tau[a] * k.tau[b]);
      A.diff(t, k.g[a][b] + a2 * k.gb0[a] * k.gb0[b]);
    }
  A.end();

  A.begin("gbar_par=-dd/c2");
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0;
      for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m) s += k.gi[l][m] * pr.par_low[l][a] * pr.par_low[m][b];
      A.diff(s, -k.dd[a] * k.dd[b] / (c * c));
      A.diff(s, -a2 * k.u[a] * k.u[b]);
    }
  A.end();

  A.begin("nu_tau_roundtrip");
  for (int e = 0; e < 4; ++e) {
    Vec4<double> X{};
    X[e] = 1.0;
    Vec4<double> Z = nu_tau_inv(g, p, c, nu_tau(g, p, c, X));
    for (int m = 0; m < 4; ++m) A.diff(Z[m], th[m][e]);
  }
  {
    Vec3<double> y = nu_tau(g, p, c, k.dd);
    for (double v : y) A.diff(v, 0);
  }
  A.end();

  return A.out;
}

std::vector<NamedResidual> nabla_hat_identities(const Metric& g, const LinearConnection& Kc, const PhasePoint& p,
                                                double c) {
  Kinematics<D1> kd = kinematics(g, seed_phase<D1>(p), c);
  Kinematics<double> k = kin(g, p, c);
  Rank3<double> K = Kc.K(p.x);
  Rank3<double> N = nabla_g(Kc, g, p.x);
  double a2 = k.alpha * k.alpha;
  // NI[l][n][m] = nabla_l gbar^{nm}
  Rank3<double> NI;
  for (int l = 0; l < 4; ++l)
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m) {
        double v = kd.gi[n][m].d[l];
        for (int r = 0; r < 4; ++r) v -= k.gi[r][m] * K[l][n][r] + k.gi[n][r] * K[l][m][r];
        NI[l][n][m] = v;
      }
  auto contract_lo = [&](int l, const Vec4<double>& a, const Vec4<double>& b) {
    double s = 0;
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m) s += a[n] * b[m] * N[l][n][m];
    return s;
  };
  auto contract_up = [&](int l, const Vec4<double>& a, const Vec4<double>& b) {
    double s = 0;
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m) s += a[n] * b[m] * NI[l][n][m];
    return s;
  };
  auto e = [](int m) {
    Vec4<double> v{};
    v[m] = 1.0;
    return v;
  };

  // contraction definitions
  double ng0[4][4], ngi[4][3][4], nu0[4][4], nui[4][3][4];
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      ng0[l][m] = contract_lo(l, k.u, e(m));
      nu0[l][m] = contract_up(l, k.beta[0], e(m));
      for (int i = 0; i < 3; ++i) {
        ngi[l][i][m] = contract_lo(l, k.b[i + 1], e(m));
        nui[l][i][m] = contract_up(l, k.beta[i + 1], e(m));
      }
    }

  Acc A;
  A.begin("nabla_gbar0");
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      double v = kd.gb0[m].d[l];
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) v += k.g[r][m] * K[l][r][s] * k.u[s];
      for (int r = 0; r < 4; ++r) v += k.gb0[r] * K[l][r][m];
      A.diff(ng0[l][m], v);
    }
  A.end();

  A.begin("nabla_gbari");
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i)
      for (int m = 0; m < 4; ++m) A.diff(ngi[l][i][m], N[l][i + 1][m] + a2 * k.gb0[i + 1] * ng0[l][m]);
  A.end();

  A.begin("nabla_gbarup0");
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      double v = 0;
      for (int n = 0; n < 4; ++n) {
        double w = kd.gi[n][m].d[l];
        for (int r = 0; r < 4; ++r) w -= k.gi[r][m] * K[l][n][r] + k.gi[n][r] * K[l][m][r];
        v += -a2 * k.gb0[n] * w;
      }
      A.diff(nu0[l][m], v);
    }
  A.end();

  A.begin("nabla_gbarupi");
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i)
      for (int m = 0; m < 4; ++m) {
        double v = kd.gbui[i][m].d[l];
        for (int n = 0; n < 4; ++n)
          for (int r = 0; r < 4; ++r) v -= k.dbi[i][n] * k.gi[r][m] * K[l][n][r];
        for (int r = 0; r < 4; ++r) v -= k.gbui[i][r] * K[l][m][r];
        A.diff(nui[l][i][m], v);
      }
  A.end();

  A.begin("nabla_pairings");
  for (int l = 0; l < 4; ++l) {
    double s1 = 0, t1 = 0;
    for (int m = 0; m < 4; ++m) {
      s1 += k.gb0[m] * nu0[l][m];
      t1 += k.gbu0[m] * ng0[l][m];
    }
    A.diff(s1, -t1);
    for (int i = 0; i < 3; ++i) {
      double s2 = 0, t2 = 0, s3 = 0, t3 = 0;
      for (int m = 0; m < 4; ++m) {
        s2 += k.gb0[m] * nui[l][i][m];
        t2 += k.gbui[i][m] * ng0[l][m];
        s3 += k.gbi[i][m] * nu0[l][m];
        t3 += k.gbu0[m] * ngi[l][i][m];
      }
      A.diff(s2, -t2);
      A.diff(s3, -t3);
      for (int j = 0; j < 3; ++j) {
        double s4 = 0, t4 = 0;
        for (int m = 0; m < 4; ++m) {
          s4 += k.gbi[i][m] * nui[l][j][m];
          t4 += k.gbui[j][m] * ngi[l][i][m];
        }
        A.diff(s4, -t4);
      }
    }
  }
  A.end();

  double nh00[4];
  A.begin("nabla_ghat00");
  for (int l = 0; l < 4; ++l) {
    nh00[l] = contract_lo(l, k.u, k.u);
    double v = kd.ghat00.d[l];
    for (int r = 0; r < 4; ++r)
      for (int s = 0; s < 4; ++s) v += 2.0 * k.gb0[r] * K[l][r][s] * k.u[s];
    A.diff(nh00[l], v);
  }
  A.end();

  A.begin("nabla_ghati0");
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i)
      A.diff(contract_lo(l, k.b[i + 1], k.u), ng0[l][i + 1] + a2 * k.gb0[i + 1] * nh00[l]);
  A.end();

  A.begin("nabla_ghatij");
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = N[l][i + 1][j + 1] + a2 * (k.gb0[i + 1] * ng0[l][j + 1] + k.gb0[j + 1] * ng0[l][i + 1]) +
                   a2 * a2 * k.gb0[i + 1] * k.gb0[j + 1] * nh00[l];
        A.diff(contract_lo(l, k.b[i + 1], k.b[j + 1]), v);
      }
  A.end();

  A.begin("nabla_ghatup00");
  for (int l = 0; l < 4; ++l) {
    double lhs = contract_up(l, k.beta[0], k.beta[0]);
    double v1 = 0, v2 = 0;
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m) {
        v1 += k.gb0[n] * k.gb0[m] * NI[l][n][m];
        v2 += k.gb0[n] * k.gb0[m] * kd.gi[n][m].d[l];
      }
    for (int s = 0; s < 4; ++s)
      for (int r = 0; r < 4; ++r) v2 -= 2.0 * k.gb0[s] * k.u[r] * K[l][s][r];
    A.diff(lhs, a2 * a2 * v1);
    A.diff(lhs, a2 * a2 * v2);
  }
  A.end();

  A.begin("nabla_ghatupi0");
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i) {
      double lhs = contract_up(l, k.beta[i + 1], k.beta[0]);
      double v1 = 0, v2 = 0;
      for (int m = 0; m < 4; ++m) {
        v1 += k.gb0[m] * nui[l][i][m];
        v2 += k.gb0[m] * kd.gbui[i][m].d[l];
      }
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) v2 -= (k.u[r] * k.dbi[i][s] + k.gbui[i][r] * k.gb0[s]) * K[l][s][r];
      A.diff(lhs, -a2 * v1);
      A.diff(lhs, -a2 * v2);
    }
  A.end();

  A.begin("nabla_ghatupij");
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = kd.ghatu[i][j].d[l];
        for (int r = 0; r < 4; ++r)
          for (int s = 0; s < 4; ++s)
            v -= (k.gbui[j][r] * k.dbi[i][s] + k.gbui[i][r] * k.dbi[j][s]) * K[l][s][r];
        A.diff(contract_up(l, k.beta[i + 1], k.beta[j + 1]), v);
      }
  A.end();

  return A.out;
}

}  // namespace phasegeo
