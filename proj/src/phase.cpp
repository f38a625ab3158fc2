#include "phasegeo/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace phasegeo {

namespace {

struct ChiF : ExactPartials {
  LinearPtr K;
  template <class S>
  Mat43<S> operator()(const PhasePointT<S>& p) const {
    return chi_coeffs(K->K(p.x), p);
  }
};

struct ZeroF : ExactPartials {
  template <class S>
  Mat43<S> operator()(const PhasePointT<S>&) const {
    return zero43<S>();
  }
};

struct SumF {
  PhasePtr a, b;
  double w;
  bool finite_difference() const { return a->finite_difference() || b->finite_difference(); }
  template <class S>
  Mat43<S> operator()(const PhasePointT<S>& p) const {
    Mat43<S> r = a->Gamma(p);
    Mat43<S> s = b->Gamma(p);
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 3; ++i) r[l][i] += w * s[l][i];
    return r;
  }
};

struct RandomF : ExactPartials {
  std::array<std::array<std::array<double, 7>, 3>, 4> k;
  std::array<std::array<double, 3>, 4> ph, amp;
  template <class S>
  Mat43<S> operator()(const PhasePointT<S>& p) const {
    Mat43<S> r;
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 3; ++i) {
        S arg(ph[l][i]);
        for (int a = 0; a < 4; ++a) arg += k[l][i][a] * p.x[a];
        for (int a = 0; a < 3; ++a) arg += k[l][i][4 + a] * p.v[a];
        r[l][i] = amp[l][i] * sin(arg);
      }
    return r;
  }
};

struct FdF {
  std::function<Mat43<double>(const PhasePoint&)> f;
  bool finite_difference() const { return true; }

  static std::array<double, 7> flat(const PhasePoint& p) {
    return {p.x[0], p.x[1], p.x[2], p.x[3], p.v[0], p.v[1], p.v[2]};
  }
  static PhasePoint unflat(const std::array<double, 7>& z) {
    PhasePoint p;
    for (int a = 0; a < 4; ++a) p.x[a] = z[a];
    for (int i = 0; i < 3; ++i) p.v[i] = z[4 + i];
    return p;
  }
  Mat43<double> at(std::array<double, 7> z) const { return f(unflat(z)); }

  template <class S>
  Mat43<S> operator()(const PhasePointT<S>& p) const {
    PhasePoint p0 = values(p);
    Mat43<double> f0 = f(p0);
    if constexpr (std::is_same_v<S, double>) {
      return f0;
    } else {
      std::array<double, 7> z0 = flat(p0);
      const double e3 = std::cbrt(std::numeric_limits<double>::epsilon());
      const double e4 = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
      std::array<Mat43<double>, 7> J;
      std::array<std::array<Mat43<double>, 7>, 7> H;
      for (int a = 0; a < 7; ++a) {
        double h = e3 * std::max(1.0, std::abs(z0[a]));
        auto zp = z0, zm = z0;
        zp[a] += h;
        zm[a] -= h;
        Mat43<double> fp = at(zp), fm = at(zm);
        for (int l = 0; l < 4; ++l)
          for (int i = 0; i < 3; ++i) J[a][l][i] = (fp[l][i] - fm[l][i]) / (2 * h);
      }
      for (int a = 0; a < 7; ++a)
        for (int b = a; b < 7; ++b) {
          double ha = e4 * std::max(1.0, std::abs(z0[a])), hb = e4 * std::max(1.0, std::abs(z0[b]));
          auto zpp = z0, zpm = z0, zmp = z0, zmm = z0;
          zpp[a] += ha; zpp[b] += hb;
          zpm[a] += ha; zpm[b] -= hb;
          zmp[a] -= ha; zmp[b] += hb;
          zmm[a] -= ha; zmm[b] -= hb;
          Mat43<double> a1 = at(zpp), a2 = at(zpm), a3 = at(zmp), a4 = at(zmm);
          for (int l = 0; l < 4; ++l)
            for (int i = 0; i < 3; ++i) {
              double v = (a1[l][i] - a2[l][i] - a3[l][i] + a4[l][i]) / (4 * ha * hb);
              H[a][b][l][i] = v;
              H[b][a][l][i] = v;
            }
        }
      std::array<S, 7> dz;
      for (int a = 0; a < 4; ++a) dz[a] = p.x[a] - z0[a];
      for (int i = 0; i < 3; ++i) dz[4 + i] = p.v[i] - z0[4 + i];
      Mat43<S> r;
      for (int l = 0; l < 4; ++l)
        for (int i = 0; i < 3; ++i) {
          S s(f0[l][i]);
          for (int a = 0; a < 7; ++a) {
            s += J[a][l][i] * dz[a];
            for (int b = 0; b < 7; ++b) s += 0.5 * H[a][b][l][i] * dz[a] * dz[b];
          }
          r[l][i] = s;
        }
      return r;
    }
  }
};

double det_small(std::vector<double> a, int n) {
  double d = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (a[piv * n + c] == 0.0) return 0.0;
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(a[piv * n + k], a[c * n + k]);
      d = -d;
    }
    d *= a[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      double f = a[r * n + c] / a[c * n + c];
      for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return d;
}

std::vector<int> bits(unsigned m) {
  std::vector<int> r;
  for (unsigned t = m; t; t &= t - 1) r.push_back(std::countr_zero(t));
  return r;
}

}  // namespace

PhasePtr chi(LinearPtr K) {
  std::string n = "chi(" + K->name() + ")";
  return make_phase(ChiF{{}, std::move(K)}, n);
}

PhasePtr metric_phase_connection(MetricPtr g) { return chi(levi_civita(std::move(g))); }

PhasePtr zero_phase_connection() { return make_phase(ZeroF{}, "zero"); }

PhasePtr sum(PhasePtr a, PhasePtr b, double w) {
  std::string n = a->name() + "+" + b->name();
  return std::make_shared<PhaseConnectionT<SumF>>(SumF{std::move(a), std::move(b), w}, n);
}

PhasePtr random_sigma(uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  RandomF f;
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i) {
      for (int a = 0; a < 7; ++a) f.k[l][i][a] = U(rng);
      f.ph[l][i] = 3.0 * U(rng);
      f.amp[l][i] = amplitude * (0.5 + 0.5 * std::abs(U(rng)));
    }
  return make_phase(f, "random_sigma");
}

PhasePtr finite_difference_connection(std::function<Mat43<double>(const PhasePoint&)> f, std::string name) {
  return std::make_shared<PhaseConnectionT<FdF>>(FdF{std::move(f)}, std::move(name), true);
}

Rank43 curvature_coeff(const Mat43<D1>& G) { return curvature_coeff_t(G); }

Blade<double> push_blade(const Blade<double>& in, const Mat7& M) {
  Blade<double> out(in.n, in.p, in.up);
  if (in.p <= 0) {
    out.c = in.c;
    return out;
  }
  const int p = in.p;
  for (size_t o = 0; o < out.size(); ++o) {
    std::vector<int> I = bits(out.mask_at(o));
    double s = 0;
    for (size_t j = 0; j < in.size(); ++j) {
      if (in.c[j] == 0.0) continue;
      std::vector<int> J = bits(in.mask_at(j));
      std::vector<double> m(p * p);
      for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) m[r * p + c] = M[J[r]][I[c]];
      s += in.c[j] * det_small(m, p);
    }
    out.c[o] = s;
  }
  return out;
}

double full_component(const Blade<double>& f, const std::vector<int>& idx) {
  unsigned m = 0;
  int s = 1;
  for (int a : idx) {
    if (m & (1u << a)) return 0.0;
    if (parity_above(m, a) & 1) s = -s;
    m |= 1u << a;
  }
  return s * f.get(m);
}

Blade<double> derivation(const Blade<double>& F, const Mat7& M) {
  Blade<double> r(F.n, F.p, F.up);
  for (size_t o = 0; o < r.size(); ++o) {
    std::vector<int> I = bits(r.mask_at(o));
    double s = 0;
    for (size_t k = 0; k < I.size(); ++k) {
      std::vector<int> J = I;
      for (int b = 0; b < F.n; ++b) {
        if (M[I[k]][b] == 0.0) continue;
        J[k] = b;
        s += M[I[k]][b] * full_component(F, J);
      }
    }
    r.c[o] = s;
  }
  return r;
}

Mat7 gamma_projector(const Mat43<double>& G) {
  Mat7 P{};
  for (int l = 0; l < 4; ++l) {
    P[l][l] = 1.0;
    for (int i = 0; i < 3; ++i) P[l][4 + i] = G[l][i];
  }
  return P;
}

std::vector<double> musical_sharp(const Blade<double>& L, const std::vector<double>& a) {
  std::vector<double> r(L.n, 0.0);
  for (int A = 0; A < L.n; ++A)
    for (int B = 0; B < L.n; ++B) r[B] += a[A] * L({A, B});
  return r;
}

std::vector<double> musical_flat(const Blade<double>& O, const std::vector<double>& X) {
  std::vector<double> r(O.n, 0.0);
  for (int A = 0; A < O.n; ++A)
    for (int B = 0; B < O.n; ++B) r[B] += X[A] * O({A, B});
  return r;
}

Blade<double> sharp2(const Blade<double>& L, const Blade<double>& F) {
  Blade<double> r(L.n, 2, true);
  for (size_t o = 0; o < r.size(); ++o) {
    std::vector<int> I = bits(r.mask_at(o));
    double s = 0;
    for (int A = 0; A < L.n; ++A)
      for (int B = 0; B < L.n; ++B) s += L({A, I[0]}) * L({B, I[1]}) * F({A, B});
    r.c[o] = s;
  }
  return r;
}

Blade<double> flat2(const Blade<double>& O, const Blade<double>& P) {
  Blade<double> r(O.n, 2, false);
  for (size_t o = 0; o < r.size(); ++o) {
    std::vector<int> I = bits(r.mask_at(o));
    double s = 0;
    for (int A = 0; A < O.n; ++A)
      for (int B = 0; B < O.n; ++B) s += O({A, I[0]}) * O({B, I[1]}) * P({A, B});
    r.c[o] = s;
  }
  return r;
}

PhaseFrames adapted_phase_frames(const Kinematics<double>& k, const Mat43<double>& G) {
  PhaseFrames f{};
  Vec3<double> gam = gamma_coeffs(k, G);
  double a2 = k.alpha * k.alpha;
  for (int l = 0; l < 4; ++l) f.E[0][l] = k.u[l];
  for (int i = 0; i < 3; ++i) f.E[0][4 + i] = gam[i];
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 4; ++l) {
      double b = k.b[i + 1][l];
      f.E[1 + i][l] = b;
      for (int j = 0; j < 3; ++j) f.E[1 + i][4 + j] += b * G[l][j];
    }
    f.E[4 + i][4 + i] = 1.0;
  }
  for (int l = 0; l < 4; ++l) f.Eps[0][l] = -a2 * k.gb0[l];
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 4; ++l) {
      f.Eps[1 + i][l] = k.dbi[i][l];
      f.Eps[4 + i][l] = -G[l][i];
    }
    f.Eps[4 + i][4 + i] = 1.0;
  }
  return f;
}

Rank43 phase_curvature(const PhaseConnection& G, const PhasePoint& p) {
  Rank43 A = curvature_coeff(G.Gamma(seed_phase<D1>(p)));
  for (auto& a : A)
    for (auto& b : a)
      for (double& x : b) x *= 2.0;
  return A;
}

Blade<double> omega_at(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c) {
  return omega_form(kinematics(g, p, c), G.Gamma(p));
}

Blade<double> lambda_at(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c) {
  return lambda_vec(kinematics(g, p, c), G.Gamma(p));
}

std::vector<double> gamma_at(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c) {
  return gamma_vec(kinematics(g, p, c), G.Gamma(p)).c;
}

Blade<double> tau_at(const Metric& g, const PhasePoint& p, double c) { return tau_form(kinematics(g, p, c)); }

Blade<double> lie_gamma_tau(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c) {
  auto st = phase_state<D1>(g, G, p, c);
  Blade<double> dtau = exterior_derivative(tau_form(st.k));
  Mat43<double> Gv = G.Gamma(p);
  return derivation(dtau, gamma_projector(Gv)) - dtau;
}

namespace {
// (d_l tau_m + Gamma_l^j d^0_j tau_m) d^l ^ d^m, coefficients carrying one derivative level less.
template <class T, int N>
Blade<T> lie_gamma_tau_coeffs(const Kinematics<Dual<T, N>>& k, const Mat43<Dual<T, N>>& G) {
  Blade<T> r(kPhaseDim, 2);
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      T s = k.tau[m].d[l];
      for (int j = 0; j < 3; ++j) s += G[l][j].v * k.tau[m].d[4 + j];
      r.add({l, m}, s);
    }
  return r;
}
}  // namespace

Blade<double> lie_gamma_tau_printed(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c) {
  auto st = phase_state<D1>(g, G, p, c);
  return lie_gamma_tau_coeffs(st.k, st.G);
}

Blade<double> lie_R_tau(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c) {
  auto st = phase_state<D1>(g, G, p, c);
  Blade<double> dtau = exterior_derivative(tau_form(st.k));
  Rank43 F = phase_curvature(G, p);
  Blade<double> r(kPhaseDim, 3);
  for (size_t o = 0; o < r.size(); ++o) {
    std::vector<int> I = bits(r.mask_at(o));
    double s = 0;
    for (int cyc = 0; cyc < 3; ++cyc) {
      int a = I[cyc], b = I[(cyc + 1) % 3], e = I[(cyc + 2) % 3];
      if (a >= 4 || b >= 4) continue;
      for (int i = 0; i < 3; ++i) s += F[a][b][i] * dtau({4 + i, e});
    }
    r.c[o] = s;
  }
  return r;
}

Blade<double> lie_R_tau_printed(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c) {
  auto st = phase_state<D1>(g, G, p, c);
  Rank43 A = curvature_coeff(st.G);
  Kinematics<double> k = kinematics(g, p, c);
  Blade<double> r(kPhaseDim, 3);
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        double s = 0;
        for (int i = 0; i < 3; ++i) s += -(k.alpha / c) * k.gbi[i][l] * A[m][n][i];
        r.add({l, m, n}, s);
      }
  return r;
}

Blade<double> lie_nu_lie_gamma_tau(const Metric& g, const PhaseConnection& G, const Vec4<double>& X,
                                   const PhasePoint& p, double c) {
  auto st = phase_state<D2>(g, G, p, c);
  Blade<D1> L = lie_gamma_tau_coeffs(st.k, st.G);
  Blade<double> dL = exterior_derivative(L);
  Vec3<double> y = nu_tau(g, p, c, X);
  std::vector<double> Y(kPhaseDim, 0.0);
  for (int i = 0; i < 3; ++i) Y[4 + i] = y[i];
  return interior(Y, dL);
}

VolumeCoefficients volume_checks(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c) {
  Kinematics<double> k = kinematics(g, p, c);
  Mat43<double> Gv = G.Gamma(p);
  Blade<double> O = omega_form(k, Gv), L = lambda_vec(k, Gv);
  Blade<double> t = tau_form(k) * (-c * c);
  Blade<double> gm = gamma_vec(k, Gv) * (-1.0 / (c * c));
  Blade<double> cov = wedge(wedge(wedge(t, O), O), O);
  Blade<double> con = wedge(wedge(wedge(gm, L), L), L);
  const unsigned all = (1u << kPhaseDim) - 1;
  double ca = c * k.alpha;
  double dg = determinant(k.g);
  VolumeCoefficients v;
  v.covariant = cov.get(all);
  v.covariant_expected = 6.0 * std::pow(ca, 4) * dg;
  v.contravariant = con.get(all);
  v.contravariant_expected = -6.0 / std::pow(ca, 4) / dg;
  return v;
}

ContactPullbacks contact_pullbacks(const Metric& g, const LinearConnection& Kc, const PhasePoint& p, double c) {
  Kinematics<D1> kd = kinematics(g, seed_phase<D1>(p), c);
  Kinematics<double> k = kinematics(g, p, c);
  Rank3<double> K = Kc.K(p.x);
  double a = k.alpha, a2 = a * a, ca = c * a;
  ContactPullbacks r;
  r.full = Blade<double>(kPhaseDim, 2);
  r.parallel = Blade<double>(kPhaseDim, 2);
  r.perp = Blade<double>(kPhaseDim, 2);
  r.direct = Blade<double>(kPhaseDim, 2);
  // K u contracted: Ku[n][l] = K_n^l_r dbar^r_0
  double Ku[4][4];
  for (int n = 0; n < 4; ++n)
    for (int l = 0; l < 4; ++l) {
      Ku[n][l] = 0;
      for (int rr = 0; rr < 4; ++rr) Ku[n][l] += K[n][l][rr] * k.u[rr];
    }
  for (int mu = 0; mu < 4; ++mu) {
    for (int i = 0; i < 3; ++i) {
      r.full.add({4 + i, mu}, ca * k.gbi[i][mu]);
      r.perp.add({4 + i, mu}, ca * k.gbi[i][mu]);
    }
    for (int n = 0; n < 4; ++n) {
      double f = 0.5 * a2 * k.gb0[mu] * kd.ghat00.d[n];
      for (int l = 0; l < 4; ++l) f -= k.g[l][mu] * Ku[n][l];
      r.full.add({n, mu}, ca * f);
      double q = 0.5 * kd.ghat00.d[n];
      for (int l = 0; l < 4; ++l) q += k.gb0[l] * Ku[n][l];
      r.parallel.add({n, mu}, c * a * a2 * k.gb0[mu] * q);
      double s = 0;
      for (int i = 0; i < 3; ++i)
        for (int l = 0; l < 4; ++l) s += k.gbi[i][mu] * k.dbi[i][l] * Ku[n][l];
      r.perp.add({n, mu}, -ca * s);
    }
  }
  // Upsilon = g_{l mu}(d xdot^l - K_n^l_r xdot^r d^n) ^ d^mu along xdot = c a dbar_0
  for (int l = 0; l < 4; ++l)
    for (int mu = 0; mu < 4; ++mu) {
      for (int A = 0; A < kPhaseDim; ++A) r.direct.add({A, mu}, k.g[l][mu] * kd.dd[l].d[A]);
      for (int n = 0; n < 4; ++n) r.direct.add({n, mu}, -k.g[l][mu] * ca * Ku[n][l]);
    }
  return r;
}

}  // namespace phasegeo
