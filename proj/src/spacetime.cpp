#include "phasegeo/spacetime.hpp"

#include <algorithm>
#include <cmath>

namespace phasegeo {

namespace {

struct LeviCivitaF {
  MetricPtr g;
  template <class S>
  Rank3<S> operator()(const Vec4<S>& x) const {
    return levi_civita_coeffs(*g, x);
  }
};

struct FlatF {
  template <class S>
  Rank3<S> operator()(const Vec4<S>&) const {
    Rank3<S> K;
    for (auto& a : K)
      for (auto& b : a)
        for (auto& c : b) c = S(0.0);
    return K;
  }
};

struct PlusTensorF {
  LinearPtr K;
  MetricPtr g;
  std::array<std::array<std::array<double, 4>, 4>, 4> phi;
  template <class S>
  Rank3<S> operator()(const Vec4<S>& x) const {
    Rank3<S> k = K->K(x);
    Mat4<S> gi = inverse(g->g(x));
    for (int l = 0; l < 4; ++l)
      for (int n = 0; n < 4; ++n)
        for (int m = 0; m < 4; ++m)
          for (int r = 0; r < 4; ++r) k[l][n][m] += gi[n][r] * phi[l][r][m];
    return k;
  }
};

struct PlusProjectiveF {
  LinearPtr K;
  Vec4<double> a, b;
  template <class S>
  Rank3<S> operator()(const Vec4<S>& x) const {
    Rank3<S> k = K->K(x);
    Vec4<S> psi;
    for (int l = 0; l < 4; ++l) psi[l] = a[l] + b[l] * sin(x[l]);
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) {
        k[l][l][m] += psi[m];
        k[l][m][m] += psi[l];
      }
    return k;
  }
};

struct PlusConstantF {
  LinearPtr K;
  Rank3<double> phi;
  template <class S>
  Rank3<S> operator()(const Vec4<S>& x) const {
    Rank3<S> k = K->K(x);
    for (int l = 0; l < 4; ++l)
      for (int n = 0; n < 4; ++n)
        for (int m = 0; m < 4; ++m) k[l][n][m] += phi[l][n][m];
    return k;
  }
};

class TangentFromLinear : public TangentConnection {
 public:
  TangentFromLinear(LinearPtr K, double shift) : K_(std::move(K)), shift_(shift) {}
  Mat4<double> K(const Vec4<double>& x, const Vec4<double>& v) const override { return eval(x, v); }
  Mat4<D1> K(const Vec4<D1>& x, const Vec4<D1>& v) const override { return eval(x, v); }
  Mat4<D2> K(const Vec4<D2>& x, const Vec4<D2>& v) const override { return eval(x, v); }
  bool linear() const override { return shift_ == 0.0; }
  LinearPtr linear_part() const override { return K_; }

 private:
  template <class S>
  Mat4<S> eval(const Vec4<S>& x, const Vec4<S>& v) const {
    Rank3<S> k = K_->K(x);
    Mat4<S> r;
    for (int l = 0; l < 4; ++l)
      for (int n = 0; n < 4; ++n) {
        S s(l == n ? shift_ : 0.0);
        for (int m = 0; m < 4; ++m) s += k[l][n][m] * v[m];
        r[l][n] = s;
      }
    return r;
  }
  LinearPtr K_;
  double shift_;
};

Vec4<D1> seed4(const Vec4<double>& x) {
  Vec4<D1> r;
  for (int a = 0; a < 4; ++a) r[a] = variable<D1>(x[a], a);
  return r;
}

double norm_of(const Blade<double>& b) { return max_abs(b); }

}  // namespace

LinearPtr levi_civita(MetricPtr g) { return make_linear(LeviCivitaF{std::move(g)}, "levi_civita"); }
LinearPtr flat_connection() { return make_linear(FlatF{}, "flat"); }

LinearPtr plus_tensor(LinearPtr K, MetricPtr g, const std::array<std::array<std::array<double, 4>, 4>, 4>& phi) {
  std::string n = K->name() + "+phi";
  return make_linear(PlusTensorF{std::move(K), std::move(g), phi}, n);
}

LinearPtr plus_projective(LinearPtr K, const Vec4<double>& a, const Vec4<double>& b) {
  std::string n = K->name() + "+projective";
  return make_linear(PlusProjectiveF{std::move(K), a, b}, n);
}

LinearPtr plus_constant(LinearPtr K, const Rank3<double>& phi) {
  std::string n = K->name() + "+const";
  return make_linear(PlusConstantF{std::move(K), phi}, n);
}

TangentPtr tangent_connection(LinearPtr K, double shift) {
  return std::make_shared<TangentFromLinear>(std::move(K), shift);
}

Mat4<double> inverse_metric(const Metric& g, const Vec4<double>& x) { return inverse(g.g(x)); }

Rank3<double> connection_at(const LinearConnection& K, const Vec4<double>& x) { return K.K(x); }

Rank3<double> torsion(const LinearConnection& K, const Vec4<double>& x) {
  Rank3<double> k = K.K(x);
  Rank3<double> T{};
  for (int n = 0; n < 4; ++n)
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) T[n][l][m] = -2.0 * (k[l][n][m] - k[m][n][l]);
  return T;
}

Rank4 curvature(const LinearConnection& K, const Vec4<double>& x) {
  Rank3<D1> k = K.K(seed4(x));
  auto C = [&](int l, int m, int n, int s) {
    double v = k[m][n][s].d[l];
    for (int r = 0; r < 4; ++r) v += k[l][r][s].v * k[m][n][r].v;
    return -2.0 * v;
  };
  Rank4 R{};
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        for (int s = 0; s < 4; ++s) R[l][m][n][s] = C(l, m, n, s) - C(m, l, n, s);
  return R;
}

Rank3<double> dK_g(const LinearConnection& K, const Metric& g, const Vec4<double>& x) {
  Rank3<double> dg;
  Mat4<double> gg = g.g(x, dg);
  Rank3<double> k = K.K(x);
  auto C = [&](int l, int m, int r) {
    double v = dg[l][m][r];
    for (int s = 0; s < 4; ++s) v += gg[s][m] * k[l][s][r];
    return v;
  };
  Rank3<double> D{};
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int r = 0; r < 4; ++r) D[l][m][r] = 2.0 * (C(l, m, r) - C(m, l, r));
  return D;
}

Rank3<double> nabla_g(const LinearConnection& K, const Metric& g, const Vec4<double>& x) {
  Rank3<double> dg;
  Mat4<double> gg = g.g(x, dg);
  Rank3<double> k = K.K(x);
  Rank3<double> N{};
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        double v = dg[l][m][n];
        for (int r = 0; r < 4; ++r) v += gg[r][n] * k[l][r][m] + gg[m][r] * k[l][r][n];
        N[l][m][n] = v;
      }
  return N;
}

TanPoint<D1> seed_tangent(const TanPoint<double>& z) {
  TanPoint<D1> r;
  for (int a = 0; a < 8; ++a) r[a] = variable<D1>(z[a], a);
  return r;
}

TanPoint<D2> seed_tangent2(const TanPoint<double>& z) {
  TanPoint<D2> r;
  for (int a = 0; a < 8; ++a) r[a] = variable<D2>(z[a], a);
  return r;
}

Blade<double> lie_K_horizontal(const TangentConnection& K, const Blade<D1>& phi, const TanPoint<double>& z) {
  Vec4<double> x, xd;
  split(z, x, xd);
  Mat4<double> k = K.K(x, xd);
  Blade<double> r(8, phi.p + 1);
  if (r.p < 0) return r;
  for (size_t j = 0; j < phi.size(); ++j) {
    unsigned J = phi.mask_at(j);
    for (int l = 0; l < 4; ++l) {
      if (J & (1u << l)) continue;
      double v = phi.c[j].d[l];
      for (int m = 0; m < 4; ++m) v += k[l][m] * phi.c[j].d[4 + m];
      if (parity_below(J, l) & 1) r.at(J | (1u << l)) -= v;
      else r.at(J | (1u << l)) += v;
    }
  }
  return r;
}

Rank3<double> tangent_curvature_coeff(const TangentConnection& K, const TanPoint<double>& z) {
  TanPoint<D1> zz = seed_tangent(z);
  Vec4<D1> x, xd;
  split(zz, x, xd);
  Mat4<D1> k = K.K(x, xd);
  Rank3<double> C{};
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        double v = k[m][n].d[l];
        for (int r = 0; r < 4; ++r) v += k[l][r].v * k[m][n].d[4 + r];
        C[l][m][n] = -2.0 * v;
      }
  return C;
}

Blade<double> lie_R_horizontal(const TangentConnection& K, const Blade<D1>& phi, const TanPoint<double>& z) {
  Rank3<double> C = tangent_curvature_coeff(K, z);
  Blade<double> r(8, phi.p + 2);
  if (r.p < 0) return r;
  for (size_t j = 0; j < phi.size(); ++j) {
    unsigned J = phi.mask_at(j);
    for (int l1 = 0; l1 < 4; ++l1)
      for (int l2 = 0; l2 < 4; ++l2) {
        if (l1 == l2 || (J & (1u << l1)) || (J & (1u << l2))) continue;
        double v = 0;
        for (int m = 0; m < 4; ++m) v += C[l1][l2][m] * phi.c[j].d[4 + m];
        int s = merge_sign((1u << l1) | (1u << l2), J) * (l1 < l2 ? 1 : -1);
        r.at(J | (1u << l1) | (1u << l2)) += s * v;
      }
  }
  return r;
}

TangentResiduals tangent_residuals(const Metric& m, const TangentConnection& K, const TanPoint<double>& z) {
  TangentResiduals res;
  TanPoint<D1> zz = seed_tangent(z);

  Blade<D1> U = upsilon(m, K, zz);
  Blade<double> Uv = values_of(U);
  double nu = norm_of(Uv);
  double ndu = 0;
  for (int a = 0; a < 8; ++a) ndu = std::max(ndu, norm_of(partial_of(U, a)));
  res.d_upsilon = norm_of(exterior_derivative(U)) / (nu + ndu);

  Blade<D1> X = xi(m, K, zz);
  Blade<double> Xv = values_of(X);
  double nx = norm_of(Xv), ndx = 0;
  for (int a = 0; a < 8; ++a) ndx = std::max(ndx, norm_of(partial_of(X, a)));
  res.xi_xi = norm_of(schouten(X, X)) / (nx * (nx + ndx));

  Blade<D1> gf = g_flat(m, zz);
  Blade<double> dgf = exterior_derivative(gf);
  Blade<D1> LK = lie_K_gflat(m, K, zz);
  Blade<double> LKv = values_of(LK);
  double scale2 = std::max(norm_of(dgf), nu);
  res.lie_K_gflat = norm_of(LKv) / scale2;
  res.upsilon_minus_dgflat = norm_of(Uv - dgf) / scale2;

  std::vector<double> I(8, 0.0);
  for (int a = 0; a < 4; ++a) I[4 + a] = z[4 + a];
  res.lie_I_lie_K = norm_of(interior(I, exterior_derivative(LK))) / (scale2 + ndu);
  res.lie_R_gflat = norm_of(lie_R_horizontal(K, gf, z)) / (scale2 + ndu);

  if (K.linear()) {
    Vec4<double> x, xd;
    split(z, x, xd);
    Rank3<double> T = torsion(*K.linear_part(), x);
    double tmax = 0;
    for (auto& a : T)
      for (auto& b : a)
        for (double c : b) tmax = std::max(tmax, std::abs(c));
    if (tmax < 1e-12) {
      Rank3<double> N = nabla_g(*K.linear_part(), m, x);
      double mx = 0;
      for (int l = 0; l < 4; ++l)
        for (int mu = 0; mu < 4; ++mu)
          for (int n = 0; n < 4; ++n) mx = std::max(mx, std::abs(N[l][mu][n] - N[mu][l][n]));
      res.nabla_g_asym = mx / (ndu + nu);
    }
  }

  res.duality = std::abs(pairing(Xv, Uv) + 4.0);

  double Um[8][8], Xm[8][8];
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      Um[a][b] = Uv({a, b});
      Xm[a][b] = Xv({a, b});
    }
  double sf = 0;
  for (int a = 0; a < 8; ++a)
    for (int c = 0; c < 8; ++c) {
      double s = 0;
      for (int b = 0; b < 8; ++b) s += Um[a][b] * Xm[b][c];
      sf = std::max(sf, std::abs(s - (a == c ? 1.0 : 0.0)));
    }
  res.sharp_flat = sf;
  return res;
}

TangentVerdict classify_tangent_structure(const Metric& g, const TangentConnection& K,
                                          const std::vector<TanPoint<double>>& pts, double tol) {
  TangentVerdict v;
  for (const auto& z : pts) {
    TangentResiduals r = tangent_residuals(g, K, z);
    auto& w = v.worst;
    w.d_upsilon = std::max(w.d_upsilon, r.d_upsilon);
    w.xi_xi = std::max(w.xi_xi, r.xi_xi);
    w.lie_K_gflat = std::max(w.lie_K_gflat, r.lie_K_gflat);
    w.upsilon_minus_dgflat = std::max(w.upsilon_minus_dgflat, r.upsilon_minus_dgflat);
    w.lie_I_lie_K = std::max(w.lie_I_lie_K, r.lie_I_lie_K);
    w.lie_R_gflat = std::max(w.lie_R_gflat, r.lie_R_gflat);
    w.nabla_g_asym = std::max(w.nabla_g_asym, r.nabla_g_asym);
    w.duality = std::max(w.duality, r.duality);
    w.sharp_flat = std::max(w.sharp_flat, r.sharp_flat);
    ++v.points;
  }
  v.symplectic = v.points > 0 && v.worst.d_upsilon <= tol && v.worst.sharp_flat <= 1e-8;
  v.poisson = v.points > 0 && v.worst.xi_xi <= tol;
  return v;
}

}  // namespace phasegeo
