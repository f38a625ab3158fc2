#pragma once

#include <functional>
#include <memory>
#include <string>

#include "phasegeo/blade.hpp"
#include "phasegeo/metric.hpp"

namespace phasegeo {

using Rank4 = std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4>;

// Linear spacetime connection: coefficients K[l][n][m] = K_l^n_m(x).
template <class S>
struct LinearEval {
  virtual ~LinearEval() = default;
  virtual Rank3<S> K(const Vec4<S>& x) const = 0;
};

class LinearConnection : public LinearEval<double>, public LinearEval<D1>, public LinearEval<D2> {
 public:
  using LinearEval<double>::K;
  using LinearEval<D1>::K;
  using LinearEval<D2>::K;
  virtual std::string name() const = 0;
};
using LinearPtr = std::shared_ptr<const LinearConnection>;

template <class F>
class LinearConnectionT : public LinearConnection {
 public:
  LinearConnectionT(F f, std::string name) : f_(std::move(f)), name_(std::move(name)) {}
  Rank3<double> K(const Vec4<double>& x) const override { return f_(x); }
  Rank3<D1> K(const Vec4<D1>& x) const override { return f_(x); }
  Rank3<D2> K(const Vec4<D2>& x) const override { return f_(x); }
  std::string name() const override { return name_; }

 private:
  F f_;
  std::string name_;
};

template <class F>
LinearPtr make_linear(F f, std::string name) {
  return std::make_shared<LinearConnectionT<F>>(std::move(f), std::move(name));
}

template <class S>
Rank3<S> levi_civita_coeffs(const Metric& m, const Vec4<S>& x) {
  Rank3<S> dg;
  Mat4<S> g = m.g(x, dg);
  Mat4<S> gi = inverse(g);
  Rank3<S> K;
  for (int mu = 0; mu < 4; ++mu)
    for (int l = 0; l < 4; ++l)
      for (int n = 0; n < 4; ++n) {
        S s(0.0);
        for (int r = 0; r < 4; ++r) s += gi[l][r] * (dg[mu][r][n] + dg[n][r][mu] - dg[r][mu][n]);
        K[mu][l][n] = -0.5 * s;
      }
  return K;
}

LinearPtr levi_civita(MetricPtr g);
LinearPtr flat_connection();
// K + Phi where Phi_l^n_m = g^{n r} phi_{l r m} for a constant-coefficient phi.
LinearPtr plus_tensor(LinearPtr K, MetricPtr g, const std::array<std::array<std::array<double, 4>, 4>, 4>& phi);
// Projective perturbation K + delta^n_l psi_m + delta^n_m psi_l with
// psi_l(x) = a_l + b_l sin(x^l).
LinearPtr plus_projective(LinearPtr K, const Vec4<double>& a, const Vec4<double>& b);
// K + constant Phi_l^n_m.
LinearPtr plus_constant(LinearPtr K, const Rank3<double>& phi);

// General spacetime connection on TE: K_l^n(x, xdot).
template <class S>
struct TangentEval {
  virtual ~TangentEval() = default;
  virtual Mat4<S> K(const Vec4<S>& x, const Vec4<S>& xdot) const = 0;
};
class TangentConnection : public TangentEval<double>, public TangentEval<D1>, public TangentEval<D2> {
 public:
  using TangentEval<double>::K;
  using TangentEval<D1>::K;
  using TangentEval<D2>::K;
  virtual bool linear() const = 0;
  virtual LinearPtr linear_part() const = 0;
};
using TangentPtr = std::shared_ptr<const TangentConnection>;

// K_l^n = K_l^n_m xdot^m + shift * delta^n_l (shift = 1 is the K[g] + upsilon example).
TangentPtr tangent_connection(LinearPtr K, double shift = 0.0);

// Point-level spacetime operations. Antisymmetric arrays hold full components.
Mat4<double> inverse_metric(const Metric& g, const Vec4<double>& x);
Rank3<double> connection_at(const LinearConnection& K, const Vec4<double>& x);
// T[n][l][m]
Rank3<double> torsion(const LinearConnection& K, const Vec4<double>& x);
// R[l][m][n][s]
Rank4 curvature(const LinearConnection& K, const Vec4<double>& x);
// D[l][m][r] for d_K g
Rank3<double> dK_g(const LinearConnection& K, const Metric& g, const Vec4<double>& x);
// N[l][m][n] = nabla_l g_{mn}
Rank3<double> nabla_g(const LinearConnection& K, const Metric& g, const Vec4<double>& x);

// Tangent chart (x^0..x^3, xdot^0..xdot^3) -> slots 0..7.
template <class S> using TanPoint = std::array<S, 8>;

template <class S>
void split(const TanPoint<S>& z, Vec4<S>& x, Vec4<S>& xd) {
  for (int a = 0; a < 4; ++a) {
    x[a] = z[a];
    xd[a] = z[4 + a];
  }
}

template <class S>
Blade<S> upsilon(const Metric& m, const TangentConnection& K, const TanPoint<S>& z) {
  Vec4<S> x, xd;
  split(z, x, xd);
  Mat4<S> g = m.g(x);
  Mat4<S> k = K.K(x, xd);
  Blade<S> u(8, 2);
  for (int l = 0; l < 4; ++l)
    for (int mu = 0; mu < 4; ++mu) {
      u.add({4 + l, mu}, g[l][mu]);
      for (int n = 0; n < 4; ++n) u.add({n, mu}, -g[l][mu] * k[n][l]);
    }
  return u;
}

template <class S>
Blade<S> xi(const Metric& m, const TangentConnection& K, const TanPoint<S>& z) {
  Vec4<S> x, xd;
  split(z, x, xd);
  Mat4<S> gi = inverse(m.g(x));
  Mat4<S> k = K.K(x, xd);
  Blade<S> r(8, 2, true);
  for (int l = 0; l < 4; ++l)
    for (int mu = 0; mu < 4; ++mu) {
      r.add({l, 4 + mu}, gi[l][mu]);
      for (int n = 0; n < 4; ++n) r.add({4 + n, 4 + mu}, gi[l][mu] * k[l][n]);
    }
  return r;
}

// Metric Liouville 1-form g_{rm} xdot^r d^m.
template <class S>
Blade<S> g_flat(const Metric& m, const TanPoint<S>& z) {
  Vec4<S> x, xd;
  split(z, x, xd);
  Mat4<S> g = m.g(x);
  Blade<S> r(8, 1);
  for (int mu = 0; mu < 4; ++mu)
    for (int rh = 0; rh < 4; ++rh) r.at(1u << mu) += g[rh][mu] * xd[rh];
  return r;
}

// L_K g_flat = (d_l g_{rm} xdot^r + g_{rm} K_l^r) d^l ^ d^m.
template <class S>
Blade<S> lie_K_gflat(const Metric& m, const TangentConnection& K, const TanPoint<S>& z) {
  Vec4<S> x, xd;
  split(z, x, xd);
  Rank3<S> dg;
  Mat4<S> g = m.g(x, dg);
  Mat4<S> k = K.K(x, xd);
  Blade<S> r(8, 2);
  for (int l = 0; l < 4; ++l)
    for (int mu = 0; mu < 4; ++mu) {
      S c(0.0);
      for (int rh = 0; rh < 4; ++rh) c += dg[l][rh][mu] * xd[rh] + g[rh][mu] * k[l][rh];
      r.add({l, mu}, c);
    }
  return r;
}

// Seeds a tangent point into D1 (slot a <- coordinate a).
TanPoint<D1> seed_tangent(const TanPoint<double>& z);
TanPoint<D2> seed_tangent2(const TanPoint<double>& z);

// Generic L_K of a horizontal form field given with first partials:
// sum_l d^l ^ (d_l + K_l^m dot-d_m) phi.
Blade<double> lie_K_horizontal(const TangentConnection& K, const Blade<D1>& phi, const TanPoint<double>& z);
// Generic L_R of a horizontal form field: R_{l1 l2}^m dot-d_m phi, R from the printed
// non-linear expansion.
Blade<double> lie_R_horizontal(const TangentConnection& K, const Blade<D1>& phi, const TanPoint<double>& z);
// Printed curvature coefficient C[l][m][n] = -2(d_l K_m^n + K_l^r dot-d_r K_m^n) at (x, xdot).
Rank3<double> tangent_curvature_coeff(const TangentConnection& K, const TanPoint<double>& z);

struct TangentResiduals {
  double d_upsilon = 0;       // |d Upsilon| / |Upsilon|
  double xi_xi = 0;           // |[Xi,Xi]| / |Xi|^2
  double lie_K_gflat = 0;     // |L_K g_flat| / |d g_flat|
  double upsilon_minus_dgflat = 0;
  double lie_I_lie_K = 0;
  double lie_R_gflat = 0;
  double nabla_g_asym = -1;   // torsion-free linear only; -1 when not applicable
  double duality = 0;         // i_Xi Upsilon + 4
  double sharp_flat = 0;      // Xi# o Upsilon_flat - id
};

TangentResiduals tangent_residuals(const Metric& g, const TangentConnection& K, const TanPoint<double>& z);

struct TangentVerdict {
  bool symplectic = false, poisson = false;
  TangentResiduals worst;
  int points = 0;
};

TangentVerdict classify_tangent_structure(const Metric& g, const TangentConnection& K,
                                          const std::vector<TanPoint<double>>& pts, double tol);

}  // namespace phasegeo
