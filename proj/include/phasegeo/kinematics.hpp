#pragma once

#include <stdexcept>

#include "phasegeo/metric.hpp"

namespace phasegeo {

// Phase chart point (x^0..x^3; x^1_0..x^3_0). Chart slots: x -> 0..3, v -> 4..6.
template <class S>
struct PhasePointT {
  Vec4<S> x;
  Vec3<S> v;
};
using PhasePoint = PhasePointT<double>;

struct AdmissibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class S>
PhasePointT<S> seed_phase(const PhasePoint& p) {
  PhasePointT<S> r;
  for (int a = 0; a < 4; ++a) r.x[a] = variable<S>(p.x[a], a);
  for (int i = 0; i < 3; ++i) r.v[i] = variable<S>(p.v[i], 4 + i);
  return r;
}

template <class S>
PhasePointT<typename inner<S>::type> lower_point(const PhasePointT<S>& p) {
  PhasePointT<typename inner<S>::type> r;
  for (int a = 0; a < 4; ++a) r.x[a] = p.x[a].v;
  for (int i = 0; i < 3; ++i) r.v[i] = p.v[i].v;
  return r;
}

inline PhasePoint values(const PhasePoint& p) { return p; }
template <class S>
PhasePoint values(const PhasePointT<S>& p) {
  PhasePoint r;
  for (int a = 0; a < 4; ++a) r.x[a] = value(p.x[a]);
  for (int i = 0; i < 3; ++i) r.v[i] = value(p.v[i]);
  return r;
}

// Barred/hatted metric quantities and adapted bases at a phase point.
template <class S>
struct Kinematics {
  double c = 1.0;
  Mat4<S> g, gi;
  Vec4<S> u;                    // dbar^l_0
  std::array<Vec4<S>, 3> dbi;   // dbar^i_m
  S Q, alpha;                   // Q = g(u,u), alpha = 1/sqrt(-Q)
  Vec4<S> gb0;                  // gbar_{0l}
  std::array<Vec4<S>, 3> gbi;   // gbar_{il}
  Vec4<S> gbu0;                 // gbar^{0l}
  std::array<Vec4<S>, 3> gbui;  // gbar^{il}
  S ghat00, ghatu00;
  Mat3<S> ghat, ghatu;          // ghat_{ij}, ghat^{ij}
  Vec4<S> tau;                  // tau_l
  Vec4<S> dd;                   // contact map d^l
  Mat4<S> b;                    // b[a][l]: b_0, b_i
  Mat4<S> beta;                 // beta[a][m]: beta^0, beta^i
};

template <class S>
Kinematics<S> kinematics_from(const Mat4<S>& g, const PhasePointT<S>& p, double c) {
  Kinematics<S> k;
  k.c = c;
  k.g = g;
  k.gi = inverse(g);
  k.u = {S(1.0), p.v[0], p.v[1], p.v[2]};
  for (int i = 0; i < 3; ++i)
    for (int m = 0; m < 4; ++m) k.dbi[i][m] = S(m == i + 1 ? 1.0 : 0.0) - (m == 0 ? p.v[i] : S(0.0));
  k.Q = S(0.0);
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) k.Q += g[l][m] * k.u[l] * k.u[m];
  if (!(value(k.Q) < 0)) throw AdmissibilityError("phase point is not timelike");
  k.alpha = 1.0 / sqrt(-k.Q);
  S a2 = k.alpha * k.alpha;
  for (int l = 0; l < 4; ++l) {
    k.gb0[l] = S(0.0);
    for (int r = 0; r < 4; ++r) k.gb0[l] += g[r][l] * k.u[r];
  }
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 4; ++l) k.gbi[i][l] = g[i + 1][l] + a2 * k.gb0[i + 1] * k.gb0[l];
  for (int l = 0; l < 4; ++l) k.gbu0[l] = -a2 * k.u[l];
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 4; ++l) {
      k.gbui[i][l] = S(0.0);
      for (int r = 0; r < 4; ++r) k.gbui[i][l] += k.dbi[i][r] * k.gi[r][l];
    }
  k.ghat00 = -1.0 / a2;
  k.ghatu00 = -a2;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      k.ghat[i][j] = g[i + 1][j + 1] + a2 * k.gb0[i + 1] * k.gb0[j + 1];
      S s(0.0);
      for (int r = 0; r < 4; ++r) s += k.gbui[i][r] * k.dbi[j][r];
      k.ghatu[i][j] = s;
    }
  for (int l = 0; l < 4; ++l) {
    k.tau[l] = -(k.alpha / c) * k.gb0[l];
    k.dd[l] = c * k.alpha * k.u[l];
  }
  for (int l = 0; l < 4; ++l) k.b[0][l] = k.u[l];
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 4; ++l) k.b[i + 1][l] = S(l == i + 1 ? 1.0 : 0.0) + a2 * k.gb0[i + 1] * k.u[l];
  for (int m = 0; m < 4; ++m) {
    S s = S(m == 0 ? 1.0 : 0.0);
    for (int i = 0; i < 3; ++i) s -= a2 * k.gb0[i + 1] * k.dbi[i][m];
    k.beta[0][m] = s;
  }
  for (int i = 0; i < 3; ++i)
    for (int m = 0; m < 4; ++m) k.beta[i + 1][m] = k.dbi[i][m];
  return k;
}

template <class S>
Kinematics<S> kinematics(const Metric& m, const PhasePointT<S>& p, double c) {
  return kinematics_from(m.g(p.x), p, c);
}

// Point-level operations.
double alpha0(const Metric& g, const PhasePoint& p);
Vec4<double> contact_map(const Metric& g, const PhasePoint& p, double c);
Vec4<double> time_form(const Metric& g, const PhasePoint& p, double c);
Mat4<double> theta(const Metric& g, const PhasePoint& p, double c);  // theta[m][l] = theta^m_l

struct Projections {
  Mat4<double> par_up, perp_up;    // pi^par = tau (x) d, pi^perp = theta  ([m][l] acting on vectors)
  Mat4<double> par_low, perp_low;  // transposes acting on covectors ([l][m])
};
Projections projections(const Metric& g, const PhasePoint& p, double c);

// nu_tau(X) components on d^0_i; nu_tau_inv(Y) = c a Y^i b_i, the preimage in ker tau.
Vec3<double> nu_tau(const Metric& g, const PhasePoint& p, double c, const Vec4<double>& X);
Vec4<double> nu_tau_inv(const Metric& g, const PhasePoint& p, double c, const Vec3<double>& Y);

struct NamedResidual {
  std::string name;
  double value;
};

// The useful kinematic identities, one residual per identity.
std::vector<NamedResidual> useful_identities(const Metric& g, const PhasePoint& p, double c);
// Frame duality, inverse relations, metric blocks and projector algebra.
std::vector<NamedResidual> frame_identities(const Metric& g, const PhasePoint& p, double c);

class LinearConnection;
// Covariant derivatives of the barred and hatted metric quantities against their printed expansions.
std::vector<NamedResidual> nabla_hat_identities(const Metric& g, const LinearConnection& K, const PhasePoint& p,
                                                double c);

}  // namespace phasegeo
