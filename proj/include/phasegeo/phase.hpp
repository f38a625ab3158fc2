#pragma once

#include <cstdint>
#include <functional>
#include <map>

#include "phasegeo/blade.hpp"
#include "phasegeo/kinematics.hpp"
#include "phasegeo/scale.hpp"
#include "phasegeo/spacetime.hpp"

namespace phasegeo {

inline constexpr int kPhaseDim = 7;

struct Constants {
  double c = 1.0, hbar = 1.0, m = 1.0;
};

// Phase connection coefficients G[l][i] = Gamma_l^i(x, v).
template <class S>
struct PhaseEval {
  virtual ~PhaseEval() = default;
  virtual Mat43<S> Gamma(const PhasePointT<S>& p) const = 0;
};

class PhaseConnection : public PhaseEval<double>, public PhaseEval<D1>, public PhaseEval<D2> {
 public:
  using PhaseEval<double>::Gamma;
  using PhaseEval<D1>::Gamma;
  using PhaseEval<D2>::Gamma;
  virtual std::string name() const = 0;
  // True when partials come from finite differences rather than exact propagation.
  virtual bool finite_difference() const { return false; }
};
using PhasePtr = std::shared_ptr<const PhaseConnection>;

template <class F>
class PhaseConnectionT : public PhaseConnection {
 public:
  PhaseConnectionT(F f, std::string name, bool fd = false) : f_(std::move(f)), name_(std::move(name)), fd_(fd) {}
  Mat43<double> Gamma(const PhasePointT<double>& p) const override { return f_(p); }
  Mat43<D1> Gamma(const PhasePointT<D1>& p) const override { return f_(p); }
  Mat43<D2> Gamma(const PhasePointT<D2>& p) const override { return f_(p); }
  std::string name() const override { return name_; }
  bool finite_difference() const override { return fd_ || f_.finite_difference(); }

 private:
  F f_;
  std::string name_;
  bool fd_;
};

struct ExactPartials {
  bool finite_difference() const { return false; }
};

template <class F>
PhasePtr make_phase(F f, std::string name) {
  return std::make_shared<PhaseConnectionT<F>>(std::move(f), std::move(name));
}

template <class S>
Mat43<S> zero43() {
  Mat43<S> r;
  for (auto& a : r)
    for (auto& b : a) b = S(0.0);
  return r;
}

// Gamma_l^i = dbar^i_r K_l^r_s dbar^s_0
template <class S>
Mat43<S> chi_coeffs(const Rank3<S>& K, const PhasePointT<S>& p) {
  Vec4<S> u = {S(1.0), p.v[0], p.v[1], p.v[2]};
  Mat43<S> G;
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i) {
      S s(0.0);
      for (int sg = 0; sg < 4; ++sg) s += (K[l][i + 1][sg] - p.v[i] * K[l][0][sg]) * u[sg];
      G[l][i] = s;
    }
  return G;
}

PhasePtr chi(LinearPtr K);
PhasePtr metric_phase_connection(MetricPtr g);
PhasePtr zero_phase_connection();
// a + w * b
PhasePtr sum(PhasePtr a, PhasePtr b, double w = 1.0);
// Smooth trigonometric field in all seven phase coordinates.
PhasePtr random_sigma(uint64_t seed, double amplitude);
// Wraps a value-only provider; partials from central differences of a local quadratic model.
PhasePtr finite_difference_connection(std::function<Mat43<double>(const PhasePoint&)> f, std::string name);

template <class S>
struct PhaseState {
  Kinematics<S> k;
  Mat43<S> G;
};

template <class S>
PhaseState<S> phase_state(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c) {
  PhasePointT<S> q = seed_phase<S>(p);
  return {kinematics(g, q, c), G.Gamma(q)};
}

// tau as a horizontal phase 1-form.
template <class S>
Blade<S> tau_form(const Kinematics<S>& k) {
  Blade<S> r(kPhaseDim, 1);
  for (int l = 0; l < 4; ++l) r.at(1u << l) = k.tau[l];
  return r;
}

// Omega = c a gbar_{i mu} (d^i_0 - Gamma_l^i d^l) ^ d^mu
template <class S>
Blade<S> omega_form(const Kinematics<S>& k, const Mat43<S>& G) {
  Blade<S> r(kPhaseDim, 2);
  S ca = k.c * k.alpha;
  for (int i = 0; i < 3; ++i)
    for (int mu = 0; mu < 4; ++mu) {
      S w = ca * k.gbi[i][mu];
      r.add({4 + i, mu}, w);
      for (int l = 0; l < 4; ++l) r.add({l, mu}, -w * G[l][i]);
    }
  return r;
}

// Lambda = (1/(c a)) gbar^{j l} (d_l + Gamma_l^i d^0_i) ^ d^0_j
template <class S>
Blade<S> lambda_vec(const Kinematics<S>& k, const Mat43<S>& G) {
  Blade<S> r(kPhaseDim, 2, true);
  S ica = 1.0 / (k.c * k.alpha);
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 4; ++l) {
      S w = ica * k.gbui[j][l];
      r.add({l, 4 + j}, w);
      for (int i = 0; i < 3; ++i) r.add({4 + i, 4 + j}, w * G[l][i]);
    }
  return r;
}

// gamma^i = Gamma_r^i dbar^r_0
template <class S>
Vec3<S> gamma_coeffs(const Kinematics<S>& k, const Mat43<S>& G) {
  Vec3<S> g;
  for (int i = 0; i < 3; ++i) {
    g[i] = S(0.0);
    for (int r = 0; r < 4; ++r) g[i] += G[r][i] * k.u[r];
  }
  return g;
}

// gamma = c a (dbar^l_0 d_l + gam^i d^0_i) for arbitrary gam^i.
template <class S>
Blade<S> dynamical_vec(const Kinematics<S>& k, const Vec3<S>& gam) {
  Blade<S> r(kPhaseDim, 1, true);
  S ca = k.c * k.alpha;
  for (int l = 0; l < 4; ++l) r.at(1u << l) = ca * k.u[l];
  for (int i = 0; i < 3; ++i) r.at(1u << (4 + i)) = ca * gam[i];
  return r;
}

template <class S>
Blade<S> gamma_vec(const Kinematics<S>& k, const Mat43<S>& G) {
  return dynamical_vec(k, gamma_coeffs(k, G));
}

// Antisymmetrized curvature coefficient A[l][m][i] = (F/2) of
// R[Gamma] = -2 (d_l Gamma_m^i + Gamma_l^j d^0_j Gamma_m^i) d^l ^ d^m (x) d^0_i.
using Rank43 = std::array<std::array<std::array<double, 3>, 4>, 4>;
Rank43 curvature_coeff(const Mat43<D1>& G);
template <class T, int N>
std::array<std::array<std::array<T, 3>, 4>, 4> curvature_coeff_t(const Mat43<Dual<T, N>>& G) {
  std::array<std::array<std::array<T, 3>, 4>, 4> A;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int i = 0; i < 3; ++i) {
        T s = G[m][i].d[l] - G[l][i].d[m];
        for (int j = 0; j < 3; ++j) s += G[l][j].v * G[m][i].d[4 + j] - G[m][j].v * G[l][i].d[4 + j];
        A[l][m][i] = -s;
      }
  return A;
}

// Linear maps on the 7-dim chart. M[a][b] = b-component of the image of e_a.
using Mat7 = std::array<std::array<double, 7>, 7>;

// out(I) = sum_J in(J) det(M[J rows, I cols]).
Blade<double> push_blade(const Blade<double>& in, const Mat7& M);
// Raw full component with arbitrary index tuple.
double full_component(const Blade<double>& f, const std::vector<int>& idx);
// Derivation extension of M: (i_M F)_{A1..Ap} = sum_k F_{A1..M(A_k)..Ap}.
Blade<double> derivation(const Blade<double>& F, const Mat7& M);
// Horizontal projector of Gamma: d_l -> d_l + Gamma_l^i d^0_i, d^0_i -> 0.
Mat7 gamma_projector(const Mat43<double>& G);

// Musical maps: Lambda#(a)^B = a_A Lambda^{AB}, Omega_flat(X)_B = X^A Omega_{AB}.
std::vector<double> musical_sharp(const Blade<double>& Lambda, const std::vector<double>& a);
std::vector<double> musical_flat(const Blade<double>& Omega, const std::vector<double>& X);
// (Lambda# (x) Lambda#)(F)^{CD} = Lambda^{AC} Lambda^{BD} F_{AB}
Blade<double> sharp2(const Blade<double>& Lambda, const Blade<double>& F);
Blade<double> flat2(const Blade<double>& Omega, const Blade<double>& P);
// Full isomorphisms: flat = Omega_flat + (m c^4/hbar) tau (x) tau, sharp = Lambda# + (hbar/(m c^4)) gamma (x) gamma.
std::vector<double> phase_flat(const Blade<double>& Omega, const std::vector<double>& tau, const std::vector<double>& X,
                               const Constants& k);
std::vector<double> phase_sharp(const Blade<double>& Lambda, const std::vector<double>& gamma,
                                const std::vector<double>& a, const Constants& k);

// Adapted phase frames: rows of E are e_0, e_i, e^0_i; rows of Eps are eps^0, eps^i, eps^i_0.
struct PhaseFrames {
  Mat7 E, Eps;
};
PhaseFrames adapted_phase_frames(const Kinematics<double>& k, const Mat43<double>& G);

struct PointSetup {
  MetricPtr g;
  PhasePtr G;
  Constants k;
};

// Point-level ops.
Rank43 phase_curvature(const PhaseConnection& G, const PhasePoint& p);  // full components
Blade<double> omega_at(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c);
Blade<double> lambda_at(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c);
std::vector<double> gamma_at(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c);
Blade<double> tau_at(const Metric& g, const PhasePoint& p, double c);

// L_Gamma tau = i_Gamma d tau - d tau (generic) and the printed expansion.
Blade<double> lie_gamma_tau(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c);
Blade<double> lie_gamma_tau_printed(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c);
Blade<double> lie_R_tau(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c);
Blade<double> lie_R_tau_printed(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c);
// L_{nu_tau(X)} L_Gamma tau for a spacetime vector X.
Blade<double> lie_nu_lie_gamma_tau(const Metric& g, const PhaseConnection& G, const Vec4<double>& X,
                                   const PhasePoint& p, double c);

struct VolumeCoefficients {
  double covariant = 0, covariant_expected = 0;
  double contravariant = 0, contravariant_expected = 0;
};
VolumeCoefficients volume_checks(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c);

// Printed coordinate expansions used as oracles.
Blade<double> d_omega_printed(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c);
// [gamma, Lambda] for gamma with arbitrary gam^i = Gamma_r^i dbar^r_0 + dgam^i.
Blade<double> gamma_lambda_printed(const Metric& g, const PhaseConnection& G, const PhaseConnection& dgam,
                                   const PhasePoint& p, double c);
Blade<double> gamma_lambda_generic(const Metric& g, const PhaseConnection& G, const PhaseConnection& dgam,
                                   const PhasePoint& p, double c);
Blade<double> gamma_lambda_adapted_printed(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c);
Blade<double> lambda_lambda_printed(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c);
Blade<double> lambda_lambda_adapted_printed(const Metric& g, const PhaseConnection& G, const PhasePoint& p,
                                            double c);

// Pullbacks of the scaled tangent 2-form along the contact map.
struct ContactPullbacks {
  Blade<double> full, parallel, perp;  // printed expansions
  Blade<double> direct;                // generic pullback of Upsilon along (x, c a dbar_0)
};
ContactPullbacks contact_pullbacks(const Metric& g, const LinearConnection& K, const PhasePoint& p, double c);

// Singular values of Omega as a 7x7 matrix: kernel dimension check and alignment of the
// kernel direction with gamma.
struct OmegaKernel {
  double ratio = 0;      // sigma_7 / sigma_6
  double alignment = 0;  // 1 - |<n, gamma>| / |gamma|, n the unit right-singular vector of sigma_7
};
OmegaKernel omega_kernel(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c);

// Dependence of anchored phase quantities on (c, hbar, m) and the metric unit:
// tau, omega, lambda, gamma, pairing, volume_covariant, volume_contravariant,
// flat_tau_term ((m c^4/hbar) tau (x) tau), sharp_gamma_term ((hbar/(m c^4)) gamma (x) gamma).
ScaleLaw scale_law(const std::string& anchor);
std::vector<std::string> scale_anchors();

// Residual groups evaluated by the classifier at one point.
struct PhaseResiduals {
  std::map<std::string, double> r;
};
PhaseResiduals phase_residuals(const Metric& g, const PhaseConnection& G, const PhasePoint& p, const Constants& k);

struct StructureVerdict {
  bool acc = false, contact = false, acpj = false, jacobi = false, dual_pair = false;
  std::map<std::string, double> residuals;
  std::map<std::string, int> worst;  // sample index of the max residual
  double tol = 0;
  int points = 0, skipped = 0;
  bool finite_difference = false;
};

struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

StructureVerdict classify_phase_structure(const Metric& g, const PhaseConnection& G,
                                          const std::vector<PhasePoint>& samples, double tol,
                                          const Constants& k = {});
void check_implications(const StructureVerdict& v);

}  // namespace phasegeo
