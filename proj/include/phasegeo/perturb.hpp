#pragma once

#include <cstdint>

#include "phasegeo/phase.hpp"

namespace phasegeo {

// Spacetime (0,2) tensor field T_{lm}(x).
template <class S>
struct TensorEval {
  virtual ~TensorEval() = default;
  virtual Mat4<S> T(const Vec4<S>& x) const = 0;
};

class TensorField : public TensorEval<double>, public TensorEval<D1>, public TensorEval<D2> {
 public:
  using TensorEval<double>::T;
  using TensorEval<D1>::T;
  using TensorEval<D2>::T;
  virtual std::string name() const = 0;
};
using TensorPtr = std::shared_ptr<const TensorField>;

template <class F>
class TensorFieldT : public TensorField {
 public:
  TensorFieldT(F f, std::string name) : f_(std::move(f)), name_(std::move(name)) {}
  Mat4<double> T(const Vec4<double>& x) const override { return f_(x); }
  Mat4<D1> T(const Vec4<D1>& x) const override { return f_(x); }
  Mat4<D2> T(const Vec4<D2>& x) const override { return f_(x); }
  std::string name() const override { return name_; }

 private:
  F f_;
  std::string name_;
};

// base_{lm} (1 + amp sin(k.x))
TensorPtr modulated_tensor(const Mat4<double>& base, const Vec4<double>& k, double amp, std::string name);
// Random symmetric / antisymmetric modulated fields.
TensorPtr random_symmetric_tensor(uint64_t seed, double scale);
TensorPtr random_antisymmetric_tensor(uint64_t seed, double scale);

// Closed spacetime 2-form F, full components F[l][m].
class EMField : public TensorField {};
using EMPtr = std::shared_ptr<const EMField>;

struct ClosednessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// F = E dt ^ dx
EMPtr uniform_field(double E);
// F = (k/r^2) dt ^ dr in the (t, r, theta, phi) chart
EMPtr coulomb_field(double k);
EMPtr make_em_field(const std::string& id, const Params& p);
std::vector<std::string> em_catalog();

// max |dF| over the 4 coordinate 3-forms at x.
double closedness_residual(const TensorField& F, const Vec4<double>& x);

// Phase-dependent (0,2) tensor sigma_{lm}(x, v).
template <class S>
struct SigmaEval {
  virtual ~SigmaEval() = default;
  virtual Mat4<S> sigma(const Kinematics<S>& k, const PhasePointT<S>& p) const = 0;
};

enum class Symmetry { general, symmetric, antisymmetric };

class SigmaTensor : public SigmaEval<double>, public SigmaEval<D1>, public SigmaEval<D2> {
 public:
  using SigmaEval<double>::sigma;
  using SigmaEval<D1>::sigma;
  using SigmaEval<D2>::sigma;
  virtual std::string name() const = 0;
  virtual Symmetry symmetry() const { return Symmetry::general; }
};
using SigmaPtr = std::shared_ptr<const SigmaTensor>;

struct SymmetryError : std::logic_error {
  using std::logic_error::logic_error;
};

// sigma = (c^2 m / hbar)(g + kappa c^2 tau (x) tau)
SigmaPtr sigma_nu_tau(const Constants& k, double kappa);
// sigma = -1/2 (psi_{lm} + a^2 (gbar_{0l} psi_{sm} + gbar_{0m} psi_{sl}) dbar^s_0), psi symmetric
SigmaPtr sigma_psi(TensorPtr psi);
// sigma = -1/2 (phi_{lm} - a^2 gbar_{0l} phi_{sm} dbar^s_0), phi antisymmetric
SigmaPtr sigma_phi(TensorPtr phi);
// psi part + phi part of omega = psi + phi
SigmaPtr sigma_mixed(TensorPtr psi, TensorPtr phi);
SigmaPtr sigma_random(uint64_t seed, double amplitude);
// phi tensor = (q/(2m)) F
TensorPtr em_phi(EMPtr F, double q, double m);

// Sigma_l^i = (1/(c a)) gbar^{i r} sigma_{l r}
template <class S>
Mat43<S> sigma_to_Sigma_t(const Kinematics<S>& k, const Mat4<S>& s) {
  Mat43<S> r;
  S w = 1.0 / (k.c * k.alpha);
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 3; ++i) {
      S t(0.0);
      for (int q = 0; q < 4; ++q) t += k.gbui[i][q] * s[l][q];
      r[l][i] = w * t;
    }
  return r;
}

Mat43<double> sigma_to_Sigma(const Metric& g, const SigmaTensor& s, const PhasePoint& p, double c);
// Sigma_bar_{lm} = c a gbar_{i m} Sigma_l^i
Mat4<double> sigma_bar(const Kinematics<double>& k, const Mat43<double>& Sigma);
// [sigma]_{lm} = sigma_{lm} + a^2 sigma_{lr} dbar^r_0 gbar_{0m}
Mat4<double> bracket_sigma(const Kinematics<double>& k, const Mat4<double>& s);
// Form with coefficients T_{lm} d^l ^ d^m on the phase chart.
Blade<double> alt_form(const Mat4<double>& T);
// 2-vector with coefficients T^{ij} d^0_i ^ d^0_j.
Blade<double> vertical_bivector(const Mat3<double>& T);

// Gamma = chi(K[g]) + Sigma(sigma)
PhasePtr sigma_connection(MetricPtr g, SigmaPtr s, double c);
// Sigma(sigma) alone, to be added to any base connection.
PhasePtr sigma_only(MetricPtr g, SigmaPtr s, double c);
// Combined Sigma for omega = psi + phi: -(1/(2ca)) gbar^{ir}(w_{lr} + a^2 gbar_{0l} w_{rs} dbar^s_0)
PhasePtr printed_mixed_connection(MetricPtr g, TensorPtr psi, TensorPtr phi, double c);
// Gamma - chi(K[g])
PhasePtr split_connection(PhasePtr G, MetricPtr g);

// Omega^a = Omega[g, Gamma] - Omega[g], Lambda^a likewise.
Blade<double> omega_a(const Metric& g, const PhaseConnection& Sigma, const PhasePoint& p, double c);
Blade<double> lambda_a(const Metric& g, const PhaseConnection& Sigma, const PhasePoint& p, double c);
// (1/2) alt((nu_tau o g#) (x) (nu_tau o g#))(phi)
Blade<double> lambda_a_phi_printed(const Metric& g, const Mat4<double>& phi, const PhasePoint& p, double c);

struct EMStructure {
  Blade<double> omega, lambda;
  std::vector<double> gamma;
};
EMStructure em_structure(MetricPtr g, EMPtr F, double q, double m, const PhasePoint& p, double c);
PhasePtr em_connection(MetricPtr g, EMPtr F, double q, double m, double c);

// Spacetime-or-phase 1-form A_l(x, v) (horizontal).
using PotentialFn = std::function<Vec4<D1>(const PhasePointT<D1>&)>;
// A = (1/2)(q/m) E t dx
PotentialFn uniform_potential(double E, double q, double m);
// Uniform potential plus a velocity-dependent gauge term (1/2)(q/m) E x^1_0 dx.
PotentialFn phase_dependent_potential(double E, double q, double m);
// |Omega - d(-c^2 tau + A)| / |Omega|
double potential_residual(const Metric& g, const PhaseConnection& G, const PotentialFn& A, const PhasePoint& p,
                          double c);

// (-c^2 tau + A) ^ Omega[g, Gamma]^3 and (-c^2 tau + A) ^ Omega[g]^3.
struct RegularVolume {
  double perturbed = 0, metric = 0;
  bool regular = true;
};
RegularVolume invariance_of_regular_volume(MetricPtr g, const PhaseConnection& G, const Vec4<double>& A,
                                           const PhasePoint& p, double c);

// Condition for L_{chi(K)} tau = 0 evaluated on (X, Y, Z):
// g(Z,Z) d_K g(X,Y)(Z) + 1/2 g(Z,X) (nabla_Y g)(Z,Z) - 1/2 g(Z,Y) (nabla_X g)(Z,Z).
double condition_C(const Metric& g, const LinearConnection& K, const Vec4<double>& x, const Vec4<double>& X,
                   const Vec4<double>& Y, const Vec4<double>& Z);
// The same with the sign of the last two terms exchanged.
double condition_C_swapped(const Metric& g, const LinearConnection& K, const Vec4<double>& x, const Vec4<double>& X,
                           const Vec4<double>& Y, const Vec4<double>& Z);
// d_K g(X,Y)(Z) with the coordinate reading (D_{lmr} - D_{mlr}) X^l Y^m Z^r, D_{lmr} = d_l g_{mr} + g_{ms} K_l^s_r.
double dKg_eval(const Metric& g, const LinearConnection& K, const Vec4<double>& x, const Vec4<double>& X,
                const Vec4<double>& Y, const Vec4<double>& Z);

}  // namespace phasegeo
