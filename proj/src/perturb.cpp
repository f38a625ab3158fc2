#include "phasegeo/perturb.hpp"

#include <cmath>
#include <random>

namespace phasegeo {

namespace {

struct Modulated {
  Mat4<double> base;
  Vec4<double> k;
  double amp;
  template <class S>
  Mat4<S> operator()(const Vec4<S>& x) const {
    S arg(0.0);
    for (int a = 0; a < 4; ++a) arg += k[a] * x[a];
    S f = 1.0 + amp * sin(arg);
    Mat4<S> r;
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) r[l][m] = base[l][m] * f;
    return r;
  }
};

template <class F>
class EMFieldT : public EMField {
 public:
  EMFieldT(F f, std::string name) : f_(std::move(f)), name_(std::move(name)) {}
  Mat4<double> T(const Vec4<double>& x) const override { return f_(x); }
  Mat4<D1> T(const Vec4<D1>& x) const override { return f_(x); }
  Mat4<D2> T(const Vec4<D2>& x) const override { return f_(x); }
  std::string name() const override { return name_; }

 private:
  F f_;
  std::string name_;
};

struct Uniform {
  double E;
  template <class S>
  Mat4<S> operator()(const Vec4<S>&) const {
    Mat4<S> F{};
    for (auto& r : F)
      for (auto& x : r) x = S(0.0);
    F[0][1] = S(E);
    F[1][0] = S(-E);
    return F;
  }
};

struct Coulomb {
  double k;
  template <class S>
  Mat4<S> operator()(const Vec4<S>& x) const {
    Mat4<S> F{};
    for (auto& r : F)
      for (auto& y : r) y = S(0.0);
    F[0][1] = k / (x[1] * x[1]);
    F[1][0] = -F[0][1];
    return F;
  }
};

template <class F>
class SigmaT : public SigmaTensor {
 public:
  SigmaT(F f, std::string name, Symmetry sym) : f_(std::move(f)), name_(std::move(name)), sym_(sym) {}
  Mat4<double> sigma(const Kinematics<double>& k, const PhasePoint& p) const override {
    Mat4<double> s = f_(k, p);
    validate(s);
    return s;
  }
  Mat4<D1> sigma(const Kinematics<D1>& k, const PhasePointT<D1>& p) const override { return f_(k, p); }
  Mat4<D2> sigma(const Kinematics<D2>& k, const PhasePointT<D2>& p) const override { return f_(k, p); }
  std::string name() const override { return name_; }
  Symmetry symmetry() const override { return sym_; }

 private:
  void validate(const Mat4<double>& s) const {
    if (sym_ == Symmetry::general) return;
    double sc = 0, d = 0;
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) {
        sc = std::max(sc, std::abs(s[l][m]));
        d = std::max(d, std::abs(sym_ == Symmetry::symmetric ? s[l][m] - s[m][l] : s[l][m] + s[m][l]));
      }
    if (d > 1e-10 * std::max(sc, 1.0)) throw SymmetryError(name_ + ": symmetry property violated");
  }
  F f_;
  std::string name_;
  Symmetry sym_;
};

template <class F>
SigmaPtr make_sigma(F f, std::string name, Symmetry sym) {
  return std::make_shared<SigmaT<F>>(std::move(f), std::move(name), sym);
}

template <class S>
Mat4<S> field(const TensorField& T, const Vec4<S>& x) {
  return T.T(x);
}

void check_tensor(const Mat4<double>& t, bool symmetric, const std::string& name) {
  double sc = 0, d = 0;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      sc = std::max(sc, std::abs(t[l][m]));
      d = std::max(d, std::abs(symmetric ? t[l][m] - t[m][l] : t[l][m] + t[m][l]));
    }
  if (d > 1e-10 * std::max(sc, 1.0))
    throw SymmetryError(name + (symmetric ? " is not symmetric" : " is not antisymmetric"));
}

struct NuTauF {
  double w, kappa;
  template <class S>
  Mat4<S> operator()(const Kinematics<S>& k, const PhasePointT<S>&) const {
    Mat4<S> r;
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) r[l][m] = w * k.c * k.c * (k.g[l][m] + kappa * k.c * k.c * k.tau[l] * k.tau[m]);
    return r;
  }
};

template <class S>
Vec4<S> contract_u(const Mat4<S>& t, const Vec4<S>& u) {  // t_{s m} u^s
  Vec4<S> r;
  for (int m = 0; m < 4; ++m) {
    r[m] = S(0.0);
    for (int s = 0; s < 4; ++s) r[m] += t[s][m] * u[s];
  }
  return r;
}

template <class S>
Mat4<S> psi_sigma(const Kinematics<S>& k, const Mat4<S>& psi) {
  Vec4<S> pu = contract_u(psi, k.u);
  S a2 = k.alpha * k.alpha;
  Mat4<S> r;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) r[l][m] = -0.5 * (psi[l][m] + a2 * (k.gb0[l] * pu[m] + k.gb0[m] * pu[l]));
  return r;
}

template <class S>
Mat4<S> phi_sigma(const Kinematics<S>& k, const Mat4<S>& phi) {
  Vec4<S> pu = contract_u(phi, k.u);
  S a2 = k.alpha * k.alpha;
  Mat4<S> r;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) r[l][m] = -0.5 * (phi[l][m] - a2 * k.gb0[l] * pu[m]);
  return r;
}

struct PsiF {
  TensorPtr psi;
  template <class S>
  Mat4<S> operator()(const Kinematics<S>& k, const PhasePointT<S>& p) const {
    Mat4<S> t = field(*psi, p.x);
    if constexpr (std::is_same_v<S, double>) check_tensor(t, true, psi->name());
    return psi_sigma(k, t);
  }
};

struct PhiF {
  TensorPtr phi;
  template <class S>
  Mat4<S> operator()(const Kinematics<S>& k, const PhasePointT<S>& p) const {
    Mat4<S> t = field(*phi, p.x);
    if constexpr (std::is_same_v<S, double>) check_tensor(t, false, phi->name());
    return phi_sigma(k, t);
  }
};

struct MixedF {
  PsiF a;
  PhiF b;
  template <class S>
  Mat4<S> operator()(const Kinematics<S>& k, const PhasePointT<S>& p) const {
    Mat4<S> x = a(k, p), y = b(k, p);
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) x[l][m] += y[l][m];
    return x;
  }
};

struct RandomSigmaF {
  std::array<std::array<std::array<double, 7>, 4>, 4> w;
  std::array<std::array<double, 4>, 4> ph, amp;
  template <class S>
  Mat4<S> operator()(const Kinematics<S>&, const PhasePointT<S>& p) const {
    Mat4<S> r;
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) {
        S arg(ph[l][m]);
        for (int a = 0; a < 4; ++a) arg += w[l][m][a] * p.x[a];
        for (int i = 0; i < 3; ++i) arg += w[l][m][4 + i] * p.v[i];
        r[l][m] = amp[l][m] * cos(arg);
      }
    return r;
  }
};

struct PhiTensorF {
  EMPtr F;
  double w;
  template <class S>
  Mat4<S> operator()(const Vec4<S>& x) const {
    Mat4<S> f = F->T(x);
    for (auto& r : f)
      for (auto& y : r) y = w * y;
    return f;
  }
};

struct SigmaConnF : ExactPartials {
  MetricPtr g;
  SigmaPtr s;
  double c;
  template <class S>
  Mat43<S> operator()(const PhasePointT<S>& p) const {
    Kinematics<S> k = kinematics(*g, p, c);
    Mat43<S> G = chi_coeffs(levi_civita_coeffs(*g, p.x), p);
    Mat43<S> E = sigma_to_Sigma_t(k, s->sigma(k, p));
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 3; ++i) G[l][i] += E[l][i];
    return G;
  }
};

struct SigmaOnlyF : ExactPartials {
  MetricPtr g;
  SigmaPtr s;
  double c;
  template <class S>
  Mat43<S> operator()(const PhasePointT<S>& p) const {
    Kinematics<S> k = kinematics(*g, p, c);
    return sigma_to_Sigma_t(k, s->sigma(k, p));
  }
};

struct PrintedMixedF : ExactPartials {
  MetricPtr g;
  TensorPtr psi, phi;
  double c;
  template <class S>
  Mat43<S> operator()(const PhasePointT<S>& p) const {
    Kinematics<S> k = kinematics(*g, p, c);
    Mat43<S> G = chi_coeffs(levi_civita_coeffs(*g, p.x), p);
    Mat4<S> a = psi->T(p.x), b = phi->T(p.x);
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) a[l][m] += b[l][m];
    Vec4<S> wu;  // w_{r s} dbar^s_0
    for (int r = 0; r < 4; ++r) {
      wu[r] = S(0.0);
      for (int s = 0; s < 4; ++s) wu[r] += a[r][s] * k.u[s];
    }
    S f = -0.5 / (k.c * k.alpha), a2 = k.alpha * k.alpha;
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 3; ++i) {
        S t(0.0);
        for (int r = 0; r < 4; ++r) t += k.gbui[i][r] * (a[l][r] + a2 * k.gb0[l] * wu[r]);
        G[l][i] += f * t;
      }
    return G;
  }
};

}  // namespace

TensorPtr modulated_tensor(const Mat4<double>& base, const Vec4<double>& k, double amp, std::string name) {
  return std::make_shared<TensorFieldT<Modulated>>(Modulated{base, k, amp}, std::move(name));
}

TensorPtr random_symmetric_tensor(uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Mat4<double> b{};
  for (int l = 0; l < 4; ++l)
    for (int m = l; m < 4; ++m) b[l][m] = b[m][l] = scale * U(rng);
  Vec4<double> k;
  for (double& x : k) x = U(rng);
  return modulated_tensor(b, k, 0.3, "random_symmetric");
}

TensorPtr random_antisymmetric_tensor(uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Mat4<double> b{};
  for (int l = 0; l < 4; ++l)
    for (int m = l + 1; m < 4; ++m) {
      b[l][m] = scale * U(rng);
      b[m][l] = -b[l][m];
    }
  Vec4<double> k;
  for (double& x : k) x = U(rng);
  return modulated_tensor(b, k, 0.3, "random_antisymmetric");
}

EMPtr uniform_field(double E) { return std::make_shared<EMFieldT<Uniform>>(Uniform{E}, "uniform"); }
EMPtr coulomb_field(double k) { return std::make_shared<EMFieldT<Coulomb>>(Coulomb{k}, "coulomb"); }

EMPtr make_em_field(const std::string& id, const Params& p) {
  auto get = [&](const char* key, double def) {
    auto it = p.find(key);
    return it == p.end() ? def : it->second;
  };
  if (id == "uniform") return uniform_field(get("E", 1.0));
  if (id == "coulomb") return coulomb_field(get("k", 1.0));
  throw UnknownId("unknown field id: " + id);
}

std::vector<std::string> em_catalog() { return {"uniform", "coulomb"}; }

double closedness_residual(const TensorField& F, const Vec4<double>& x) {
  Vec4<D1> xd;
  for (int a = 0; a < 4; ++a) xd[a] = variable<D1>(x[a], a);
  Mat4<D1> f = F.T(xd);
  double r = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int e = b + 1; e < 4; ++e)
        r = std::max(r, std::abs(f[b][e].d[a] + f[e][a].d[b] + f[a][b].d[e]));
  return r;
}

SigmaPtr sigma_nu_tau(const Constants& k, double kappa) {
  return make_sigma(NuTauF{k.m / k.hbar, kappa}, "nu_tau", Symmetry::symmetric);
}

SigmaPtr sigma_psi(TensorPtr psi) { return make_sigma(PsiF{std::move(psi)}, "psi", Symmetry::symmetric); }

SigmaPtr sigma_phi(TensorPtr phi) { return make_sigma(PhiF{std::move(phi)}, "phi", Symmetry::general); }

SigmaPtr sigma_mixed(TensorPtr psi, TensorPtr phi) {
  return make_sigma(MixedF{PsiF{std::move(psi)}, PhiF{std::move(phi)}}, "mixed", Symmetry::general);
}

SigmaPtr sigma_random(uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  RandomSigmaF f;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      for (double& x : f.w[l][m]) x = U(rng);
      f.ph[l][m] = 3.0 * U(rng);
      f.amp[l][m] = amplitude * U(rng);
    }
  return make_sigma(f, "random", Symmetry::general);
}

TensorPtr em_phi(EMPtr F, double q, double m) {
  std::string n = "phi(" + F->name() + ")";
  return std::make_shared<TensorFieldT<PhiTensorF>>(PhiTensorF{std::move(F), q / (2.0 * m)}, n);
}

Mat43<double> sigma_to_Sigma(const Metric& g, const SigmaTensor& s, const PhasePoint& p, double c) {
  Kinematics<double> k = kinematics(g, p, c);
  return sigma_to_Sigma_t(k, s.sigma(k, p));
}

Mat4<double> sigma_bar(const Kinematics<double>& k, const Mat43<double>& E) {
  Mat4<double> r{};
  double ca = k.c * k.alpha;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int i = 0; i < 3; ++i) r[l][m] += ca * k.gbi[i][m] * E[l][i];
  return r;
}

Mat4<double> bracket_sigma(const Kinematics<double>& k, const Mat4<double>& s) {
  Mat4<double> r = s;
  double a2 = k.alpha * k.alpha;
  for (int l = 0; l < 4; ++l) {
    double su = 0;
    for (int q = 0; q < 4; ++q) su += s[l][q] * k.u[q];
    for (int m = 0; m < 4; ++m) r[l][m] += a2 * su * k.gb0[m];
  }
  return r;
}

Blade<double> alt_form(const Mat4<double>& T) {
  Blade<double> r(kPhaseDim, 2);
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) r.add({l, m}, T[l][m]);
  return r;
}

Blade<double> vertical_bivector(const Mat3<double>& T) {
  Blade<double> r(kPhaseDim, 2, true);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.add({4 + i, 4 + j}, T[i][j]);
  return r;
}

PhasePtr sigma_connection(MetricPtr g, SigmaPtr s, double c) {
  std::string n = "chi(K[g])+Sigma(" + s->name() + ")";
  return make_phase(SigmaConnF{{}, std::move(g), std::move(s), c}, n);
}

PhasePtr sigma_only(MetricPtr g, SigmaPtr s, double c) {
  std::string n = "Sigma(" + s->name() + ")";
  return make_phase(SigmaOnlyF{{}, std::move(g), std::move(s), c}, n);
}

PhasePtr printed_mixed_connection(MetricPtr g, TensorPtr psi, TensorPtr phi, double c) {
  return make_phase(PrintedMixedF{{}, std::move(g), std::move(psi), std::move(phi), c}, "printed_mixed");
}

PhasePtr split_connection(PhasePtr G, MetricPtr g) { return sum(std::move(G), metric_phase_connection(std::move(g)), -1.0); }

Blade<double> omega_a(const Metric& g, const PhaseConnection& Sigma, const PhasePoint& p, double c) {
  Kinematics<double> k = kinematics(g, p, c);
  return omega_form(k, Sigma.Gamma(p)) - omega_form(k, zero43<double>());
}

Blade<double> lambda_a(const Metric& g, const PhaseConnection& Sigma, const PhasePoint& p, double c) {
  Kinematics<double> k = kinematics(g, p, c);
  return lambda_vec(k, Sigma.Gamma(p)) - lambda_vec(k, zero43<double>());
}

Blade<double> lambda_a_phi_printed(const Metric& g, const Mat4<double>& phi, const PhasePoint& p, double c) {
  Kinematics<double> k = kinematics(g, p, c);
  double w = 0.5 / std::pow(c * k.alpha, 2);
  Mat3<double> T{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m) T[i][j] += w * k.gbui[i][l] * k.gbui[j][m] * phi[l][m];
  return vertical_bivector(T);
}

PhasePtr em_connection(MetricPtr g, EMPtr F, double q, double m, double c) {
  return sigma_connection(std::move(g), sigma_phi(em_phi(std::move(F), q, m)), c);
}

EMStructure em_structure(MetricPtr g, EMPtr F, double q, double m, const PhasePoint& p, double c) {
  double cl = closedness_residual(*F, p.x);
  if (cl > 1e-9) throw ClosednessError(F->name() + ": field is not closed");
  PhasePtr G = em_connection(g, std::move(F), q, m, c);
  return {omega_at(*g, *G, p, c), lambda_at(*g, *G, p, c), gamma_at(*g, *G, p, c)};
}

PotentialFn uniform_potential(double E, double q, double m) {
  double w = 0.5 * q / m * E;
  return [w](const PhasePointT<D1>& p) {
    Vec4<D1> A;
    for (auto& a : A) a = D1(0.0);
    A[1] = w * p.x[0];
    return A;
  };
}

PotentialFn phase_dependent_potential(double E, double q, double m) {
  double w = 0.5 * q / m * E;
  return [w](const PhasePointT<D1>& p) {
    Vec4<D1> A;
    for (auto& a : A) a = D1(0.0);
    A[1] = w * (p.x[0] + p.v[0]);
    return A;
  };
}

double potential_residual(const Metric& g, const PhaseConnection& G, const PotentialFn& A, const PhasePoint& p,
                          double c) {
  PhasePointT<D1> q = seed_phase<D1>(p);
  Kinematics<D1> k = kinematics(g, q, c);
  Blade<D1> t = tau_form(k) * D1(-c * c);
  Vec4<D1> a = A(q);
  for (int l = 0; l < 4; ++l) t.at(1u << l) += a[l];
  Blade<double> O = omega_at(g, G, p, c);
  return max_abs(O - exterior_derivative(t)) / max_abs(O);
}

RegularVolume invariance_of_regular_volume(MetricPtr g, const PhaseConnection& G, const Vec4<double>& A,
                                           const PhasePoint& p, double c) {
  Kinematics<double> k = kinematics(*g, p, c);
  Blade<double> t = tau_form(k) * (-c * c);
  for (int l = 0; l < 4; ++l) t.at(1u << l) += A[l];
  PhasePtr M = metric_phase_connection(g);
  Blade<double> O1 = omega_form(k, G.Gamma(p)), O0 = omega_form(k, M->Gamma(p));
  const unsigned all = (1u << kPhaseDim) - 1;
  RegularVolume r;
  r.perturbed = wedge(wedge(wedge(t, O1), O1), O1).get(all);
  r.metric = wedge(wedge(wedge(t, O0), O0), O0).get(all);
  double scale = max_abs(t) * std::pow(max_abs(O0), 3);
  r.regular = std::abs(r.metric) > 1e-12 * scale;
  return r;
}

namespace {

struct CParts {
  double gZZ, dkg, gZX, gZY, nXZZ, nYZZ;
};

CParts c_parts(const Metric& g, const LinearConnection& K, const Vec4<double>& x, const Vec4<double>& X,
               const Vec4<double>& Y, const Vec4<double>& Z) {
  Mat4<double> gg = g.g(x);
  Rank3<double> N = nabla_g(K, g, x);
  CParts c{};
  c.dkg = dKg_eval(g, K, x, X, Y, Z);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      c.gZZ += gg[a][b] * Z[a] * Z[b];
      c.gZX += gg[a][b] * Z[a] * X[b];
      c.gZY += gg[a][b] * Z[a] * Y[b];
      for (int l = 0; l < 4; ++l) {
        c.nXZZ += X[l] * N[l][a][b] * Z[a] * Z[b];
        c.nYZZ += Y[l] * N[l][a][b] * Z[a] * Z[b];
      }
    }
  return c;
}

}  // namespace

double dKg_eval(const Metric& g, const LinearConnection& K, const Vec4<double>& x, const Vec4<double>& X,
                const Vec4<double>& Y, const Vec4<double>& Z) {
  Rank3<double> dg;
  Mat4<double> gg = g.g(x, dg);
  Rank3<double> k = K.K(x);
  auto D = [&](int l, int m, int r) {
    double s = dg[l][m][r];
    for (int q = 0; q < 4; ++q) s += gg[m][q] * k[l][q][r];
    return s;
  };
  double s = 0;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int r = 0; r < 4; ++r) s += (D(l, m, r) - D(m, l, r)) * X[l] * Y[m] * Z[r];
  return s;
}

double condition_C(const Metric& g, const LinearConnection& K, const Vec4<double>& x, const Vec4<double>& X,
                   const Vec4<double>& Y, const Vec4<double>& Z) {
  CParts c = c_parts(g, K, x, X, Y, Z);
  return c.gZZ * c.dkg + 0.5 * c.gZX * c.nYZZ - 0.5 * c.gZY * c.nXZZ;
}

double condition_C_swapped(const Metric& g, const LinearConnection& K, const Vec4<double>& x, const Vec4<double>& X,
                           const Vec4<double>& Y, const Vec4<double>& Z) {
  CParts c = c_parts(g, K, x, X, Y, Z);
  return c.gZZ * c.dkg + 0.5 * c.gZY * c.nXZZ - 0.5 * c.gZX * c.nYZZ;
}

}  // namespace phasegeo
