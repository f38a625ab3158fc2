#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "phasegeo/phase.hpp"

namespace phasegeo {

std::vector<double> phase_flat(const Blade<double>& O, const std::vector<double>& tau, const std::vector<double>& X,
                               const Constants& k) {
  std::vector<double> r = musical_flat(O, X);
  double tX = 0;
  for (int a = 0; a < O.n; ++a) tX += tau[a] * X[a];
  double w = k.m * std::pow(k.c, 4) / k.hbar * tX;
  for (int a = 0; a < O.n; ++a) r[a] += w * tau[a];
  return r;
}

std::vector<double> phase_sharp(const Blade<double>& L, const std::vector<double>& gamma, const std::vector<double>& a,
                                const Constants& k) {
  std::vector<double> r = musical_sharp(L, a);
  double ag = 0;
  for (int A = 0; A < L.n; ++A) ag += a[A] * gamma[A];
  double w = k.hbar / (k.m * std::pow(k.c, 4)) * ag;
  for (int A = 0; A < L.n; ++A) r[A] += w * gamma[A];
  return r;
}

namespace {

double safe_div(double a, double b) { return b > 0 ? a / b : a; }

Blade<double> vec_blade(const std::vector<double>& v, bool up) {
  Blade<double> b(kPhaseDim, 1, up);
  b.c = v;
  return b;
}

}  // namespace

PhaseResiduals phase_residuals(const Metric& g, const PhaseConnection& Gc, const PhasePoint& p, const Constants& kc) {
  const double c = kc.c;
  auto st = phase_state<D1>(g, Gc, p, c);
  Blade<D1> Od = omega_form(st.k, st.G);
  Blade<D1> Ld = lambda_vec(st.k, st.G);
  Blade<D1> gd = gamma_vec(st.k, st.G);
  Blade<D1> td = tau_form(st.k);
  Blade<double> O = values_of(Od), L = values_of(Ld), gm = values_of(gd), t = values_of(td);
  Blade<double> dO = exterior_derivative(Od), dt = exterior_derivative(td);
  double nO = max_abs(O), nL = max_abs(L), ng = max_abs(gm), nt = max_abs(t);

  PhaseResiduals r;
  auto& m = r.r;
  m["d_omega"] = safe_div(max_abs(dO), nO);
  m["omega_exact"] = safe_div(max_abs(O + (c * c) * dt), nO);

  Blade<double> GL = schouten(gd, Ld);
  Blade<double> LL = schouten(Ld, Ld);
  Blade<double> gL = wedge(gm, L);
  m["gamma_lambda"] = safe_div(max_abs(GL), ng * nL);
  m["lambda_lambda"] = safe_div(max_abs(LL - (2.0 / (c * c)) * gL), nL * nL);

  Blade<double> Lgt = interior(gm.c, dt);
  Blade<double> E = wedge(gm, vec_blade(musical_sharp(L, Lgt.c), true));
  m["acpj_gamma"] = safe_div(max_abs((-1.0 / (c * c)) * GL - (1.0 / (c * c)) * E), ng * nL / (c * c));
  m["acpj_lambda"] = safe_div(max_abs(LL - 2.0 * wedge(gm, sharp2(L, dt))), nL * nL);

  m["dual_gamma_omega"] = safe_div(max_abs(interior(gm.c, O)), ng * nO);
  Blade<double> tL = interior(t.c, L);
  m["dual_tau_lambda"] = safe_div(max_abs(tL), nt * nL);
  double tg = 0;
  for (int a = 0; a < kPhaseDim; ++a) tg += t.c[a] * gm.c[a];
  m["dual_tau_gamma"] = std::abs(tg - 1.0);
  m["dual_pairing"] = std::abs(pairing(L, O) + 3.0) / 3.0;

  double sf = 0;
  for (int a = 0; a < kPhaseDim; ++a) {
    std::vector<double> X(kPhaseDim, 0.0);
    X[a] = 1.0;
    std::vector<double> Y = phase_sharp(L, gm.c, phase_flat(O, t.c, X, kc), kc);
    for (int b = 0; b < kPhaseDim; ++b) sf = std::max(sf, std::abs(Y[b] - X[b]));
  }
  m["dual_sharp_flat"] = sf;

  m["lie_gamma_tau"] = safe_div(max_abs(lie_gamma_tau(g, Gc, p, c)), nt);
  m["lie_R_tau"] = safe_div(max_abs(lie_R_tau(g, Gc, p, c)), nt);
  double ln = 0;
  for (int a = 0; a < 4; ++a) {
    Vec4<double> X{};
    X[a] = 1.0;
    ln = std::max(ln, max_abs(lie_nu_lie_gamma_tau(g, Gc, X, p, c)));
  }
  m["lie_nu_lie_gamma_tau"] = safe_div(ln, nt);

  VolumeCoefficients v = volume_checks(g, Gc, p, c);
  m["volume_covariant"] = std::abs(v.covariant - v.covariant_expected) / std::abs(v.covariant_expected);
  m["volume_contravariant"] = std::abs(v.contravariant - v.contravariant_expected) / std::abs(v.contravariant_expected);
  double cov_scale = c * c * nt * nO * nO * nO, con_scale = ng * nL * nL * nL / (c * c);
  m["volume_covariant_degeneracy"] = std::abs(v.covariant) > 1e-12 * cov_scale ? 0.0 : 1.0;
  m["volume_contravariant_degeneracy"] = std::abs(v.contravariant) > 1e-12 * con_scale ? 0.0 : 1.0;
  return r;
}

OmegaKernel omega_kernel(const Metric& g, const PhaseConnection& G, const PhasePoint& p, double c) {
  Blade<double> O = omega_at(g, G, p, c);
  std::vector<double> gm = gamma_at(g, G, p, c);
  Eigen::MatrixXd M(kPhaseDim, kPhaseDim);
  for (int a = 0; a < kPhaseDim; ++a)
    for (int b = 0; b < kPhaseDim; ++b) M(a, b) = full_component(O, {a, b});
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  OmegaKernel r;
  r.ratio = s(6) / s(5);
  Eigen::VectorXd n = svd.matrixV().col(6), v(kPhaseDim);
  for (int a = 0; a < kPhaseDim; ++a) v(a) = gm[a];
  r.alignment = 1.0 - std::abs(n.dot(v)) / v.norm();
  return r;
}

namespace {

const std::map<std::string, ScaleLaw>& scale_laws() {
  using R = Rational;
  static const std::map<std::string, ScaleLaw> laws = {
      {"tau", {R(-1), R(0), R(0), R(1, 2)}},
      {"omega", {R(1), R(0), R(0), R(1, 2)}},
      {"lambda", {R(-1), R(0), R(0), R(-1, 2)}},
      {"gamma", {R(1), R(0), R(0), R(-1, 2)}},
      {"pairing", {}},
      {"volume_covariant", {R(4), R(0), R(0), R(2)}},
      {"volume_contravariant", {R(-4), R(0), R(0), R(-2)}},
      {"flat_tau_term", {R(2), R(-1), R(1), R(1)}},
      {"sharp_gamma_term", {R(-2), R(1), R(-1), R(-1)}},
  };
  return laws;
}

}  // namespace

ScaleLaw scale_law(const std::string& anchor) {
  auto it = scale_laws().find(anchor);
  if (it == scale_laws().end()) throw UnknownId("unknown scale anchor: " + anchor);
  return it->second;
}

std::vector<std::string> scale_anchors() {
  std::vector<std::string> r;
  for (const auto& [k, v] : scale_laws()) r.push_back(k);
  return r;
}

void check_implications(const StructureVerdict& v) {
  if (v.contact && !v.acc) throw InternalError("contact flag set without ACC");
  if (v.jacobi && !v.acpj) throw InternalError("jacobi flag set without ACPJ");
}

StructureVerdict classify_phase_structure(const Metric& g, const PhaseConnection& G,
                                          const std::vector<PhasePoint>& samples, double tol, const Constants& k) {
  if (samples.empty()) throw std::invalid_argument("classify_phase_structure: no samples");
  StructureVerdict v;
  v.tol = tol;
  v.finite_difference = G.finite_difference();
  for (size_t n = 0; n < samples.size(); ++n) {
    PhaseResiduals r;
    try {
      r = phase_residuals(g, G, samples[n], k);
    } catch (const AdmissibilityError&) {
      ++v.skipped;
      continue;
    }
    ++v.points;
    for (const auto& [name, val] : r.r) {
      auto it = v.residuals.find(name);
      if (it == v.residuals.end() || val > it->second || std::isnan(val)) {
        v.residuals[name] = val;
        v.worst[name] = int(n);
      }
    }
  }
  if (v.points == 0) throw AdmissibilityError("no admissible sample points");
  auto ok = [&](const char* name) { return v.residuals.at(name) <= tol; };
  bool cov_regular = v.residuals.at("volume_covariant_degeneracy") == 0.0;
  bool con_regular = v.residuals.at("volume_contravariant_degeneracy") == 0.0;
  v.acc = ok("d_omega") && cov_regular;
  v.contact = v.acc && ok("omega_exact");
  v.acpj = ok("acpj_gamma") && ok("acpj_lambda") && con_regular;
  v.jacobi = v.acpj && ok("gamma_lambda") && ok("lambda_lambda");
  v.dual_pair = ok("dual_gamma_omega") && ok("dual_tau_lambda") && ok("dual_tau_gamma") && ok("dual_pairing") &&
                ok("dual_sharp_flat");
  check_implications(v);
  return v;
}

}  // namespace phasegeo
