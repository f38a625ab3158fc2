#include "phasegeo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "phasegeo/perturb.hpp"
#include "phasegeo/sampling.hpp"

namespace phasegeo {

using nlohmann::json;

namespace {

const std::vector<std::string> kSuites = {"spacetime", "kinematics", "structures", "perturbations"};

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", where));
  for (const auto& [k, v] : j.items()) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; });
    if (!ok) throw ConfigError(fmt::format("{}: unknown key '{}'", where, k));
  }
}

template <class T>
T get(const json& j, const char* key, const char* where, T def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}.{}: {}", where, key, e.what()));
  }
}

Params get_params(const json& j, const char* where) {
  Params p;
  if (!j.contains("params")) return p;
  const json& q = j.at("params");
  if (!q.is_object()) throw ConfigError(fmt::format("{}.params: expected an object", where));
  for (const auto& [k, v] : q.items()) {
    if (!v.is_number()) throw ConfigError(fmt::format("{}.params.{}: expected a number", where, k));
    p[k] = v.get<double>();
  }
  return p;
}

template <size_t N>
std::array<double, N> get_array(const json& j, const char* key, const char* where, std::array<double, N> def) {
  if (!j.contains(key)) return def;
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != N) throw ConfigError(fmt::format("{}.{}: expected {} numbers", where, key, N));
  std::array<double, N> r;
  for (size_t i = 0; i < N; ++i) {
    if (!a[i].is_number()) throw ConfigError(fmt::format("{}.{}: expected numbers", where, key));
    r[i] = a[i].get<double>();
  }
  return r;
}

double positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw ConfigError(fmt::format("{} must be positive", what));
  return v;
}

}  // namespace

std::vector<std::string> suite_catalog() { return kSuites; }

RunConfig parse_config(const json& j) {
  RunConfig c;
  check_keys(j, "config", {"metric", "connection", "perturbation", "constants", "sampling", "tolerances", "suites",
                           "expect"});
  if (j.contains("metric")) {
    const json& m = j.at("metric");
    check_keys(m, "metric", {"id", "params"});
    c.metric = get<std::string>(m, "id", "metric", c.metric);
    c.metric_params = get_params(m, "metric");
  }
  if (j.contains("connection")) {
    const json& k = j.at("connection");
    check_keys(k, "connection", {"kind", "phi", "coefficients"});
    auto& s = c.connection;
    s.kind = get<std::string>(k, "kind", "connection", s.kind);
    if (s.kind == "levi_civita_plus") {
      if (!k.contains("phi")) throw ConfigError("connection.phi is required for levi_civita_plus");
      const json& f = k.at("phi");
      check_keys(f, "connection.phi", {"kind", "a", "b", "components"});
      s.phi = get<std::string>(f, "kind", "connection.phi", s.phi);
      if (s.phi == "projective") {
        s.a = get_array<4>(f, "a", "connection.phi", s.a);
        s.b = get_array<4>(f, "b", "connection.phi", s.b);
      } else if (s.phi == "constant") {
        if (!f.contains("components")) throw ConfigError("connection.phi.components is required");
        const json& t = f.at("components");
        if (!t.is_array() || t.size() != 4) throw ConfigError("connection.phi.components: expected 4x4x4 numbers");
        for (int l = 0; l < 4; ++l) {
          if (!t[l].is_array() || t[l].size() != 4)
            throw ConfigError("connection.phi.components: expected 4x4x4 numbers");
          for (int n = 0; n < 4; ++n) {
            json row = json::object({{"r", t[l][n]}});
            s.constant[l][n] = get_array<4>(row, "r", "connection.phi.components", {});
          }
        }
      } else {
        throw ConfigError("connection.phi.kind must be projective or constant");
      }
    } else if (s.kind == "explicit") {
      if (!k.contains("coefficients")) throw ConfigError("connection.coefficients is required for explicit");
      const json& t = k.at("coefficients");
      if (!t.is_array() || t.size() != 4) throw ConfigError("connection.coefficients: expected 4x3 numbers");
      for (int l = 0; l < 4; ++l) {
        json row = json::object({{"r", t[l]}});
        s.coefficients[l] = get_array<3>(row, "r", "connection.coefficients", {});
      }
    } else if (s.kind != "levi_civita") {
      throw ConfigError("connection.kind must be levi_civita, levi_civita_plus or explicit");
    }
  }
  if (j.contains("perturbation")) {
    const json& q = j.at("perturbation");
    check_keys(q, "perturbation", {"kind", "sigma", "seed", "scale", "kappa", "field", "q", "m"});
    auto& s = c.perturbation;
    s.kind = get<std::string>(q, "kind", "perturbation", s.kind);
    if (s.kind == "sigma") {
      s.sigma = get<std::string>(q, "sigma", "perturbation", s.sigma);
      static const std::set<std::string> kinds = {"psi", "phi", "nu_tau", "mixed", "random"};
      if (!kinds.count(s.sigma)) throw ConfigError("perturbation.sigma must be psi, phi, nu_tau, mixed or random");
      s.seed = get<uint64_t>(q, "seed", "perturbation", s.seed);
      s.scale = get<double>(q, "scale", "perturbation", s.scale);
      s.kappa = get<double>(q, "kappa", "perturbation", s.kappa);
    } else if (s.kind == "em") {
      if (q.contains("field")) {
        const json& f = q.at("field");
        check_keys(f, "perturbation.field", {"id", "params"});
        s.field = get<std::string>(f, "id", "perturbation.field", s.field);
        s.field_params = get_params(f, "perturbation.field");
      }
      s.q = get<double>(q, "q", "perturbation", s.q);
      s.m = positive(get<double>(q, "m", "perturbation", s.m), "perturbation.m");
    } else if (s.kind != "none") {
      throw ConfigError("perturbation.kind must be none, sigma or em");
    }
  }
  if (j.contains("constants")) {
    const json& k = j.at("constants");
    check_keys(k, "constants", {"c", "hbar", "m_particle"});
    c.constants.c = positive(get<double>(k, "c", "constants", 1.0), "constants.c");
    c.constants.hbar = positive(get<double>(k, "hbar", "constants", 1.0), "constants.hbar");
    c.constants.m = positive(get<double>(k, "m_particle", "constants", 1.0), "constants.m_particle");
  }
  if (j.contains("sampling")) {
    const json& s = j.at("sampling");
    check_keys(s, "sampling", {"count", "seed", "ranges", "max_alpha"});
    c.samples = get<int>(s, "count", "sampling", c.samples);
    if (c.samples < 1) throw ConfigError("sampling.count must be at least 1");
    c.seed = get<uint64_t>(s, "seed", "sampling", c.seed);
    c.max_alpha = positive(get<double>(s, "max_alpha", "sampling", c.max_alpha), "sampling.max_alpha");
    if (s.contains("ranges")) {
      const json& r = s.at("ranges");
      check_keys(r, "sampling.ranges", {"lo", "hi"});
      Box b;
      b.lo = get_array<4>(r, "lo", "sampling.ranges", {});
      b.hi = get_array<4>(r, "hi", "sampling.ranges", {});
      for (int a = 0; a < 4; ++a)
        if (!(b.lo[a] < b.hi[a])) throw ConfigError("sampling.ranges: lo must be below hi");
      c.box = b;
    }
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    check_keys(t, "tolerances", {"algebraic", "derivative", "bracket"});
    c.tol.algebraic = positive(get<double>(t, "algebraic", "tolerances", c.tol.algebraic), "tolerances.algebraic");
    c.tol.derivative = positive(get<double>(t, "derivative", "tolerances", c.tol.derivative), "tolerances.derivative");
    c.tol.bracket = positive(get<double>(t, "bracket", "tolerances", c.tol.bracket), "tolerances.bracket");
  }
  if (j.contains("suites")) {
    c.suites = get<std::vector<std::string>>(j, "suites", "config", {});
    for (const auto& s : c.suites)
      if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end())
        throw ConfigError(fmt::format("unknown suite '{}'", s));
  }
  if (j.contains("expect")) {
    const json& e = j.at("expect");
    check_keys(e, "expect", {"acc", "contact", "acpj", "jacobi", "dual_pair", "symplectic", "poisson"});
    c.expect = get<std::map<std::string, bool>>(j, "expect", "config", {});
  }
  return c;
}

json config_json(const RunConfig& c) {
  json j;
  j["metric"] = {{"id", c.metric}, {"params", c.metric_params}};
  json k = {{"kind", c.connection.kind}};
  if (c.connection.kind == "levi_civita_plus") {
    if (c.connection.phi == "projective")
      k["phi"] = {{"kind", "projective"}, {"a", c.connection.a}, {"b", c.connection.b}};
    else
      k["phi"] = {{"kind", "constant"}, {"components", c.connection.constant}};
  } else if (c.connection.kind == "explicit") {
    k["coefficients"] = c.connection.coefficients;
  }
  j["connection"] = k;
  const auto& p = c.perturbation;
  json q = {{"kind", p.kind}};
  if (p.kind == "sigma") {
    q["sigma"] = p.sigma;
    q["seed"] = p.seed;
    q["scale"] = p.scale;
    q["kappa"] = p.kappa;
  } else if (p.kind == "em") {
    q["field"] = {{"id", p.field}, {"params", p.field_params}};
    q["q"] = p.q;
    q["m"] = p.m;
  }
  j["perturbation"] = q;
  j["constants"] = {{"c", c.constants.c}, {"hbar", c.constants.hbar}, {"m_particle", c.constants.m}};
  json s = {{"count", c.samples}, {"seed", c.seed}, {"max_alpha", c.max_alpha}};
  if (c.box) s["ranges"] = {{"lo", c.box->lo}, {"hi", c.box->hi}};
  j["sampling"] = s;
  j["tolerances"] = {{"algebraic", c.tol.algebraic}, {"derivative", c.tol.derivative}, {"bracket", c.tol.bracket}};
  j["suites"] = c.suites;
  j["expect"] = c.expect;
  return j;
}

std::string config_hash(const RunConfig& c) {
  std::string s = config_json(c).dump();
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

namespace {

struct ConstantGamma : ExactPartials {
  Mat43<double> G;
  template <class S>
  Mat43<S> operator()(const PhasePointT<S>&) const {
    Mat43<S> r;
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 3; ++i) r[l][i] = S(G[l][i]);
    return r;
  }
};

struct Setup {
  MetricPtr g;
  LinearPtr lc, K;
  PhasePtr G, base;
  SigmaPtr sigma;
  TensorPtr phi, psi;
  EMPtr em;
  bool linear = true;  // Gamma = chi(K)
};

Setup build(const RunConfig& c) {
  Setup s;
  try {
    s.g = make_metric(c.metric, c.metric_params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  s.lc = levi_civita(s.g);
  s.K = s.lc;
  const auto& k = c.connection;
  if (k.kind == "levi_civita_plus")
    s.K = k.phi == "projective" ? plus_projective(s.lc, k.a, k.b) : plus_constant(s.lc, k.constant);
  if (k.kind == "explicit") {
    s.base = make_phase(ConstantGamma{{}, k.coefficients}, "explicit");
    s.linear = false;
  } else {
    s.base = chi(s.K);
  }
  s.G = s.base;
  const auto& p = c.perturbation;
  double cc = c.constants.c;
  if (p.kind == "sigma") {
    if (p.sigma == "psi") {
      s.psi = random_symmetric_tensor(p.seed, p.scale);
      s.sigma = sigma_psi(s.psi);
    } else if (p.sigma == "phi") {
      s.phi = random_antisymmetric_tensor(p.seed, p.scale);
      s.sigma = sigma_phi(s.phi);
    } else if (p.sigma == "mixed") {
      s.psi = random_symmetric_tensor(p.seed, p.scale);
      s.phi = random_antisymmetric_tensor(p.seed + 1, p.scale);
      s.sigma = sigma_mixed(s.psi, s.phi);
    } else if (p.sigma == "nu_tau") {
      s.sigma = sigma_nu_tau(c.constants, p.kappa);
    } else {
      s.sigma = sigma_random(p.seed, p.scale);
    }
    s.G = sum(s.base, sigma_only(s.g, s.sigma, cc));
    s.linear = false;
  } else if (p.kind == "em") {
    try {
      s.em = make_em_field(p.field, p.field_params);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    s.phi = em_phi(s.em, p.q, p.m);
    s.sigma = sigma_phi(s.phi);
    s.G = sum(s.base, sigma_only(s.g, s.sigma, cc));
    s.linear = false;
  }
  return s;
}

double rel(double num, double den) { return den > 0 ? num / den : num; }

struct PointRows {
  std::vector<std::tuple<std::string, std::string, double, double>> rows;
  void add(const std::string& suite, const std::string& name, double v, double tol) {
    rows.emplace_back(suite, name, v, tol);
  }
};

Blade<double> diff(const Blade<double>& a, const Blade<double>& b) { return a - b; }

void spacetime_rows(const RunConfig& c, const Setup& s, const PhasePoint& p, PointRows& out) {
  const auto& t = c.tol;
  TanPoint<double> z = tangent_points(*s.g, {p}, c.constants.c)[0];
  TangentResiduals r = tangent_residuals(*s.g, *tangent_connection(s.K), z);
  out.add("spacetime", "duality", r.duality, t.algebraic);
  out.add("spacetime", "sharp_flat", r.sharp_flat, t.algebraic);
  Vec4<D1> xd;
  for (int a = 0; a < 4; ++a) xd[a] = variable<D1>(p.x[a], a);
  Mat4<D1> gd = s.g->g(xd);
  double dscale = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int e = 0; e < 4; ++e) dscale = std::max(dscale, std::abs(gd[a][b].d[e]));
  dscale = std::max(dscale, 1.0);
  auto max3 = [](const Rank3<double>& T) {
    double m = 0;
    for (const auto& a : T)
      for (const auto& b : a)
        for (double v : b) m = std::max(m, std::abs(v));
    return m;
  };
  out.add("spacetime", "levi_civita_torsion", max3(torsion(*s.lc, p.x)), t.algebraic);
  out.add("spacetime", "levi_civita_metricity", max3(nabla_g(*s.lc, *s.g, p.x)) / dscale, t.derivative);
  out.add("spacetime", "levi_civita_dKg", max3(dK_g(*s.lc, *s.g, p.x)) / dscale, t.derivative);
  Rank4 R = curvature(*s.lc, p.x);
  double bianchi = 0, rmax = 0;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        for (int q = 0; q < 4; ++q) {
          rmax = std::max(rmax, std::abs(R[l][m][n][q]));
          bianchi = std::max(bianchi, std::abs(R[l][m][n][q] + R[m][q][n][l] + R[q][l][n][m]));
        }
  out.add("spacetime", "bianchi_first", rel(bianchi, std::max(rmax, 1.0)), t.derivative);
}

void kinematics_rows(const RunConfig& c, const Setup& s, const PhasePoint& p, PointRows& out) {
  double cc = c.constants.c;
  for (const auto& r : useful_identities(*s.g, p, cc)) out.add("kinematics", "useful." + r.name, r.value, c.tol.algebraic);
  for (const auto& r : frame_identities(*s.g, p, cc)) out.add("kinematics", "frame." + r.name, r.value, c.tol.algebraic);
  for (const auto& r : nabla_hat_identities(*s.g, *s.K, p, cc))
    out.add("kinematics", "nabla_hat." + r.name, r.value, c.tol.derivative);
}

void structure_rows(const RunConfig& c, const Setup& s, const PhasePoint& p, PointRows& out) {
  const auto& t = c.tol;
  double cc = c.constants.c;
  const PhaseConnection& G = *s.G;
  PhaseResiduals pr = phase_residuals(*s.g, G, p, c.constants);
  for (const char* n : {"dual_gamma_omega", "dual_tau_lambda", "dual_tau_gamma", "dual_pairing", "dual_sharp_flat"})
    out.add("structures", n, pr.r.at(n), t.algebraic);
  out.add("structures", "volume_covariant", pr.r.at("volume_covariant"), t.derivative);
  out.add("structures", "volume_contravariant", pr.r.at("volume_contravariant"), t.derivative);
  VolumeCoefficients v1 = volume_checks(*s.g, G, p, cc), v0 = volume_checks(*s.g, *chi(s.lc), p, cc);
  out.add("structures", "volume_gamma_independence",
          std::max(std::abs(v1.covariant - v0.covariant) / std::abs(v0.covariant),
                   std::abs(v1.contravariant - v0.contravariant) / std::abs(v0.contravariant)),
          t.algebraic);

  auto st = phase_state<D1>(*s.g, G, p, cc);
  Blade<D1> Od = omega_form(st.k, st.G), Ld = lambda_vec(st.k, st.G), gd = gamma_vec(st.k, st.G);
  Blade<double> O = values_of(Od), L = values_of(Ld), gm = values_of(gd);
  double nO = max_abs(O), nL = max_abs(L), ng = max_abs(gm), nt = max_abs(tau_at(*s.g, p, cc));
  Blade<double> GL = schouten(gd, Ld), LL = schouten(Ld, Ld);
  out.add("structures", "d_omega_expansion", rel(max_abs(diff(exterior_derivative(Od), d_omega_printed(*s.g, G, p, cc))), nO),
          t.derivative);
  auto zero = zero_phase_connection();
  out.add("structures", "gamma_lambda_expansion",
          rel(max_abs(diff(GL, gamma_lambda_printed(*s.g, G, *zero, p, cc))), ng * nL), t.bracket);
  auto dgam = random_sigma(c.seed + 11, 0.3);
  out.add("structures", "gamma_lambda_expansion_general_gamma",
          rel(max_abs(diff(gamma_lambda_generic(*s.g, G, *dgam, p, cc), gamma_lambda_printed(*s.g, G, *dgam, p, cc))),
              ng * nL),
          t.bracket);
  out.add("structures", "gamma_lambda_adapted",
          rel(max_abs(diff(GL, gamma_lambda_adapted_printed(*s.g, G, p, cc))), ng * nL), t.bracket);
  out.add("structures", "lambda_lambda_expansion", rel(max_abs(diff(LL, lambda_lambda_printed(*s.g, G, p, cc))), nL * nL),
          t.bracket);
  out.add("structures", "lambda_lambda_adapted",
          rel(max_abs(diff(LL, lambda_lambda_adapted_printed(*s.g, G, p, cc))), nL * nL), t.bracket);
  out.add("structures", "lie_gamma_tau_expansion",
          rel(max_abs(diff(lie_gamma_tau(*s.g, G, p, cc), lie_gamma_tau_printed(*s.g, G, p, cc))), nt), t.derivative);
  out.add("structures", "lie_R_tau_expansion",
          rel(max_abs(diff(lie_R_tau(*s.g, G, p, cc), lie_R_tau_printed(*s.g, G, p, cc))), nt), t.derivative);
  OmegaKernel ker = omega_kernel(*s.g, G, p, cc);
  out.add("structures", "omega_kernel_rank", ker.ratio, 1e-6);
  out.add("structures", "omega_kernel_gamma", ker.alignment, t.algebraic);
  if (s.linear) {
    ContactPullbacks cp = contact_pullbacks(*s.g, *s.K, p, cc);
    out.add("structures", "omega_perp_pullback", rel(max_abs(diff(cp.perp, O)), nO), t.derivative);
    out.add("structures", "pullback_splitting", rel(max_abs(cp.full - cp.parallel - cp.perp), nO), t.algebraic);
    out.add("structures", "pullback_direct", rel(max_abs(diff(cp.direct, cp.full)), nO), t.derivative);
  }
}

void perturbation_rows(const RunConfig& c, const Setup& s, const PhasePoint& p, PointRows& out) {
  const auto& t = c.tol;
  double cc = c.constants.c;
  const Metric& g = *s.g;
  Kinematics<double> k = kinematics(g, p, cc);
  PhasePtr Sigma = split_connection(s.G, s.g);
  PhasePtr metric = metric_phase_connection(s.g);
  Blade<double> Og = omega_at(g, *metric, p, cc), Lg = lambda_at(g, *metric, p, cc);
  double nO = max_abs(Og), nL = max_abs(Lg), nt = max_abs(tau_at(g, p, cc));
  Blade<double> Oa = omega_a(g, *Sigma, p, cc), La = lambda_a(g, *Sigma, p, cc);
  out.add("perturbations", "omega_a_alt_sigma_bar", rel(max_abs(Oa + alt_form(sigma_bar(k, Sigma->Gamma(p)))), nO),
          t.algebraic);
  Blade<double> Lt = lie_gamma_tau(g, *s.G, p, cc) - lie_gamma_tau(g, *metric, p, cc);
  out.add("perturbations", "lie_sigma_tau", rel(max_abs(Lt - (1.0 / (cc * cc)) * Oa), nt), t.derivative);

  PhasePtr Gs = sum(s.G, sigma_only(s.g, sigma_psi(random_symmetric_tensor(c.seed + 7, 0.2)), cc));
  out.add("perturbations", "equivalence_omega", rel(max_abs(omega_at(g, *Gs, p, cc) - omega_at(g, *s.G, p, cc)), nO),
          t.algebraic);
  out.add("perturbations", "equivalence_lambda",
          rel(max_abs(lambda_at(g, *Gs, p, cc) - lambda_at(g, *s.G, p, cc)), nL), t.algebraic);

  std::seed_seq seq{uint32_t(c.seed), uint32_t(c.seed >> 32), 0x5eedu};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Vec4<double> A;
  for (double& a : A) a = 0.2 * U(rng);
  RegularVolume rv = invariance_of_regular_volume(s.g, *s.G, A, p, cc);
  out.add("perturbations", "regular_volume", rel(std::abs(rv.perturbed - rv.metric), std::abs(rv.metric)), t.algebraic);

  const auto& pk = c.perturbation;
  if (s.sigma) {
    Mat4<double> sg = s.sigma->sigma(k, p);
    double ns = 0;
    for (const auto& r : sg)
      for (double v : r) ns = std::max(ns, std::abs(v));
    Mat4<double> rt = sigma_bar(k, sigma_to_Sigma(g, *s.sigma, p, cc)), br = bracket_sigma(k, sg);
    double e = 0, asym = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        e = std::max(e, std::abs(rt[a][b] - br[a][b]));
        asym = std::max(asym, std::abs(br[a][b] - br[b][a]));
      }
    out.add("perturbations", "sigma_round_trip", rel(e, ns), t.algebraic);
    if (pk.kind == "sigma" && (pk.sigma == "psi" || pk.sigma == "nu_tau")) {
      out.add("perturbations", "omega_a_vanishes", rel(max_abs(Oa), nO), t.algebraic);
      out.add("perturbations", "lambda_a_vanishes", rel(max_abs(La), nL), t.algebraic);
      if (pk.sigma == "psi") out.add("perturbations", "bracket_sigma_symmetric", rel(asym, ns), t.algebraic);
    }
  }
  if (s.phi && !s.psi) {
    Mat4<double> ph = s.phi->T(p.x);
    out.add("perturbations", "omega_a_half_phi", rel(max_abs(Oa - 0.5 * alt_form(ph)), nO), t.algebraic);
    out.add("perturbations", "lambda_a_phi", rel(max_abs(La - lambda_a_phi_printed(g, ph, p, cc)), nL), t.algebraic);
  }
  if (s.phi && s.psi) {
    Mat43<double> a = sigma_only(s.g, s.sigma, cc)->Gamma(p);
    Mat43<double> b = printed_mixed_connection(s.g, s.psi, s.phi, cc)->Gamma(p), m = metric->Gamma(p);
    double e = 0, n = 0;
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 3; ++i) {
        e = std::max(e, std::abs(b[l][i] - m[l][i] - a[l][i]));
        n = std::max(n, std::abs(a[l][i]));
      }
    out.add("perturbations", "mixed_combined_sigma", rel(e, n), t.algebraic);
  }
  if (s.em) {
    out.add("perturbations", "em_closedness", closedness_residual(*s.em, p.x), t.derivative);
    if (c.metric == "minkowski" && pk.field == "uniform" && c.connection.kind == "levi_civita") {
      auto it = pk.field_params.find("E");
      double E = it == pk.field_params.end() ? 1.0 : it->second;
      out.add("perturbations", "em_potential", potential_residual(g, *s.G, uniform_potential(E, pk.q, pk.m), p, cc),
              t.derivative);
    }
  }
}

void fold(Report& rep, const PointRows& rows, int idx) {
  for (const auto& [suite, name, v, tol] : rows.rows) {
    IdentityRow& r = rep.suites[suite][name];
    r.tolerance = tol;
    double val = std::isfinite(v) ? v : std::numeric_limits<double>::max();
    if (r.worst_point < 0 || val > r.max_residual) {
      r.max_residual = val;
      r.worst_point = idx;
    }
  }
}

bool wants(const RunConfig& c, const char* s) { return std::find(c.suites.begin(), c.suites.end(), s) != c.suites.end(); }

}  // namespace

Report run(const RunConfig& config) {
  Setup s = build(config);
  Report rep;
  rep.config_hash = config_hash(config);
  rep.metric = s.g->id();
  rep.connection = s.base->name();
  rep.perturbation = config.perturbation.kind == "sigma" ? "sigma:" + config.perturbation.sigma
                     : config.perturbation.kind == "em"  ? "em:" + config.perturbation.field
                                                         : "none";
  rep.constants = config.constants;
  rep.finite_difference = s.G->finite_difference();

  SamplingOptions o;
  o.count = config.samples;
  o.seed = config.seed;
  o.box = config.box;
  o.max_alpha = config.max_alpha;
  SampleSet S = sample_phase_points(*s.g, o);
  rep.attempts = S.attempts;
  rep.rejected = S.rejected;
  if (S.points.empty()) throw AdmissibilityError("no admissible sample points");

  Tolerances tol = config.tol;
  if (rep.finite_difference) {
    tol.derivative *= 1e3;
    tol.bracket *= 1e3;
  }
  RunConfig eff = config;
  eff.tol = tol;
  for (const auto& name : config.suites) rep.suites[name];

  std::vector<PhasePoint> used;
  for (size_t n = 0; n < S.points.size(); ++n) {
    const PhasePoint& p = S.points[n];
    PointRows rows;
    try {
      if (wants(config, "spacetime")) spacetime_rows(eff, s, p, rows);
      if (wants(config, "kinematics")) kinematics_rows(eff, s, p, rows);
      if (wants(config, "structures")) structure_rows(eff, s, p, rows);
      if (wants(config, "perturbations")) perturbation_rows(eff, s, p, rows);
    } catch (const AdmissibilityError&) {
      ++rep.skipped;
      continue;
    }
    fold(rep, rows, int(n));
    used.push_back(p);
  }
  for (const auto& p : S.points) rep.points.push_back({p.x[0], p.x[1], p.x[2], p.x[3], p.v[0], p.v[1], p.v[2]});
  if (used.empty()) throw AdmissibilityError("no admissible sample points");

  if (wants(config, "spacetime")) {
    TangentVerdict tv =
        classify_tangent_structure(*s.g, *tangent_connection(s.K), tangent_points(*s.g, used, config.constants.c),
                                   tol.bracket);
    rep.tangent = TangentRecord{tv.symplectic, tv.poisson};
  }
  if (wants(config, "structures")) {
    StructureVerdict v = classify_phase_structure(*s.g, *s.G, used, tol.bracket, config.constants);
    VerdictRecord r;
    r.acc = v.acc;
    r.contact = v.contact;
    r.acpj = v.acpj;
    r.jacobi = v.jacobi;
    r.dual_pair = v.dual_pair;
    r.tol = v.tol;
    r.residuals = v.residuals;
    for (auto& [k, val] : r.residuals)
      if (!std::isfinite(val)) val = std::numeric_limits<double>::max();
    r.worst = v.worst;
    auto ok = [&](const char* n) { return r.residuals.at(n) <= r.tol; };
    bool lie = ok("lie_gamma_tau"), exact = ok("omega_exact"), br = ok("gamma_lambda") && ok("lambda_lambda");
    r.coherent = lie == exact && exact == br;
    rep.verdict = r;
  }

  for (const auto& [flag, want] : config.expect) {
    bool actual = false;
    if (flag == "symplectic" || flag == "poisson") {
      if (!rep.tangent) throw ConfigError("expect." + flag + " requires the spacetime suite");
      actual = flag == "symplectic" ? rep.tangent->symplectic : rep.tangent->poisson;
    } else {
      if (!rep.verdict) throw ConfigError("expect." + flag + " requires the structures suite");
      const auto& v = *rep.verdict;
      actual = flag == "acc" ? v.acc : flag == "contact" ? v.contact : flag == "acpj" ? v.acpj : flag == "jacobi" ? v.jacobi
                                                                                                          : v.dual_pair;
    }
    rep.expectations[flag] = {want, actual};
  }

  bool pass = true;
  for (auto& [suite, rows] : rep.suites)
    for (auto& [name, r] : rows) {
      r.pass = r.max_residual <= r.tolerance;
      pass = pass && r.pass;
    }
  for (const auto& [flag, e] : rep.expectations) pass = pass && e.expected == e.actual;
  if (rep.verdict) pass = pass && rep.verdict->coherent;
  rep.pass = pass;
  return rep;
}

int exit_code(const Report& r) { return r.pass ? kExitPass : kExitVerdict; }

bool Report::operator==(const Report& o) const {
  auto same_k = [](const Constants& a, const Constants& b) { return a.c == b.c && a.hbar == b.hbar && a.m == b.m; };
  return config_hash == o.config_hash && metric == o.metric && connection == o.connection &&
         perturbation == o.perturbation && same_k(constants, o.constants) && suites == o.suites &&
         verdict == o.verdict && tangent == o.tangent && expectations == o.expectations && points == o.points &&
         attempts == o.attempts && rejected == o.rejected && skipped == o.skipped &&
         finite_difference == o.finite_difference && pass == o.pass;
}

json to_json(const Report& r) {
  json j;
  j["schema"] = "phasegeo-report/1";
  j["environment"] = {{"config_hash", r.config_hash},
                      {"metric", r.metric},
                      {"connection", r.connection},
                      {"perturbation", r.perturbation},
                      {"constants", {{"c", r.constants.c}, {"hbar", r.constants.hbar}, {"m_particle", r.constants.m}}},
                      {"finite_difference", r.finite_difference}};
  j["sampling"] = {{"attempts", r.attempts}, {"rejected", r.rejected}, {"skipped", r.skipped}, {"points", r.points}};
  json s = json::object();
  for (const auto& [suite, rows] : r.suites) {
    json q = json::object();
    for (const auto& [name, row] : rows)
      q[name] = {{"max_residual", row.max_residual},
                 {"worst_point", row.worst_point},
                 {"tolerance", row.tolerance},
                 {"pass", row.pass}};
    s[suite] = q;
  }
  j["suites"] = s;
  if (r.verdict) {
    const auto& v = *r.verdict;
    j["verdict"] = {{"acc", v.acc},       {"contact", v.contact},     {"acpj", v.acpj},
                    {"jacobi", v.jacobi}, {"dual_pair", v.dual_pair}, {"coherent", v.coherent},
                    {"tol", v.tol},       {"residuals", v.residuals}, {"worst_point", v.worst}};
  } else {
    j["verdict"] = nullptr;
  }
  if (r.tangent)
    j["tangent"] = {{"symplectic", r.tangent->symplectic}, {"poisson", r.tangent->poisson}};
  else
    j["tangent"] = nullptr;
  json e = json::object();
  for (const auto& [flag, x] : r.expectations) e[flag] = {{"expected", x.expected}, {"actual", x.actual}};
  j["expectations"] = e;
  j["pass"] = r.pass;
  return j;
}

Report report_from_json(const json& j) {
  Report r;
  try {
    const json& env = j.at("environment");
    r.config_hash = env.at("config_hash").get<std::string>();
    r.metric = env.at("metric").get<std::string>();
    r.connection = env.at("connection").get<std::string>();
    r.perturbation = env.at("perturbation").get<std::string>();
    r.constants = {env.at("constants").at("c").get<double>(), env.at("constants").at("hbar").get<double>(),
                   env.at("constants").at("m_particle").get<double>()};
    r.finite_difference = env.at("finite_difference").get<bool>();
    const json& smp = j.at("sampling");
    r.attempts = smp.at("attempts").get<int>();
    r.rejected = smp.at("rejected").get<int>();
    r.skipped = smp.at("skipped").get<int>();
    r.points = smp.at("points").get<std::vector<std::vector<double>>>();
    for (const auto& [suite, rows] : j.at("suites").items()) {
      auto& out = r.suites[suite];
      for (const auto& [name, row] : rows.items())
        out[name] = {row.at("max_residual").get<double>(), row.at("worst_point").get<int>(),
                     row.at("tolerance").get<double>(), row.at("pass").get<bool>()};
    }
    if (!j.at("verdict").is_null()) {
      const json& v = j.at("verdict");
      VerdictRecord x;
      x.acc = v.at("acc").get<bool>();
      x.contact = v.at("contact").get<bool>();
      x.acpj = v.at("acpj").get<bool>();
      x.jacobi = v.at("jacobi").get<bool>();
      x.dual_pair = v.at("dual_pair").get<bool>();
      x.coherent = v.at("coherent").get<bool>();
      x.tol = v.at("tol").get<double>();
      x.residuals = v.at("residuals").get<std::map<std::string, double>>();
      x.worst = v.at("worst_point").get<std::map<std::string, int>>();
      r.verdict = x;
    }
    if (!j.at("tangent").is_null())
      r.tangent = TangentRecord{j.at("tangent").at("symplectic").get<bool>(), j.at("tangent").at("poisson").get<bool>()};
    for (const auto& [flag, x] : j.at("expectations").items())
      r.expectations[flag] = {x.at("expected").get<bool>(), x.at("actual").get<bool>()};
    r.pass = j.at("pass").get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string emit_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

std::string identity_statement(const std::string& suite, const std::string& name) {
  static const std::map<std::string, std::string> st = {
      {"duality", "i_Xi Upsilon = -4 on the tangent chart"},
      {"sharp_flat", "Xi# is the inverse of Upsilon-flat"},
      {"levi_civita_torsion", "Levi-Civita connection is torsion free"},
      {"levi_civita_metricity", "Levi-Civita connection is metric: nabla g = 0"},
      {"levi_civita_dKg", "d_K g = 0 for the Levi-Civita connection"},
      {"bianchi_first", "first Bianchi identity for torsion-free curvature"},
      {"dual_gamma_omega", "gamma lies in the kernel of Omega"},
      {"dual_tau_lambda", "tau lies in the kernel of Lambda"},
      {"dual_tau_gamma", "tau(gamma) = 1"},
      {"dual_pairing", "i_Lambda Omega = -3"},
      {"dual_sharp_flat", "phase sharp and flat maps are mutually inverse"},
      {"volume_covariant", "-c^2 tau ^ Omega^3 = 3! c^4 a^4 det g"},
      {"volume_contravariant", "-(1/c^2) gamma ^ Lambda^3 = -3! (c a)^-4 / det g"},
      {"volume_gamma_independence", "both volume coefficients are independent of Gamma"},
      {"d_omega_expansion", "d Omega matches its coordinate expansion in the curvature of Gamma"},
      {"gamma_lambda_expansion", "[gamma, Lambda] matches its coordinate expansion"},
      {"gamma_lambda_expansion_general_gamma", "[gamma, Lambda] expansion for an arbitrary second-order field gamma"},
      {"gamma_lambda_adapted", "[gamma, Lambda] matches its adapted-frame expansion"},
      {"lambda_lambda_expansion", "[Lambda, Lambda] matches its coordinate expansion"},
      {"lambda_lambda_adapted", "[Lambda, Lambda] matches its adapted-frame expansion"},
      {"lie_gamma_tau_expansion", "L_Gamma tau matches its coordinate expansion"},
      {"lie_R_tau_expansion", "L_R tau matches its coordinate expansion"},
      {"omega_kernel_rank", "Omega has a one-dimensional kernel (sigma_7 / sigma_6)"},
      {"omega_kernel_gamma", "the kernel of Omega is spanned by gamma"},
      {"omega_perp_pullback", "Omega is the pullback of the orthogonal part of the scaled Upsilon"},
      {"pullback_splitting", "pullback of scaled Upsilon splits into parallel and orthogonal parts"},
      {"pullback_direct", "printed pullback of scaled Upsilon matches the generic pullback"},
      {"omega_a_alt_sigma_bar", "Omega[g, Gamma] - Omega[g] = -alt Sigma_"},
      {"lie_sigma_tau", "L_Sigma tau = (1/c^2) Omega^a"},
      {"equivalence_omega", "adding a symmetric Sigma_ leaves Omega unchanged"},
      {"equivalence_lambda", "adding a symmetric Sigma_ leaves Lambda unchanged"},
      {"regular_volume", "(-c^2 tau + A) ^ Omega^3 does not depend on Gamma"},
      {"sigma_round_trip", "Sigma_ of Sigma(sigma) equals [sigma]"},
      {"omega_a_vanishes", "Omega^a = 0 for a sigma of symmetric type"},
      {"lambda_a_vanishes", "Lambda^a = 0 for a sigma of symmetric type"},
      {"bracket_sigma_symmetric", "[sigma] is symmetric in the psi construction"},
      {"omega_a_half_phi", "Omega^a = phi / 2"},
      {"lambda_a_phi", "Lambda^a = 1/2 alt((nu_tau o g#) (x) (nu_tau o g#))(phi)"},
      {"mixed_combined_sigma", "combined Sigma for omega = psi + phi equals the composition of both paths"},
      {"em_closedness", "dF = 0"},
      {"em_potential", "Omega = d(-c^2 tau + A) for a spacetime potential A"},
  };
  auto it = st.find(name);
  if (it != st.end()) return it->second;
  auto dot = name.find('.');
  if (suite == "kinematics" && dot != std::string::npos) {
    std::string group = name.substr(0, dot), rest = name.substr(dot + 1);
    if (group == "useful") return "useful identity " + rest;
    if (group == "frame") return "frame relation " + rest;
    if (group == "nabla_hat") return "covariant derivative formula " + rest;
  }
  return name;
}

std::string emit_markdown(const Report& r) {
  std::ostringstream o;
  o << "# phasegeo report\n\n";
  o << fmt::format("- metric: `{}`\n- connection: `{}`\n- perturbation: `{}`\n", r.metric, r.connection, r.perturbation);
  o << fmt::format("- constants: c = {}, hbar = {}, m = {}\n", r.constants.c, r.constants.hbar, r.constants.m);
  o << fmt::format("- points: {} sampled, {} rejected, {} skipped\n", r.points.size(), r.rejected, r.skipped);
  o << fmt::format("- config hash: `{}`\n", r.config_hash);
  if (r.finite_difference) o << "- finite-difference partials: tolerances relaxed by 1e3\n";
  o << fmt::format("- result: **{}**\n\n", r.pass ? "pass" : "FAIL");
  if (r.verdict) {
    const auto& v = *r.verdict;
    auto b = [](bool x) { return x ? "yes" : "no"; };
    o << "## Structure verdict\n\n| ACC | contact | ACPJ | Jacobi | dual pair | coherent |\n|---|---|---|---|---|---|\n";
    o << fmt::format("| {} | {} | {} | {} | {} | {} |\n\n", b(v.acc), b(v.contact), b(v.acpj), b(v.jacobi),
                     b(v.dual_pair), b(v.coherent));
    o << "| Residual | Max | Tolerance |\n|---|---|---|\n";
    for (const auto& [k, x] : v.residuals) o << fmt::format("| {} | {:.3e} | {:.1e} |\n", k, x, v.tol);
    o << "\n";
  }
  if (r.tangent)
    o << fmt::format("Tangent structure: symplectic {}, Poisson {}\n\n", r.tangent->symplectic ? "yes" : "no",
                     r.tangent->poisson ? "yes" : "no");
  if (!r.expectations.empty()) {
    o << "## Expectations\n\n| Flag | Expected | Actual | |\n|---|---|---|---|\n";
    for (const auto& [f, e] : r.expectations)
      o << fmt::format("| {} | {} | {} | {} |\n", f, e.expected, e.actual, e.expected == e.actual ? "✓" : "✗");
    o << "\n";
  }
  for (const auto& [suite, rows] : r.suites) {
    o << "## " << suite << "\n\n| Identity | Statement | Max residual | Tolerance | |\n|---|---|---|---|---|\n";
    for (const auto& [name, row] : rows)
      o << fmt::format("| {} | {} | {:.3e} | {:.1e} | {} |\n", name, identity_statement(suite, name), row.max_residual,
                       row.tolerance, row.pass ? "✓" : "✗");
    o << "\n";
  }
  return o.str();
}

}  // namespace phasegeo
