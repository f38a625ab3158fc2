#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "phasegeo/phase.hpp"

namespace phasegeo {

// Malformed or inconsistent configuration (exit code 2, like UnknownId).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConnectionSpec {
  std::string kind = "levi_civita";  // levi_civita | levi_civita_plus | explicit
  std::string phi = "projective";    // levi_civita_plus: projective | constant
  Vec4<double> a{}, b{};             // projective psi_l = a_l + b_l sin(x^l)
  Rank3<double> constant{};          // constant Phi_l^n_m
  Mat43<double> coefficients{};      // explicit constant Gamma_l^i
};

struct PerturbationSpec {
  std::string kind = "none";  // none | sigma | em
  std::string sigma = "phi";  // psi | phi | nu_tau | mixed | random
  uint64_t seed = 1;
  double scale = 0.1;
  double kappa = 0.0;
  std::string field = "uniform";
  Params field_params;
  double q = 0.1, m = 1.0;
};

struct Tolerances {
  double algebraic = 1e-10, derivative = 1e-9, bracket = 1e-8;
};

struct RunConfig {
  std::string metric = "minkowski";
  Params metric_params;
  ConnectionSpec connection;
  PerturbationSpec perturbation;
  Constants constants;
  int samples = 50;
  uint64_t seed = 1;
  std::optional<Box> box;
  double max_alpha = 1e3;
  Tolerances tol;
  std::vector<std::string> suites = {"spacetime", "kinematics", "structures", "perturbations"};
  std::map<std::string, bool> expect;  // expected classifier flags
};

// Throws ConfigError on malformed input; UnknownId for catalog misses surfaces at run().
RunConfig parse_config(const nlohmann::json& j);
nlohmann::json config_json(const RunConfig& c);
std::vector<std::string> suite_catalog();

struct IdentityRow {
  double max_residual = 0;
  int worst_point = -1;
  double tolerance = 0;
  bool pass = true;
  bool operator==(const IdentityRow&) const = default;
};

struct Expectation {
  bool expected = false, actual = false;
  bool operator==(const Expectation&) const = default;
};

struct VerdictRecord {
  bool acc = false, contact = false, acpj = false, jacobi = false, dual_pair = false;
  bool coherent = true;  // L_Gamma tau, Omega + c^2 d tau and the bracket pair agree
  double tol = 0;
  std::map<std::string, double> residuals;
  std::map<std::string, int> worst;
  bool operator==(const VerdictRecord&) const = default;
};

struct TangentRecord {
  bool symplectic = false, poisson = false;
  bool operator==(const TangentRecord&) const = default;
};

struct Report {
  std::string config_hash;
  std::string metric, connection, perturbation;
  Constants constants;
  std::map<std::string, std::map<std::string, IdentityRow>> suites;
  std::optional<VerdictRecord> verdict;
  std::optional<TangentRecord> tangent;
  std::map<std::string, Expectation> expectations;
  std::vector<std::vector<double>> points;  // (x^0..x^3, x^1_0..x^3_0)
  int attempts = 0, rejected = 0, skipped = 0;
  bool finite_difference = false;
  bool pass = true;
  bool operator==(const Report&) const;
};

// Exit codes.
inline constexpr int kExitPass = 0, kExitVerdict = 1, kExitConfig = 2, kExitRuntime = 3;

Report run(const RunConfig& config);
int exit_code(const Report& r);

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);
std::string emit_json(const Report& r);
std::string emit_markdown(const Report& r);

// Short statement of the result each identity row checks.
std::string identity_statement(const std::string& suite, const std::string& name);

// FNV-1a 64 over the canonical config document.
std::string config_hash(const RunConfig& c);

}  // namespace phasegeo
