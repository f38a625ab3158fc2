#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "phasegeo/perturb.hpp"
#include "phasegeo/verify.hpp"

using namespace phasegeo;
using nlohmann::json;

namespace {

struct Options {
  std::string config, metric, format = "json", out;
  std::optional<uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol, c;
};

json catalog_json() {
  return {{"metrics", metric_catalog()},
          {"em_fields", em_catalog()},
          {"suites", suite_catalog()},
          {"connections", {"levi_civita", "levi_civita_plus", "explicit"}},
          {"perturbations", {"none", "sigma", "em"}},
          {"sigma_kinds", {"psi", "phi", "nu_tau", "mixed", "random"}}};
}

void write(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

RunConfig load(const Options& o, std::optional<std::vector<std::string>> suites) {
  json j = json::object();
  if (!o.config.empty()) {
    std::ifstream f(o.config);
    if (!f) throw ConfigError("cannot read config " + o.config);
    try {
      j = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid json: ") + e.what());
    }
  }
  RunConfig c = parse_config(j);
  if (!o.metric.empty() && o.metric != c.metric) {
    c.metric = o.metric;
    c.metric_params.clear();
    c.box.reset();
  }
  if (o.seed) c.seed = *o.seed;
  if (o.samples) {
    if (*o.samples < 1) throw ConfigError("--samples must be at least 1");
    c.samples = *o.samples;
  }
  if (o.tol) {
    if (!(*o.tol > 0)) throw ConfigError("--tol must be positive");
    c.tol = {*o.tol, *o.tol, *o.tol};
  }
  if (o.c) {
    if (!(*o.c > 0)) throw ConfigError("--c must be positive");
    c.constants.c = *o.c;
  }
  if (suites) c.suites = *suites;
  return c;
}

void add_run_flags(CLI::App* a, Options& o) {
  a->add_option("--config", o.config, "JSON run configuration");
  a->add_option("--metric", o.metric, "metric id (overrides the config)");
  a->add_option("--seed", o.seed, "sampling seed");
  a->add_option("--samples", o.samples, "number of sample points");
  a->add_option("--tol", o.tol, "tolerance for every identity group and the classifier");
  a->add_option("--c", o.c, "speed of light");
  a->add_option("--format", o.format, "json or markdown")->check(CLI::IsMember({"json", "markdown"}));
  a->add_option("--out", o.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space geometry identity checker"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list-catalog", list, "list catalog identifiers and exit");

  Options o;
  std::optional<std::vector<std::string>> suites;
  auto* verify = app.add_subcommand("verify", "run every configured suite");
  auto* classify = app.add_subcommand("classify", "structures suite and classifier only");
  auto* identities = app.add_subcommand("identities", "kinematics identity suite only");
  auto* catalog = app.add_subcommand("catalog", "list metrics, fields and suites");
  for (auto* a : {verify, classify, identities}) add_run_flags(a, o);
  catalog->add_option("--format", o.format, "json or markdown")->check(CLI::IsMember({"json", "markdown"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (list || catalog->parsed()) {
      json c = catalog_json();
      if (o.format == "markdown") {
        std::string s;
        for (const auto& [k, v] : c.items()) {
          s += "- " + k + ":";
          for (const auto& x : v) s += " " + x.get<std::string>();
          s += "\n";
        }
        write(s, "");
      } else {
        write(c.dump(2) + "\n", "");
      }
      return kExitPass;
    }
    if (!verify->parsed() && !classify->parsed() && !identities->parsed()) {
      std::cerr << app.help();
      return kExitConfig;
    }
    if (classify->parsed()) suites = std::vector<std::string>{"structures"};
    if (identities->parsed()) suites = std::vector<std::string>{"kinematics"};
    RunConfig cfg = load(o, suites);
    Report r = run(cfg);
    write(o.format == "markdown" ? emit_markdown(r) : emit_json(r), o.out);
    return exit_code(r);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnknownId& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
