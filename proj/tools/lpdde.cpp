// lpdde: run solver experiments and certificate suites from a JSON config.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "lpdde/harness.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void addCommon(CLI::App* cmd, Options& opt, bool configRequired) {
  auto* c = cmd->add_option("--config", opt.config, "experiment config (JSON)");
  if (configRequired) {
    c->required();
  }
  cmd->add_option("--out", opt.out, "output directory for CSV files");
  cmd->add_option("--seed", opt.seed, "suite seed");
  cmd->add_option("--jobs", opt.jobs, "experiments run concurrently")
      ->check(CLI::PositiveNumber);
}

std::filesystem::path outputDir(const Options& opt, const lpdde::SuiteConfig& suite) {
  if (!opt.out.empty()) {
    return opt.out;
  }
  if (const char* env = std::getenv("LPDDE_OUT_DIR"); env && *env) {
    return env;
  }
  return suite.output ? *suite.output : "lpdde-out";
}

lpdde::SuiteConfig defaultDemo() {
  lpdde::ExperimentConfig e;
  e.name = "discontinuity";
  e.kind = lpdde::ExperimentKind::Discontinuity;
  e.nonlinearity = "cubic";
  e.R = 1.0;
  e.r = 0.5;
  e.p = 1.0;
  lpdde::SuiteConfig suite;
  suite.experiments.push_back(e);
  return suite;
}

int run(const Options& opt, lpdde::SuiteConfig suite,
        std::optional<lpdde::ExperimentKind> only) {
  if (opt.seed) {
    suite.seed = *opt.seed;
  }
  if (only) {
    std::erase_if(suite.experiments,
                  [&](const lpdde::ExperimentConfig& e) { return e.kind != *only; });
  }
  const lpdde::SuiteResult result = lpdde::runSuite(suite, opt.jobs);
  lpdde::writeArtifacts(result, outputDir(opt, suite));
  std::cout << lpdde::formatSummary(result);
  return result.passed() ? EXIT_SUCCESS : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay equations on L^p history spaces: solver and certificates"};
  app.require_subcommand(1);
  Options opt;
  auto* solveCmd = app.add_subcommand("solve", "run the solve experiments of a config");
  auto* verifyCmd = app.add_subcommand("verify", "run every experiment of a config");
  auto* demoCmd =
      app.add_subcommand("demo", "discontinuity of the history functional");
  addCommon(solveCmd, opt, true);
  addCommon(verifyCmd, opt, true);
  addCommon(demoCmd, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*demoCmd) {
      lpdde::SuiteConfig suite =
          opt.config.empty() ? defaultDemo() : lpdde::loadSuiteConfig(opt.config);
      return run(opt, std::move(suite), lpdde::ExperimentKind::Discontinuity);
    }
    lpdde::SuiteConfig suite = lpdde::loadSuiteConfig(opt.config);
    if (*solveCmd) {
      return run(opt, std::move(suite), lpdde::ExperimentKind::Solve);
    }
    return run(opt, std::move(suite), std::nullopt);
  } catch (const lpdde::ConfigError& e) {
    std::cerr << "lpdde: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "lpdde: " << e.what() << '\n';
    return kExitFailure;
  }
}
