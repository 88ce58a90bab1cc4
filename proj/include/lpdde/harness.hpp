#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lpdde/nonlinear.hpp"
#include "lpdde/quadrature.hpp"

namespace lpdde {

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ExperimentKind {
  Solve,
  Dependence,
  Lipschitz,
  Smooth,
  Composition,
  Semiflow,
  Discontinuity
};

std::string toString(ExperimentKind kind);
ExperimentKind parseExperimentKind(const std::string& name);

/// A piecewise function as written in a config: breakpoints, per-piece
/// monomial coefficients [piece][component][k] in the global variable, and
/// the distinguished endpoint value.
struct FunctionSpec {
  std::vector<double> breakpoints;
  std::vector<std::vector<std::vector<double>>> coefficients;
  std::vector<double> endpointValue;

  PiecewiseFunction build() const;
};

struct SpotCheck {
  double t = 0.0;
  std::vector<double> value;
  double tolerance = 1e-7;
};

struct ExperimentConfig {
  std::string name;
  ExperimentKind kind = ExperimentKind::Solve;
  std::string nonlinearity = "linear";
  NonlinearityParams params;
  double R = 1.0;
  double r = 1.0;
  double p = 2.0;
  double T = 1.0;
  int N = 1;
  /// Initial history (on [-R, 0]) or, for composition, the function g.
  std::optional<FunctionSpec> history;
  /// Base perturbation / direction; random when absent.
  std::optional<FunctionSpec> perturbation;
  int K = 12;
  /// Seeded instances per experiment where a corpus applies.
  int corpus = 1;
  QuadratureConfig quadrature;
  std::optional<std::uint64_t> seed;
  /// Grid points for trajectory output.
  int grid = 1001;
  std::vector<SpotCheck> expect;
  /// Composition: target exponent q and the domain [a, b].
  double q = 1.0;
  double domainLower = 0.0;
  double domainUpper = 1.0;
  /// Discontinuity demo: values of n.
  std::vector<int> ns{1, 10, 100, 1000, 10000};
};

struct SuiteConfig {
  std::vector<ExperimentConfig> experiments;
  std::optional<std::string> output;
  std::uint64_t seed = 1;
};

/// Parses a JSON suite document. Throws ConfigError.
SuiteConfig parseSuiteConfig(const std::string& text);
SuiteConfig loadSuiteConfig(const std::filesystem::path& path);

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Header row, 17 significant digits, LF line endings.
std::string toCsv(const CsvTable& table);

/// One certified claim: pass iff measured <= bound.
struct ClaimRow {
  std::string experiment;
  std::string claim;
  double bound = 0.0;
  double measured = 0.0;
  bool pass = false;
};

struct ExperimentResult {
  std::string name;
  ExperimentKind kind = ExperimentKind::Solve;
  std::vector<CsvTable> tables;
  std::vector<ClaimRow> claims;
  /// Non-empty when the experiment threw.
  std::string error;

  bool passed() const;
};

struct SuiteResult {
  std::vector<ExperimentResult> experiments;
  bool passed() const;
};

ExperimentResult runExperiment(const ExperimentConfig& cfg, std::uint64_t seed);

/// Runs every experiment, up to `jobs` at a time; results keep config order.
/// Experiment i without its own seed uses suite seed + i.
SuiteResult runSuite(const SuiteConfig& cfg, int jobs = 1);

/// One CSV per table as <experiment>_<table>.csv plus claims.csv. Nothing is
/// written for an empty suite.
void writeArtifacts(const SuiteResult& result, const std::filesystem::path& dir);

/// One line per claim and a closing verdict.
std::string formatSummary(const SuiteResult& result);

/// Rows (n, input gap, analytic input gap, output gap) for phi = 0 against
/// phi_n = indicator of [-r - 1/n, -r + 1/n] within [-R, 0).
CsvTable runDiscontinuityDemo(const Nonlinearity& nl, double R, double r,
                              double p, const std::vector<int>& ns,
                              const QuadratureConfig& q);

}  // namespace lpdde
