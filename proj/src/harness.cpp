#include "lpdde/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lpdde/composition.hpp"
#include "lpdde/semiflow.hpp"

namespace lpdde {

using nlohmann::json;

namespace {

const std::map<std::string, ExperimentKind>& kindNames() {
  static const std::map<std::string, ExperimentKind> names{
      {"solve", ExperimentKind::Solve},
      {"dependence", ExperimentKind::Dependence},
      {"lipschitz", ExperimentKind::Lipschitz},
      {"smooth", ExperimentKind::Smooth},
      {"composition", ExperimentKind::Composition},
      {"semiflow", ExperimentKind::Semiflow},
      {"discontinuity", ExperimentKind::Discontinuity}};
  return names;
}

constexpr double kBoundSlack = 1e-8;

}  // namespace

std::string toString(ExperimentKind kind) {
  for (const auto& [name, k] : kindNames()) {
    if (k == kind) {
      return name;
    }
  }
  return "unknown";
}

ExperimentKind parseExperimentKind(const std::string& name) {
  const auto it = kindNames().find(name);
  if (it == kindNames().end()) {
    throw ConfigError("unknown experiment kind '" + name + "'");
  }
  return it->second;
}

PiecewiseFunction FunctionSpec::build() const {
  return PiecewiseFunction::fromMonomials(
      breakpoints, coefficients,
      Eigen::Map<const Vector>(endpointValue.data(),
                               static_cast<Eigen::Index>(endpointValue.size())));
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  return j.at(key).get<T>();
}

FunctionSpec parseFunction(const json& j, double a, double b, int dim) {
  FunctionSpec spec;
  if (j.contains("constant")) {
    const auto value = j.at("constant").get<std::vector<double>>();
    spec.breakpoints = {a, b};
    std::vector<std::vector<double>> piece;
    for (double v : value) {
      piece.push_back({v});
    }
    spec.coefficients = {piece};
    spec.endpointValue = value;
  } else {
    spec.breakpoints = j.at("breakpoints").get<std::vector<double>>();
    spec.coefficients =
        j.at("coefficients").get<std::vector<std::vector<std::vector<double>>>>();
    spec.endpointValue = j.at("endpointValue").get<std::vector<double>>();
  }
  if (spec.endpointValue.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError("function spec has the wrong dimension");
  }
  const double tol = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  if (spec.breakpoints.size() < 2 || std::abs(spec.breakpoints.front() - a) > tol ||
      std::abs(spec.breakpoints.back() - b) > tol) {
    throw ConfigError(fmt::format("function spec must live on [{}, {}]", a, b));
  }
  return spec;
}

NonlinearityParams parseParams(const json& j) {
  NonlinearityParams params;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") {
      continue;
    }
    if (value.is_number()) {
      params.scalars[key] = value.get<double>();
    } else if (key == "matrix") {
      params.matrix = value.get<std::vector<std::vector<double>>>();
    } else if (value.is_array()) {
      params.vectors[key] = value.get<std::vector<double>>();
    } else {
      throw ConfigError("nonlinearity parameter '" + key + "' has an unsupported type");
    }
  }
  return params;
}

Nonlinearity buildNonlinearity(const ExperimentConfig& cfg) {
  NonlinearityParams params = cfg.params;
  if (!params.scalars.count("dim")) {
    params.scalars["dim"] = cfg.N;
  }
  return makeNonlinearity(cfg.nonlinearity, params);
}

void validateExperiment(const ExperimentConfig& cfg) {
  const auto fail = [&](const std::string& msg) {
    throw ConfigError("experiment '" + cfg.name + "': " + msg);
  };
  if (!(cfg.R > 0.0) || !(cfg.r > 0.0) || cfg.r > cfg.R) {
    fail("need 0 < r <= R");
  }
  if (!(cfg.p >= 1.0) || !(cfg.T > 0.0) || cfg.N < 1) {
    fail("need p >= 1, T > 0 and N >= 1");
  }
  if (cfg.corpus < 1 || cfg.grid < 2 || cfg.K < 0) {
    fail("corpus, grid and K must be positive");
  }
  try {
    cfg.quadrature.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  Nonlinearity nl;
  try {
    nl = buildNonlinearity(cfg);
  } catch (const Error& e) {
    fail(e.what());
  }
  if (nl.dimIn != cfg.N || nl.dimOut != cfg.N) {
    fail("nonlinearity does not map R^N to R^N");
  }
  const bool oneStep = cfg.kind == ExperimentKind::Dependence ||
                       cfg.kind == ExperimentKind::Lipschitz ||
                       cfg.kind == ExperimentKind::Smooth;
  if (oneStep && cfg.T > cfg.r) {
    fail("T must not exceed r");
  }
  if (cfg.kind == ExperimentKind::Lipschitz && !nl.lipschitz) {
    fail("the nonlinearity is not certified globally Lipschitz");
  }
  if (cfg.kind == ExperimentKind::Smooth) {
    if (!nl.dfGrowth) {
      fail("the nonlinearity has no Jacobian growth certificate");
    }
    if (cfg.p < nl.dfGrowth->alpha + 1.0) {
      fail(fmt::format("p = {} is below alpha + 1 = {}", cfg.p,
                       nl.dfGrowth->alpha + 1.0));
    }
    if (cfg.K < 3) {
      fail("K must be >= 3");
    }
  }
  if (cfg.kind == ExperimentKind::Composition &&
      (!(cfg.q >= 1.0) || !(cfg.domainUpper > cfg.domainLower))) {
    fail("need q >= 1 and a nonempty domain");
  }
  if (cfg.kind == ExperimentKind::Discontinuity) {
    if (cfg.ns.empty()) {
      fail("n list is empty");
    }
    for (int n : cfg.ns) {
      if (n < 1) {
        fail("n must be positive");
      }
    }
  }
}

ExperimentConfig parseExperiment(const json& j, std::size_t index) {
  ExperimentConfig cfg;
  cfg.name = field<std::string>(j, "name", fmt::format("experiment{}", index));
  cfg.kind = parseExperimentKind(j.at("kind").get<std::string>());
  if (j.contains("nonlinearity")) {
    const json& nj = j.at("nonlinearity");
    if (nj.is_string()) {
      cfg.nonlinearity = nj.get<std::string>();
    } else {
      cfg.nonlinearity = nj.at("name").get<std::string>();
      cfg.params = parseParams(nj);
    }
  }
  cfg.R = field(j, "R", cfg.R);
  cfg.r = field(j, "r", cfg.r);
  cfg.p = field(j, "p", cfg.p);
  cfg.T = field(j, "T", cfg.T);
  cfg.N = field(j, "N", cfg.N);
  cfg.K = field(j, "K", cfg.K);
  cfg.corpus = field(j, "corpus", cfg.corpus);
  cfg.grid = field(j, "grid", cfg.grid);
  cfg.q = field(j, "q", cfg.q);
  if (j.contains("domain")) {
    const auto d = j.at("domain").get<std::vector<double>>();
    if (d.size() != 2) {
      throw ConfigError("domain must be [a, b]");
    }
    cfg.domainLower = d[0];
    cfg.domainUpper = d[1];
  }
  if (j.contains("seed")) {
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("n")) {
    cfg.ns = j.at("n").get<std::vector<int>>();
  }
  if (j.contains("quadrature")) {
    const json& qj = j.at("quadrature");
    cfg.quadrature.nodesPerPiece =
        field(qj, "nodesPerPiece", cfg.quadrature.nodesPerPiece);
    cfg.quadrature.supSamplesPerPiece =
        field(qj, "supSamplesPerPiece", cfg.quadrature.supSamplesPerPiece);
    cfg.quadrature.tolerance = field(qj, "tolerance", cfg.quadrature.tolerance);
    cfg.quadrature.maxBisections =
        field(qj, "maxBisections", cfg.quadrature.maxBisections);
  }
  const bool onX = cfg.kind == ExperimentKind::Composition;
  const double a = onX ? cfg.domainLower : -cfg.R;
  const double b = onX ? cfg.domainUpper : 0.0;
  if (j.contains("history")) {
    cfg.history = parseFunction(j.at("history"), a, b, cfg.N);
  }
  if (j.contains("perturbation")) {
    cfg.perturbation = parseFunction(j.at("perturbation"), a, b, cfg.N);
  }
  if (j.contains("expect")) {
    for (const json& e : j.at("expect")) {
      SpotCheck s;
      s.t = e.at("t").get<double>();
      s.value = e.at("value").get<std::vector<double>>();
      s.tolerance = field(e, "tolerance", s.tolerance);
      if (s.value.size() != static_cast<std::size_t>(cfg.N)) {
        throw ConfigError("spot check has the wrong dimension");
      }
      cfg.expect.push_back(s);
    }
  }
  validateExperiment(cfg);
  return cfg;
}

}  // namespace

SuiteConfig parseSuiteConfig(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (!j.is_object()) {
      throw ConfigError("config must be a JSON object");
    }
    SuiteConfig suite;
    suite.seed = field<std::uint64_t>(j, "seed", suite.seed);
    if (j.contains("output")) {
      suite.output = j.at("output").get<std::string>();
    }
    if (j.contains("experiments")) {
      std::size_t i = 0;
      for (const json& e : j.at("experiments")) {
        suite.experiments.push_back(parseExperiment(e, i++));
      }
    }
    return suite;
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

SuiteConfig loadSuiteConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read config " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parseSuiteConfig(buffer.str());
}

// ---------------------------------------------------------------------------
// Output

std::string toCsv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out += (i ? "," : "") + table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) {
        out += ',';
      }
      out += fmt::format("{:.17g}", row[i]);
    }
    out += '\n';
  }
  return out;
}

bool ExperimentResult::passed() const {
  return error.empty() &&
         std::all_of(claims.begin(), claims.end(),
                     [](const ClaimRow& c) { return c.pass; });
}

bool SuiteResult::passed() const {
  return std::all_of(experiments.begin(), experiments.end(),
                     [](const ExperimentResult& e) { return e.passed(); });
}

// ---------------------------------------------------------------------------
// Experiments

CsvTable runDiscontinuityDemo(const Nonlinearity& nl, double R, double r,
                              double p, const std::vector<int>& ns,
                              const QuadratureConfig& q) {
  const HistoryConfig cfg{R, p, nl.dimIn};
  cfg.validate();
  if (!(r > 0.0) || r > R) {
    throw ParameterError("runDiscontinuityDemo: need 0 < r <= R");
  }
  const int dim = nl.dimIn;
  const HistoryElement zero = HistoryElement::zero(R, dim);
  const Vector baseValue = historyFunctional(nl, zero, r);
  CsvTable table{"discontinuity", {"n", "input_gap", "analytic_gap", "output_gap"}, {}};
  for (int n : ns) {
    if (n < 1) {
      throw ParameterError("runDiscontinuityDemo: n must be positive");
    }
    const double lo = std::max(-R, -r - 1.0 / n);
    const double hi = std::min(0.0, -r + 1.0 / n);
    std::vector<double> bps{-R};
    std::vector<Vector> values;
    if (lo > -R) {
      bps.push_back(lo);
      values.push_back(Vector::Zero(dim));
    }
    if (hi < 0.0) {
      bps.push_back(hi);
      values.push_back(Vector::Ones(dim));
      values.push_back(Vector::Zero(dim));
    } else {
      values.push_back(Vector::Ones(dim));
    }
    bps.push_back(0.0);
    const HistoryElement phiN(
        PiecewiseFunction::piecewiseConstant(bps, values, Vector::Zero(dim)));
    const double input = seminorm(phiN - zero, cfg, q);
    // Each component contributes |1|^p on the interval: |(1,...,1)| = sqrt(N).
    const double analytic =
        std::sqrt(static_cast<double>(dim)) * std::pow(hi - lo, 1.0 / p);
    const double output = (historyFunctional(nl, phiN, r) - baseValue).norm();
    table.rows.push_back({static_cast<double>(n), input, analytic, output});
  }
  return table;
}

namespace {

struct Claims {
  std::string experiment;
  std::vector<ClaimRow>* rows;

  void le(const std::string& claim, double bound, double measured) const {
    rows->push_back({experiment, claim, bound, measured, measured <= bound});
  }
  void custom(const std::string& claim, double bound, double measured,
              bool pass) const {
    rows->push_back({experiment, claim, bound, measured, pass});
  }
  /// Aggregates decay certificates: measured is the worst final/initial
  /// ratio (0 for exact sequences), bound the decay factor.
  void decay(const std::string& claim,
             const std::vector<DecayCertificate>& certs) const {
    double worst = 0.0;
    bool pass = true;
    for (const auto& c : certs) {
      pass = pass && c.passed;
      if (!c.exact) {
        worst = std::max(worst, c.initial > 0.0 ? c.final / c.initial
                                                : std::numeric_limits<double>::infinity());
      }
    }
    rows->push_back({experiment, claim, 1e-3, worst, pass});
  }
  /// max over rows of (output - bound) against the slack.
  void rowBounds(const std::string& claim, const std::vector<ScheduleTable>& tables) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& t : tables) {
      worst = std::max(worst, -t.worstBoundSlack());
    }
    le(claim, kBoundSlack, worst);
  }
};

void appendSchedule(CsvTable& table, double instance, const ScheduleTable& s) {
  for (std::size_t k = 0; k < s.rows.size(); ++k) {
    const ScheduleRow& row = s.rows[k];
    table.rows.push_back({instance, static_cast<double>(k), row.input, row.output,
                          row.ratio, row.bound});
  }
}

CsvTable scheduleTable(const std::string& name) {
  return CsvTable{name, {"instance", "k", "input", "output", "ratio", "bound"}, {}};
}

HistoryElement historyOf(const ExperimentConfig& cfg) {
  if (cfg.history) {
    return HistoryElement(snapDomain(cfg.history->build(), -cfg.R, 0.0));
  }
  return HistoryElement::constant(cfg.R, Vector::Ones(cfg.N));
}

/// The configured perturbation, or a seeded piecewise-constant one.
PiecewiseFunction directionOf(const ExperimentConfig& cfg, double a, double b,
                              std::mt19937_64& rng) {
  if (cfg.perturbation) {
    return snapDomain(cfg.perturbation->build(), a, b);
  }
  return randomPiecewiseConstant(a, b, cfg.N, 8, rng);
}

Problem problemOf(const ExperimentConfig& cfg, const Nonlinearity& nl) {
  Problem pb{HistoryConfig{cfg.R, cfg.p, cfg.N}, nl, cfg.r, historyOf(cfg)};
  pb.validate();
  return pb;
}

void runSolve(const ExperimentConfig& cfg, const Nonlinearity& nl,
              ExperimentResult& out, const Claims& claims) {
  const QuadratureConfig& q = cfg.quadrature;
  const Trajectory traj = solve(problemOf(cfg, nl), cfg.T, q);
  CsvTable table{"trajectory", {"t"}, {}};
  for (int i = 0; i < cfg.N; ++i) {
    table.header.push_back(fmt::format("x{}", i));
  }
  for (int i = 0; i < cfg.grid; ++i) {
    const double t = i + 1 == cfg.grid
                         ? cfg.T
                         : -cfg.R + (cfg.T + cfg.R) * i / (cfg.grid - 1);
    const Vector x = traj.x.evaluate(t);
    std::vector<double> row{t};
    row.insert(row.end(), x.data(), x.data() + x.size());
    table.rows.push_back(std::move(row));
  }
  out.tables.push_back(std::move(table));
  claims.le("step-continuity", 1e-10,
            restrict(traj.x, 0.0, cfg.T).continuityDefect(0.0));
  for (const SpotCheck& s : cfg.expect) {
    const Vector expected =
        Eigen::Map<const Vector>(s.value.data(), static_cast<Eigen::Index>(s.value.size()));
    claims.le(fmt::format("spot-value@{}", s.t), s.tolerance,
              (traj.x.evaluate(s.t) - expected).norm());
  }
}

void runDependence(const ExperimentConfig& cfg, const Nonlinearity& nl,
                   std::mt19937_64& rng, ExperimentResult& out,
                   const Claims& claims) {
  const Problem pb = problemOf(cfg, nl);
  CsvTable table = scheduleTable("dependence");
  std::vector<DecayCertificate> certs;
  std::vector<ScheduleTable> schedules;
  double finalGap = 0.0;
  for (int c = 0; c < cfg.corpus; ++c) {
    const HistoryElement target =
        pb.phi + HistoryElement(directionOf(cfg, -cfg.R, 0.0, rng));
    ScheduleTable s = dependenceSchedule(pb, target, cfg.T, cfg.K, cfg.quadrature);
    appendSchedule(table, c, s);
    certs.push_back(s.certifyOutputs());
    finalGap = std::max(finalGap, s.rows.back().output);
    schedules.push_back(std::move(s));
  }
  out.tables.push_back(std::move(table));
  claims.decay("continuous-dependence-decay", certs);
  claims.le("continuous-dependence-final", 1e-4, finalGap);
  claims.rowBounds("continuous-dependence-bound", schedules);
}

void runLipschitz(const ExperimentConfig& cfg, const Nonlinearity& nl,
                  std::mt19937_64& rng, ExperimentResult& out,
                  const Claims& claims) {
  const Problem pb = problemOf(cfg, nl);
  CsvTable table{"lipschitz",
                 {"instance", "solution_gap", "history_gap", "ratio",
                  "stated_constant", "sound_constant"},
                 {}};
  double worstStated = -std::numeric_limits<double>::infinity();
  double worstSound = -std::numeric_limits<double>::infinity();
  double stated = 0.0;
  double sound = 0.0;
  for (int c = 0; c < cfg.corpus; ++c) {
    const HistoryElement other =
        pb.phi + HistoryElement(directionOf(cfg, -cfg.R, 0.0, rng));
    const LipschitzSample s = lipschitzSample(pb, other, cfg.T, cfg.quadrature);
    table.rows.push_back({static_cast<double>(c), s.solutionGap, s.historyGap,
                          s.ratio, s.statedConstant, s.soundConstant});
    worstStated = std::max(worstStated, s.ratio - s.statedConstant);
    worstSound = std::max(worstSound, s.ratio - s.soundConstant);
    stated = s.statedConstant;
    sound = s.soundConstant;
  }
  out.tables.push_back(std::move(table));
  claims.le("lipschitz-dependence", stated + kBoundSlack, stated + worstStated);
  claims.le("lipschitz-dependence-sound", sound + kBoundSlack, sound + worstSound);
}

void runSmooth(const ExperimentConfig& cfg, const Nonlinearity& nl,
               std::mt19937_64& rng, ExperimentResult& out, const Claims& claims) {
  const QuadratureConfig& q = cfg.quadrature;
  const Problem pb = problemOf(cfg, nl);
  const DerivativeContext ctx(pb, cfg.T);
  CsvTable remainders = scheduleTable("remainder");
  CsvTable aForm = scheduleTable("a_remainder");
  std::vector<DecayCertificate> certs;
  std::vector<DecayCertificate> aCerts;
  std::vector<ScheduleTable> schedules;
  double probeGap = -std::numeric_limits<double>::infinity();
  double continuityGap = -std::numeric_limits<double>::infinity();
  const double bBound = bNormUpperBound(ctx, q);
  for (int c = 0; c < cfg.corpus; ++c) {
    const HistoryElement chi0(directionOf(cfg, -cfg.R, 0.0, rng));
    ScheduleTable s = remainderSchedule(ctx, chi0, cfg.K, q);
    appendSchedule(remainders, c, s);
    certs.push_back(s.certifyRatios());
    schedules.push_back(std::move(s));

    ScheduleTable a;
    const Trajectory base = solve(pb, cfg.T, q);
    for (int k = 0; k <= cfg.K; ++k) {
      const HistoryElement chi = std::ldexp(1.0, -k) * chi0;
      const Trajectory pert = solve(pb.withHistory(pb.phi + chi), cfg.T, q);
      ScheduleRow row;
      row.input = seminorm(chi, pb.cfg, q);
      row.output = barNorm(
          subtract(subtract(pert.x, base.x), applyA(ctx, chi, q)), cfg.p, q);
      row.ratio = row.input > 0.0 ? row.output / row.input : 0.0;
      a.rows.push_back(row);
    }
    appendSchedule(aForm, c, a);
    aCerts.push_back(a.certifyRatios());

    const ProbeSpec spec{-cfg.R, 0.0, cfg.N, 16, 8, rng()};
    const LinearOperatorProbe probe = estimateOperatorNorm(
        [&](const PiecewiseFunction& chi) {
          return supNorm(applyB(ctx, HistoryElement(chi), q), q);
        },
        [&](const PiecewiseFunction& chi) {
          return lpNorm(chi, ctx.inputExponent(), q);
        },
        spec);
    probeGap = std::max(probeGap, probe.lowerBound - bBound);

    const BContinuity bc =
        bContinuity(ctx, pb.phi, pb.phi + 0.1 * chi0, q, 16, rng());
    continuityGap =
        std::max(continuityGap, bc.operatorGapLowerBound - bc.holderBound);
  }
  out.tables.push_back(std::move(remainders));
  out.tables.push_back(std::move(aForm));
  claims.decay("frechet-remainder-decay", certs);
  claims.decay("a-form-remainder-decay", aCerts);
  if (nl.jacobianLipschitz) {
    claims.rowBounds("second-order-remainder", schedules);
  }
  claims.le("holder-operator-bound", bBound + kBoundSlack, bBound + probeGap);
  claims.le("b-continuity", kBoundSlack, continuityGap);
}

void runComposition(const ExperimentConfig& cfg, const Nonlinearity& nl,
                    std::mt19937_64& rng, ExperimentResult& out,
                    const Claims& claims) {
  const QuadratureConfig& q = cfg.quadrature;
  const MeasureDomain X{cfg.domainLower, cfg.domainUpper};
  const PiecewiseFunction g =
      cfg.history ? snapDomain(cfg.history->build(), X.a, X.b)
                  : randomPiecewisePolynomial(X.a, X.b, cfg.N, 4, 3, 1.0, rng);
  const PiecewiseFunction d0 =
      cfg.perturbation ? snapDomain(cfg.perturbation->build(), X.a, X.b)
                       : randomPiecewisePolynomial(X.a, X.b, cfg.N, 4, 3, 1.0, rng);

  const CompositionContext cc = CompositionContext::continuity(nl, X, cfg.q);
  const CompositionResult applied = applyComposition(cc, g, q);
  claims.le("step-one-bound", applied.powerBound + kBoundSlack,
            std::pow(applied.norm, cfg.q));

  const ScheduleTable cont = continuityProbe(cc, g, d0, cfg.K, q);
  CsvTable contTable = scheduleTable("continuity");
  appendSchedule(contTable, 0, cont);
  out.tables.push_back(std::move(contTable));
  claims.decay("composition-continuity-decay", {cont.certifyOutputs()});
  if (nl.lipschitz) {
    claims.rowBounds("composition-lipschitz-bound", {cont});
  }

  if (!nl.dfGrowth || !nl.jacobian) {
    return;
  }
  const CompositionContext sc = CompositionContext::smoothness(nl, X, cfg.q);
  const RemainderTable rem = smoothnessProbe(sc, g, d0, cfg.K, q);
  CsvTable remTable = scheduleTable("remainder");
  appendSchedule(remTable, 0, rem);
  out.tables.push_back(std::move(remTable));
  claims.decay("composition-remainder-decay", {rem.certifyRatios()});
  if (nl.jacobianLipschitz) {
    claims.rowBounds("composition-second-order", {rem});
  }
  const double opBound = applyDerivative(sc, g, d0, q).operatorBound;
  const LinearOperatorProbe probe = derivativeNormProbe(sc, g, q, 16, rng());
  claims.le("composition-operator-bound", opBound + kBoundSlack, probe.lowerBound);
  const DerivativeGap gap =
      derivativeContinuityProbe(sc, add(g, scale(d0, 0.1)), g, q, 16, rng());
  claims.le("composition-derivative-continuity", gap.bound + kBoundSlack,
            gap.probedGap);
}

void runSemiflow(const ExperimentConfig& cfg, const Nonlinearity& nl,
                 std::mt19937_64& rng, ExperimentResult& out,
                 const Claims& claims) {
  const QuadratureConfig& q = cfg.quadrature;
  const HistoryConfig hc{cfg.R, cfg.p, cfg.N};
  const Semiflow sf(hc, nl, cfg.r);
  const HistoryElement phi = historyOf(cfg);
  const HistoryElement d0(directionOf(cfg, -cfg.R, 0.0, rng));
  const std::vector<double> grid{0.0, 0.3, cfg.r / 2.0, cfg.r};

  CsvTable axioms{"axioms", {"t", "s", "defect"}, {}};
  double semigroup = 0.0;
  for (double t : grid) {
    for (double s : grid) {
      const double d = semigroupDefect(sf, t, s, phi, q);
      axioms.rows.push_back({t, s, d});
      semigroup = std::max(semigroup, d);
    }
  }
  out.tables.push_back(std::move(axioms));
  claims.le("semiflow-identity", 1e-10, identityDefect(sf, phi, q));
  claims.le("semiflow-semigroup", 1e-9, semigroup);

  // Null-set edit: move the value at an interior point, keep phi(0).
  const HistoryElement psi(
      phi.rep().withPointValue(-0.5 * cfg.R, phi(-0.5 * cfg.R).array() + 7.0));
  claims.le("quotient-invariance", 1e-10,
            quotientInvariance(sf, cfg.T, phi, psi, q));
  const QuotientDistance qd = quotientDistance(phi, phi + d0, hc, q);
  claims.le("quotient-isometry", 1e-10, std::abs(qd.pair - qd.seminorm));

  const std::vector<ModulusColumn> modulus =
      continuityModulus(sf, {cfg.r / 2.0, cfg.T}, phi, d0, cfg.K, q);
  CsvTable modTable = scheduleTable("modulus");
  std::vector<DecayCertificate> certs;
  std::vector<ScheduleTable> schedules;
  for (const ModulusColumn& col : modulus) {
    appendSchedule(modTable, col.t, col.table);
    certs.push_back(col.table.certifyOutputs());
    schedules.push_back(col.table);
  }
  out.tables.push_back(std::move(modTable));
  claims.decay("semiflow-continuity-decay", certs);
  claims.rowBounds("semiflow-continuity-bound", schedules);

  const Trajectory far = solve(sf.problem(phi), 10.0 * cfg.r, q);
  claims.le("escape-time", std::numeric_limits<double>::max(), supNorm(far.x, q));

  if (!nl.dfGrowth || !nl.jacobian || cfg.p < nl.dfGrowth->alpha + 1.0) {
    return;
  }
  const double t = std::min(cfg.T, cfg.r);
  const ABoundedness ab = aBoundedness(sf, t, phi, q, 16, rng());
  claims.le("a-boundedness", ab.statedConstant + kBoundSlack, ab.probedNorm);
  claims.le("a-boundedness-sound", ab.soundConstant + kBoundSlack, ab.probedNorm);
  const RemainderTable rem = timeTDerivativeRemainder(sf, t, phi, d0, cfg.K, q);
  CsvTable remTable = scheduleTable("time_t_remainder");
  appendSchedule(remTable, 0, rem);
  out.tables.push_back(std::move(remTable));
  claims.decay("time-t-remainder-decay", {rem.certifyRatios()});
  if (nl.jacobianLipschitz) {
    claims.rowBounds("time-t-second-order", {rem});
  }
  const DerivativeContinuity dc =
      timeTDerivativeContinuity(sf, t, phi, phi + 0.1 * d0, q, 16, rng());
  claims.le("time-t-derivative-continuity", dc.bound + kBoundSlack, dc.probedGap);
}

void runDiscontinuity(const ExperimentConfig& cfg, const Nonlinearity& nl,
                      ExperimentResult& out, const Claims& claims) {
  CsvTable table =
      runDiscontinuityDemo(nl, cfg.R, cfg.r, cfg.p, cfg.ns, cfg.quadrature);
  const Vector jump = nl(Vector::Ones(cfg.N)) - nl(Vector::Zero(cfg.N));
  double inputError = 0.0;
  double outputError = 0.0;
  double minOutput = std::numeric_limits<double>::infinity();
  double worstStep = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    inputError = std::max(inputError, std::abs(row[1] - row[2]));
    outputError = std::max(outputError, std::abs(row[3] - jump.norm()));
    minOutput = std::min(minOutput, row[3]);
    if (i > 0 && row[0] > table.rows[i - 1][0]) {
      worstStep = std::max(worstStep, row[1] - table.rows[i - 1][1]);
    }
  }
  out.tables.push_back(std::move(table));
  claims.le("discontinuity-input-gap", 1e-12, inputError);
  claims.le("discontinuity-output-gap", 1e-12, outputError);
  claims.custom("discontinuity-output-positive", 0.0, minOutput, minOutput > 0.0);
  if (worstStep > -std::numeric_limits<double>::infinity()) {
    claims.custom("discontinuity-input-decreasing", 0.0, worstStep, worstStep < 0.0);
  }
}

}  // namespace

ExperimentResult runExperiment(const ExperimentConfig& cfg, std::uint64_t seed) {
  ExperimentResult out;
  out.name = cfg.name;
  out.kind = cfg.kind;
  const Claims claims{cfg.name, &out.claims};
  std::mt19937_64 rng(seed);
  try {
    const Nonlinearity nl = buildNonlinearity(cfg);
    switch (cfg.kind) {
      case ExperimentKind::Solve:
        runSolve(cfg, nl, out, claims);
        break;
      case ExperimentKind::Dependence:
        runDependence(cfg, nl, rng, out, claims);
        break;
      case ExperimentKind::Lipschitz:
        runLipschitz(cfg, nl, rng, out, claims);
        break;
      case ExperimentKind::Smooth:
        runSmooth(cfg, nl, rng, out, claims);
        break;
      case ExperimentKind::Composition:
        runComposition(cfg, nl, rng, out, claims);
        break;
      case ExperimentKind::Semiflow:
        runSemiflow(cfg, nl, rng, out, claims);
        break;
      case ExperimentKind::Discontinuity:
        runDiscontinuity(cfg, nl, out, claims);
        break;
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

SuiteResult runSuite(const SuiteConfig& cfg, int jobs) {
  SuiteResult result;
  const std::size_t n = cfg.experiments.size();
  result.experiments.resize(n);
  const auto seedOf = [&](std::size_t i) {
    const auto& e = cfg.experiments[i];
    return e.seed ? *e.seed : cfg.seed + i;
  };
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      result.experiments[i] = runExperiment(cfg.experiments[i], seedOf(i));
    }
    return result;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        result.experiments[i] = runExperiment(cfg.experiments[i], seedOf(i));
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  return result;
}

void writeArtifacts(const SuiteResult& result, const std::filesystem::path& dir) {
  if (result.experiments.empty()) {
    return;
  }
  std::filesystem::create_directories(dir);
  const auto write = [&](const std::string& file, const std::string& body) {
    std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("cannot write " + (dir / file).string());
    }
    out << body;
  };
  std::string claims = "experiment,claim,bound,measured,pass\n";
  for (const ExperimentResult& e : result.experiments) {
    for (const CsvTable& t : e.tables) {
      write(e.name + "_" + t.name + ".csv", toCsv(t));
    }
    for (const ClaimRow& c : e.claims) {
      claims += fmt::format("{},{},{:.17g},{:.17g},{}\n", c.experiment, c.claim,
                            c.bound, c.measured, c.pass ? 1 : 0);
    }
    if (!e.error.empty()) {
      claims += fmt::format("{},error,nan,nan,0\n", e.name);
    }
  }
  write("claims.csv", claims);
}

std::string formatSummary(const SuiteResult& result) {
  std::string out;
  std::size_t total = 0;
  std::size_t failed = 0;
  for (const ExperimentResult& e : result.experiments) {
    for (const ClaimRow& c : e.claims) {
      ++total;
      failed += c.pass ? 0 : 1;
      out += fmt::format("{} {} {} bound={:.6g} measured={:.6g}\n",
                         c.pass ? "PASS" : "FAIL", e.name, c.claim, c.bound,
                         c.measured);
    }
    if (!e.error.empty()) {
      ++total;
      ++failed;
      out += fmt::format("FAIL {} error: {}\n", e.name, e.error);
    }
  }
  out += fmt::format("{}: {} of {} claims passed\n",
                     result.passed() ? "PASS" : "FAIL", total - failed, total);
  return out;
}

}  // namespace lpdde
