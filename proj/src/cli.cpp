#include "ctcog/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "ctcog/error.hpp"
#include "ctcog/judgement.hpp"
#include "ctcog/oracle.hpp"
#include "ctcog/report.hpp"
#include "ctcog/scenario.hpp"
#include "ctcog/version.hpp"

namespace ctcog::io {

namespace {

using nlohmann::ordered_json;

struct SimulateArgs {
  std::string path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string regime;  // empty: inferred from the scenario kind
  std::string out_path;
  bool records = false;
  bool assert_mode = false;
  int threads = 1;
  bool sampled = false;
  bool unpooled = false;
  bool conjoin = false;
};

struct SweepArgs {
  SimulateArgs base;
  std::string param;  // NAME=A:B:STEP
};

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("CTCOG_SEED");
  if (!v || !*v) return std::nullopt;
  if (*v == '-') raise(Errc::InvalidArgument, "CTCOG_SEED must be a nonnegative integer");
  errno = 0;
  char* end = nullptr;
  unsigned long long value = std::strtoull(v, &end, 10);
  if (errno != 0 || end == v || *end != '\0')
    raise(Errc::InvalidArgument, "CTCOG_SEED must be a nonnegative integer");
  return static_cast<std::uint64_t>(value);
}

// Precedence: explicit flag, then the scenario file, then CTCOG_SEED, then 0.
std::uint64_t resolve_seed(const SimulateArgs& args, const ScenarioFile& file) {
  if (args.seed_given) return args.seed;
  if (file.seed_in_file) return file.scenario.seed;
  if (std::optional<std::uint64_t> env = env_seed()) return *env;
  return 0;
}

sim::Regime parse_regime(const std::string& name) {
  if (name == "rational") return sim::Regime::Rational;
  if (name == "noisy") return sim::Regime::Noisy;
  if (name == "quantum") return sim::Regime::Quantum;
  raise(Errc::InvalidArgument, "unknown regime '" + name + "'");
}

std::string regime_name(sim::Regime r) {
  switch (r) {
    case sim::Regime::Rational: return "rational";
    case sim::Regime::Noisy: return "noisy";
    case sim::Regime::Quantum: return "quantum";
  }
  return "?";
}

sim::Regime resolve_regime(const SimulateArgs& args, const sim::Scenario& scenario) {
  if (!args.regime.empty()) return parse_regime(args.regime);
  return scenario.kind == sim::ScenarioKind::ClassicalJoint ? sim::Regime::Noisy
                                                            : sim::Regime::Quantum;
}

sim::SimOptions make_options(const SimulateArgs& args) {
  sim::SimOptions opts;
  opts.pooled = !args.unpooled;
  opts.noise.flip_conjunction_indicator = !args.conjoin;
  opts.quantum_sampled = args.sampled;
  opts.threads = args.threads;
  return opts;
}

// Canonical command echo: semantic arguments only, in a fixed order. Output
// paths and thread counts are deliberately excluded — they must never change
// a report byte.
std::string mode_flags(const SimulateArgs& args) {
  std::string s;
  if (args.records) s += " --records";
  if (args.sampled) s += " --sampled";
  if (args.unpooled) s += " --unpooled";
  if (args.conjoin) s += " --conjoin-readings";
  return s;
}

ordered_json report_header(const std::string& command) {
  ordered_json report;
  report["format_version"] = 1;
  report["tool"] = ordered_json{{"name", kToolName}, {"version", kToolVersion}};
  report["command"] = command;
  return report;
}

void emit(const std::string& out_path, const std::string& text, const std::string& summary,
          std::ostream& out, std::ostream& err) {
  if (out_path.empty()) {
    out << text;
    err << summary << "\n";
  } else {
    write_file(out_path, text);
    out << summary << "\n";
  }
}

long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start)
      .count();
}

// ---- check ----------------------------------------------------------------

ordered_json check_substrate(const ModelFile& model, const Substrate& s) {
  ordered_json e;
  e["name"] = s.name();
  e["kind"] = s.kind() == BackendKind::Classical ? "classical" : "quantum";
  std::vector<Variable> declared = model.variables_on(s.name());
  ordered_json vars = ordered_json::array();
  for (const Variable& v : declared) {
    ordered_json ve;
    ve["name"] = v.name();
    ve["distinguishable"] = is_distinguishable(v).possible;
    ve["clonable"] = is_clonable(v).possible;
    bool info = is_information_variable(v);
    ve["information"] = info;
    ve["observable"] = info && is_observable(v);
    vars.push_back(std::move(ve));
  }
  e["variables"] = std::move(vars);
  MediumClassification mc = classify_medium(s, declared);
  e["information_medium"] = mc.is_information_medium;
  e["information_variables"] = mc.information_variables;
  e["observables"] = mc.observables;
  e["superinformation"] = mc.superinformation_witness.has_value();
  if (mc.superinformation_witness) {
    e["witness"] = ordered_json::array(
        {mc.superinformation_witness->first, mc.superinformation_witness->second});
    e["classification"] = "superinformation medium";
  } else {
    if (mc.observables.size() < 2) e["note"] = "no witness possible";
    if (!mc.is_information_medium)
      e["classification"] = "not an information medium";
    else if (s.kind() == BackendKind::Classical)
      e["classification"] = "classical information medium";
    else
      e["classification"] = "information medium";
  }
  return e;
}

int run_check(const std::string& path, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  auto start = std::chrono::steady_clock::now();
  ModelFile model = parse_model(read_file(path));
  ordered_json report = report_header("check " + path);
  ordered_json substrates = ordered_json::array();
  bool any_super = false;
  for (const Substrate& s : model.substrates) {
    ordered_json e = check_substrate(model, s);
    any_super = any_super || e["superinformation"].get<bool>();
    substrates.push_back(std::move(e));
  }
  report["substrates"] = std::move(substrates);
  if (!model.tasks.empty()) {
    ordered_json tasks = ordered_json::array();
    for (const Task& t : model.tasks) {
      ordered_json te;
      te["name"] = t.label();
      try {
        PossibilityVerdict v = is_possible(t);
        te["verdict"] = verdict_to_json(v);
      } catch (const Error& e) {
        if (e.code() != Errc::UnsupportedTaskShape) throw;
        te["undecidable"] = true;
        te["detail"] = e.what();
      }
      tasks.push_back(std::move(te));
    }
    report["tasks"] = std::move(tasks);
  }
  std::ostringstream summary;
  summary << "check: substrates=" << model.substrates.size()
          << " superinformation=" << (any_super ? "yes" : "no")
          << " wall_ms=" << elapsed_ms(start);
  emit(out_path, dump_report(report), summary.str(), out, err);
  return 0;
}

// ---- simulate --------------------------------------------------------------

double exceed_x_fraction(const std::vector<sim::JudgementRecord>& records) {
  double count = 0;
  for (const sim::JudgementRecord& r : records) count += r.xy_exceeds_x() ? 1.0 : 0.0;
  return count / static_cast<double>(records.size());
}

std::vector<std::string> run_asserts(const sim::Scenario& scenario, sim::Regime regime,
                                     const sim::SimOptions& opts,
                                     const std::vector<sim::JudgementRecord>& records,
                                     const sim::ConjunctionStats& stats) {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };

  expect(stats.pct_conjunction >= 0.0 && stats.pct_conjunction <= 1.0,
         "pct_conjunction_errors outside [0, 1]");
  expect(stats.pct_double <= stats.pct_conjunction + 1e-15,
         "pct_double_errors exceeds pct_conjunction_errors");
  for (const sim::JudgementRecord& r : records) {
    if (r.analytic) continue;
    expect(r.count_x >= 0 && r.count_x <= r.n && r.count_y >= 0 && r.count_y <= r.n &&
               r.count_xy >= 0 && r.count_xy <= r.n,
           "a count left the range [0, n]");
    if (!failures.empty()) break;
  }

  if (regime == sim::Regime::Rational) {
    expect(stats.pct_conjunction == 0.0, "rational cohort produced a conjunction error");
    for (const sim::JudgementRecord& r : records)
      expect(r.count_xy <= std::min(r.count_x, r.count_y),
             "rational record with count_xy above a marginal count");
  }

  if (regime == sim::Regime::Noisy && opts.pooled && opts.noise.flip_conjunction_indicator &&
      scenario.samples_per_subject <= 20) {
    sim::NoisyCountDistribution oracle = sim::exact_noisy_distribution(
        scenario.joint.px(), scenario.joint.pxy(), scenario.noise_rate,
        scenario.samples_per_subject);
    expect(oracle.mean_count_diff() <= 1e-12, "oracle mean count difference is positive");
    double p = oracle.fallacy_probability();
    double frac = exceed_x_fraction(records);
    double m = static_cast<double>(records.size());
    double se = std::sqrt(std::max(0.0, p * (1.0 - p) / m));
    expect(std::abs(frac - p) <= 3.0 * se + 1e-12,
           "sampled fallacy fraction " + format_double(frac) +
               " outside 3 standard errors of the exact value " + format_double(p));
  }

  if (regime == sim::Regime::Quantum && !opts.quantum_sampled) {
    expect(stats.pct_double == 0.0, "analytic sequential run produced a double error");
    for (const sim::JudgementRecord& r : records) {
      double first = scenario.order == sim::MeasurementOrder::XThenY ? r.px : r.py;
      expect(r.pxy <= first + 1e-12, "sequential probability exceeded its first factor");
    }
  }

  // Determinism self-check: recompute and compare the serialized statistics.
  std::vector<sim::JudgementRecord> again = sim::run_regime(scenario, regime, opts);
  sim::ConjunctionStats stats_again = sim::conjunction_stats(again);
  expect(dump_report(stats_to_json(stats_again)) == dump_report(stats_to_json(stats)),
         "recomputation changed the statistics");
  return failures;
}

int run_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  auto start = std::chrono::steady_clock::now();
  ScenarioFile file = parse_scenario(read_file(args.path));
  sim::Scenario scenario = file.scenario;
  scenario.seed = resolve_seed(args, file);
  sim::Regime regime = resolve_regime(args, scenario);
  sim::SimOptions opts = make_options(args);

  std::vector<sim::JudgementRecord> records = sim::run_regime(scenario, regime, opts);
  sim::ConjunctionStats stats = sim::conjunction_stats(records);

  std::string command = "simulate " + args.path + " --regime " + regime_name(regime) +
                        " --seed " + std::to_string(scenario.seed) + mode_flags(args);
  ordered_json report = report_header(command);
  report["seed"] = scenario.seed;
  report["regime"] = regime_name(regime);
  report["scenario"] = scenario_to_json(scenario);
  report["stats"] = stats_to_json(stats);
  if (args.records) {
    ordered_json list = ordered_json::array();
    for (const sim::JudgementRecord& r : records) list.push_back(record_to_json(r));
    report["records"] = std::move(list);
  }

  int code = 0;
  std::string assert_note;
  if (args.assert_mode) {
    std::vector<std::string> failures = run_asserts(scenario, regime, opts, records, stats);
    if (failures.empty()) {
      assert_note = " assert=ok";
    } else {
      for (const std::string& f : failures) err << "assert failed: " << f << "\n";
      assert_note = " assert=failed";
      code = 1;
    }
  }

  std::ostringstream summary;
  summary << "simulate: regime=" << regime_name(regime) << " cohort=" << stats.cohort
          << " n=" << stats.n
          << " pct_conjunction_errors=" << format_double(stats.pct_conjunction) << assert_note
          << " wall_ms=" << elapsed_ms(start);
  emit(args.out_path, dump_report(report), summary.str(), out, err);
  return code;
}

// ---- sweep -----------------------------------------------------------------

struct SweepRange {
  std::string name;
  double start = 0, stop = 0, step = 0;
  std::vector<double> values;
};

SweepRange parse_sweep_param(const std::string& text) {
  SweepRange range;
  std::size_t eq = text.find('=');
  if (eq == std::string::npos)
    raise(Errc::InvalidRange, "--param expects NAME=A:B:STEP, got '" + text + "'");
  range.name = text.substr(0, eq);
  if (range.name != "noise_rate" && range.name != "samples_per_subject" &&
      range.name != "basis_angle")
    raise(Errc::UnknownParameter, "unknown sweep parameter '" + range.name + "'");
  std::string rest = text.substr(eq + 1);
  std::replace(rest.begin(), rest.end(), ':', ' ');
  std::istringstream in(rest);
  std::string extra;
  if (!(in >> range.start >> range.stop >> range.step) || (in >> extra))
    raise(Errc::InvalidRange, "--param expects NAME=A:B:STEP, got '" + text + "'");
  if (!(range.step > 0)) raise(Errc::InvalidRange, "sweep step must be positive");
  if (range.stop < range.start) raise(Errc::InvalidRange, "sweep stop is below its start");
  for (double v = range.start; v <= range.stop + 1e-9 * range.step; v += range.step)
    range.values.push_back(quantize(v));
  return range;
}

void apply_sweep_value(sim::Scenario& scenario, const std::string& name, double value) {
  if (name == "noise_rate") {
    if (scenario.kind != sim::ScenarioKind::ClassicalJoint)
      raise(Errc::UnknownParameter, "noise_rate applies only to classical scenarios");
    scenario.noise_rate = value;
  } else if (name == "samples_per_subject") {
    double rounded = std::round(value);
    if (std::abs(value - rounded) > 1e-9 || rounded < 1)
      raise(Errc::InvalidRange, "samples_per_subject values must be positive integers");
    scenario.samples_per_subject = static_cast<std::int64_t>(rounded);
  } else {  // basis_angle: the intermediate measurement direction, in degrees
    if (scenario.kind != sim::ScenarioKind::QuantumSequential)
      raise(Errc::UnknownParameter, "basis_angle applies only to quantum scenarios");
    scenario.basis_x = la::qubit_at_angle(value);
  }
}

int run_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  auto start = std::chrono::steady_clock::now();
  ScenarioFile file = parse_scenario(read_file(args.base.path));
  sim::Scenario base = file.scenario;
  base.seed = resolve_seed(args.base, file);
  sim::Regime regime = resolve_regime(args.base, base);
  sim::SimOptions opts = make_options(args.base);
  SweepRange range = parse_sweep_param(args.param);

  std::ostringstream csv;
  csv << "parameter,value,mean_error_x,mean_error_y,pct_conjunction_errors,pct_ranking_errors,"
         "pct_double_errors,ci_mean_error_x,ci_mean_error_y,ci_pct_conjunction_errors,"
         "ci_pct_double_errors\n";
  for (double value : range.values) {
    sim::Scenario scenario = base;
    apply_sweep_value(scenario, range.name, value);
    std::vector<sim::JudgementRecord> records = sim::run_regime(scenario, regime, opts);
    sim::ConjunctionStats stats = sim::conjunction_stats(records);
    double m = static_cast<double>(stats.cohort);
    auto pct_ci = [&](double p) { return 1.96 * std::sqrt(std::max(0.0, p * (1.0 - p) / m)); };
    csv << range.name << ',' << format_double(value) << ','
        << format_double(stats.mean_error_x) << ',' << format_double(stats.mean_error_y) << ','
        << format_double(stats.pct_conjunction) << ',' << format_double(stats.pct_ranking)
        << ',' << format_double(stats.pct_double) << ','
        << format_double(1.96 * stats.sd_error_x / std::sqrt(m)) << ','
        << format_double(1.96 * stats.sd_error_y / std::sqrt(m)) << ','
        << format_double(pct_ci(stats.pct_conjunction)) << ','
        << format_double(pct_ci(stats.pct_double)) << "\n";
  }

  std::ostringstream summary;
  summary << "sweep: parameter=" << range.name << " rows=" << range.values.size()
          << " regime=" << regime_name(regime) << " wall_ms=" << elapsed_ms(start);
  emit(args.base.out_path, csv.str(), summary.str(), out, err);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite-model engine for constructor-theoretic information and "
               "conjunction-fallacy simulation"};
  app.name("ctcog");
  app.require_subcommand(1);

  std::string check_path, check_out;
  CLI::App* check = app.add_subcommand("check", "classify media and decide declared tasks");
  check->add_option("model", check_path, "model file")->required();
  check->add_option("--out", check_out, "write the report to this path instead of stdout");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "run one cohort and report statistics");
  simulate->add_option("scenario", sim_args.path, "scenario file")->required();
  simulate->add_option("--seed", sim_args.seed, "seed override (else file, else CTCOG_SEED)");
  simulate->add_option("--regime", sim_args.regime, "rational | noisy | quantum")
      ->check(CLI::IsMember({"rational", "noisy", "quantum"}));
  simulate->add_option("--out", sim_args.out_path, "write the report to this path");
  simulate->add_flag("--records", sim_args.records, "include per-subject records");
  simulate->add_flag("--assert", sim_args.assert_mode, "verify run invariants; exit 1 on failure");
  simulate->add_option("--threads", sim_args.threads, "per-subject worker threads")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--sampled", sim_args.sampled, "sample quantum judgements instead of analytic");
  simulate->add_flag("--unpooled", sim_args.unpooled, "answer each query from its own sheet");
  simulate->add_flag("--conjoin-readings", sim_args.conjoin,
                     "conjoin flipped single readings instead of flipping the indicator");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "scan one parameter and write a CSV");
  sweep->add_option("scenario", sweep_args.base.path, "scenario file")->required();
  sweep->add_option("--param", sweep_args.param, "NAME=A:B:STEP (inclusive range)")->required();
  sweep->add_option("--out", sweep_args.base.out_path, "CSV output path")->required();
  sweep->add_option("--seed", sweep_args.base.seed, "seed override");
  sweep->add_option("--regime", sweep_args.base.regime, "rational | noisy | quantum")
      ->check(CLI::IsMember({"rational", "noisy", "quantum"}));
  sweep->add_option("--threads", sweep_args.base.threads, "per-subject worker threads")
      ->check(CLI::PositiveNumber);
  sweep->add_flag("--sampled", sweep_args.base.sampled, "sample quantum judgements");
  sweep->add_flag("--unpooled", sweep_args.base.unpooled, "answer each query from its own sheet");
  sweep->add_flag("--conjoin-readings", sweep_args.base.conjoin,
                  "conjoin flipped single readings instead of flipping the indicator");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    sim_args.seed_given = simulate->count("--seed") > 0;
    sweep_args.base.seed_given = sweep->count("--seed") > 0;
    if (check->parsed()) return run_check(check_path, check_out, out, err);
    if (simulate->parsed()) return run_simulate(sim_args, out, err);
    return run_sweep(sweep_args, out, err);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::IoError ? 3 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ctcog::io
