// Command-line driver: generate problems, run single iterations, sweep noise
// levels and summarize emitted records.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "superlw/experiment.hpp"

namespace fs = std::filesystem;
using namespace superlw;
using nlohmann::json;

namespace {

struct Options {
  std::string problem;
  std::string config;
  std::string rule;
  std::string delta;
  std::string out = ".";
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<double> parse_deltas(const std::string& s) {
  std::vector<double> out;
  for (const std::string& part : split(s, ',')) {
    std::size_t used = 0;
    const double v = std::stod(part, &used);
    if (used != part.size()) throw std::invalid_argument("bad delta '" + part + "'");
    out.push_back(v);
  }
  return out;
}

Problem load_problem(const Options& o) {
  ProblemSpec spec = problem_spec_from_json(read_json_file(o.problem));
  if (o.seed) spec.seed = *o.seed;
  return generate_problem(spec);
}

ExperimentConfig load_config(const Options& o) {
  return o.config.empty() ? ExperimentConfig{} : experiment_config_from_json(read_json_file(o.config));
}

std::vector<StoppingRule> rules_for(const Options& o, const ExperimentConfig& config) {
  if (o.rule.empty()) return {config.rule};
  std::vector<StoppingRule> rules;
  for (const std::string& name : split(o.rule, ',')) {
    StoppingRule r = config.rule;
    r.kind = parse_stop_kind(name);
    rules.push_back(r);
  }
  return rules;
}

std::string extension(Format f) { return f == Format::csv ? ".csv" : ".json"; }

std::string delta_tag(double delta) {
  std::string s = json(delta).dump();  // shortest round-trip form
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '+') c = 'P';
    if (c == '-') c = 'm';
  }
  return s;
}

// Exact-data limit, cached under the output directory by problem+config hash.
Vector cached_exact_limit(const Problem& problem, const ExperimentConfig& config, const fs::path& out) {
  const json key = {{"problem", to_json(problem.spec)}, {"config", to_json(config)}};
  const fs::path cache = out / ("exact_limit_" + content_hash(key) + ".json");
  if (fs::exists(cache)) {
    const json j = read_json_file(cache);
    if (j.at("key") == key) return Vector(j.at("x").get<std::vector<double>>());
  }
  const RunResult run = exact_limit_run(problem, config);
  if (run.status != RunStatus::converged) {
    std::cerr << "warning: exact-data reference did not converge within " << config.exact_limit_budget
              << " iterations (residual " << run.state.residual_norm << ")\n";
  }
  const json j = {{"key", key},
                  {"iterations", run.state.k},
                  {"status", std::string(to_string(run.status))},
                  {"x", run.state.x.values()}};
  write_text_file(cache, j.dump(2) + "\n");
  return run.state.x;
}

int report_flags(const std::vector<ExperimentRecord>& records, bool strict) {
  int flagged = 0;
  for (const ExperimentRecord& r : records) {
    if (r.stop.flag == RunStatus::budget_exhausted) {
      ++flagged;
      std::cerr << "flagged: rule " << r.stop.rule << " delta " << format_double(r.stop.delta)
                << " exhausted its budget at k=" << r.stop.fired_index << "\n";
    }
  }
  return strict && flagged > 0 ? 2 : 0;
}

int cmd_generate(const Options& o) {
  const Problem problem = load_problem(o);
  fs::create_directories(o.out);
  const fs::path path = fs::path(o.out) / "problem.json";
  write_text_file(path, materialize(problem).dump(2) + "\n");
  std::cout << path.string() << "\n";
  return 0;
}

int cmd_run(const Options& o) {
  const Problem problem = load_problem(o);
  const ExperimentConfig config = load_config(o);
  const Format format = parse_format(o.format);
  fs::create_directories(o.out);

  const std::vector<double> deltas = o.delta.empty() ? std::vector<double>{0.0} : parse_deltas(o.delta);
  if (deltas.size() != 1) throw std::invalid_argument("run takes a single --delta; use sweep");
  StoppingRule rule = rules_for(o, config).front();
  rule.delta = deltas.front();

  const References refs =
      compute_references(problem, config, cached_exact_limit(problem, config, o.out));
  const Vector yd = inject_noise(problem.y, NoiseSpec{rule.delta, config.noise_seed});
  const RunResult run =
      run_iteration(*problem.op, yd, config.iteration_config(*problem.op), rule, refs);
  const ExperimentRecord rec = make_record(run, rule, to_json(config));
  const fs::path path = fs::path(o.out) / ("run_" + rec.stop.rule + "_delta_" + delta_tag(rule.delta) +
                                           extension(format));
  emit(rec, format, path);
  std::cout << path.string() << " k=" << run.state.k << " " << to_string(run.status) << "\n";
  return report_flags({rec}, o.strict);
}

int cmd_sweep(const Options& o) {
  const Problem problem = load_problem(o);
  const ExperimentConfig config = load_config(o);
  const Format format = parse_format(o.format);
  if (o.delta.empty()) throw std::invalid_argument("sweep needs --delta");
  const std::vector<double> deltas = parse_deltas(o.delta);
  const std::vector<StoppingRule> rules = rules_for(o, config);
  fs::create_directories(o.out);

  const References refs =
      compute_references(problem, config, cached_exact_limit(problem, config, o.out));
  const std::vector<ExperimentRecord> records = run_delta_sweep(problem, config, rules, deltas, refs);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ExperimentRecord& rec = records[i];
    const std::size_t di = i / rules.size();
    const fs::path path = fs::path(o.out) / ("sweep_" + rec.stop.rule + "_" + std::to_string(di) + "_delta_" +
                                             delta_tag(rec.stop.delta) + extension(format));
    emit(rec, format, path);
    std::cout << path.string() << " k=" << rec.stop.fired_index << " " << to_string(rec.stop.flag) << "\n";
  }
  return report_flags(records, o.strict);
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

int cmd_report(const Options& o) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.out)) {
    const fs::path& p = entry.path();
    if (p.extension() == ".json" && p.filename().string().rfind("exact_limit_", 0) != 0 &&
        p.filename() != "problem.json") {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  std::cout << "file,rule,delta,stop_index,flag,residual_norm,error_to_pinv,error_to_exact_limit,"
               "min_error_to_pinv_k\n";
  std::vector<ExperimentRecord> records;
  for (const fs::path& p : files) {
    const ExperimentRecord rec = experiment_record_from_json(read_json_file(p));
    if (rec.rows.empty()) continue;
    const HistoryRow& last = rec.rows.back();
    std::string min_k;
    double best = 0.0;
    for (const HistoryRow& r : rec.rows) {
      if (r.error_to_pinv && (min_k.empty() || *r.error_to_pinv < best)) {
        best = *r.error_to_pinv;
        min_k = std::to_string(r.k);
      }
    }
    std::cout << p.filename().string() << ',' << rec.stop.rule << ',' << format_double(rec.stop.delta)
              << ',' << rec.stop.fired_index << ',' << to_string(rec.stop.flag) << ','
              << format_double(last.residual_norm) << ',' << optional_cell(last.error_to_pinv) << ','
              << optional_cell(last.error_to_exact_limit) << ',' << min_k << "\n";
    records.push_back(rec);
  }
  return report_flags(records, o.strict);
}

void add_common(CLI::App* cmd, Options& o, bool needs_problem) {
  auto* problem = cmd->add_option("--problem", o.problem, "Problem JSON file");
  if (needs_problem) problem->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--seed", o.seed, "Override the problem generator seed");
  cmd->add_flag("--strict", o.strict, "Exit nonzero when any run exhausts its budget");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superiorized Landweber iteration for linear ill-posed problems"};
  app.require_subcommand(1);
  Options o;

  auto* generate = app.add_subcommand("generate", "Materialize a problem as an explicit matrix file");
  add_common(generate, o, true);

  auto* run = app.add_subcommand("run", "Run one iteration and emit its history");
  auto* sweep = app.add_subcommand("sweep", "Run every rule over a decreasing noise-level grid");
  for (auto* cmd : {run, sweep}) {
    add_common(cmd, o, true);
    cmd->add_option("--config", o.config, "Experiment config JSON")->check(CLI::ExistingFile);
    cmd->add_option("--rule", o.rule, "a-priori, discrepancy or max-iter (comma list for sweep)");
    cmd->add_option("--delta", o.delta, "Noise level, or comma list for sweep");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }

  auto* report = app.add_subcommand("report", "Summarize JSON records found in --out");
  add_common(report, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*generate) return cmd_generate(o);
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o);
    if (*report) return cmd_report(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
