#include "superlw/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace superlw {

using nlohmann::json;

namespace {

json regularizer_json(const Regularizer& r) {
  return {{"regularizer", std::string(to_string(r.kind()))}, {"weight", r.weight()}};
}

// Either {"regularizer": name, "weight": w} or a bare name.
Regularizer regularizer_from(const json& j) {
  if (j.is_string()) return Regularizer(parse_regularizer_kind(j.get<std::string>()));
  return Regularizer(parse_regularizer_kind(j.at("regularizer").get<std::string>()),
                     j.value("weight", 1.0));
}

json rule_json(const StoppingRule& r) {
  return {{"kind", std::string(to_string(r.kind))}, {"c", r.c},     {"p", r.p},
          {"tau", r.tau},                           {"delta", r.delta}, {"cap", r.cap}};
}

StoppingRule rule_from(const json& j) {
  StoppingRule r;
  r.kind = parse_stop_kind(j.value("kind", std::string("max-iter")));
  r.c = j.value("c", r.c);
  r.p = j.value("p", r.p);
  r.tau = j.value("tau", r.tau);
  r.delta = j.value("delta", r.delta);
  r.cap = j.value("cap", r.cap);
  r.validate();
  return r;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

IterationConfig ExperimentConfig::iteration_config(const LinearOperator& op) const {
  IterationConfig c;
  c.lambda = lambda ? *lambda : admissible_lambda(op, lambda_factor);
  c.steps = steps;
  c.perturbation = perturbation;
  c.monitor = monitor;
  c.max_iter = max_iter;
  c.record_every = record_every;
  c.convergence_tol = convergence_tol;
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["lambda"] = optional_number(c.lambda);
  j["lambda_factor"] = c.lambda_factor;
  j["steps"] = {{"kind", std::string(to_string(c.steps.kind()))},
                {"t0", c.steps.t0()},
                {"ratio", c.steps.ratio()}};
  if (c.perturbation) {
    json p = regularizer_json(c.perturbation->regularizer());
    p["smoothing_eps"] = c.perturbation->smoothing_eps();
    p["mode"] = std::string(to_string(c.perturbation->mode()));
    j["perturbation"] = p;
  } else {
    j["perturbation"] = nullptr;
  }
  j["monitor"] = c.monitor ? regularizer_json(*c.monitor) : json(nullptr);
  j["max_iter"] = c.max_iter;
  j["record_every"] = c.record_every;
  j["convergence_tol"] = c.convergence_tol;
  j["rule"] = rule_json(c.rule);
  j["noise_seed"] = c.noise_seed;
  j["exact_limit_budget"] = c.exact_limit_budget;
  j["compute_rmin"] = c.compute_rmin;
  j["rmin_budget"] = c.rmin_budget;
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c;
  c.lambda = optional_from(j, "lambda");
  c.lambda_factor = j.value("lambda_factor", c.lambda_factor);
  if (j.contains("steps") && !j.at("steps").is_null()) {
    const json& s = j.at("steps");
    const std::string kind = s.value("kind", std::string("zero"));
    if (kind == "zero") {
      c.steps = StepSequence::zero();
    } else if (kind == "geometric") {
      c.steps = StepSequence::geometric(s.at("t0").get<double>(), s.at("ratio").get<double>());
    } else {
      throw std::invalid_argument("unknown step sequence '" + kind + "'");
    }
  }
  if (j.contains("perturbation") && !j.at("perturbation").is_null()) {
    const json& p = j.at("perturbation");
    c.perturbation = PerturbationMap(
        regularizer_from(p), p.value("smoothing_eps", kDefaultSmoothingEps),
        parse_perturbation_mode(p.value("mode", std::string("unconditional"))));
  }
  if (j.contains("monitor") && !j.at("monitor").is_null()) c.monitor = regularizer_from(j.at("monitor"));
  c.max_iter = j.value("max_iter", c.max_iter);
  c.record_every = j.value("record_every", c.record_every);
  c.convergence_tol = j.value("convergence_tol", c.convergence_tol);
  if (j.contains("rule")) c.rule = rule_from(j.at("rule"));
  c.noise_seed = j.value("noise_seed", c.noise_seed);
  c.exact_limit_budget = j.value("exact_limit_budget", c.exact_limit_budget);
  c.compute_rmin = j.value("compute_rmin", c.compute_rmin);
  c.rmin_budget = j.value("rmin_budget", c.rmin_budget);
  if (c.max_iter < 1 || c.record_every < 1 || c.exact_limit_budget < 1 || c.rmin_budget < 0) {
    throw std::invalid_argument("config: iteration counts must be positive");
  }
  return c;
}

json to_json(const ProblemSpec& s) {
  json j;
  j["generator"] = std::string(to_string(s.generator));
  j["n"] = s.n;
  j["m"] = s.m;
  j["kernel_width"] = s.kernel_width;
  j["kernel_sigma"] = optional_number(s.kernel_sigma);
  j["decay_exponent"] = s.decay_exponent;
  j["profile"] = std::string(to_string(s.profile));
  j["seed"] = s.seed;
  if (s.matrix) j["matrix"] = s.matrix->to_rows();
  if (s.x_true) j["x_true"] = s.x_true->values();
  return j;
}

ProblemSpec problem_spec_from_json(const json& j) {
  ProblemSpec s;
  s.generator = parse_generator(j.at("generator").get<std::string>());
  if (s.generator == Generator::explicit_matrix) {
    s.matrix = Matrix::from_rows(j.at("matrix").get<std::vector<std::vector<double>>>());
    s.x_true = Vector(j.at("x_true").get<std::vector<double>>());
    s.m = s.matrix->rows();
    s.n = s.matrix->cols();
  } else {
    s.n = j.at("n").get<std::size_t>();
    s.m = j.value("m", s.n);
  }
  s.kernel_width = j.value("kernel_width", s.kernel_width);
  s.kernel_sigma = optional_from(j, "kernel_sigma");
  s.decay_exponent = j.value("decay_exponent", s.decay_exponent);
  s.profile = parse_truth_profile(j.value("profile", std::string("piecewise-constant")));
  s.seed = j.value("seed", s.seed);
  return s;
}

json materialize(const Problem& problem) {
  ProblemSpec s = problem.spec;
  s.generator = Generator::explicit_matrix;
  s.matrix = to_dense(*problem.op);
  s.x_true = problem.x_true;
  s.m = s.matrix->rows();
  s.n = s.matrix->cols();
  json j = to_json(s);
  j["y"] = problem.y.values();
  return j;
}

ExperimentRecord make_record(const RunResult& run, const StoppingRule& rule,
                             const json& config_echo) {
  ExperimentRecord rec;
  rec.rows = run.history;
  rec.stop = StopInfo{std::string(to_string(rule.kind)), rule.delta, run.state.k, run.status};
  rec.config = config_echo;
  return rec;
}

RunResult exact_limit_run(const Problem& problem, const ExperimentConfig& config) {
  IterationConfig it = config.iteration_config(*problem.op);
  it.detect_convergence = true;
  it.max_iter = config.exact_limit_budget;
  it.record_every = config.exact_limit_budget;
  StoppingRule rule;
  rule.kind = StopKind::max_iter;
  rule.cap = config.exact_limit_budget;
  return run_iteration(*problem.op, problem.y, it, rule);
}

References compute_references(const Problem& problem, const ExperimentConfig& config,
                              std::optional<Vector> exact_limit) {
  References refs;
  const Matrix dense = to_dense(*problem.op);
  refs.pinv = pseudoinverse_solve(dense, problem.y);
  if (config.compute_rmin) {
    RMinOptions opts;
    opts.budget = config.rmin_budget;
    const Regularizer r = config.perturbation ? config.perturbation->regularizer()
                                              : config.monitor.value_or(Regularizer(RegularizerKind::squared_norm));
    refs.rmin = r_min_solve(dense, problem.y, r, opts).x;
  }
  refs.exact_limit = std::move(exact_limit);
  return refs;
}

std::vector<ExperimentRecord> run_delta_sweep(const Problem& problem, const ExperimentConfig& config,
                                              const std::vector<StoppingRule>& rules,
                                              const std::vector<double>& deltas,
                                              const References& refs) {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw std::invalid_argument("sweep: every delta must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) {
      throw std::invalid_argument("sweep: deltas must be strictly decreasing");
    }
  }
  const IterationConfig it = config.iteration_config(*problem.op);
  const json echo = to_json(config);
  std::vector<ExperimentRecord> out;
  for (double delta : deltas) {
    const Vector yd = inject_noise(problem.y, NoiseSpec{delta, config.noise_seed});
    for (StoppingRule rule : rules) {
      rule.delta = delta;
      const RunResult run = run_iteration(*problem.op, yd, it, rule, refs);
      out.push_back(make_record(run, rule, echo));
    }
  }
  return out;
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + std::string(name) + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string to_csv(const ExperimentRecord& record) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const HistoryRow& r : record.rows) {
    out += std::to_string(r.k);
    out += ',' + format_double(r.residual_norm);
    out += ',' + format_double(r.reg_value);
    out += ',' + csv_field(r.error_to_pinv);
    out += ',' + csv_field(r.error_to_rmin);
    out += ',' + csv_field(r.error_to_exact_limit);
    out += '\n';
  }
  return out;
}

json to_json(const ExperimentRecord& record) {
  json rows = json::array();
  for (const HistoryRow& r : record.rows) {
    rows.push_back({{"k", r.k},
                    {"residual_norm", r.residual_norm},
                    {"reg_value", r.reg_value},
                    {"error_to_pinv", optional_number(r.error_to_pinv)},
                    {"error_to_rmin", optional_number(r.error_to_rmin)},
                    {"error_to_exact_limit", optional_number(r.error_to_exact_limit)}});
  }
  return {{"config", record.config},
          {"stop",
           {{"rule", record.stop.rule},
            {"delta", record.stop.delta},
            {"fired_index", record.stop.fired_index},
            {"flag", std::string(to_string(record.stop.flag))}}},
          {"rows", rows}};
}

ExperimentRecord experiment_record_from_json(const json& j) {
  ExperimentRecord rec;
  rec.config = j.at("config");
  const json& s = j.at("stop");
  rec.stop.rule = s.at("rule").get<std::string>();
  rec.stop.delta = s.at("delta").get<double>();
  rec.stop.fired_index = s.at("fired_index").get<std::size_t>();
  const std::string flag = s.at("flag").get<std::string>();
  if (flag == "fired") {
    rec.stop.flag = RunStatus::rule_fired;
  } else if (flag == "converged") {
    rec.stop.flag = RunStatus::converged;
  } else if (flag == "budget-exhausted") {
    rec.stop.flag = RunStatus::budget_exhausted;
  } else {
    throw std::invalid_argument("unknown stop flag '" + flag + "'");
  }
  for (const json& r : j.at("rows")) {
    HistoryRow row;
    row.k = r.at("k").get<std::size_t>();
    row.residual_norm = r.at("residual_norm").get<double>();
    row.reg_value = r.at("reg_value").get<double>();
    row.error_to_pinv = optional_from(r, "error_to_pinv");
    row.error_to_rmin = optional_from(r, "error_to_rmin");
    row.error_to_exact_limit = optional_from(r, "error_to_exact_limit");
    rec.rows.push_back(row);
  }
  return rec;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

void emit(const ExperimentRecord& record, Format format, const std::filesystem::path& path) {
  write_text_file(path, format == Format::csv ? to_csv(record) : to_json(record).dump(2) + "\n");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("'" + path.string() + "': " + e.what());
  }
}

std::string content_hash(const json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace superlw
