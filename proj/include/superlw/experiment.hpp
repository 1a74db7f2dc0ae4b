#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "superlw/iterate.hpp"
#include "superlw/oracle.hpp"
#include "superlw/problem.hpp"
#include "superlw/stopping.hpp"

namespace superlw {

/// Everything needed to reproduce a run, as read from a config file.
struct ExperimentConfig {
  std::optional<double> lambda;  // absent: lambda_factor / (1.01 ||A||)^2
  double lambda_factor = 0.9;
  StepSequence steps = StepSequence::zero();
  std::optional<PerturbationMap> perturbation;
  std::optional<Regularizer> monitor;
  long max_iter = 100000;
  long record_every = 1;
  double convergence_tol = 1e-10;
  StoppingRule rule;
  std::uint64_t noise_seed = 2024;
  long exact_limit_budget = 200000;
  bool compute_rmin = false;
  long rmin_budget = 100000;

  /// Resolves lambda against the operator.
  [[nodiscard]] IterationConfig iteration_config(const LinearOperator& op) const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

/// Explicit-matrix problems embed "matrix" (nested rows) and "x_true".
nlohmann::json to_json(const ProblemSpec& spec);
ProblemSpec problem_spec_from_json(const nlohmann::json& j);

/// Explicit-matrix description of a generated problem, with "y" added.
nlohmann::json materialize(const Problem& problem);

struct StopInfo {
  std::string rule;
  double delta = 0.0;
  std::size_t fired_index = 0;
  RunStatus flag = RunStatus::budget_exhausted;

  friend bool operator==(const StopInfo&, const StopInfo&) = default;
};

struct ExperimentRecord {
  std::vector<HistoryRow> rows;
  StopInfo stop;
  nlohmann::json config;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

[[nodiscard]] ExperimentRecord make_record(const RunResult& run, const StoppingRule& rule,
                                           const nlohmann::json& config_echo);

/// Long exact-data run from x0 = 0 with convergence detection; its final
/// iterate stands in for the exact-data limit of the configured iteration.
[[nodiscard]] RunResult exact_limit_run(const Problem& problem, const ExperimentConfig& config);

/// Pseudoinverse solution, optionally the r-minimizing solution, and an
/// optional exact-data limit, all for the exact data of `problem`.
[[nodiscard]] References compute_references(const Problem& problem, const ExperimentConfig& config,
                                            std::optional<Vector> exact_limit = {});

/// For each delta (strictly decreasing, positive) inject noise with the
/// config's seed and run every rule with its delta set accordingly. Records
/// come out delta-major, rule-minor. Flagged runs are kept.
[[nodiscard]] std::vector<ExperimentRecord> run_delta_sweep(const Problem& problem,
                                                            const ExperimentConfig& config,
                                                            const std::vector<StoppingRule>& rules,
                                                            const std::vector<double>& deltas,
                                                            const References& refs);

enum class Format { csv, json };
Format parse_format(std::string_view name);

inline constexpr const char* kCsvHeader =
    "k,residual_norm,reg_value,error_to_pinv,error_to_rmin,error_to_exact_limit";

/// printf %.17g, which round-trips every finite double.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] std::string to_csv(const ExperimentRecord& record);
[[nodiscard]] nlohmann::json to_json(const ExperimentRecord& record);
[[nodiscard]] ExperimentRecord experiment_record_from_json(const nlohmann::json& j);

/// Writes UTF-8 with LF endings. Throws std::runtime_error naming the path on failure.
void emit(const ExperimentRecord& record, Format format, const std::filesystem::path& path);

[[nodiscard]] nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// FNV-1a over the compact dump; stable across runs and platforms.
[[nodiscard]] std::string content_hash(const nlohmann::json& j);

}  // namespace superlw
