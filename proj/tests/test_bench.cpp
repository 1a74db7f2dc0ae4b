#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "superlw/experiment.hpp"
#include "test_support.hpp"

using namespace superlw;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("superlw_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ProblemSpec deconv64() {
  ProblemSpec s;
  s.generator = Generator::deconvolution_1d;
  s.n = s.m = 64;
  s.kernel_width = 5;
  s.profile = TruthProfile::piecewise_constant;
  s.seed = 3;
  return s;
}

}  // namespace

TEST_CASE("decay-spectrum has the prescribed singular values") {
  ProblemSpec spec;
  spec.generator = Generator::decay_spectrum;
  spec.n = spec.m = 16;
  spec.decay_exponent = 2.0;
  const Problem p = generate_problem(spec);
  const SvdFactorization f = SvdFactorization::compute(to_dense(*p.op));
  const Vector& s = f.singular_values();
  for (std::size_t i = 0; i < 16; ++i) CHECK(s[i] == doctest::Approx(1.0 / double((i + 1) * (i + 1))).epsilon(1e-12));
  CHECK(s[0] / s[15] == doctest::Approx(256.0).epsilon(1e-10));
}

TEST_CASE("deconvolution data is the blurred truth") {
  ProblemSpec spec;
  spec.generator = Generator::deconvolution_1d;
  spec.n = spec.m = 32;
  spec.kernel_width = 5;
  spec.profile = TruthProfile::sparse_spikes;
  const Problem p = generate_problem(spec);
  CHECK(p.op->kind() == OperatorKind::convolution_1d);
  CHECK(distance(p.y, p.op->apply(p.x_true)) <= 1e-14);
  std::size_t spikes = 0;
  for (double v : p.x_true) spikes += v != 0.0;
  CHECK(spikes == 3);
  const auto* conv = dynamic_cast<const ConvolutionOperator1D*>(p.op.get());
  REQUIRE(conv != nullptr);
  CHECK(conv->kernel().size() == 5);
  double sum = 0.0;
  for (double k : conv->kernel()) sum += k;
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("generators are deterministic and validate dimensions") {
  for (TruthProfile profile : {TruthProfile::piecewise_constant, TruthProfile::smooth_bump, TruthProfile::sparse_spikes}) {
    ProblemSpec s = deconv64();
    s.profile = profile;
    const Problem a = generate_problem(s);
    const Problem b = generate_problem(s);
    CHECK(a.x_true == b.x_true);
    CHECK(a.y == b.y);
    CHECK(norm(a.x_true) > 0.0);
    s.seed += 1;
    CHECK_FALSE(generate_problem(s).x_true == a.x_true);
  }
  ProblemSpec bad = deconv64();
  bad.kernel_width = 64;
  CHECK_THROWS_AS((void)generate_problem(bad), DimensionError);
  bad = deconv64();
  bad.m = 10;
  CHECK_THROWS_AS((void)generate_problem(bad), DimensionError);
  ProblemSpec missing;
  missing.generator = Generator::explicit_matrix;
  CHECK_THROWS_AS((void)generate_problem(missing), std::invalid_argument);
}

TEST_CASE("explicit-matrix round-trips through JSON") {
  const Problem original = generate_problem(deconv64());
  const json j = materialize(original);
  const Problem loaded = generate_problem(problem_spec_from_json(j));
  CHECK(loaded.op->kind() == OperatorKind::dense_matrix);
  CHECK(loaded.x_true == original.x_true);
  CHECK(to_dense(*loaded.op) == to_dense(*original.op));
  CHECK(loaded.y == Vector(j.at("y").get<std::vector<double>>()));
  CHECK(distance(loaded.y, original.y) <= 1e-15);
}

TEST_CASE("inject_noise examples") {
  const Problem p = generate_problem(deconv64());
  CHECK(inject_noise(p.y, NoiseSpec{0.0, 1}) == p.y);
  const Vector yd = inject_noise(p.y, NoiseSpec{0.1, 1});
  CHECK(std::abs(distance(yd, p.y) - 0.1) <= 1e-15);
  CHECK(inject_noise(p.y, NoiseSpec{0.1, 1}) == yd);
  CHECK_FALSE(inject_noise(p.y, NoiseSpec{0.1, 2}) == yd);
  CHECK_THROWS_AS((void)inject_noise(p.y, NoiseSpec{-1.0, 1}), std::invalid_argument);
}

TEST_CASE("noise level is exact for every generated dataset") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ProblemSpec s = deconv64();
    s.seed = seed;
    const Problem p = generate_problem(s);
    for (double delta : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-5}) {
      const Vector yd = inject_noise(p.y, NoiseSpec{delta, seed});
      CHECK(std::abs(distance(yd, p.y) - delta) <= 1e-14 * delta);
    }
  }
}

TEST_CASE("config JSON round-trips bit-exactly") {
  ExperimentConfig c;
  c.lambda = 0.123456789012345678;
  c.steps = StepSequence::geometric(0.1, 0.9);
  c.perturbation = PerturbationMap(Regularizer(RegularizerKind::tv_1d, 0.7), 1e-9, PerturbationMode::monotone);
  c.monitor = Regularizer(RegularizerKind::l1);
  c.rule.kind = StopKind::discrepancy;
  c.rule.tau = 1.3;
  c.noise_seed = 99;
  c.compute_rmin = true;
  const json j = to_json(c);
  const ExperimentConfig back = experiment_config_from_json(json::parse(j.dump()));
  CHECK(back == c);
  CHECK(to_json(back).dump() == j.dump());

  CHECK(experiment_config_from_json(json::object()) == ExperimentConfig{});
  CHECK(experiment_config_from_json(json{{"monitor", "tv-1d"}}).monitor == Regularizer(RegularizerKind::tv_1d));
  CHECK_THROWS_AS((void)experiment_config_from_json(json{{"steps", {{"kind", "harmonic"}}}}), std::invalid_argument);
  CHECK_THROWS_AS((void)experiment_config_from_json(json{{"rule", {{"kind", "discrepancy"}, {"tau", 0.5}}}}),
                  std::invalid_argument);
}

TEST_CASE("emit: csv layout") {
  ExperimentRecord rec;
  rec.config = json::object();
  CHECK(to_csv(rec) == std::string(kCsvHeader) + "\n");

  rec.rows.push_back(HistoryRow{3, 0.1, 2.0, 0.5, std::nullopt, 1.0 / 3.0});
  const std::string csv = to_csv(rec);
  CHECK(csv == std::string(kCsvHeader) + "\n3,0.10000000000000001,2,0.5,,0.33333333333333331\n");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("emit: json round-trip is bit exact and I/O errors name the path") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ExperimentRecord rec;
  rec.config = to_json(ExperimentConfig{});
  rec.stop = StopInfo{"a-priori", 0.01, 17, RunStatus::rule_fired};
  for (std::size_t k = 0; k < 50; ++k) {
    rec.rows.push_back(HistoryRow{k, std::exp(u(rng) * 30), u(rng), u(rng) * 1e-300, std::nullopt, std::nextafter(1.0, 2.0)});
  }
  const fs::path dir = scratch_dir("emit");
  emit(rec, Format::json, dir / "r.json");
  const ExperimentRecord back = experiment_record_from_json(read_json_file(dir / "r.json"));
  CHECK(back == rec);

  emit(rec, Format::csv, dir / "r.csv");
  CHECK(slurp(dir / "r.csv") == to_csv(rec));

  try {
    emit(rec, Format::csv, dir / "missing" / "r.csv");
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
}

TEST_CASE("sweep cardinality, ordering and flags") {
  const Problem p = generate_problem(deconv64());
  ExperimentConfig c;
  c.rule.kind = StopKind::a_priori;
  c.rule.c = 1.0;
  c.rule.p = 1.0;
  c.max_iter = 5000;
  c.record_every = 50;
  StoppingRule apriori = c.rule;
  StoppingRule disc = c.rule;
  disc.kind = StopKind::discrepancy;
  const std::vector<double> deltas{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  const References refs = compute_references(p, c);
  const auto records = run_delta_sweep(p, c, {apriori, disc}, deltas, refs);
  REQUIRE(records.size() == 10);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].stop.delta == deltas[i / 2]);
    CHECK(records[i].stop.rule == (i % 2 == 0 ? "a-priori" : "discrepancy"));
    CHECK(records[i].rows.front().error_to_pinv.has_value());
  }
  CHECK(records[0].stop.fired_index == 10);
  CHECK(records[8].stop.fired_index == 1000);

  // budget smaller than kappa: recorded, flagged, not dropped
  c.max_iter = 20;
  const auto flagged = run_delta_sweep(p, c, {apriori}, {1e-3}, refs);
  REQUIRE(flagged.size() == 1);
  CHECK(flagged[0].stop.flag == RunStatus::budget_exhausted);

  CHECK_THROWS_AS((void)run_delta_sweep(p, c, {apriori}, {1e-2, 1e-1}, refs), std::invalid_argument);
  CHECK_THROWS_AS((void)run_delta_sweep(p, c, {apriori}, {0.0}, refs), std::invalid_argument);
}

TEST_CASE("zero-step discrepancy sweep error decreases with delta") {
  const Problem p = generate_problem(deconv64());
  ExperimentConfig c;
  c.rule.kind = StopKind::discrepancy;
  c.max_iter = 100000;
  c.record_every = 100000;
  const References refs = compute_references(p, c);
  const auto records = run_delta_sweep(p, c, {c.rule}, {1e-1, 1e-2, 1e-3}, refs);
  REQUIRE(records.size() == 3);
  std::vector<double> errors;
  for (const auto& r : records) {
    CHECK(r.stop.flag == RunStatus::rule_fired);
    errors.push_back(r.rows.back().error_to_pinv.value());
  }
  CHECK(errors[1] < errors[0]);
  CHECK(errors[2] < errors[1]);
}

TEST_CASE("semiconvergence of the zero-step iteration at delta = 1e-2") {
  const Problem p = generate_problem(deconv64());
  ExperimentConfig c;
  c.max_iter = 30000;
  c.record_every = 100;
  c.rule.kind = StopKind::max_iter;
  c.rule.cap = 30000;
  const References refs = compute_references(p, c);
  REQUIRE(distance(*refs.pinv, p.x_true) <= 1e-8);  // square, invertible: pinv is the truth
  const Vector yd = inject_noise(p.y, NoiseSpec{1e-2, c.noise_seed});
  const RunResult r = run_iteration(*p.op, yd, c.iteration_config(*p.op), c.rule, refs);
  auto best = std::min_element(r.history.begin(), r.history.end(), [](const auto& a, const auto& b) {
    return *a.error_to_pinv < *b.error_to_pinv;
  });
  CHECK(best->k > 0);
  CHECK(best->k < r.history.back().k);
  CHECK(*r.history.back().error_to_pinv >= 1.05 * *best->error_to_pinv);
}

TEST_CASE("emitted sweep files are deterministic") {
  const Problem p = generate_problem(deconv64());
  ExperimentConfig c;
  c.steps = StepSequence::geometric(0.1, 0.9);
  c.perturbation = PerturbationMap(Regularizer(RegularizerKind::tv_1d));
  c.rule.kind = StopKind::a_priori;
  c.max_iter = 2000;
  c.record_every = 10;
  const fs::path a = scratch_dir("det_a");
  const fs::path b = scratch_dir("det_b");
  for (const fs::path& dir : {a, b}) {
    const References refs = compute_references(p, c);
    const auto recs = run_delta_sweep(generate_problem(deconv64()), c, {c.rule}, {1e-1, 1e-2}, refs);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      emit(recs[i], Format::csv, dir / ("r" + std::to_string(i) + ".csv"));
      emit(recs[i], Format::json, dir / ("r" + std::to_string(i) + ".json"));
    }
  }
  for (const char* name : {"r0.csv", "r1.csv", "r0.json", "r1.json"}) {
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

TEST_CASE("content hash is stable") {
  CHECK(content_hash(json{{"a", 1}}) == content_hash(json::parse("{\"a\":1}")));
  CHECK(content_hash(json{{"a", 1}}) != content_hash(json{{"a", 2}}));
  CHECK(content_hash(json::object()).size() == 16);
}

TEST_CASE("shipped sample configs parse") {
  const fs::path dir = SUPERLW_CONFIG_DIR;
  const Problem p = generate_problem(problem_spec_from_json(read_json_file(dir / "deconvolution64.json")));
  CHECK(p.op->domain_dim() == 64);
  for (const char* name : {"superiorized_tv.json", "landweber.json"}) {
    CAPTURE(name);
    const ExperimentConfig c = experiment_config_from_json(read_json_file(dir / name));
    CHECK_NOTHROW(c.iteration_config(*p.op).validate(*p.op));
  }
}
