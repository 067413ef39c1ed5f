#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ptisabb/baselines.hpp"
#include "ptisabb/metrics.hpp"
#include "ptisabb/model.hpp"
#include "ptisabb/search.hpp"

namespace ptisabb {

enum class Family { kRandomAdcop, kMaxDcsp };

Family parse_family(const std::string& name);
std::string to_string(Family family);

enum class Algorithm { kPtIsabb, kPtIsabbLocal, kPtSabb, kSabb, kBrute };

Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm algorithm);

/// One solver configuration. `dimension_limit` only matters for the two
/// inference-based algorithms.
struct AlgorithmSpec {
  Algorithm algorithm = Algorithm::kPtIsabb;
  std::size_t dimension_limit = kNoDimensionLimit;

  SearchVariant variant() const;
  /// "inf", a number, or "-" when the algorithm has no limit.
  std::string limit_label() const;
  std::string variant_label() const;
};

/// Parses "inf" / "infinity" or a positive integer.
std::size_t parse_dimension_limit(const std::string& text);

struct GeneratorSpec {
  Family family = Family::kRandomAdcop;
  std::size_t agents = 8;
  double density = 0.25;
  std::size_t domain_size = 3;
  double tightness = 0.0;
  Cost max_cost = 100;
};

Instance generate(const GeneratorSpec& spec, std::uint64_t seed);

enum class RunStatus { kOk, kTimeout, kError };

struct RunRecord {
  AlgorithmSpec algorithm;
  GeneratorSpec generator;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::kOk;
  std::string error;
  Cost cost = 0;
  Assignment assignment;
  Metrics metrics;
};

/// Solves one instance with one algorithm. Timeouts and failures are captured
/// in the record's status rather than thrown.
RunRecord run_algorithm(const Instance& instance, const AlgorithmSpec& algorithm,
                        std::optional<std::chrono::duration<double>> timeout = std::nullopt);

std::string csv_header();
std::string csv_row(const RunRecord& record);

struct ExperimentSpec {
  GeneratorSpec base;
  /// One of "agents", "density", "tightness", "domain".
  std::string sweep_parameter = "agents";
  std::vector<double> sweep_values;
  std::size_t instances = 50;
  std::vector<AlgorithmSpec> algorithms;
  std::uint64_t seed_base = 0;
  std::filesystem::path output = "results.csv";
  std::optional<std::filesystem::path> aggregate_output;
  double timeout_s = 120.0;
  std::size_t jobs = 1;

  /// Validates: nonempty sweep and algorithm list, at least one instance.
  void validate() const;
  std::filesystem::path aggregate_path() const;
};

ExperimentSpec parse_experiment_spec(const std::string& json_text);
ExperimentSpec read_experiment_spec(const std::filesystem::path& path);

struct ExperimentResult {
  /// Ordered by (sweep point, instance, algorithm).
  std::vector<RunRecord> runs;
  std::vector<double> point_of_run;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

void write_runs_csv(const ExperimentSpec& spec, const ExperimentResult& result, std::ostream& out);
/// Means over successful runs per (sweep point, algorithm).
void write_aggregate_csv(const ExperimentSpec& spec, const ExperimentResult& result,
                         std::ostream& out);

}  // namespace ptisabb
