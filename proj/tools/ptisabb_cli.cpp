// Command line front end: generate instances, solve them, run sweeps.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ptisabb/experiment.hpp"
#include "ptisabb/instance_io.hpp"
#include "ptisabb/pseudo_tree.hpp"

namespace {

using namespace ptisabb;

struct GenerateArgs {
  std::string family = "random";
  std::size_t agents = 8;
  double density = 0.25;
  std::size_t domain = 3;
  double tightness = 0.1;
  Cost max_cost = 100;
  std::uint64_t seed = 0;
  std::string out;
};

struct SolveArgs {
  std::string instance;
  std::string algo = "pt-isabb";
  std::string k = "inf";
  std::string variant;
  std::optional<double> timeout_s;
  std::string dot;
};

int do_generate(const GenerateArgs& args) {
  GeneratorSpec spec;
  spec.family = parse_family(args.family);
  spec.agents = args.agents;
  spec.density = args.density;
  spec.domain_size = args.domain;
  spec.tightness = args.tightness;
  spec.max_cost = args.max_cost;
  const Instance instance = generate(spec, args.seed);
  if (args.out.empty()) {
    std::cout << instance_to_json(instance) << '\n';
  } else {
    write_instance(instance, args.out);
    std::cerr << "wrote " << args.out << '\n';
  }
  std::cerr << "agents=" << instance.agent_count()
            << " constraints=" << instance.constraints().size()
            << " domain=" << spec.domain_size << '\n';
  return 0;
}

int do_solve(const SolveArgs& args) {
  const Instance instance = read_instance(args.instance);
  AlgorithmSpec alg;
  alg.algorithm = parse_algorithm(args.algo);
  alg.dimension_limit = parse_dimension_limit(args.k);
  if (!args.variant.empty()) {
    if (alg.algorithm != Algorithm::kPtIsabb && alg.algorithm != Algorithm::kPtIsabbLocal &&
        alg.algorithm != Algorithm::kPtSabb)
      throw std::invalid_argument("--variant applies to the pseudo-tree algorithms only");
    alg.algorithm = args.variant == "local"          ? Algorithm::kPtIsabbLocal
                    : args.variant == "no_inference" ? Algorithm::kPtSabb
                                                     : Algorithm::kPtIsabb;
  }

  if (!args.dot.empty()) {
    std::ofstream dot(args.dot);
    if (!dot) throw std::runtime_error("cannot open " + args.dot);
    dot << build_pseudo_tree(instance).to_dot();
  }

  std::optional<std::chrono::duration<double>> timeout;
  if (args.timeout_s) timeout = std::chrono::duration<double>(*args.timeout_s);
  RunRecord record = run_algorithm(instance, alg, timeout);
  record.generator.agents = instance.agent_count();
  record.generator.density =
      instance.agent_count() < 2
          ? 0.0
          : static_cast<double>(instance.constraints().size()) /
                (static_cast<double>(instance.agent_count() * (instance.agent_count() - 1)) / 2.0);
  record.generator.domain_size = instance.agent_count() == 0 ? 0 : instance.domain_size(0);

  std::cout << csv_header() << '\n' << csv_row(record) << '\n';
  if (record.status == RunStatus::kOk) {
    std::cout << "assignment:";
    for (Value v : record.assignment.values()) std::cout << ' ' << v;
    std::cout << '\n';
    return 0;
  }
  std::cerr << record.error << '\n';
  return record.status == RunStatus::kTimeout ? 3 : 1;
}

int do_experiment(const std::string& spec_path, std::optional<std::size_t> jobs,
                  const std::string& out_override) {
  ExperimentSpec spec = read_experiment_spec(spec_path);
  if (jobs) spec.jobs = *jobs;
  if (!out_override.empty()) spec.output = out_override;
  const ExperimentResult result = run_experiment(spec);
  {
    std::ofstream out(spec.output);
    if (!out) throw std::runtime_error("cannot open " + spec.output.string());
    write_runs_csv(spec, result, out);
  }
  {
    std::ofstream agg(spec.aggregate_path());
    if (!agg) throw std::runtime_error("cannot open " + spec.aggregate_path().string());
    write_aggregate_csv(spec, result, agg);
  }
  std::size_t failed = 0;
  for (const auto& r : result.runs) failed += r.status != RunStatus::kOk;
  std::cerr << result.runs.size() << " runs, " << failed << " not ok; wrote " << spec.output
            << " and " << spec.aggregate_path() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymmetric DCOP solvers: PT-ISABB and baselines"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Generate a random instance as JSON");
  generate_cmd->add_option("--family", gen.family, "random | maxdcsp")
      ->check(CLI::IsMember({"random", "random_adcop", "maxdcsp", "max_dcsp"}));
  generate_cmd->add_option("--agents", gen.agents)->check(CLI::PositiveNumber);
  generate_cmd->add_option("--density", gen.density)->check(CLI::Range(0.0, 1.0));
  generate_cmd->add_option("--domain", gen.domain)->check(CLI::PositiveNumber);
  generate_cmd->add_option("--tightness", gen.tightness)->check(CLI::Range(0.0, 1.0));
  generate_cmd->add_option("--max-cost", gen.max_cost)->check(CLI::NonNegativeNumber);
  generate_cmd->add_option("--seed", gen.seed);
  generate_cmd->add_option("--out", gen.out, "Output path; stdout when omitted");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance and print a metrics row");
  solve_cmd->add_option("--instance", solve.instance)->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--algo", solve.algo)
      ->check(CLI::IsMember({"pt-isabb", "pt-isabb-local", "pt-sabb", "sabb", "brute"}));
  solve_cmd->add_option("--k", solve.k, "Dimension limit: positive integer or inf");
  solve_cmd->add_option("--variant", solve.variant, "Overrides the pseudo-tree variant")
      ->check(CLI::IsMember({"non_local", "local", "no_inference"}));
  solve_cmd->add_option("--timeout-s", solve.timeout_s);
  solve_cmd->add_option("--dot", solve.dot, "Write the pseudo tree as DOT");

  std::string spec_path;
  std::optional<std::size_t> jobs;
  std::string experiment_out;
  auto* experiment_cmd = app.add_subcommand("experiment", "Run a parameter sweep from a JSON spec");
  experiment_cmd->add_option("--spec", spec_path)->required()->check(CLI::ExistingFile);
  experiment_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--out", experiment_out, "Override the spec's output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate_cmd) return do_generate(gen);
    if (*solve_cmd) return do_solve(solve);
    return do_experiment(spec_path, jobs, experiment_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
