#include "ptisabb/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ptisabb/pseudo_tree.hpp"

namespace ptisabb {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string sanitize(std::string text) {
  std::replace_if(text.begin(), text.end(), [](char c) { return c == ',' || c == '\n'; }, ';');
  return text;
}

}  // namespace

Family parse_family(const std::string& name) {
  if (name == "random" || name == "random_adcop") return Family::kRandomAdcop;
  if (name == "maxdcsp" || name == "max_dcsp") return Family::kMaxDcsp;
  throw std::invalid_argument("unknown family '" + name + "'");
}

std::string to_string(Family family) {
  return family == Family::kRandomAdcop ? "random_adcop" : "max_dcsp";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "pt-isabb") return Algorithm::kPtIsabb;
  if (name == "pt-isabb-local") return Algorithm::kPtIsabbLocal;
  if (name == "pt-sabb") return Algorithm::kPtSabb;
  if (name == "sabb") return Algorithm::kSabb;
  if (name == "brute") return Algorithm::kBrute;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kPtIsabb: return "pt-isabb";
    case Algorithm::kPtIsabbLocal: return "pt-isabb-local";
    case Algorithm::kPtSabb: return "pt-sabb";
    case Algorithm::kSabb: return "sabb";
    case Algorithm::kBrute: return "brute";
  }
  return "?";
}

SearchVariant AlgorithmSpec::variant() const {
  switch (algorithm) {
    case Algorithm::kPtIsabbLocal: return SearchVariant::kLocal;
    case Algorithm::kPtSabb: return SearchVariant::kNoInference;
    default: return SearchVariant::kNonLocal;
  }
}

std::string AlgorithmSpec::limit_label() const {
  if (algorithm != Algorithm::kPtIsabb && algorithm != Algorithm::kPtIsabbLocal) return "-";
  return dimension_limit == kNoDimensionLimit ? "inf" : std::to_string(dimension_limit);
}

std::string AlgorithmSpec::variant_label() const {
  switch (algorithm) {
    case Algorithm::kPtIsabb: return "non_local";
    case Algorithm::kPtIsabbLocal: return "local";
    case Algorithm::kPtSabb: return "no_inference";
    default: return "-";
  }
}

std::size_t parse_dimension_limit(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "INF") return kNoDimensionLimit;
  std::size_t pos = 0;
  long long k = 0;
  try {
    k = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("dimension limit must be a positive integer or 'inf'");
  }
  if (pos != text.size() || k < 1)
    throw std::invalid_argument("dimension limit must be a positive integer or 'inf'");
  return static_cast<std::size_t>(k);
}

Instance generate(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.family == Family::kRandomAdcop)
    return generate_random_adcop(
        RandomAdcopParams{spec.agents, spec.density, spec.domain_size, spec.max_cost, seed});
  return generate_max_dcsp(
      MaxDcspParams{spec.agents, spec.density, spec.domain_size, spec.tightness, seed});
}

RunRecord run_algorithm(const Instance& instance, const AlgorithmSpec& algorithm,
                        std::optional<std::chrono::duration<double>> timeout) {
  RunRecord record;
  record.algorithm = algorithm;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (timeout)
    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(*timeout);
  try {
    if (algorithm.algorithm == Algorithm::kBrute) {
      const auto best = brute_force_solve(instance);
      record.cost = best.cost;
      record.assignment = best.assignment;
      record.metrics.solution_cost = best.cost;
      return record;
    }
    const PseudoTree tree = build_pseudo_tree(instance);
    SolveResult solved;
    if (algorithm.algorithm == Algorithm::kSabb) {
      SabbOptions options;
      options.deadline = deadline;
      solved = solve_sabb(instance, tree.order, options);
    } else {
      SolveOptions options;
      options.dimension_limit = algorithm.dimension_limit;
      options.variant = algorithm.variant();
      options.deadline = deadline;
      solved = solve_pt_isabb(instance, tree, options);
    }
    record.cost = solved.cost;
    record.assignment = std::move(solved.assignment);
    record.metrics = solved.metrics;
  } catch (const TimeoutError& e) {
    record.status = RunStatus::kTimeout;
    record.error = e.what();
  } catch (const std::exception& e) {
    record.status = RunStatus::kError;
    record.error = e.what();
  }
  return record;
}

std::string csv_header() {
  return "algorithm,variant,k,n,density,domain,tightness,seed,cost,nclo,msgs_total,msgs_util,"
         "msgs_cpa,msgs_cost,msgs_backtrack,traffic,privacy_loss,status";
}

std::string csv_row(const RunRecord& r) {
  const auto& m = r.metrics;
  std::ostringstream out;
  out << to_string(r.algorithm.algorithm) << ',' << r.algorithm.variant_label() << ','
      << r.algorithm.limit_label() << ',' << r.generator.agents << ','
      << format_double(r.generator.density) << ',' << r.generator.domain_size << ','
      << format_double(r.generator.family == Family::kMaxDcsp ? r.generator.tightness : 0.0)
      << ',' << r.seed << ',';
  if (r.status == RunStatus::kOk)
    out << r.cost;
  else
    out << "";
  out << ',' << m.nclo << ',' << m.total_messages() << ',' << m.count(MessageKind::kUtil) << ','
      << m.count(MessageKind::kCpa) << ','
      << m.count(MessageKind::kCostReq) + m.count(MessageKind::kCost) << ','
      << m.count(MessageKind::kBacktrack) << ',' << m.traffic << ','
      << format_fixed(m.privacy_loss) << ',';
  switch (r.status) {
    case RunStatus::kOk: out << "ok"; break;
    case RunStatus::kTimeout: out << "timeout"; break;
    case RunStatus::kError: out << "error: " << sanitize(r.error); break;
  }
  return out.str();
}

void ExperimentSpec::validate() const {
  if (sweep_values.empty()) throw std::invalid_argument("experiment sweep is empty");
  if (instances < 1) throw std::invalid_argument("experiment needs at least one instance");
  if (algorithms.empty()) throw std::invalid_argument("experiment lists no algorithms");
  if (sweep_parameter != "agents" && sweep_parameter != "density" &&
      sweep_parameter != "tightness" && sweep_parameter != "domain")
    throw std::invalid_argument("unknown sweep parameter '" + sweep_parameter + "'");
  if (timeout_s <= 0) throw std::invalid_argument("timeout must be positive");
}

std::filesystem::path ExperimentSpec::aggregate_path() const {
  if (aggregate_output) return *aggregate_output;
  auto p = output;
  p.replace_filename(output.stem().string() + "_aggregate" + output.extension().string());
  return p;
}

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed experiment spec: ") + e.what());
  }
  ExperimentSpec spec;
  try {
    spec.base.family = parse_family(doc.value("family", std::string("random_adcop")));
    spec.base.agents = doc.value("agents", spec.base.agents);
    spec.base.density = doc.value("density", spec.base.density);
    spec.base.domain_size = doc.value("domain", spec.base.domain_size);
    spec.base.tightness = doc.value("tightness", spec.base.tightness);
    spec.base.max_cost = doc.value("max_cost", spec.base.max_cost);
    const auto& sweep = doc.at("sweep");
    spec.sweep_parameter = sweep.at("parameter").get<std::string>();
    spec.sweep_values = sweep.at("values").get<std::vector<double>>();
    spec.instances = doc.value("instances", spec.instances);
    spec.seed_base = doc.value("seed_base", spec.seed_base);
    spec.output = doc.value("output", std::string("results.csv"));
    if (doc.contains("aggregate_output"))
      spec.aggregate_output = doc.at("aggregate_output").get<std::string>();
    spec.timeout_s = doc.value("timeout_s", spec.timeout_s);
    spec.jobs = doc.value("jobs", spec.jobs);
    for (const auto& a : doc.at("algorithms")) {
      AlgorithmSpec alg;
      alg.algorithm = parse_algorithm(a.at("algo").get<std::string>());
      if (a.contains("k")) {
        const auto& k = a.at("k");
        const std::string text = k.is_string() ? k.get<std::string>() : k.dump();
        alg.dimension_limit = parse_dimension_limit(text);
      }
      spec.algorithms.push_back(alg);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed experiment spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

ExperimentSpec read_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_spec(buffer.str());
}

namespace {

GeneratorSpec at_point(const ExperimentSpec& spec, double value) {
  GeneratorSpec g = spec.base;
  if (spec.sweep_parameter == "agents") g.agents = static_cast<std::size_t>(value);
  else if (spec.sweep_parameter == "density") g.density = value;
  else if (spec.sweep_parameter == "tightness") g.tightness = value;
  else g.domain_size = static_cast<std::size_t>(value);
  return g;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t algos = spec.algorithms.size();
  const std::size_t tasks = spec.sweep_values.size() * spec.instances;
  ExperimentResult result;
  result.runs.resize(tasks * algos);
  result.point_of_run.resize(tasks * algos);

  auto run_task = [&](std::size_t task) {
    const std::size_t point = task / spec.instances;
    const std::size_t inst = task % spec.instances;
    const GeneratorSpec g = at_point(spec, spec.sweep_values[point]);
    const std::uint64_t seed = spec.seed_base + inst;
    std::optional<Instance> instance;
    std::string failure;
    try {
      instance = generate(g, seed);
    } catch (const std::exception& e) {
      failure = e.what();
    }
    for (std::size_t a = 0; a < algos; ++a) {
      RunRecord record;
      if (instance) {
        record = run_algorithm(*instance, spec.algorithms[a],
                               std::chrono::duration<double>(spec.timeout_s));
      } else {
        record.algorithm = spec.algorithms[a];
        record.status = RunStatus::kError;
        record.error = failure;
      }
      record.generator = g;
      record.seed = seed;
      result.runs[task * algos + a] = std::move(record);
      result.point_of_run[task * algos + a] = spec.sweep_values[point];
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(spec.jobs, tasks));
  if (jobs == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
    return result;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (std::size_t j = 0; j < jobs; ++j)
    workers.emplace_back([&] {
      for (std::size_t t = next++; t < tasks; t = next++) run_task(t);
    });
  for (auto& w : workers) w.join();
  return result;
}

void write_runs_csv(const ExperimentSpec&, const ExperimentResult& result, std::ostream& out) {
  out << csv_header() << '\n';
  for (const auto& r : result.runs) out << csv_row(r) << '\n';
}

void write_aggregate_csv(const ExperimentSpec& spec, const ExperimentResult& result,
                         std::ostream& out) {
  struct Sums {
    std::size_t runs = 0;
    std::size_t ok = 0;
    double cost = 0, nclo = 0, total = 0, util = 0, cpa = 0, cost_msgs = 0, backtrack = 0,
           traffic = 0, privacy = 0;
  };
  // keyed by (point index, algorithm index) to keep the spec's order
  std::map<std::pair<std::size_t, std::size_t>, Sums> sums;
  const std::size_t algos = spec.algorithms.size();
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    const auto& r = result.runs[i];
    const std::size_t point = (i / algos) / spec.instances;
    auto& s = sums[{point, i % algos}];
    ++s.runs;
    if (r.status != RunStatus::kOk) continue;
    ++s.ok;
    const auto& m = r.metrics;
    s.cost += static_cast<double>(r.cost);
    s.nclo += static_cast<double>(m.nclo);
    s.total += static_cast<double>(m.total_messages());
    s.util += static_cast<double>(m.count(MessageKind::kUtil));
    s.cpa += static_cast<double>(m.count(MessageKind::kCpa));
    s.cost_msgs +=
        static_cast<double>(m.count(MessageKind::kCostReq) + m.count(MessageKind::kCost));
    s.backtrack += static_cast<double>(m.count(MessageKind::kBacktrack));
    s.traffic += static_cast<double>(m.traffic);
    s.privacy += m.privacy_loss;
  }
  out << "parameter,value,algorithm,variant,k,runs,ok_runs,mean_cost,mean_nclo,mean_msgs_total,"
         "mean_msgs_util,mean_msgs_cpa,mean_msgs_cost,mean_msgs_backtrack,mean_traffic,"
         "mean_privacy_loss\n";
  for (const auto& [key, s] : sums) {
    const auto& alg = spec.algorithms[key.second];
    const double n = s.ok == 0 ? 1.0 : static_cast<double>(s.ok);
    out << spec.sweep_parameter << ',' << format_double(spec.sweep_values[key.first]) << ','
        << to_string(alg.algorithm) << ',' << alg.variant_label() << ',' << alg.limit_label()
        << ',' << s.runs << ',' << s.ok << ',' << format_fixed(s.cost / n) << ','
        << format_fixed(s.nclo / n) << ',' << format_fixed(s.total / n) << ','
        << format_fixed(s.util / n) << ',' << format_fixed(s.cpa / n) << ','
        << format_fixed(s.cost_msgs / n) << ',' << format_fixed(s.backtrack / n) << ','
        << format_fixed(s.traffic / n) << ',' << format_fixed(s.privacy / n) << '\n';
  }
}

}  // namespace ptisabb
