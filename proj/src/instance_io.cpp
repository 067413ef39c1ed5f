#include "ptisabb/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ptisabb {

using nlohmann::json;

namespace {

json matrix_to_json(const CostMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Cost json_cost(const json& v) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u >= static_cast<std::uint64_t>(kInfinity)) throw InstanceError("cost out of range");
      return static_cast<Cost>(u);
    }
    return v.get<Cost>();
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    const auto c = static_cast<Cost>(d);
    if (static_cast<double>(c) != d) throw InstanceError("costs must be integers");
    return c;
  }
  throw InstanceError("cost entry is not a number");
}

CostMatrix matrix_from_json(const json& rows, std::size_t expected_rows,
                            std::size_t expected_cols) {
  if (!rows.is_array() || rows.size() != expected_rows)
    throw InstanceError("cost table has wrong number of rows");
  CostMatrix m(expected_rows, expected_cols);
  for (std::size_t r = 0; r < expected_rows; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || row.size() != expected_cols)
      throw InstanceError("cost table has wrong number of columns");
    for (std::size_t c = 0; c < expected_cols; ++c) m(r, c) = json_cost(row[c]);
  }
  return m;
}

}  // namespace

std::string instance_to_json(const Instance& instance) {
  json doc;
  doc["agents"] = instance.agent_count();
  doc["domains"] = instance.domains();
  json constraints = json::array();
  for (const auto& c : instance.constraints()) {
    constraints.push_back(
        {{"i", c.i}, {"j", c.j}, {"fij", matrix_to_json(c.fij)}, {"fji", matrix_to_json(c.fji)}});
  }
  doc["constraints"] = std::move(constraints);
  return doc.dump();
}

Instance instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceError(std::string("malformed instance JSON: ") + e.what());
  }
  try {
    const auto n = doc.at("agents").get<std::int64_t>();
    if (n <= 0) throw InstanceError("agents must be positive");
    const auto& domains_json = doc.at("domains");
    if (!domains_json.is_array() || domains_json.size() != static_cast<std::size_t>(n))
      throw InstanceError("domains must list one size per agent");
    std::vector<std::size_t> domains;
    for (const auto& d : domains_json) {
      const auto size = d.get<std::int64_t>();
      if (size <= 0) throw InstanceError("domain sizes must be positive");
      domains.push_back(static_cast<std::size_t>(size));
    }
    std::vector<Constraint> constraints;
    for (const auto& cj : doc.at("constraints")) {
      const auto i = cj.at("i").get<std::int64_t>();
      const auto j = cj.at("j").get<std::int64_t>();
      if (i < 0 || j < 0 || i >= n || j >= n)
        throw InstanceError("constraint references unknown agent");
      const auto di = domains[static_cast<std::size_t>(i)];
      const auto dj = domains[static_cast<std::size_t>(j)];
      constraints.push_back(Constraint{static_cast<AgentId>(i), static_cast<AgentId>(j),
                                       matrix_from_json(cj.at("fij"), di, dj),
                                       matrix_from_json(cj.at("fji"), dj, di)});
    }
    return Instance(std::move(domains), std::move(constraints));
  } catch (const json::exception& e) {
    throw InstanceError(std::string("malformed instance: ") + e.what());
  }
}

void write_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << instance_to_json(instance) << '\n';
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

}  // namespace ptisabb
