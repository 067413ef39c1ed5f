#pragma once

#include <filesystem>
#include <string>

#include "ptisabb/model.hpp"

namespace ptisabb {

// JSON layout:
//   {"agents": n, "domains": [d0, d1, ...],
//    "constraints": [{"i": 0, "j": 1, "fij": [[...]], "fji": [[...]]}, ...]}
// fij is indexed [value of i][value of j], fji is [value of j][value of i].

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

void write_instance(const Instance& instance, const std::filesystem::path& path);
Instance read_instance(const std::filesystem::path& path);

}  // namespace ptisabb
