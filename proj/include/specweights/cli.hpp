#pragma once

#include <json.hpp>
#include <string>

#include "specweights/density.hpp"
#include "specweights/domain.hpp"

namespace sw {

struct RunConfig {
  std::string command;  // solve | cheeger | family | certify | optimize
  nlohmann::json raw;
  std::string out_dir = ".";
  bool plot = false;
  int jobs = 1;
  uint64_t seed = 12345;
};

// Exit codes: 0 ok, 2 config/schema error, 3 numerical failure.
int run(const RunConfig& config);

int cli_main(int argc, char** argv);

// Shared config parsing helpers (also used by tests).
DomainSpec parse_domain(const nlohmann::json& j);
FamilySpec parse_family(const nlohmann::json& j);

}  // namespace sw
