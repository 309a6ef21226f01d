#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace polyfreq {

inline constexpr const char* kToolVersion = "0.1.0";

/// Everything needed to re-run one invocation and check its outputs.
struct ExperimentManifest {
  std::string command;
  std::vector<std::string> argv;                     // arguments after the program name
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string tool_version = kToolVersion;
  std::map<std::string, std::string> input_hashes;   // path -> FNV-1a
  std::map<std::string, std::string> output_hashes;  // path ("-" for stdout) -> FNV-1a
};

/// Exit codes: 0 success, 1 validation error, 2 solver error, 64 usage error.
int dispatch(int argc, const char* const* argv);
int dispatch(const std::vector<std::string>& args);

}  // namespace polyfreq
