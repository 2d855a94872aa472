// cli.hpp: command-line front end. `run` is the whole program minus
// process plumbing so that tests can drive it in-process.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qswitch::cli {

inline constexpr const char* kOutputDirEnv = "QSWITCH_OUTPUT_DIR";

struct RunConfig {
  std::string command;
  std::uint64_t shots = 1'000'000;
  std::uint64_t seed = 1;
  double visibility = 1.0;
  double dephasing = 0.0;
  double jitter = 0.0;
  std::string format;  // json or csv; empty means the command's default
  std::string output;  // empty means stdout
  unsigned threads = 1;

  // Command-specific.
  bool restricted = false;     // bound
  int grid = 11;               // sweep
  std::string events;          // spacetime
  double corrupt_angle = 0.0;  // optics-check, hidden negative control
  bool dump_network = false;   // optics-check
};

/// Runs one command. Returns the process exit code; errors are written to
/// `err` as {"error": {"type", "message"}}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qswitch::cli
