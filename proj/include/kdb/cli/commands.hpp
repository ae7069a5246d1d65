#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace kdb::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_type_errors = 1,
  exit_input = 2,  // parse errors, unreadable files, bad flags
  exit_err = 3,
  exit_step_limit = 4,
};

inline constexpr std::size_t k_explore_guard = 1'000'000;

struct Io {
  std::ostream & out;
  std::ostream & err;
  bool color = false;
};

struct RunConfig {
  std::string file;
  std::uint64_t seed = 0;
  std::size_t max_steps = 10000;
  std::optional<std::string> trace_out;
  bool unchecked = false;
  std::size_t bound = 10000;
  std::optional<std::string> dot_out;
};

int cmd_check(const std::string & file, bool json, const Io & io);
int cmd_run(const RunConfig & cfg, const Io & io);
int cmd_explore(const RunConfig & cfg, const Io & io);
int cmd_dump(const std::string & file, const Io & io);

// Full command line handling; argv[0] is the program name.
int main_cli(int argc, const char * const * argv, const Io & io);

}  // namespace kdb::cli
