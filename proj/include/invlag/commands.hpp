#pragma once

#include <string>

#include "json.hpp"

#include "invlag/problem_file.hpp"

namespace invlag {

struct CommandOptions {
  std::uint64_t seed = 7;
  int samples = 64;
  double tol = 1e-9;
  bool seed_overrides_file = false;     // --seed given explicitly
  bool samples_overrides_file = false;  // --samples given explicitly
};

struct CommandResult {
  int exit_code = 0;
  nlohmann::ordered_json report;
  std::string csv;  // cmd_integrate only
};

// Exit codes: 0 affirmative, 1 negative mathematical verdict,
//             2 input error, 3 numeric/domain error.
CommandResult cmd_validate(const ProblemFile& pf, const CommandOptions& opts);
CommandResult cmd_cohomology(const ProblemFile& pf, const CommandOptions& opts);
// ansatz: "given", "constant", or "poly:D"
CommandResult cmd_helmholtz(const ProblemFile& pf, const CommandOptions& opts,
                            const std::string& ansatz);
// ansatz "given" uses the file's lagrangian/multiplier; "constant" and
// "poly:D" run the polynomial ansatz search instead.
CommandResult cmd_obstruct(const ProblemFile& pf, const CommandOptions& opts,
                           const std::string& ansatz = "given");
CommandResult cmd_integrate(const ProblemFile& pf, const CommandOptions& opts,
                            bool with_reconstruction);

/// Wraps a command: load file, run, catch input/domain errors into exit codes
/// 2/3. `raw_text` is the file content (for the digest).
CommandResult run_command(const std::string& command, const std::string& path,
                          const CommandOptions& opts, const std::string& ansatz = "given",
                          bool with_reconstruction = false);

std::string fnv1a_hex(const std::string& data);

}  // namespace invlag
