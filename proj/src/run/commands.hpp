#pragma once

#include "run/config.hpp"

#include <optional>
#include <string>

namespace sq::run {

inline constexpr const char* kToolVersion = "0.3.0";

enum ExitCode { kExitPass = 0, kExitCheckFailure = 1, kExitConfigError = 2, kExitDisagreement = 3 };

/// Output of one command. json is always filled; csv only by classify.
struct RunResult {
  int exit_code = kExitPass;
  std::string json;
  std::string csv;
  std::string summary;  // one human-readable line
};

RunResult cmd_verify_kahler(const RunConfig& c);
RunResult cmd_classify(const RunConfig& c, int threads = 1);
RunResult cmd_model_check(const RunConfig& c, int threads = 1);
RunResult cmd_berezin_eval(const std::string& element, int k);
RunResult cmd_selftest();

struct Overrides {
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

/// Parses the config text and dispatches on the command name
/// ("verify-kahler", "classify", "model-check"). Config errors and bad
/// input become exit code 2 with an error report instead of throwing.
RunResult run_command(const std::string& command, const std::string& config_text, const Overrides& o = {});

}  // namespace sq::run
