#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spalign {

/// Exit codes shared by the commands.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInput = 2, kExitEmpty = 3 };

/// `align --old F --new F [--beam K] [--max-rows R] [--top T] [--no-partial]
/// [--format text|json] [--probs] [--layout rows|columns] [--serial]`.
/// `args` excludes the program and command names.
int run_align(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `learn --corpus F [--beam K] [--grammar-beam B] [--iterations I]
/// [--out F] [--format text|json]`.
int run_learn(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatches on the first argument (`align` or `learn`).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spalign
