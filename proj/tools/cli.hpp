#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hiercut::cli {

/// Runs one subcommand (validate, sample-cuts, train, eval, gen-synth).
/// Failures are reported on `err` as a single `E:<code>:<detail>` line and
/// yield a non-zero status: 1 for load/validation errors, 2 for usage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hiercut::cli
