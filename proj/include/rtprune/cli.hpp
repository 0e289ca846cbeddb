// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rtprune::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kNumericalFailure = 1,
    kMalformedInput = 2,
    kConfigConflict = 3,
};

/// Runs the command line `args` (args[0] is the program name) and returns
/// the exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rtprune::cli
