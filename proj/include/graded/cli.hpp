#pragma once

// The run / verify / compare commands behind the graded-ortho executable.
// Each returns the process exit status and writes human-readable lines to
// `out` (results and summaries) and `err` (diagnostics).

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "graded/io.hpp"

namespace graded::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,           // unreadable file, malformed JSON, schema violation, mismatched pair
  kMathFailure = 3,          // linear dependence, degenerate metric, terminal isotropic vector
  kVerificationFailure = 4,  // orthonormality residual above verify_tol
};

struct Tolerances {
  std::optional<double> degeneracy_tol;
  std::optional<double> verify_tol;
};

/// Solves a parsed problem in memory. Math failures propagate as exceptions.
io::ResultFile solve(const io::ProblemFile& problem, io::Method method, const Tolerances& overrides = {});

/// Writes the result to `output`, or to `out` when no path is given.
int run(const std::filesystem::path& input, const std::optional<std::filesystem::path>& output, io::Method method,
        const Tolerances& overrides, std::ostream& out, std::ostream& err);

int verify(const std::filesystem::path& input, const std::filesystem::path& result, const Tolerances& overrides,
           std::ostream& out, std::ostream& err);

int compare(const std::filesystem::path& input, const Tolerances& overrides, std::ostream& out, std::ostream& err);

}  // namespace graded::cli
