// graded-ortho: orthonormalize graded vector systems described by JSON problem files.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "graded/cli.hpp"

namespace {

void add_tolerances(CLI::App* cmd, std::optional<double>& degeneracy, std::optional<double>& verify) {
  cmd->add_option("--degeneracy-tol", degeneracy, "Relative eigenvalue threshold for rank decisions")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--verify-tol", verify, "Largest accepted orthonormality residual")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graded orthonormalization of vector systems given by their Gram matrices"};
  app.set_version_flag("--version", std::string(graded::io::kToolVersion));
  app.require_subcommand(1);

  std::string input, result, method = "graded";
  std::optional<std::string> output;
  graded::cli::Tolerances tol;

  auto* run = app.add_subcommand("run", "Orthonormalize a problem and write the result file");
  run->add_option("input", input, "Problem file")->required();
  run->add_option("--method", method, "graded, gram-schmidt or gram")
      ->check(CLI::IsMember({"graded", "gram-schmidt", "gram"}));
  run->add_option("--output,-o", output, "Result file (default: standard output)");
  add_tolerances(run, tol.degeneracy_tol, tol.verify_tol);

  auto* verify = app.add_subcommand("verify", "Re-check a result file against its problem");
  verify->add_option("input", input, "Problem file")->required();
  verify->add_option("result", result, "Result file")->required();
  verify->add_option("--verify-tol", tol.verify_tol, "Largest accepted orthonormality residual")
      ->check(CLI::PositiveNumber);

  auto* compare = app.add_subcommand("compare", "Run all three methods and report their differences");
  compare->add_option("input", input, "Problem file")->required();
  add_tolerances(compare, tol.degeneracy_tol, tol.verify_tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : graded::cli::kInputError;
  }

  if (*run) {
    std::optional<std::filesystem::path> path;
    if (output) path = *output;
    return graded::cli::run(input, path, graded::io::parse_method(method), tol, std::cout, std::cerr);
  }
  if (*verify) return graded::cli::verify(input, result, tol, std::cout, std::cerr);
  return graded::cli::compare(input, tol, std::cout, std::cerr);
}
