#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "graded/cli.hpp"
#include "json.hpp"

using namespace graded;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kProblems = GRADED_PROBLEMS_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(GRADED_SCRATCH_DIR) / "cli";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<fs::path> exemplars() {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(kProblems))
    if (entry.path().extension() == ".json") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(const fs::path& input, const fs::path& output, io::Method method = io::Method::graded,
            cli::Tolerances tol = {}) {
  std::ostringstream out, err;
  const int code = cli::run(input, output, method, tol, out, err);
  return {code, out.str(), err.str()};
}

Outcome verify(const fs::path& input, const fs::path& result, cli::Tolerances tol = {}) {
  std::ostringstream out, err;
  const int code = cli::verify(input, result, tol, out, err);
  return {code, out.str(), err.str()};
}

Outcome compare(const fs::path& input) {
  std::ostringstream out, err;
  const int code = cli::compare(input, {}, out, err);
  return {code, out.str(), err.str()};
}

fs::path explicit_problem(const std::string& name, const std::string& metric, const json& levels, const json& gram) {
  const auto path = scratch(name);
  write(path, json{{"mode", "explicit"}, {"metric", metric}, {"explicit", {{"levels", levels}, {"gram", gram}}}}.dump());
  return path;
}

// Dotted paths of every object member below the root, skipping optional fields.
void required_paths(const json& j, const std::string& prefix, std::vector<std::string>& out) {
  for (const auto& [key, value] : j.items()) {
    if (key == "description" || key == "tolerances") continue;
    const auto path = prefix.empty() ? key : prefix + "." + key;
    out.push_back(path);
    if (value.is_object()) required_paths(value, path, out);
  }
}

void erase_path(json& j, const std::string& path) {
  const auto dot = path.find('.');
  if (dot == std::string::npos) {
    j.erase(path);
    return;
  }
  erase_path(j[path.substr(0, dot)], path.substr(dot + 1));
}

}  // namespace

TEST_CASE("every exemplar round-trips through run and verify") {
  const auto files = exemplars();
  REQUIRE(files.size() >= 6);
  std::set<std::pair<std::string, std::string>> combos;
  for (const auto& problem : files) {
    CAPTURE(problem);
    const auto parsed = io::load_problem(problem);
    combos.emplace(io::to_string(parsed.source.kind()), io::to_string(parsed.metric));
    const auto result = scratch(problem.stem().string() + ".result.json");
    const auto first = run(problem, result);
    CHECK(first.code == cli::kOk);
    const auto second = verify(problem, result);
    CHECK(second.code == cli::kOk);
    CHECK(second.out.find("embedded report reproduced") != std::string::npos);
  }
  CHECK(combos.size() == 6);  // every mode x metric combination is represented
}

TEST_CASE("result files are byte-identical across runs") {
  for (const auto& problem : exemplars()) {
    CAPTURE(problem);
    const auto a = scratch("determinism_a.json"), b = scratch("determinism_b.json");
    REQUIRE(run(problem, a).code == cli::kOk);
    REQUIRE(run(problem, b).code == cli::kOk);
    CHECK(io::read_file(a) == io::read_file(b));
    // Parsing and re-serializing is lossless.
    CHECK(io::format_result(io::load_result(a)) == io::read_file(a));
  }
}

TEST_CASE("identity Gram gives the identity table") {
  const auto problem = kProblems / "explicit_identity_euclidean.json";
  const auto result = scratch("identity.json");
  REQUIRE(run(problem, result).code == cli::kOk);
  const auto parsed = io::load_result(result);
  CHECK(parsed.table.matrix() == ComplexMatrix<double>::Identity(3, 3));
  CHECK(parsed.report.max_residual == 0.0);
  CHECK(parsed.input_digest == io::sha256_hex(io::read_file(problem)));
}

TEST_CASE("Fourier results carry the conjugate-symmetry post-check") {
  const auto problem = kProblems / "fourier_two_plus_cos_euclidean.json";
  const auto result = scratch("fourier.json");
  REQUIRE(run(problem, result).code == cli::kOk);
  const auto graded = io::load_result(result);
  REQUIRE(graded.conjugate_symmetry_defect);
  CHECK(*graded.conjugate_symmetry_defect <= 1e-12);
  CHECK(graded.table.index.level_count() == 5);
  // Gram-Schmidt in flat order breaks the symmetry yet still verifies.
  REQUIRE(run(problem, result, io::Method::gram_schmidt).code == cli::kOk);
  CHECK(*io::load_result(result).conjugate_symmetry_defect > 1e-3);
  CHECK(verify(problem, result).code == cli::kOk);
}

TEST_CASE("verify rejects tampered or foreign results") {
  const auto problem = kProblems / "explicit_complex_euclidean.json";
  const auto result = scratch("tamper.json");
  REQUIRE(run(problem, result).code == cli::kOk);

  SUBCASE("perturbed coefficient") {
    auto j = json::parse(io::read_file(result));
    j["levels"][1]["coefficients"][2][0][0] = j["levels"][1]["coefficients"][2][0][0].get<double>() + 0.1;
    const auto bad = scratch("tamper_coefficient.json");
    write(bad, j.dump(2));
    const auto outcome = verify(problem, bad);
    CHECK(outcome.code == cli::kVerificationFailure);
    const auto parsed = io::load_result(bad);
    CHECK(graded::verify(io::load_problem(problem).source, parsed.table).max_residual >= 0.01);
  }
  SUBCASE("grading violation") {
    auto j = json::parse(io::read_file(result));
    j["levels"][0]["coefficients"][4][0] = json::array({1e-30, 0.0});
    const auto bad = scratch("tamper_grading.json");
    write(bad, j.dump(2));
    const auto outcome = verify(problem, bad);
    CHECK(outcome.code == cli::kVerificationFailure);
    CHECK(outcome.out.find("VIOLATED") != std::string::npos);
  }
  SUBCASE("tighter tolerance override") {
    CHECK(verify(problem, result, {std::nullopt, 1e-30}).code == cli::kVerificationFailure);
  }
  SUBCASE("result of another problem") {
    const auto outcome = verify(kProblems / "explicit_identity_euclidean.json", result);
    CHECK(outcome.code == cli::kInputError);
    CHECK(outcome.err.find("digest") != std::string::npos);
  }
  SUBCASE("mismatched shapes") {
    auto j = json::parse(io::read_file(result));
    j["levels"][0]["coefficients"].erase(0);
    const auto bad = scratch("tamper_shape.json");
    write(bad, j.dump(2));
    CHECK(verify(problem, bad).code == cli::kInputError);
  }
  SUBCASE("malformed result") {
    const auto bad = scratch("tamper_syntax.json");
    write(bad, "{\"format\": ");
    CHECK(verify(problem, bad).code == cli::kInputError);
  }
}

TEST_CASE("math failures exit with 3 and name the level") {
  SUBCASE("repeated vector") {
    const auto problem = explicit_problem("repeated.json", "euclidean", {{"a"}, {"b", "c"}},
                                          {{1, 0, 0}, {0, 1, 1}, {0, 1, 1}});
    const auto outcome = run(problem, scratch("repeated.result.json"));
    CHECK(outcome.code == cli::kMathFailure);
    CHECK(outcome.err.find("level 1") != std::string::npos);
  }
  SUBCASE("repeated vector under the gram-schmidt reference") {
    const auto problem = explicit_problem("repeated_gs.json", "euclidean", {{"a"}, {"b"}}, {{1, 1}, {1, 1}});
    CHECK(run(problem, scratch("repeated_gs.result.json"), io::Method::gram_schmidt).code == cli::kMathFailure);
  }
  SUBCASE("terminal isotropic vector") {
    const auto problem = explicit_problem("terminal.json", "pseudo", {{"a"}, {"b"}}, {{1, 0}, {0, 0}});
    const auto outcome = run(problem, scratch("terminal.result.json"));
    CHECK(outcome.code == cli::kMathFailure);
    CHECK(outcome.err.find("level 1") != std::string::npos);
  }
  SUBCASE("degenerate level") {
    const auto problem =
        explicit_problem("degenerate.json", "pseudo", {{"a"}, {"b", "c"}}, {{1, 0, 0}, {0, 0, 0}, {0, 0, 0}});
    const auto outcome = run(problem, scratch("degenerate.result.json"));
    CHECK(outcome.code == cli::kMathFailure);
    CHECK(outcome.err.find("level 1") != std::string::npos);
  }
  SUBCASE("indefinite Gram on the euclidean path") {
    const auto problem = explicit_problem("indefinite.json", "euclidean", {{"a"}, {"b"}}, {{1, 0}, {0, -1}});
    CHECK(run(problem, scratch("indefinite.result.json")).code == cli::kMathFailure);
  }
}

TEST_CASE("schema violations exit with 2") {
  SUBCASE("every required-field deletion names the field") {
    for (const auto& problem : exemplars()) {
      const auto original = json::parse(io::read_file(problem));
      std::vector<std::string> paths;
      required_paths(original, "", paths);
      for (const auto& path : paths) {
        CAPTURE(problem);
        CAPTURE(path);
        auto j = original;
        erase_path(j, path);
        const auto broken = scratch("deleted.json");
        write(broken, j.dump(2));
        const auto outcome = run(broken, scratch("deleted.result.json"));
        CHECK(outcome.code == cli::kInputError);
        CHECK(outcome.err.find("'" + path + "'") != std::string::npos);
      }
    }
  }
  SUBCASE("syntax errors report the line") {
    const auto broken = scratch("syntax.json");
    write(broken, "{\n  \"mode\": \"explicit\",\n  \"metric\": \"euclidean\"\n  \"explicit\": {}\n}\n");
    const auto outcome = run(broken, scratch("syntax.result.json"));
    CHECK(outcome.code == cli::kInputError);
    CHECK(outcome.err.find("line 4") != std::string::npos);
  }
  SUBCASE("invalid values") {
    auto check = [](const json& j, const std::string& needle) {
      const auto broken = scratch("invalid.json");
      write(broken, j.dump());
      const auto outcome = run(broken, scratch("invalid.result.json"));
      CHECK(outcome.code == cli::kInputError);
      CHECK(outcome.err.find(needle) != std::string::npos);
    };
    const json base = json::parse(io::read_file(kProblems / "explicit_complex_euclidean.json"));
    auto j = base;
    j["metric"] = "lorentzian";
    check(j, "'metric'");
    j = base;
    j["fourier"] = {{"max_harmonic", 1}};
    check(j, "'fourier'");
    j = base;
    j["explicit"]["gram"][0][1] = json::array({1, 0.5, 3});
    check(j, "'explicit.gram[0][1]'");
    j = base;
    j["explicit"]["gram"][0][1] = 7;
    check(j, "not Hermitian");
    j = base;
    j["explicit"]["levels"][1] = json::array();
    check(j, "empty");
    j = base;
    j["tolerances"]["verify_tol"] = -1;
    check(j, "'tolerances.verify_tol'");
    j = base;
    j["extra"] = true;
    check(j, "'extra'");
    j = json::parse(io::read_file(kProblems / "fourier_two_plus_cos_euclidean.json"));
    j["fourier"]["max_harmonic"] = 8;
    check(j, "grid");
    j["fourier"]["max_harmonic"] = 1;
    j["fourier"]["weight"]["values"][3] = 0.0;
    check(j, "positive");
    j = json::parse(io::read_file(kProblems / "monomial_square_euclidean.json"));
    j["monomial"]["quadrature_order"] = 3;
    check(j, "quadrature");
    j["monomial"]["quadrature_order"] = 4;
    j["monomial"]["domain"][1] = json::array({1, -1});
    check(j, "domain");
  }
  SUBCASE("reference methods need the euclidean metric") {
    const auto outcome = run(kProblems / "explicit_promotion_pseudo.json", scratch("pseudo_gs.json"),
                             io::Method::gram_schmidt);
    CHECK(outcome.code == cli::kInputError);
  }
  SUBCASE("missing input file") {
    CHECK(run(scratch("does_not_exist.json"), scratch("none.json")).code == cli::kInputError);
  }
}

TEST_CASE("compare reports the degeneration identities") {
  SUBCASE("singleton levels") {
    const auto outcome = compare(kProblems / "monomial_legendre_euclidean.json");
    CHECK(outcome.code == cli::kOk);
    CHECK(outcome.out.find("graded = gram-schmidt holds") != std::string::npos);
  }
  SUBCASE("single level") {
    const auto problem = explicit_problem("single.json", "euclidean", {{"a", "b", "c"}},
                                          {{2, 0.5, 0.1}, {0.5, 3, 0.2}, {0.1, 0.2, 1}});
    const auto outcome = compare(problem);
    CHECK(outcome.code == cli::kOk);
    CHECK(outcome.out.find("graded = gram holds") != std::string::npos);
  }
  SUBCASE("multi-element levels differ from Gram-Schmidt") {
    const auto problem = explicit_problem("two_level.json", "euclidean", {{"a", "b"}, {"c"}},
                                          {{2, 0.5, 0.1}, {0.5, 3, 0.2}, {0.1, 0.2, 1}});
    const auto parsed = io::load_problem(problem);
    const auto graded = cli::solve(parsed, io::Method::graded).table.matrix();
    const auto schmidt = cli::solve(parsed, io::Method::gram_schmidt).table.matrix();
    CHECK(max_abs(ComplexMatrix<double>(graded - schmidt)) > 1e-3);
    CHECK(compare(problem).out.find("may differ") != std::string::npos);
  }
  SUBCASE("failures propagate") {
    const auto problem = explicit_problem("cmp_repeated.json", "euclidean", {{"a"}, {"b"}}, {{1, 1}, {1, 1}});
    CHECK(compare(problem).code == cli::kMathFailure);
  }
}
