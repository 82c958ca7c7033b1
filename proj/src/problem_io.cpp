#include <fstream>
#include <sstream>

#include "graded/io.hpp"
#include "json_fields.hpp"

namespace graded::io {

using namespace detail;

std::string to_string(GramKind kind) {
  switch (kind) {
    case GramKind::explicit_matrix: return "explicit";
    case GramKind::fourier: return "fourier";
    case GramKind::monomial: return "monomial";
  }
  return "?";
}

std::string to_string(Metric metric) { return metric == Metric::euclidean ? "euclidean" : "pseudo"; }

std::string to_string(Method method) {
  switch (method) {
    case Method::graded: return "graded";
    case Method::gram_schmidt: return "gram-schmidt";
    case Method::gram: return "gram";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "graded") return Method::graded;
  if (name == "gram-schmidt") return Method::gram_schmidt;
  if (name == "gram") return Method::gram;
  throw FormatError("unknown method '" + name + "' (expected graded, gram-schmidt or gram)");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace {

WeightFunction<double> parse_weight(const json& j, const std::string& path) {
  expect_object(j, path);
  const auto kind = as_string(require(j, path, "kind"), join(path, "kind"));
  if (kind == "uniform") {
    reject_unknown(j, path, {"kind"});
    return WeightFunction<double>::uniform();
  }
  if (kind != "samples") schema_error(join(path, "kind"), "expected \"uniform\" or \"samples\"");
  reject_unknown(j, path, {"kind", "values"});
  const auto values_path = join(path, "values");
  const auto& values = require(j, path, "values");
  expect_array(values, values_path);
  std::vector<double> samples;
  for (std::size_t i = 0; i < values.size(); ++i) samples.push_back(as_real(values[i], item(values_path, i)));
  return WeightFunction<double>::sampled(std::move(samples));
}

GramSource<double> parse_explicit(const json& j) {
  const std::string path = "explicit";
  expect_object(j, path);
  reject_unknown(j, path, {"levels", "gram"});
  auto levels = as_levels(require(j, path, "levels"), "explicit.levels");
  const auto gram = as_matrix(require(j, path, "gram"), "explicit.gram");
  if (gram.rows() != gram.cols()) schema_error("explicit.gram", "matrix must be square");
  return build_explicit(GradedIndex(std::move(levels)), gram);
}

GramSource<double> parse_fourier(const json& j) {
  const std::string path = "fourier";
  expect_object(j, path);
  reject_unknown(j, path, {"max_harmonic", "weight"});
  const auto m = as_int(require(j, path, "max_harmonic"), "fourier.max_harmonic", 0);
  return fourier_gram(static_cast<int>(m), parse_weight(require(j, path, "weight"), "fourier.weight"));
}

GramSource<double> parse_monomial(const json& j) {
  const std::string path = "monomial";
  expect_object(j, path);
  reject_unknown(j, path, {"dimension", "max_degree", "domain", "quadrature_order", "weight"});
  MonomialBasisSpec<double> spec;
  spec.dimension = static_cast<int>(as_int(require(j, path, "dimension"), "monomial.dimension", 1));
  spec.max_degree = static_cast<int>(as_int(require(j, path, "max_degree"), "monomial.max_degree", 0));
  spec.quadrature_order =
      static_cast<int>(as_int(require(j, path, "quadrature_order"), "monomial.quadrature_order", 1));
  const auto& domain = require(j, path, "domain");
  expect_array(domain, "monomial.domain");
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const auto axis = item("monomial.domain", i);
    if (!domain[i].is_array() || domain[i].size() != 2) schema_error(axis, "expected a [lo, hi] pair");
    spec.domain.emplace_back(as_real(domain[i][0], item(axis, 0)), as_real(domain[i][1], item(axis, 1)));
  }
  spec.weight = parse_weight(require(j, path, "weight"), "monomial.weight");
  return monomial_gram(std::move(spec));
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  expect_object(root, "");
  reject_unknown(root, "", {"description", "mode", "metric", "tolerances", "explicit", "fourier", "monomial"});

  const auto mode = as_string(require(root, "", "mode"), "mode");
  const auto metric = as_string(require(root, "", "metric"), "metric");
  if (metric != "euclidean" && metric != "pseudo") schema_error("metric", "expected \"euclidean\" or \"pseudo\"");
  if (mode != "explicit" && mode != "fourier" && mode != "monomial")
    schema_error("mode", "expected \"explicit\", \"fourier\" or \"monomial\"");
  for (const char* block : {"explicit", "fourier", "monomial"})
    if (block != mode && root.contains(block)) schema_error(block, "only the '" + mode + "' block may be present");

  const auto& params = require(root, "", mode);
  auto source = mode == "explicit" ? parse_explicit(params)
                : mode == "fourier" ? parse_fourier(params)
                                    : parse_monomial(params);
  ProblemFile problem{std::move(source), metric == "euclidean" ? Metric::euclidean : Metric::pseudo,
                      kDefaultDegeneracyTol, kDefaultVerifyTol, sha256_hex(text)};
  if (const auto* tol = optional(root, "tolerances")) {
    expect_object(*tol, "tolerances");
    reject_unknown(*tol, "tolerances", {"degeneracy_tol", "verify_tol"});
    if (const auto* d = optional(*tol, "degeneracy_tol")) problem.degeneracy_tol = as_positive(*d, "tolerances.degeneracy_tol");
    if (const auto* v = optional(*tol, "verify_tol")) problem.verify_tol = as_positive(*v, "tolerances.verify_tol");
  }
  return problem;
}

ProblemFile load_problem(const std::filesystem::path& path) { return parse_problem(read_file(path)); }

}  // namespace graded::io
