#include <limits>

#include "graded/io.hpp"
#include "json_fields.hpp"

namespace graded::io {

using namespace detail;

namespace {

using ordered = nlohmann::ordered_json;

ordered complex_json(const std::complex<double>& z) { return ordered::array({z.real(), z.imag()}); }

ordered matrix_json(const ComplexMatrix<double>& m) {
  ordered rows = ordered::array();
  for (Index r = 0; r < m.rows(); ++r) {
    ordered row = ordered::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Infinite condition numbers are written as null.
ordered real_json(double v) { return std::isfinite(v) ? ordered(v) : ordered(nullptr); }

double real_or_infinity(const json& j, const std::string& path) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : as_real(j, path);
}

Method method_from(const std::string& name, const std::string& path) {
  try {
    return parse_method(name);
  } catch (const FormatError&) {
    schema_error(path, "unknown method '" + name + "'");
  }
}

void check_shape(const ComplexMatrix<double>& m, Index rows, Index cols, const std::string& path) {
  if (m.rows() != rows || m.cols() != cols)
    schema_error(path, "has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                           std::to_string(rows) + "x" + std::to_string(cols));
}

LevelCoefficients<double> parse_level(const json& j, const std::string& path, Index total, std::size_t k) {
  expect_object(j, path);
  LevelCoefficients<double> level;
  const auto& labels = require(j, path, "labels");
  expect_array(labels, join(path, "labels"));
  for (std::size_t a = 0; a < labels.size(); ++a) level.labels.push_back(as_string(labels[a], item(join(path, "labels"), a)));
  const auto m = static_cast<Index>(level.labels.size());

  const auto& members = require(j, path, "members");
  expect_array(members, join(path, "members"));
  for (std::size_t a = 0; a < members.size(); ++a) {
    const auto flat = as_int(members[a], item(join(path, "members"), a), 0);
    if (flat >= total) schema_error(item(join(path, "members"), a), "flat index out of range");
    level.members.push_back(static_cast<Index>(flat));
  }
  if (static_cast<Index>(level.members.size()) != m) schema_error(join(path, "members"), "must match labels in length");

  level.coefficients = as_matrix(require(j, path, "coefficients"), join(path, "coefficients"), m);
  check_shape(level.coefficients, total, m, join(path, "coefficients"));
  level.q = as_matrix(require(j, path, "q"), join(path, "q"), m);
  check_shape(level.q, m, m, join(path, "q"));

  const auto& signs = require(j, path, "signs");
  expect_array(signs, join(path, "signs"));
  for (std::size_t a = 0; a < signs.size(); ++a) {
    const auto s = as_int(signs[a], item(join(path, "signs"), a), -1);
    if (s != 1 && s != -1) schema_error(item(join(path, "signs"), a), "must be +1 or -1");
    level.signs.push_back(static_cast<int>(s));
  }
  if (static_cast<Index>(level.signs.size()) != m) schema_error(join(path, "signs"), "must match labels in length");

  const auto proj_path = join(path, "projections");
  const auto& projections = require(j, path, "projections");
  expect_array(projections, proj_path);
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const auto p_path = item(proj_path, i);
    const auto from = static_cast<std::size_t>(as_int(require(projections[i], p_path, "from_level"), join(p_path, "from_level"), 0));
    if (from >= k) schema_error(join(p_path, "from_level"), "must name a lower level");
    level.projections.emplace_back(from, as_matrix(require(projections[i], p_path, "matrix"), join(p_path, "matrix"), m));
  }
  return level;
}

}  // namespace

std::string format_result(const ResultFile& result) {
  ordered root;
  root["format"] = "graded-orthonormalization-result";
  root["tool"] = {{"name", kToolName}, {"version", result.tool_version}};
  root["input_digest"] = {{"algorithm", result.digest_algorithm}, {"value", result.input_digest}};
  root["method"] = to_string(result.method);
  root["metric"] = to_string(result.metric);
  root["tolerances"] = {{"degeneracy_tol", result.degeneracy_tol}, {"verify_tol", result.verify_tol}};
  root["input_levels"] = result.table.index.levels();

  ordered levels = ordered::array();
  for (const auto& level : result.table.levels) {
    ordered l;
    l["labels"] = level.labels;
    l["members"] = level.members;
    l["signs"] = level.signs;
    l["q"] = matrix_json(level.q);
    ordered projections = ordered::array();
    for (const auto& [from, p] : level.projections)
      projections.push_back({{"from_level", from}, {"matrix", matrix_json(p)}});
    l["projections"] = std::move(projections);
    l["coefficients"] = matrix_json(level.coefficients);
    levels.push_back(std::move(l));
  }
  root["levels"] = std::move(levels);

  ordered promotions = ordered::array();
  for (const auto& p : result.table.promotions)
    promotions.push_back({{"from_level", p.from_level}, {"label", p.label}, {"to_level", p.to_level}});
  root["promotions"] = std::move(promotions);

  ordered conditions = ordered::array();
  for (double c : result.report.condition_numbers) conditions.push_back(real_json(c));
  root["verification"] = {{"max_residual", result.report.max_residual},
                          {"condition_numbers", std::move(conditions)},
                          {"grading_ok", result.report.grading_ok},
                          {"tolerance", result.report.tolerance},
                          {"passed", result.report.passed}};
  if (result.conjugate_symmetry_defect) root["conjugate_symmetry_defect"] = *result.conjugate_symmetry_defect;
  return root.dump(2) + "\n";
}

ResultFile parse_result(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  expect_object(root, "");
  ResultFile result;
  if (as_string(require(root, "", "format"), "format") != "graded-orthonormalization-result")
    schema_error("format", "not a result file");
  result.tool_version = as_string(require(require(root, "", "tool"), "tool", "version"), "tool.version");
  const auto& digest = require(root, "", "input_digest");
  result.digest_algorithm = as_string(require(digest, "input_digest", "algorithm"), "input_digest.algorithm");
  result.input_digest = as_string(require(digest, "input_digest", "value"), "input_digest.value");
  result.method = method_from(as_string(require(root, "", "method"), "method"), "method");
  const auto metric = as_string(require(root, "", "metric"), "metric");
  if (metric != "euclidean" && metric != "pseudo") schema_error("metric", "expected \"euclidean\" or \"pseudo\"");
  result.metric = metric == "euclidean" ? Metric::euclidean : Metric::pseudo;
  const auto& tol = require(root, "", "tolerances");
  result.degeneracy_tol = as_positive(require(tol, "tolerances", "degeneracy_tol"), "tolerances.degeneracy_tol");
  result.verify_tol = as_positive(require(tol, "tolerances", "verify_tol"), "tolerances.verify_tol");

  try {
    result.table.index = GradedIndex(as_levels(require(root, "", "input_levels"), "input_levels"));
  } catch (const InvalidIndex& e) {
    schema_error("input_levels", e.what());
  }
  const Index total = result.table.index.total();
  const auto& levels = require(root, "", "levels");
  expect_array(levels, "levels");
  for (std::size_t k = 0; k < levels.size(); ++k)
    result.table.levels.push_back(parse_level(levels[k], item("levels", k), total, k));

  const auto& promotions = require(root, "", "promotions");
  expect_array(promotions, "promotions");
  for (std::size_t i = 0; i < promotions.size(); ++i) {
    const auto path = item("promotions", i);
    Promotion p;
    p.from_level = static_cast<std::size_t>(as_int(require(promotions[i], path, "from_level"), join(path, "from_level"), 0));
    p.label = as_string(require(promotions[i], path, "label"), join(path, "label"));
    p.to_level = static_cast<std::size_t>(as_int(require(promotions[i], path, "to_level"), join(path, "to_level"), 0));
    result.table.promotions.push_back(std::move(p));
  }

  const auto& report = require(root, "", "verification");
  result.report.max_residual = as_real(require(report, "verification", "max_residual"), "verification.max_residual");
  const auto& conditions = require(report, "verification", "condition_numbers");
  expect_array(conditions, "verification.condition_numbers");
  for (std::size_t i = 0; i < conditions.size(); ++i)
    result.report.condition_numbers.push_back(real_or_infinity(conditions[i], item("verification.condition_numbers", i)));
  result.report.grading_ok = as_bool(require(report, "verification", "grading_ok"), "verification.grading_ok");
  result.report.tolerance = as_real(require(report, "verification", "tolerance"), "verification.tolerance");
  result.report.passed = as_bool(require(report, "verification", "passed"), "verification.passed");
  if (const auto* defect = optional(root, "conjugate_symmetry_defect"))
    result.conjugate_symmetry_defect = as_real(*defect, "conjugate_symmetry_defect");
  return result;
}

ResultFile load_result(const std::filesystem::path& path) { return parse_result(read_file(path)); }

}  // namespace graded::io
