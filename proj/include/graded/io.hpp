#pragma once

// JSON problem and result files. Complex numbers are [re, im] pairs, matrices
// are row-major arrays of rows, levels are arrays of label strings.

#include <filesystem>
#include <optional>
#include <string>

#include "graded/coefficient_table.hpp"
#include "graded/errors.hpp"
#include "graded/gram_source.hpp"
#include "graded/orthogonalizer.hpp"

namespace graded::io {

inline constexpr const char* kToolName = "graded-ortho";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kDigestAlgorithm = "sha256";

/// Malformed JSON or a schema violation; the message names the line or field.
class FormatError : public Error {
 public:
  using Error::Error;
};

enum class Metric { euclidean, pseudo };
enum class Method { graded, gram_schmidt, gram };

std::string to_string(GramKind kind);
std::string to_string(Metric metric);
std::string to_string(Method method);
Method parse_method(const std::string& name);

struct ProblemFile {
  GramSource<double> source;
  Metric metric = Metric::euclidean;
  double degeneracy_tol = kDefaultDegeneracyTol;
  double verify_tol = kDefaultVerifyTol;
  /// Hex digest of the exact file bytes.
  std::string digest;
};

/// Parses problem JSON text. Throws FormatError for syntax and schema problems;
/// invalid values (weights, domains, non-Hermitian matrices) surface as the
/// library's own errors.
ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::filesystem::path& path);

struct ResultFile {
  std::string tool_version = kToolVersion;
  std::string digest_algorithm = kDigestAlgorithm;
  std::string input_digest;
  Method method = Method::graded;
  Metric metric = Metric::euclidean;
  double degeneracy_tol = kDefaultDegeneracyTol;
  double verify_tol = kDefaultVerifyTol;
  CoefficientTable<double> table;
  VerificationReport<double> report;
  /// Max deviation from f^k_+ = conj(f^k_-); Fourier problems only.
  std::optional<double> conjugate_symmetry_defect;
};

std::string format_result(const ResultFile& result);
ResultFile parse_result(const std::string& text);
ResultFile load_result(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

}  // namespace graded::io
