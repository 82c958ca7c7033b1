#include "graded/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "graded/pseudo_orthogonalizer.hpp"

namespace graded::cli {

namespace {

constexpr double kSingletonIdentityTol = 1e-10;
constexpr double kSingleLevelIdentityTol = 1e-12;
constexpr double kReproduceTol = 1e-12;

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << v;
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << text;
  if (!file.flush()) throw io::FormatError("cannot write '" + path.string() + "'");
}

// Maps exceptions onto the exit-code contract.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const LinearlyDependentInput& e) {
    err << "error: " << e.what() << '\n';
  } catch (const TerminalIsotropicVector& e) {
    err << "error: " << e.what() << '\n';
  } catch (const DegenerateMetric& e) {
    err << "error: " << e.what() << '\n';
  } catch (const NotPositiveDefinite& e) {
    err << "error: " << e.what() << '\n';
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kMathFailure;
}

bool checks_symmetry(const io::ProblemFile& problem, io::Method method) {
  return problem.source.kind() == GramKind::fourier && method == io::Method::graded;
}

bool symmetry_ok(const io::ResultFile& result, double tol) {
  return !result.conjugate_symmetry_defect || result.method != io::Method::graded ||
         *result.conjugate_symmetry_defect <= tol;
}

void summarize(std::ostream& log, const io::ResultFile& result) {
  const auto& table = result.table;
  log << "method " << io::to_string(result.method) << ", metric " << io::to_string(result.metric) << ": "
      << table.index.level_count() << " input levels, " << table.total() << " vectors\n";
  for (const auto& p : table.promotions)
    log << "promoted isotropic '" << p.label << "' from level " << p.from_level << " into level " << p.to_level
        << '\n';
  if (result.metric == io::Metric::pseudo) {
    const auto signs = table.signs();
    const auto positive = std::count(signs.begin(), signs.end(), 1);
    log << "signature (" << positive << ", " << static_cast<long>(signs.size()) - positive << ")\n";
  }
  if (result.conjugate_symmetry_defect)
    log << "conjugate symmetry defect " << sci(*result.conjugate_symmetry_defect) << '\n';
  log << "max residual " << sci(result.report.max_residual) << " (tolerance " << sci(result.report.tolerance)
      << "), grading " << (result.report.grading_ok ? "ok" : "VIOLATED") << ": "
      << (result.report.passed && symmetry_ok(result, result.report.tolerance) ? "passed" : "FAILED") << '\n';
}

}  // namespace

io::ResultFile solve(const io::ProblemFile& problem, io::Method method, const Tolerances& overrides) {
  if (problem.metric == io::Metric::pseudo && method != io::Method::graded)
    throw io::FormatError("method '" + io::to_string(method) + "' needs the euclidean metric");
  io::ResultFile result;
  result.input_digest = problem.digest;
  result.method = method;
  result.metric = problem.metric;
  result.degeneracy_tol = overrides.degeneracy_tol.value_or(problem.degeneracy_tol);
  result.verify_tol = overrides.verify_tol.value_or(problem.verify_tol);

  const auto& index = problem.source.index();
  const auto gram = full_gram(problem.source);
  switch (method) {
    case io::Method::graded:
      result.table = problem.metric == io::Metric::euclidean
                         ? orthonormalize_graded(index, gram, result.degeneracy_tol)
                         : pseudo_orthonormalize_graded(index, gram, result.degeneracy_tol);
      break;
    case io::Method::gram_schmidt: result.table = gram_schmidt_reference(index, gram, result.degeneracy_tol); break;
    case io::Method::gram: result.table = gram_method_reference(index, gram, result.degeneracy_tol); break;
  }
  result.report = graded::verify(gram, result.table, result.verify_tol);
  if (problem.source.kind() == GramKind::fourier) result.conjugate_symmetry_defect = conjugate_symmetry_defect(result.table);
  return result;
}

int run(const std::filesystem::path& input, const std::optional<std::filesystem::path>& output, io::Method method,
        const Tolerances& overrides, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto problem = io::load_problem(input);
    const auto result = solve(problem, method, overrides);
    const auto text = io::format_result(result);
    if (output) {
      write_file(*output, text);
    } else {
      out << text;
    }
    summarize(output ? out : err, result);
    const bool ok = result.report.passed && (!checks_symmetry(problem, method) || symmetry_ok(result, result.verify_tol));
    return ok ? kOk : kVerificationFailure;
  });
}

int verify(const std::filesystem::path& input, const std::filesystem::path& result_path, const Tolerances& overrides,
           std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto problem = io::load_problem(input);
    const auto result = io::load_result(result_path);
    if (result.digest_algorithm != io::kDigestAlgorithm || result.input_digest != problem.digest) {
      err << "error: the result was not produced from this problem file (input digest mismatch)\n";
      return kInputError;
    }
    if (!(result.table.index == problem.source.index()) || result.metric != problem.metric) {
      err << "error: the result's levels or metric do not match the problem\n";
      return kInputError;
    }
    const double tol = overrides.verify_tol.value_or(problem.verify_tol);
    const auto gram = full_gram(problem.source);
    const auto report = graded::verify(gram, result.table, tol);
    bool ok = report.passed;
    out << "max residual " << sci(report.max_residual) << " (tolerance " << sci(tol) << "), grading "
        << (report.grading_ok ? "ok" : "VIOLATED") << '\n';

    if (problem.source.kind() == GramKind::fourier && result.method == io::Method::graded) {
      const double defect = conjugate_symmetry_defect(result.table);
      out << "conjugate symmetry defect " << sci(defect) << '\n';
      ok = ok && defect <= tol;
    }

    const auto& embedded = result.report;
    bool reproduced = std::abs(report.max_residual - embedded.max_residual) <= kReproduceTol &&
                      report.grading_ok == embedded.grading_ok &&
                      report.condition_numbers.size() == embedded.condition_numbers.size();
    for (std::size_t k = 0; reproduced && k < report.condition_numbers.size(); ++k) {
      const double a = report.condition_numbers[k], b = embedded.condition_numbers[k];
      reproduced = a == b || std::abs(a - b) <= kReproduceTol * std::max(1.0, std::abs(b));
    }
    out << "embedded report " << (reproduced ? "reproduced" : "NOT reproduced") << '\n';
    ok = ok && reproduced;
    out << (ok ? "verification passed" : "verification FAILED") << '\n';
    return ok ? kOk : kVerificationFailure;
  });
}

int compare(const std::filesystem::path& input, const Tolerances& overrides, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto problem = io::load_problem(input);
    if (problem.metric != io::Metric::euclidean) {
      err << "error: compare needs the euclidean metric\n";
      return kInputError;
    }
    const auto graded = solve(problem, io::Method::graded, overrides).table.matrix();
    const auto schmidt = solve(problem, io::Method::gram_schmidt, overrides).table.matrix();
    const auto gram = solve(problem, io::Method::gram, overrides).table.matrix();
    const double graded_schmidt = max_abs(ComplexMatrix<double>(graded - schmidt));
    const double graded_gram = max_abs(ComplexMatrix<double>(graded - gram));
    const double schmidt_gram = max_abs(ComplexMatrix<double>(schmidt - gram));
    out << "graded vs gram-schmidt: max coefficient difference " << sci(graded_schmidt) << '\n';
    out << "graded vs gram:         max coefficient difference " << sci(graded_gram) << '\n';
    out << "gram-schmidt vs gram:   max coefficient difference " << sci(schmidt_gram) << '\n';

    const auto& index = problem.source.index();
    if (index.all_singleton())
      out << "all levels are singletons: graded = gram-schmidt "
          << (graded_schmidt <= kSingletonIdentityTol ? "holds" : "FAILS") << " (tolerance "
          << sci(kSingletonIdentityTol) << ")\n";
    else
      out << "not all levels are singletons: graded and gram-schmidt may differ\n";
    if (index.level_count() == 1)
      out << "single level: graded = gram " << (graded_gram <= kSingleLevelIdentityTol ? "holds" : "FAILS")
          << " (tolerance " << sci(kSingleLevelIdentityTol) << ")\n";
    else
      out << "several levels: graded and gram may differ\n";
    return kOk;
  });
}

}  // namespace graded::cli
