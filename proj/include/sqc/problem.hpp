#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"  // vendored nlohmann/json

#include "sqc/analysis.hpp"
#include "sqc/cones.hpp"
#include "sqc/linalg.hpp"

namespace sqc {

using ordered_json = nlohmann::ordered_json;

/// A fully specified analysis problem: matrix, cone and options. `warnings`
/// collects non-fatal parse findings (e.g. symmetrization above 1e-9).
struct ProblemInput {
  SymmetricMatrix matrix;
  ConeSpec cone;
  AnalyzeOptions options;
  std::string name;
  std::string expected_verdict;  // generator metadata; empty when unknown
  std::vector<std::string> warnings;
};

/// Raised for malformed input documents; the message carries line context.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

ProblemInput parse_problem(std::istream& in);
ProblemInput parse_problem_string(const std::string& text);
ProblemInput parse_problem_file(const std::string& path);

ordered_json problem_to_json(const ProblemInput& problem);

/// Serializes with every number printed as decimal with 17 significant
/// digits, which round-trips IEEE doubles exactly.
std::string dump_json(const ordered_json& j);

enum class RunMode { Analyze, Oracle, Both };

RunMode parse_run_mode(const std::string& text);

struct RunResult {
  int exit_code = 2;  // 0 certified quasi-convex, 1 certified not, 2 unknown
  ordered_json report;
  std::string summary;
};

/// Executes the requested mode and assembles the machine report plus a human
/// summary. The report JSON is a pure function of (problem, mode); timings
/// appear only in the summary text.
RunResult run(const ProblemInput& problem, RunMode mode);

ordered_json report_to_json(const AnalysisReport& report, RunMode mode);

/// Known generator names: countergg-orthant, countergg-lorentz,
/// alpha-eta-lorentz, householder, two-eig-lorentz-pos, two-eig-lorentz-neg.
/// Each emitted problem carries its expected verdict as metadata.
ProblemInput generate_example(const std::string& name, int n, std::uint64_t seed);

std::vector<std::string> generator_names();

}  // namespace sqc
