#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sqc/problem.hpp"

namespace {

constexpr int kExitParseError = 10;
constexpr int kExitInternalError = 11;
constexpr int kExitUsageError = 13;

Eigen::VectorXd parse_csv_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    values.push_back(v);
  }
  if (values.size() < 2) {
    throw std::invalid_argument("--vector needs at least two comma-separated entries");
  }
  Eigen::VectorXd out(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) out[static_cast<int>(i)] = values[i];
  return out;
}

int run_analyze(const std::string& input, const std::string& mode_text,
                const std::string& report_path, const std::optional<std::uint64_t>& seed,
                const std::optional<double>& tol, const std::optional<long>& samples) {
  sqc::ProblemInput problem = (input == "-") ? sqc::parse_problem(std::cin)
                                             : sqc::parse_problem_file(input);
  if (seed) problem.options.seed = *seed;
  if (tol) problem.options.tol = *tol;
  if (samples) {
    problem.options.oracle_samples = *samples;
    problem.options.pairwise_pairs = *samples;
  }
  for (const std::string& w : problem.warnings) std::cerr << "warning: " << w << "\n";

  const sqc::RunResult result = sqc::run(problem, sqc::parse_run_mode(mode_text));
  std::cerr << result.summary;
  const std::string json = sqc::dump_json(result.report);
  if (report_path.empty()) {
    std::cout << json << "\n";
  } else {
    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot write report file: " + report_path);
    out << json << "\n";
  }
  return result.exit_code;
}

int run_gen(const std::string& name, int n, std::uint64_t seed) {
  const sqc::ProblemInput problem = sqc::generate_example(name, n, seed);
  std::cout << sqc::dump_json(sqc::problem_to_json(problem)) << "\n";
  return 0;
}

int run_project(const std::string& cone_text, const std::string& vector_text) {
  const Eigen::VectorXd x = parse_csv_vector(vector_text);
  sqc::ConeSpec cone = (cone_text == "orthant")
                           ? sqc::ConeSpec::orthant(static_cast<int>(x.size()))
                           : sqc::ConeSpec::lorentz(static_cast<int>(x.size()));
  const sqc::MoreauParts parts = sqc::moreau_decompose(cone, x);
  sqc::ordered_json j = sqc::ordered_json::object();
  j["cone"] = cone_text;
  auto vec = [](const Eigen::VectorXd& v) {
    sqc::ordered_json arr = sqc::ordered_json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
  };
  j["plus"] = vec(parts.plus);
  j["minus"] = vec(parts.minus);
  j["abs"] = vec(parts.abs);
  std::cout << sqc::dump_json(j) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spherical quasi-convexity analysis of quadratic forms on cone caps"};
  app.require_subcommand(1);

  auto* analyze_cmd = app.add_subcommand("analyze", "analyze a problem JSON file");
  std::string input = "-";
  std::string mode_text = "both";
  std::string report_path;
  std::uint64_t seed_value = 0;
  double tol_value = 0.0;
  long samples_value = 0;
  analyze_cmd->add_option("--input", input, "problem file, or - for standard input");
  analyze_cmd->add_option("--mode", mode_text, "analyze|oracle|both")->default_val("both");
  analyze_cmd->add_option("--seed", seed_value, "override the RNG seed");
  analyze_cmd->add_option("--tol", tol_value, "override the decision tolerance");
  analyze_cmd->add_option("--samples", samples_value, "override oracle sample budgets");
  analyze_cmd->add_option("--report", report_path, "write the JSON report to this file");

  auto* gen_cmd = app.add_subcommand("gen", "emit a generated example problem");
  std::string gen_name;
  int gen_n = 3;
  std::uint64_t gen_seed = 42;
  gen_cmd->add_option("--name", gen_name, "generator name")->required();
  gen_cmd->add_option("--n", gen_n, "ambient dimension")->default_val(3);
  gen_cmd->add_option("--seed", gen_seed, "generator seed")->default_val(42);

  auto* project_cmd = app.add_subcommand("project", "Moreau decomposition of a vector");
  std::string cone_text = "lorentz";
  std::string vector_text;
  project_cmd->add_option("--cone", cone_text, "lorentz|orthant")
      ->check(CLI::IsMember({"lorentz", "orthant"}))
      ->default_val("lorentz");
  project_cmd->add_option("--vector", vector_text, "comma-separated coordinates")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsageError;
  }

  try {
    if (analyze_cmd->parsed()) {
      std::optional<std::uint64_t> seed;
      std::optional<double> tol;
      std::optional<long> samples;
      if (analyze_cmd->count("--seed") > 0) seed = seed_value;
      if (analyze_cmd->count("--tol") > 0) tol = tol_value;
      if (analyze_cmd->count("--samples") > 0) samples = samples_value;
      return run_analyze(input, mode_text, report_path, seed, tol, samples);
    }
    if (gen_cmd->parsed()) return run_gen(gen_name, gen_n, gen_seed);
    if (project_cmd->parsed()) return run_project(cone_text, vector_text);
  } catch (const sqc::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitUsageError;
}
