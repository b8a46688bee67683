#include "sqc/problem.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sqc/rng.hpp"

namespace sqc {

namespace {

std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream out;
  out << "line " << line << ", column " << col;
  return out.str();
}

double require_finite(double v, const std::string& where) {
  if (!std::isfinite(v)) throw ParseError(where + ": non-finite entry");
  return v;
}

Eigen::VectorXd to_vector(const ordered_json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ParseError(where + ": expected an array of length " + std::to_string(n));
  }
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_number()) throw ParseError(where + ": entries must be numbers");
    v[i] = require_finite(j[i].get<double>(), where);
  }
  return v;
}

ConeSpec parse_cone(const ordered_json& j, int n) {
  if (!j.is_object() || !j.contains("type")) {
    throw ParseError("cone: expected an object with a \"type\" field");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "orthant") return ConeSpec::orthant(n);
  if (type == "lorentz") return ConeSpec::lorentz(n);
  if (type == "elliptic") {
    if (!j.contains("axis") || !j.contains("basis") || !j.contains("weights")) {
      throw ParseError("cone: elliptic needs axis, basis and weights");
    }
    const Eigen::VectorXd axis = to_vector(j.at("axis"), n, "cone.axis");
    const ordered_json& jb = j.at("basis");
    if (!jb.is_array() || static_cast<int>(jb.size()) != n - 1) {
      throw ParseError("cone.basis: expected n-1 vectors");
    }
    Eigen::MatrixXd basis(n, n - 1);
    for (int i = 0; i < n - 1; ++i) {
      basis.col(i) = to_vector(jb[i], n, "cone.basis[" + std::to_string(i) + "]");
    }
    const Eigen::VectorXd weights = to_vector(j.at("weights"), n - 1, "cone.weights");
    try {
      return ConeSpec::elliptic(axis, basis, weights);
    } catch (const std::invalid_argument& err) {
      throw ParseError(std::string("cone: ") + err.what());
    }
  }
  throw ParseError("cone: unknown type \"" + type + "\"");
}

void parse_options(const ordered_json& j, AnalyzeOptions& opts) {
  auto get_double = [&](const char* key, double& slot) {
    if (j.contains(key)) slot = require_finite(j.at(key).get<double>(), std::string("options.") + key);
  };
  auto get_long = [&](const char* key, long& slot) {
    if (j.contains(key)) slot = j.at(key).get<long>();
  };
  auto get_int = [&](const char* key, int& slot) {
    if (j.contains(key)) slot = j.at(key).get<int>();
  };
  get_double("tol", opts.tol);
  get_double("membership_tol", opts.membership_tol);
  get_double("strict_margin", opts.strict_margin);
  if (j.contains("gap_tol")) opts.gap_tol = j.at("gap_tol").get<double>();
  if (j.contains("seed")) opts.seed = j.at("seed").get<std::uint64_t>();
  get_int("opt_starts", opts.opt_starts);
  get_double("stationarity_tol", opts.stationarity_tol);
  get_long("w_samples", opts.w_samples);
  get_long("copositivity_samples", opts.copositivity_samples);
  get_long("z_pairs", opts.z_pairs);
  get_int("intersection_budget", opts.intersection_budget);
  get_long("oracle_samples", opts.oracle_samples);
  get_int("oracle_grid", opts.oracle_grid);
  get_long("pairwise_pairs", opts.pairwise_pairs);
  get_int("sublevel_levels", opts.sublevel_levels);
  get_long("sublevel_pairs", opts.sublevel_pairs);
  if (j.contains("conditions")) {
    opts.condition_filter = j.at("conditions").get<std::vector<std::string>>();
  }
  if (!(opts.tol > 0.0) || !(opts.membership_tol > 0.0) || !(opts.strict_margin > 0.0)) {
    throw ParseError("options: tolerances must be > 0");
  }
}

ordered_json vector_to_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

ordered_json evidence_to_json(const Evidence& ev) {
  ordered_json j = ordered_json::object();
  ordered_json nums = ordered_json::object();
  for (const auto& [key, value] : ev.numbers) nums[key] = value;
  ordered_json vecs = ordered_json::object();
  for (const auto& [key, value] : ev.vectors) vecs[key] = vector_to_json(value);
  if (!nums.empty()) j["numbers"] = nums;
  if (!vecs.empty()) j["vectors"] = vecs;
  if (!ev.notes.empty()) j["notes"] = ev.notes;
  return j;
}

const char* kind_name(CounterexampleKind kind) {
  switch (kind) {
    case CounterexampleKind::Geodesic: return "geodesic";
    case CounterexampleKind::Pairwise: return "pairwise";
    case CounterexampleKind::Sublevel: return "sublevel";
  }
  return "unknown";
}

ordered_json oracle_result_to_json(const OracleResult& res) {
  ordered_json j = ordered_json::object();
  j["violated"] = res.violated;
  j["samples_used"] = res.samples_used;
  if (res.counterexample) {
    const Counterexample& ce = *res.counterexample;
    ordered_json c = ordered_json::object();
    c["kind"] = kind_name(ce.kind);
    c["x"] = vector_to_json(ce.x);
    c["y"] = vector_to_json(ce.y);
    c["t"] = ce.t;
    if (ce.kind == CounterexampleKind::Sublevel) c["level"] = ce.level;
    if (!ce.detail.empty()) c["detail"] = ce.detail;
    c["margin"] = ce.margin;
    j["counterexample"] = c;
  }
  if (!res.diagnostics.empty()) j["diagnostics"] = res.diagnostics;
  return j;
}

ordered_json options_to_json(const AnalyzeOptions& o) {
  ordered_json j = ordered_json::object();
  j["tol"] = o.tol;
  j["membership_tol"] = o.membership_tol;
  j["strict_margin"] = o.strict_margin;
  if (o.gap_tol) j["gap_tol"] = *o.gap_tol;
  j["seed"] = o.seed;
  j["opt_starts"] = o.opt_starts;
  j["stationarity_tol"] = o.stationarity_tol;
  j["w_samples"] = o.w_samples;
  j["copositivity_samples"] = o.copositivity_samples;
  j["z_pairs"] = o.z_pairs;
  j["intersection_budget"] = o.intersection_budget;
  j["oracle_samples"] = o.oracle_samples;
  j["oracle_grid"] = o.oracle_grid;
  j["pairwise_pairs"] = o.pairwise_pairs;
  j["sublevel_levels"] = o.sublevel_levels;
  j["sublevel_pairs"] = o.sublevel_pairs;
  if (!o.condition_filter.empty()) j["conditions"] = o.condition_filter;
  return j;
}

void write_json_17(std::string& out, const ordered_json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      out += "null";
      break;
    case nlohmann::json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
      out += j.dump();
      break;
    case nlohmann::json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
      out += buf;
      break;
    }
    case nlohmann::json::value_t::string:
      out += nlohmann::json(j.get<std::string>()).dump();  // reuse escaping
      break;
    case nlohmann::json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        write_json_17(out, item);
      }
      out += ']';
      break;
    }
    case nlohmann::json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        write_json_17(out, it.value());
      }
      out += '}';
      break;
    }
    default:
      out += "null";
      break;
  }
}

}  // namespace

std::string dump_json(const ordered_json& j) {
  std::string out;
  write_json_17(out, j);
  return out;
}

ProblemInput parse_problem_string(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError("malformed JSON at " + line_context(text, err.byte) + ": " + err.what());
  }
  if (!doc.is_object()) throw ParseError("input: expected a JSON object");
  if (!doc.contains("n") || !doc.at("n").is_number_integer()) {
    throw ParseError("input: missing integer field \"n\"");
  }
  const int n = doc.at("n").get<int>();
  if (n < 2) throw ParseError("input: n must be >= 2");
  if (!doc.contains("matrix")) throw ParseError("input: missing \"matrix\"");
  const ordered_json& jm = doc.at("matrix");
  if (!jm.is_array() || static_cast<int>(jm.size()) != n) {
    throw ParseError("matrix: expected " + std::to_string(n) + " rows");
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    const ordered_json& row = jm[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ParseError("matrix: row " + std::to_string(i) + " must have " + std::to_string(n) +
                       " entries");
    }
    for (int k = 0; k < n; ++k) {
      if (!row[k].is_number()) throw ParseError("matrix: entries must be numbers");
      m(i, k) = require_finite(row[k].get<double>(), "matrix");
    }
  }
  if (!doc.contains("cone")) throw ParseError("input: missing \"cone\"");

  ProblemInput p{SymmetricMatrix(m), parse_cone(doc.at("cone"), n), AnalyzeOptions{}, "", "", {}};
  if (p.matrix.asymmetry() > 1e-9) {
    std::ostringstream warn;
    warn << "matrix asymmetry " << p.matrix.asymmetry() << " exceeds 1e-9; symmetrized as (A+A^T)/2";
    p.warnings.push_back(warn.str());
  }
  if (doc.contains("options")) parse_options(doc.at("options"), p.options);
  if (doc.contains("name")) p.name = doc.at("name").get<std::string>();
  if (doc.contains("expected_verdict")) {
    p.expected_verdict = doc.at("expected_verdict").get<std::string>();
  }
  return p;
}

ProblemInput parse_problem(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_string(buffer.str());
}

ProblemInput parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  return parse_problem(in);
}

ordered_json problem_to_json(const ProblemInput& problem) {
  ordered_json j = ordered_json::object();
  if (!problem.name.empty()) j["name"] = problem.name;
  const int n = problem.matrix.n();
  j["n"] = n;
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    ordered_json row = ordered_json::array();
    for (int k = 0; k < n; ++k) row.push_back(problem.matrix(i, k));
    rows.push_back(row);
  }
  j["matrix"] = rows;
  ordered_json cone = ordered_json::object();
  switch (problem.cone.kind()) {
    case ConeKind::Orthant: cone["type"] = "orthant"; break;
    case ConeKind::Lorentz: cone["type"] = "lorentz"; break;
    case ConeKind::Elliptic: {
      cone["type"] = "elliptic";
      cone["axis"] = vector_to_json(problem.cone.axis());
      ordered_json basis = ordered_json::array();
      for (int i = 0; i < n - 1; ++i) {
        basis.push_back(vector_to_json(problem.cone.basis().col(i)));
      }
      cone["basis"] = basis;
      cone["weights"] = vector_to_json(problem.cone.weights());
      break;
    }
  }
  j["cone"] = cone;
  j["options"] = options_to_json(problem.options);
  if (!problem.expected_verdict.empty()) j["expected_verdict"] = problem.expected_verdict;
  return j;
}

RunMode parse_run_mode(const std::string& text) {
  if (text == "analyze") return RunMode::Analyze;
  if (text == "oracle") return RunMode::Oracle;
  if (text == "both") return RunMode::Both;
  throw std::invalid_argument("mode must be one of analyze|oracle|both");
}

ordered_json report_to_json(const AnalysisReport& report, RunMode mode) {
  ordered_json j = ordered_json::object();
  j["verdict"] = to_string(report.verdict);
  j["verdict_reason"] = report.verdict_reason;
  ordered_json conditions = ordered_json::array();
  for (const ConditionOutcome& c : report.outcomes) {
    ordered_json jc = ordered_json::object();
    jc["id"] = to_string(c.id);
    jc["status"] = to_string(c.status);
    ordered_json ev = evidence_to_json(c.evidence);
    if (!ev.empty()) jc["evidence"] = ev;
    conditions.push_back(jc);
  }
  j["conditions"] = conditions;
  ordered_json spectral = ordered_json::object();
  spectral["eigenvalues"] = vector_to_json(report.spectral.eigenvalues);
  spectral["multiplicity_of_smallest"] = report.spectral.multiplicity_of_smallest;
  spectral["gap_tolerance"] = report.spectral.gap_tolerance;
  j["spectral"] = spectral;
  if (report.oracle_summary) {
    ordered_json oracle = ordered_json::object();
    oracle["geodesic"] = oracle_result_to_json(report.oracle_summary->geodesic);
    oracle["pairwise"] = oracle_result_to_json(report.oracle_summary->pairwise);
    oracle["sublevel"] = oracle_result_to_json(report.oracle_summary->sublevel);
    j["oracle"] = oracle;
  }
  if (!report.notes.empty()) j["notes"] = report.notes;
  ordered_json prov = ordered_json::object();
  prov["seed"] = report.seed;
  switch (mode) {
    case RunMode::Analyze: prov["mode"] = "analyze"; break;
    case RunMode::Oracle: prov["mode"] = "oracle"; break;
    case RunMode::Both: prov["mode"] = "both"; break;
  }
  prov["options"] = options_to_json(report.options);
  j["provenance"] = prov;
  return j;
}

namespace {

std::string summarize(const AnalysisReport& report, const ProblemInput& problem) {
  std::ostringstream out;
  out << "problem: " << (problem.name.empty() ? "(unnamed)" : problem.name) << "  cone "
      << problem.cone.describe() << "  n=" << problem.matrix.n() << "\n";
  out << "verdict: " << to_string(report.verdict) << "  (" << report.verdict_reason << ")\n";
  out << "eigenvalues:";
  for (int i = 0; i < report.spectral.n(); ++i) out << ' ' << report.spectral.lambda(i);
  out << "  multiplicity(min)=" << report.spectral.multiplicity_of_smallest << "\n";
  for (const ConditionOutcome& c : report.outcomes) {
    out << "  " << to_string(c.id) << ": " << to_string(c.status) << "\n";
  }
  if (report.oracle_summary) {
    const OracleSummary& s = *report.oracle_summary;
    out << "oracle: geodesic " << (s.geodesic.violated ? "VIOLATED" : "no violation") << " ("
        << s.geodesic.samples_used << " samples), pairwise "
        << (s.pairwise.violated ? "VIOLATED" : "no violation") << ", sublevel "
        << (s.sublevel.violated ? "VIOLATED" : "no violation") << "\n";
  }
  for (const std::string& w : problem.warnings) out << "warning: " << w << "\n";
  for (const std::string& nte : report.notes) out << "note: " << nte << "\n";
  out << "elapsed: " << report.elapsed_seconds << " s\n";
  return out.str();
}

}  // namespace

RunResult run(const ProblemInput& problem, RunMode mode) {
  RunResult result;
  AnalysisReport report;
  if (mode == RunMode::Oracle) {
    // Oracle-only: no conditions, verdict from an exactly re-verified violation.
    const auto t0 = std::chrono::steady_clock::now();
    report.seed = problem.options.seed;
    report.options = problem.options;
    report.spectral = spectral_decompose(problem.matrix);
    OracleSummary summary = run_oracles(problem.matrix, problem.cone, problem.options);
    report.verdict = Verdict::Unknown;
    report.verdict_reason = "NONE";
    for (const OracleResult* r : {&summary.geodesic, &summary.pairwise, &summary.sublevel}) {
      if (r->violated) {
        reverify_counterexample(problem.matrix, problem.cone, *r->counterexample);
        report.verdict = Verdict::CertifiedNot;
        report.verdict_reason = "ORACLE";
        break;
      }
    }
    report.oracle_summary = std::move(summary);
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  } else {
    AnalyzeOptions opts = problem.options;
    opts.attach_oracle = (mode == RunMode::Both);
    report = analyze(problem.matrix, problem.cone, opts);
  }
  switch (report.verdict) {
    case Verdict::CertifiedQuasiconvex: result.exit_code = 0; break;
    case Verdict::CertifiedNot: result.exit_code = 1; break;
    case Verdict::Unknown: result.exit_code = 2; break;
  }
  result.report = report_to_json(report, mode);
  result.summary = summarize(report, problem);
  return result;
}

// ---------------------------------------------------------------------------
// Example generators
// ---------------------------------------------------------------------------

namespace {

SymmetricMatrix from_spectrum(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& lambdas) {
  return SymmetricMatrix(vectors * lambdas.asDiagonal() * vectors.transpose());
}

}  // namespace

std::vector<std::string> generator_names() {
  return {"countergg-orthant", "countergg-lorentz", "alpha-eta-lorentz",
          "householder",       "two-eig-lorentz-pos", "two-eig-lorentz-neg"};
}

ProblemInput generate_example(const std::string& name, int n, std::uint64_t seed) {
  Rng rng(seed);
  const int min_n = (name == "householder") ? 2 : 3;
  if (n < min_n) {
    throw std::invalid_argument("generate_example: " + name + " needs n >= " +
                                std::to_string(min_n));
  }

  auto finish = [&](SymmetricMatrix a, ConeSpec cone, const std::string& expected) {
    ProblemInput p{std::move(a), std::move(cone), AnalyzeOptions{}, name, expected, {}};
    p.options.seed = seed;
    return p;
  };

  if (name == "countergg-orthant") {
    // Eigenvalue shape lambda < (lambda+eta)/2 < mu < eta with the paired
    // (e^1 +- e^n)/sqrt(2) extreme eigenvectors.
    const double lambda = 0.0, eta = 2.0;
    const double mu = rng.uniform(1.3, 1.9);
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    v.col(0).setZero();
    v(0, 0) = 1.0 / std::sqrt(2.0);
    v(n - 1, 0) = 1.0 / std::sqrt(2.0);
    v.col(n - 1).setZero();
    v(0, n - 1) = 1.0 / std::sqrt(2.0);
    v(n - 1, n - 1) = -1.0 / std::sqrt(2.0);
    Eigen::VectorXd lam(n);
    lam[0] = lambda;
    for (int i = 1; i < n - 1; ++i) lam[i] = mu;
    lam[n - 1] = eta;
    return finish(from_spectrum(v, lam), ConeSpec::orthant(n), "CERTIFIED_QUASICONVEX");
  }
  if (name == "countergg-lorentz") {
    // Axis eigenvector for the smallest eigenvalue: |v^n|^L is then the axis
    // itself and the inclusion reduces to (1 - coeff) e^1 in L, i.e. mu >=
    // (lambda + eta)/2.
    const double lambda = 0.0, eta = 2.0;
    const double mu = rng.uniform(1.3, 1.9);
    Eigen::VectorXd lam(n);
    lam[0] = lambda;
    for (int i = 1; i < n - 1; ++i) lam[i] = mu;
    lam[n - 1] = eta;
    return finish(from_spectrum(Eigen::MatrixXd::Identity(n, n), lam), ConeSpec::lorentz(n),
                  "CERTIFIED_QUASICONVEX");
  }
  if (name == "alpha-eta-lorentz") {
    // v^i = e^i with lambda_n < lambda_2 + alpha (lambda_2 - lambda_1),
    // alpha = 1/2 on the Lorentz cone.
    Eigen::VectorXd lam(n);
    lam[0] = 0.0;
    for (int i = 1; i < n - 1; ++i) lam[i] = 1.0;
    lam[n - 1] = rng.uniform(1.05, 1.45);
    return finish(from_spectrum(Eigen::MatrixXd::Identity(n, n), lam), ConeSpec::lorentz(n),
                  "CERTIFIED_QUASICONVEX");
  }
  if (name == "householder") {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = 0.5 + rng.uniform();  // interior of the orthant
    return finish(householder(v), ConeSpec::orthant(n), "CERTIFIED_QUASICONVEX");
  }
  if (name == "two-eig-lorentz-pos" || name == "two-eig-lorentz-neg") {
    // A = I - v v^T: eigenvalues (0, 1, ..., 1) with v^1 = v. The verdict is
    // exactly the Lorentz membership of v.
    Eigen::VectorXd v(n);
    if (name == "two-eig-lorentz-pos") {
      const double phi = rng.uniform(0.05, 0.62);  // stays clear of the boundary pi/4
      v[0] = std::cos(phi);
      v.tail(n - 1) = std::sin(phi) * rng.unit_vector(n - 1);
      if (margin(ConeSpec::lorentz(n), v) < 0.05) {
        v.setZero();
        v[0] = 1.0;  // fall back to the axis
      }
    } else {
      v.setZero();
      // Unit vector orthogonal to the axis: margin is -1 for both signs.
      v.tail(n - 1) = rng.unit_vector(n - 1);
    }
    SymmetricMatrix a(Eigen::MatrixXd::Identity(n, n) - v * v.transpose());
    return finish(std::move(a), ConeSpec::lorentz(n),
                  name == "two-eig-lorentz-pos" ? "CERTIFIED_QUASICONVEX" : "CERTIFIED_NOT");
  }
  throw std::invalid_argument("generate_example: unknown name \"" + name + "\"");
}

}  // namespace sqc
