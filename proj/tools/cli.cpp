#include "cli.hpp"

#include "kemeny/completion_diag.hpp"
#include "kemeny/completion_row.hpp"
#include "kemeny/matrix_io.hpp"
#include "kemeny/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

namespace kemeny::cli {

namespace {

using nlohmann::json;
using io::format_double;

constexpr double kVerifyTol = 1e-9;
constexpr int kVerifyOracleMaxN = 6;

struct GlobalOptions {
  double tol = kValidationTol;
  std::uint64_t budget = kDefaultPatternBudget;
  std::uint64_t seed = 0;
  bool json = false;
};

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Thrown for failed --verify checks.
struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool fully_specified(const CellGrid& grid) {
  for (const auto& row : grid)
    for (const Cell& c : row)
      if (c.is_free()) return false;
  return true;
}

std::vector<int> one_based(const std::vector<int>& v) {
  std::vector<int> out(v);
  for (int& x : out) ++x;
  return out;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& path, const GlobalOptions& g, std::ostream& out) {
  const CellGrid grid = io::read_file(path);
  json report{{"command", "validate"}, {"inputs", io::to_json(grid)}};
  if (fully_specified(grid)) {
    const StochasticMatrix t = validate_stochastic(io::to_matrix(grid), g.tol);
    report["outputs"] = {{"valid", true}, {"kind", "stochastic"}, {"n", t.size()}};
    if (!g.json) out << "valid stochastic matrix (n = " << t.size() << ")\n";
  } else {
    const PartialStochasticMatrix p = validate_partial(grid);
    report["outputs"] = {{"valid", true}, {"kind", "partial"}, {"n", p.size()}, {"free_cells", p.free_count()}};
    if (!g.json) out << "valid partial stochastic matrix (n = " << p.size() << ", free cells = " << p.free_count() << ")\n";
  }
  if (g.json) out << report.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- kemeny

int cmd_kemeny(const std::string& path, const std::string& method, const GlobalOptions& g, std::ostream& out) {
  const Stopwatch clock;
  const CellGrid grid = io::read_file(path);
  if (!fully_specified(grid)) throw Error(ErrorCode::InvalidArgument, "kemeny needs a fully specified matrix");
  const StochasticMatrix t = validate_stochastic(io::to_matrix(grid), g.tol);

  json outputs = json::object();
  std::vector<double> values;
  auto run = [&](const std::string& name, auto&& fn) {
    const double v = fn();
    outputs[name] = v;
    values.push_back(v);
    if (!g.json) out << "K (" << name << ") = " << format_double(v) << '\n';
  };
  if (method == "trace" || method == "all") run("trace", [&] { return kemeny_trace(t); });
  if (method == "eigen" || method == "all") run("eigen", [&] { return kemeny_eigen(t); });
  if (method == "grounded" || method == "all") run("grounded", [&] { return kemeny_grounded(t); });
  if (method == "all") {
    double spread = 0.0;
    for (double a : values)
      for (double b : values) spread = std::max(spread, std::abs(a - b));
    outputs["max_discrepancy"] = spread;
    if (!g.json) out << "max discrepancy = " << format_double(spread) << '\n';
  }
  if (g.json) {
    json report{{"command", "kemeny"},
                {"inputs", io::to_json(grid)},
                {"outputs", outputs},
                {"diagnostics", {{"method", method}, {"elapsed_ms", clock.elapsed_ms()}}}};
    out << report.dump(2) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- complete

enum class Shape { Full, Diagonal, Row, Other };

struct ShapeInfo {
  Shape shape = Shape::Other;
  int row = -1;
};

ShapeInfo detect_shape(const PartialStochasticMatrix& p) {
  const int n = p.size();
  bool diagonal_only = true;
  std::vector<int> rows_with_specified;
  for (int i = 0; i < n; ++i) {
    bool any = false;
    for (int j = 0; j < n; ++j) {
      if (p.is_free(i, j)) continue;
      any = true;
      if (i != j) diagonal_only = false;
    }
    if (any) rows_with_specified.push_back(i);
  }
  if (p.free_count() == 0) return {Shape::Full, -1};
  if (diagonal_only) return {Shape::Diagonal, -1};
  if (rows_with_specified.size() == 1 && p.row_fully_specified(rows_with_specified.front()))
    return {Shape::Row, rows_with_specified.front()};
  return {Shape::Other, -1};
}

struct Completed {
  double value = 0.0;
  Matrix witness;
  std::string method;
  std::string uniqueness = "unknown";
  std::string description;
  json extra = json::object();
};

Completed complete_diagonal(const PartialStochasticMatrix& p) {
  const int n = p.size();
  std::vector<double> d(n, 0.0);
  int specified = 0;
  for (int j = 0; j < n; ++j)
    if (!p.is_free(j, j)) {
      d[j] = p.cell(j, j).value();
      ++specified;
    }
  // free diagonal cells are completed with 0, which is optimal for them
  const CompletionSolution s = solve_diagonal(d);
  Completed c{s.value, s.witness.entries(), std::string(to_string(s.method)), std::string(to_string(s.uniqueness)),
              s.description};
  c.extra["specified_diagonal"] = specified;
  if (!s.cycle.empty()) c.extra["cycle"] = one_based(s.cycle);
  return c;
}

Completed complete_row(const PartialStochasticMatrix& p, int row) {
  const int n = p.size();
  std::vector<double> values(n);
  for (int j = 0; j < n; ++j) values[j] = p.cell(row, j).value();
  const RowSpec spec = row_spec_from_row(values, row);
  const CompletionSolution s = solve_row(spec);

  // undo the relabelling that moved `row` to the last state
  auto relabel = [&](int a) { return a == row ? n - 1 : (a == n - 1 ? row : a); };
  const Matrix& w = s.witness.entries();
  Matrix witness(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) witness(a, b) = w(relabel(a), relabel(b));

  Completed c{s.value, witness, std::string(to_string(s.method)), std::string(to_string(s.uniqueness)), s.description};
  c.extra["specified_row"] = row + 1;
  if (!s.ordering.empty()) c.extra["ordering"] = s.ordering;
  return c;
}

Completed complete_oracle(const PartialStochasticMatrix& p, const GlobalOptions& g) {
  const OracleReport r = sparse_enumeration_min(p, g.budget);
  Completed c{r.best_value, r.best_completion.entries(), std::string(to_string(SolveMethod::SparseEnumeration)),
              "unknown", "minimum over all sparse completions (oracle-only: no closed form for this shape)"};
  c.extra["patterns_examined"] = r.patterns_examined;
  c.extra["patterns_feasible"] = r.patterns_feasible;
  return c;
}

json verify(const PartialStochasticMatrix& p, const Completed& c, const GlobalOptions& g, bool used_oracle) {
  json v = json::object();
  const int n = p.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!p.is_free(i, j) && std::abs(c.witness(i, j) - p.cell(i, j).value()) > 1e-12)
        throw VerificationFailure("witness changes a specified entry");
  const double witness_k = kemeny_trace(validate_stochastic(c.witness, g.tol));
  v["witness_kemeny"] = witness_k;
  if (std::abs(witness_k - c.value) > kVerifyTol)
    throw VerificationFailure("witness K = " + format_double(witness_k) + " but m(P) = " + format_double(c.value));
  if (!used_oracle && n <= kVerifyOracleMaxN) {
    const OracleReport r = sparse_enumeration_min(p, g.budget);
    v["oracle_value"] = r.best_value;
    if (std::abs(r.best_value - c.value) > kVerifyTol)
      throw VerificationFailure("oracle minimum " + format_double(r.best_value) + " differs from m(P) = " +
                                format_double(c.value));
  }
  v["passed"] = true;
  return v;
}

int cmd_complete(const std::string& path, const std::string& strategy, bool do_verify, const GlobalOptions& g,
                 std::ostream& out, std::ostream& err) {
  const Stopwatch clock;
  const CellGrid grid = io::read_file(path);
  const PartialStochasticMatrix p = validate_partial(grid);
  if (!feasible_single_class(p)) {
    std::string msg = "no completion has a single essential class";
    if (const auto x = closed_subset(p)) {
      msg += "; closed set X = {";
      for (std::size_t i = 0; i < x->size(); ++i) msg += (i ? "," : "") + std::to_string((*x)[i] + 1);
      msg += "}";
    }
    throw Error(ErrorCode::Infeasible, msg);
  }

  const ShapeInfo shape = detect_shape(p);
  std::string notice;
  Completed c;
  bool used_oracle = false;
  if (strategy == "diag") {
    if (shape.shape != Shape::Diagonal) throw Error(ErrorCode::InvalidArgument, "specified cells are not all diagonal");
    c = complete_diagonal(p);
  } else if (strategy == "row") {
    if (shape.shape != Shape::Row) throw Error(ErrorCode::InvalidArgument, "specified cells do not form one full row");
    c = complete_row(p, shape.row);
  } else if (strategy == "oracle") {
    c = complete_oracle(p, g);
    used_oracle = true;
  } else if (shape.shape == Shape::Full) {
    const StochasticMatrix t = validate_stochastic(io::to_matrix(grid), g.tol);
    c = Completed{kemeny_trace(t), t.entries(), std::string(to_string(SolveMethod::FullySpecified)), "unique",
                  "nothing to complete"};
  } else if (shape.shape == Shape::Diagonal) {
    c = complete_diagonal(p);
  } else if (shape.shape == Shape::Row) {
    c = complete_row(p, shape.row);
  } else {
    notice = "no closed form for this pattern of specified cells; using sparse-pattern enumeration";
    if (!g.json) err << "notice: " << notice << '\n';
    c = complete_oracle(p, g);
    used_oracle = true;
  }

  json diagnostics{{"strategy", strategy}, {"method", c.method}};
  for (auto& [k, v] : c.extra.items()) diagnostics[k] = v;
  if (!notice.empty()) diagnostics["notice"] = notice;
  if (do_verify) diagnostics["verify"] = verify(p, c, g, used_oracle);
  diagnostics["elapsed_ms"] = clock.elapsed_ms();

  if (g.json) {
    json report{{"command", "complete"},
                {"inputs", io::to_json(grid)},
                {"outputs",
                 {{"value", c.value},
                  {"witness", io::to_json(c.witness)},
                  {"method", c.method},
                  {"uniqueness", c.uniqueness},
                  {"description", c.description}}},
                {"diagnostics", diagnostics}};
    out << report.dump(2) << '\n';
    return kOk;
  }
  out << "m(P) = " << format_double(c.value) << '\n';
  out << "method: " << c.method << '\n';
  out << "uniqueness: " << c.uniqueness << '\n';
  if (!c.description.empty()) out << "structure: " << c.description << '\n';
  if (do_verify) out << "verify: passed\n";
  out << "witness:\n" << io::format_text(c.witness);
  return kOk;
}

// ---------------------------------------------------------------- feasible

int cmd_feasible(const std::string& path, const GlobalOptions& g, std::ostream& out) {
  const CellGrid grid = io::read_file(path);
  const PartialStochasticMatrix p = validate_partial(grid);
  const bool ok = feasible_single_class(p);
  json outputs{{"feasible", ok}};
  std::optional<std::vector<int>> subset;
  if (!ok) {
    subset = closed_subset(p);
    if (subset) outputs["closed_subset"] = one_based(*subset);
  }
  if (g.json) {
    out << json{{"command", "feasible"}, {"inputs", io::to_json(grid)}, {"outputs", outputs}}.dump(2) << '\n';
  } else {
    out << (ok ? "feasible" : "infeasible");
    if (subset) {
      out << ": X = {";
      for (std::size_t i = 0; i < subset->size(); ++i) out << (i ? "," : "") << (*subset)[i] + 1;
      out << "} is closed (no positive or free entry in P[X,X^c]) and its complement holds another closed class";
    }
    out << '\n';
  }
  return ok ? kOk : kInfeasible;
}

void report_error(const std::string& command, ErrorCode code, const std::string& message, const GlobalOptions& g,
                  std::ostream& out, std::ostream& err) {
  err << "error: " << message << '\n';
  if (g.json)
    out << json{{"command", command}, {"error", std::string(to_string(code))}, {"message", message}}.dump(2) << '\n';
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
      return kParse;
    case ErrorCode::Infeasible:
    case ErrorCode::MultipleEssentialClasses:
    case ErrorCode::TwoDiagonalOnes:
      return kInfeasible;
    case ErrorCode::BudgetExceeded:
    case ErrorCode::DimensionTooLarge:
      return kBudget;
    case ErrorCode::SingularSystem:
    case ErrorCode::EigenvalueAtOne:
    case ErrorCode::SpectralRadiusNotLessThanOne:
    case ErrorCode::NumericalBreakdown:
    case ErrorCode::DenominatorVanishes:
      return kNumeric;
    default:
      return kValidation;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kemeny's constant and Kemeny-minimising completions of partial stochastic matrices"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 2 parse error, 3 validation error, 4 infeasible / multiple essential classes,\n"
      "5 budget exceeded, 6 numerical failure or failed --verify.");

  GlobalOptions g;
  app.add_option("--tol", g.tol, "Row-sum tolerance for stochastic matrices")->capture_default_str();
  app.add_option("--budget", g.budget, "Maximum number of sparse patterns the oracle may enumerate")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for randomised checks")->capture_default_str();
  app.add_flag("--json", g.json, "Machine-readable JSON report on stdout");

  std::string path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a (partial) stochastic matrix");
  validate->add_option("file", path, "Matrix file (text or JSON)")->required();
  validate->fallthrough();

  std::string method = "trace";
  auto* kemeny = app.add_subcommand("kemeny", "Kemeny's constant of a fully specified stochastic matrix");
  kemeny->add_option("file", path, "Matrix file (text or JSON)")->required();
  kemeny->add_option("--method", method, "trace | eigen | grounded | all")
      ->check(CLI::IsMember({"trace", "eigen", "grounded", "all"}))
      ->capture_default_str();
  kemeny->fallthrough();

  std::string strategy = "auto";
  bool do_verify = false;
  auto* complete = app.add_subcommand("complete", "Kemeny-minimising completion of a partial stochastic matrix");
  complete->add_option("file", path, "Partial matrix file (text or JSON)")->required();
  complete->add_option("--strategy", strategy, "auto | diag | row | oracle")
      ->check(CLI::IsMember({"auto", "diag", "row", "oracle"}))
      ->capture_default_str();
  complete->add_flag("--verify", do_verify, "Re-evaluate the witness and cross-check with the oracle (n <= 6)");
  complete->fallthrough();

  auto* feasible = app.add_subcommand("feasible", "Does some completion have a single essential class?");
  feasible->add_option("file", path, "Partial matrix file (text or JSON)")->required();
  feasible->fallthrough();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "validate") return cmd_validate(path, g, out);
    if (command == "kemeny") return cmd_kemeny(path, method, g, out);
    if (command == "complete") return cmd_complete(path, strategy, do_verify, g, out, err);
    return cmd_feasible(path, g, out);
  } catch (const Error& e) {
    report_error(command, e.code(), e.what(), g, out, err);
    return exit_code_for(e.code());
  } catch (const VerificationFailure& e) {
    report_error(command, ErrorCode::NumericalBreakdown, std::string("verification failed: ") + e.what(), g, out, err);
    return kNumeric;
  }
}

}  // namespace kemeny::cli
