#include "uzawa/cli.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <future>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uzawa/diagnostics.hpp"
#include "uzawa/dual_solvers.hpp"
#include "uzawa/error.hpp"
#include "uzawa/fem_bench.hpp"
#include "uzawa/instance_io.hpp"
#include "uzawa/verify.hpp"

namespace uzawa::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct InstanceArgs {
  std::optional<std::size_t> nx;
  std::optional<std::size_t> ny;
  bool paper_spec = false;
  std::optional<std::string> instance;
};

struct SolveArgs {
  std::string method = "accel-restart";
  std::string alpha = "auto";
  double eps = 1e-6;
  std::size_t max_iter = 100000;
  std::optional<std::string> history;
  std::optional<std::string> out;
};

struct LoadedInstance {
  ContactQP qp;
  json meta;
};

void add_instance_flags(CLI::App* cmd, InstanceArgs& a) {
  cmd->add_option("--nx", a.nx, "Elements along the width");
  cmd->add_option("--ny", a.ny, "Elements along the height");
  cmd->add_flag("--paper-spec", a.paper_spec, "Reference instance family (ny = nx / 3)");
  cmd->add_option("--instance", a.instance, "Instance JSON file");
}

void add_solver_flags(CLI::App* cmd, SolveArgs& a, bool with_method) {
  if (with_method) {
    cmd->add_option("--method", a.method, "uzawa | accel | accel-restart")
        ->check(CLI::IsMember({"uzawa", "accel", "accel-restart"}));
  }
  cmd->add_option("--alpha", a.alpha, "Step size, or 'auto'");
  cmd->add_option("--eps", a.eps, "Stopping threshold")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", a.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
}

LoadedInstance load_instance(const InstanceArgs& a) {
  const bool from_file = a.instance.has_value();
  const bool from_mesh = a.nx.has_value() || a.ny.has_value() || a.paper_spec;
  if (from_file == from_mesh) {
    throw Error(ErrorCode::InvalidConfig,
                "give exactly one instance source: --instance, --nx/--ny or --paper-spec --nx");
  }
  if (from_file) return {io::read_instance(*a.instance), json{{"source", *a.instance}}};

  BenchmarkSpec spec;
  if (a.paper_spec) {
    if (!a.nx) throw Error(ErrorCode::InvalidConfig, "--paper-spec needs --nx");
    spec = paper_spec(*a.nx);
    if (a.ny && *a.ny != spec.ny) {
      throw Error(ErrorCode::InvalidMeshRatio, "--ny must equal nx / 3 with --paper-spec");
    }
  } else {
    if (!a.nx || !a.ny) throw Error(ErrorCode::InvalidConfig, "--nx and --ny are both required");
    spec.nx = *a.nx;
    spec.ny = *a.ny;
  }
  return {build_benchmark(spec), json{{"spec", io::spec_to_json(spec)}}};
}

std::optional<double> parse_alpha(const std::string& text) {
  if (text == "auto") return std::nullopt;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(value > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "--alpha must be a positive real or 'auto'");
  }
  return value;
}

SolverConfig make_config(const SolveArgs& a, Method method, bool history) {
  SolverConfig cfg;
  cfg.alpha = parse_alpha(a.alpha);
  cfg.epsilon = a.eps;
  cfg.max_iter = a.max_iter;
  cfg.method = method;
  cfg.record_history = history;
  cfg.validate();
  return cfg;
}

// Resolves auto alpha once so that every method of a run uses the same value.
double resolve_alpha(SolverConfig& cfg, const CholeskyFactor& factor, const ContactQP& qp,
                     std::ostream& out, std::ostream& err) {
  if (!cfg.alpha) {
    cfg.alpha = default_step_size(factor, qp);
    out << "alpha (auto) = " << io::format_real(*cfg.alpha) << '\n';
  } else if (!step_size_validity_check(qp, *cfg.alpha)) {
    err << "warning: alpha = " << io::format_real(*cfg.alpha)
        << " is outside the convergent interval (0, 2 lambda_min(K) / sigma_max(N)^2)\n";
  }
  return *cfg.alpha;
}

json residual_json(const KktResidual& res) {
  return json{{"e1", norm2(res.e1)},
              {"e2", norm2(res.e2)},
              {"e3", norm2(res.e3)},
              {"e4", norm2(res.e4)},
              {"total", res.total}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_summary(std::ostream& out, Method method, const SolveResult& res, double residual,
                   double seconds) {
  out << method_name(method) << ": " << status_name(res.status) << " after " << res.iterations
      << " iterations, residual " << std::setprecision(6) << residual << ", wall "
      << std::fixed << std::setprecision(3) << seconds << " s" << std::defaultfloat << '\n';
}

int exit_for(SolveStatus status) {
  return status == SolveStatus::Converged ? kExitOk : kExitMaxIter;
}

int cmd_solve(const InstanceArgs& inst, const SolveArgs& args, std::ostream& out,
              std::ostream& err) {
  const LoadedInstance loaded = load_instance(inst);
  const ContactQP& qp = loaded.qp;
  const Method method = *parse_method(args.method);
  SolverConfig cfg = make_config(args, method, args.history.has_value());

  const auto start = std::chrono::steady_clock::now();
  const CholeskyFactor factor = cholesky_factorize(qp.stiffness);
  resolve_alpha(cfg, factor, qp, out, err);
  const SolveResult res = solve(factor, qp, cfg);
  const double seconds = seconds_since(start);
  const KktResidual kkt = kkt_residual(qp, res.u, res.r);

  json doc{{"method", method_name(method)},
           {"status", status_name(res.status)},
           {"iterations", res.iterations},
           {"alpha", res.alpha},
           {"epsilon", cfg.epsilon},
           {"u", res.u},
           {"r", res.r},
           {"residual", residual_json(kkt)}};
  io::write_text(args.out.value_or("solution.json"), doc.dump(1) + "\n");
  if (args.history) io::write_history_csv(*args.history, res.history);

  print_summary(out, method, res, kkt.total, seconds);
  return exit_for(res.status);
}

int cmd_compare(const InstanceArgs& inst, const SolveArgs& args, std::ostream& out,
                std::ostream& err) {
  const LoadedInstance loaded = load_instance(inst);
  const ContactQP& qp = loaded.qp;
  SolverConfig base = make_config(args, Method::Uzawa, true);

  const CholeskyFactor factor = cholesky_factorize(qp.stiffness);
  resolve_alpha(base, factor, qp, out, err);

  constexpr std::array<Method, 3> methods = {Method::Uzawa, Method::Accelerated,
                                             Method::AcceleratedRestart};
  struct Timed {
    SolveResult result;
    double seconds;
  };
  // Independent solves over a shared read-only factorization.
  std::array<std::future<Timed>, 3> jobs;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    SolverConfig cfg = base;
    cfg.method = methods[i];
    jobs[i] = std::async(std::launch::async, [&factor, &qp, cfg] {
      const auto start = std::chrono::steady_clock::now();
      SolveResult res = solve(factor, qp, cfg);
      return Timed{std::move(res), seconds_since(start)};
    });
  }

  const fs::path out_path = args.out.value_or("compare.json");
  const fs::path dir = out_path.parent_path();
  const std::string stem = out_path.stem().string();

  json doc{{"alpha", *base.alpha},
           {"epsilon", base.epsilon},
           {"max_iter", base.max_iter},
           {"d", qp.dim()},
           {"m", qp.ncon()},
           {"meta", loaded.meta}};
  int code = kExitOk;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const Timed timed = jobs[i].get();
    const SolveResult& res = timed.result;
    const std::string name(method_name(methods[i]));
    const std::string csv_name = stem + "_" + name + ".csv";
    io::write_history_csv(dir / csv_name, res.history);
    const KktResidual kkt = kkt_residual(qp, res.u, res.r);
    doc["methods"][name] = json{{"status", status_name(res.status)},
                                {"iterations", res.iterations},
                                {"residual", residual_json(kkt)},
                                {"dual_obj", res.history.empty() ? 0.0 : res.history.back().dual_obj},
                                {"history", csv_name}};
    print_summary(out, methods[i], res, kkt.total, timed.seconds);
    if (res.status != SolveStatus::Converged) code = kExitMaxIter;
  }
  io::write_text(out_path, doc.dump(1) + "\n");
  return code;
}

int cmd_export(const InstanceArgs& inst, const std::optional<std::string>& out_path,
               std::ostream& out) {
  const LoadedInstance loaded = load_instance(inst);
  const std::string path = out_path.value_or("instance.json");
  io::write_instance(path, loaded.qp, loaded.meta);
  out << "wrote " << path << ": d = " << loaded.qp.dim() << ", m = " << loaded.qp.ncon() << '\n';
  return kExitOk;
}

int cmd_import_check(const std::string& path, const std::optional<std::string>& out_path,
                     std::ostream& out) {
  const ContactQP qp = io::read_instance(path);
  cholesky_factorize(qp.stiffness);
  out << path << ": d = " << qp.dim() << ", m = " << qp.ncon() << ", stiffness positive definite\n";
  if (out_path) io::write_instance(*out_path, qp);
  return kExitOk;
}

int cmd_verify(std::uint64_t seed, std::size_t cases, const std::optional<std::string>& out_path,
               std::ostream& out, std::ostream& err) {
  verify::VerifyOptions opts;
  opts.seed = seed;
  opts.cases = cases;
  const verify::VerifyReport report = verify::run_verify(opts);
  for (const verify::SuiteReport& s : report.suites) {
    out << s.name << ": " << s.passed << "/" << s.total << " passed\n";
  }
  if (report.ok()) return kExitOk;

  const verify::Failure& f = *report.first_failure;
  const std::string path = out_path.value_or("verify_failure.json");
  json dump{{"suite", f.suite},
            {"case", f.case_index},
            {"seed", seed},
            {"reason", f.reason},
            {"instance", io::instance_to_json(f.instance)}};
  io::write_text(path, dump.dump(1) + "\n");
  err << "verification failed in " << f.suite << " case " << f.case_index << ": " << f.reason
      << "\ninstance written to " << path << '\n';
  return kExitVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uzawa-family dual solvers for frictionless contact QPs", "uzawa"};
  app.require_subcommand(1);

  InstanceArgs inst;
  SolveArgs solve_args;
  std::optional<std::string> out_path;
  std::uint64_t seed = verify::VerifyOptions{}.seed;
  std::size_t cases = verify::VerifyOptions{}.cases;
  std::string import_path;

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one instance with one method");
  add_instance_flags(solve_cmd, inst);
  add_solver_flags(solve_cmd, solve_args, true);
  solve_cmd->add_option("--history", solve_args.history, "Write the iteration history CSV");
  solve_cmd->add_option("--out", solve_args.out, "Solution JSON (default solution.json)");

  CLI::App* compare_cmd = app.add_subcommand("compare", "Run all three methods on one instance");
  add_instance_flags(compare_cmd, inst);
  add_solver_flags(compare_cmd, solve_args, false);
  compare_cmd->add_option("--out", solve_args.out,
                          "Summary JSON (default compare.json); histories go alongside");

  CLI::App* export_cmd = app.add_subcommand("export", "Write an instance JSON");
  add_instance_flags(export_cmd, inst);
  export_cmd->add_option("--out", out_path, "Instance JSON (default instance.json)");

  CLI::App* import_cmd = app.add_subcommand("import-check", "Load and validate an instance JSON");
  import_cmd->add_option("--instance", import_path, "Instance JSON file")->required();
  import_cmd->add_option("--out", out_path, "Re-export the parsed instance");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Randomized oracle and gradient checks");
  verify_cmd->add_option("--seed", seed, "Random seed");
  verify_cmd->add_option("--cases", cases, "Number of random instances");
  verify_cmd->add_option("--out", out_path, "Failure dump (default verify_failure.json)");

  std::vector<const char*> argv{"uzawa"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitError;
  }

  try {
    if (*solve_cmd) return cmd_solve(inst, solve_args, out, err);
    if (*compare_cmd) return cmd_compare(inst, solve_args, out, err);
    if (*export_cmd) return cmd_export(inst, out_path, out);
    if (*import_cmd) return cmd_import_check(import_path, out_path, out);
    if (*verify_cmd) return cmd_verify(seed, cases, out_path, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace uzawa::cli
