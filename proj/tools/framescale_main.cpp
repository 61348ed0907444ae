// framescale: optimal scalings of finite frames under the Frobenius and
// operator norms, with scalability and invertibility diagnostics.
//
// Subcommands: scale, analyze, polytope, generate. Reports are
// deterministic JSON (modulo the durationSeconds field) so runs can be
// compared byte for byte.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "framescale/frobenius.hpp"
#include "framescale/io.hpp"
#include "framescale/operator_scaling.hpp"
#include "framescale/polytope.hpp"
#include "framescale/report.hpp"

namespace fs = framescale;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

struct InputSelection {
  std::string path;
  std::string builtin;
};

struct LoadedFrame {
  fs::FrameMatrix frame;
  std::string digest;
  std::string source;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fs::ParseError("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::FrameFormat format_for(const std::string& path, const std::string& bytes) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return fs::FrameFormat::kJson;
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return fs::FrameFormat::kCsv;
  for (char c : bytes) {
    if (c == ' ' || c == '\n' || c == '\r' || c == '\t') continue;
    return c == '{' ? fs::FrameFormat::kJson : fs::FrameFormat::kCsv;
  }
  throw fs::ParseError("empty input");
}

LoadedFrame load_frame(const InputSelection& in) {
  if (in.path.empty() == in.builtin.empty())
    throw fs::ValidationError("exactly one of --input and --builtin is required");
  if (!in.builtin.empty()) {
    fs::FrameMatrix frame = fs::builtin_frame(in.builtin);
    const auto canonical = fs::serialize_frame(frame, fs::FrameFormat::kJson);
    return {std::move(frame), fs::fnv1a_digest(canonical), "builtin:" + in.builtin};
  }
  const std::string bytes = read_file(in.path);
  return {fs::parse_frame(bytes, format_for(in.path, bytes)), fs::fnv1a_digest(bytes),
          in.path};
}

void add_input_options(CLI::App* cmd, InputSelection& in) {
  cmd->add_option("--input", in.path, "frame file (.json or .csv)");
  cmd->add_option("--builtin", in.builtin, "builtin frame name");
}

struct SolverFlags {
  fs::SolverOptions opts;
  void attach(CLI::App* cmd) {
    cmd->add_option("--max-iterations", opts.max_iterations, "iteration cap");
    cmd->add_option("--step-scale", opts.step_scale, "initial subgradient step length");
    cmd->add_option("--objective-tol", opts.objective_tol, "improvement tolerance");
    cmd->add_option("--stagnation-window", opts.stagnation_window,
                    "iterations without improvement before stopping");
    cmd->add_option("--balance-tol", opts.balance_tol, "extreme-eigenvalue tie tolerance");
    cmd->add_option("--seed", opts.seed, "seed for randomized restarts")
        ->envname("FRAMESCALE_SEED");
  }
};

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

fs::OrderedJson base_report(const std::string& command, const LoadedFrame& loaded) {
  fs::OrderedJson report;
  report["command"] = command;
  report["input"] = loaded.source;
  report["inputDigest"] = loaded.digest;
  report["frame"] = {{"dim", loaded.frame.dim()}, {"count", loaded.frame.count()}};
  return report;
}

void emit(const fs::OrderedJson& report, const std::string& out_path) {
  if (out_path.empty()) return;
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw fs::Error("cannot write to '" + out_path + "'");
  out << report.dump(2) << '\n';
}

void print_solution_table(const fs::ScalingSolution& sol) {
  std::printf("norm            %s\n", fs::norm_kind_name(sol.norm_kind).c_str());
  std::printf("residual        %.12g\n", sol.residual);
  std::printf("lambda max/min  %.12g / %.12g\n", sol.lambda_max, sol.lambda_min);
  if (std::isinf(sol.condition_number))
    std::printf("condition       inf\n");
  else
    std::printf("condition       %.12g\n", sol.condition_number);
  std::printf("iterations      %zu (%s)\n", sol.iterations,
              sol.converged ? "converged" : "iteration cap");
  std::printf("kkt residual    %.3g\n", sol.kkt_residual);
  std::printf("scaling        ");
  for (double c : sol.scaling.coefficients()) std::printf(" %.10g", c);
  std::printf("\n");
}

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int run_scale(const std::string& command, const InputSelection& in, const std::string& norm,
              const SolverFlags& flags, const std::string& out_path) {
  const auto start = std::chrono::steady_clock::now();
  const auto loaded = load_frame(in);

  fs::ScalingSolution sol;
  if (norm == "frobenius") {
    sol = fs::minimize_frobenius(loaded.frame);
  } else if (norm == "operator") {
    sol = fs::minimize_operator_norm(loaded.frame, flags.opts);
  } else {
    sol = fs::min_condition_scaling(loaded.frame, flags.opts);
  }

  auto report = base_report(command, loaded);
  report["norm"] = norm;
  report["options"] = {{"maxIterations", flags.opts.max_iterations},
                       {"stepScale", flags.opts.step_scale},
                       {"objectiveTol", flags.opts.objective_tol},
                       {"stagnationWindow", flags.opts.stagnation_window},
                       {"balanceTol", flags.opts.balance_tol},
                       {"seed", flags.opts.seed}};
  report["solution"] = fs::to_json(sol);
  report["durationSeconds"] = seconds_since(start);
  emit(report, out_path);
  print_solution_table(sol);
  return sol.converged ? kExitOk : kExitNotConverged;
}

int run_analyze(const std::string& command, const InputSelection& in,
                std::vector<std::string> checks, std::size_t cap, const SolverFlags& flags,
                const std::string& out_path) {
  const auto start = std::chrono::steady_clock::now();
  const auto loaded = load_frame(in);
  const auto& frame = loaded.frame;
  if (checks.empty())
    checks = {"scalable", "spark", "independence", "thm17", "invertibility", "balance"};

  auto report = base_report(command, loaded);
  fs::OrderedJson results;
  bool solver_converged = true;

  for (const auto& check : checks) {
    if (check == "scalable") {
      const auto sol = fs::minimize_frobenius(frame);
      results["scalable"] = {{"scalable", sol.residual <= 1e-8},
                             {"residual", sol.residual},
                             {"scaling", sol.scaling.coefficients()}};
    } else if (check == "spark") {
      if (frame.count() < frame.dim()) {
        results["spark"] = {{"fullSpark", false},
                            {"note", "fewer vectors than the dimension"}};
      } else {
        results["spark"] = {{"fullSpark", fs::is_full_spark(frame, cap)}};
      }
    } else if (check == "independence") {
      std::vector<std::size_t> all(frame.count());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      const auto ind = fs::outer_products_independent(frame, all);
      results["independence"] = {{"independent", ind.independent}, {"rank", ind.rank}};
    } else if (check == "thm17" || check == "spread") {
      try {
        results["spreadCertificate"] = fs::to_json(fs::spread_certificate(frame));
      } catch (const fs::PreconditionError& e) {
        results["spreadCertificate"] = {{"applicable", false}, {"reason", e.what()}};
      }
    } else if (check == "invertibility") {
      results["invertibility"] = fs::to_json(fs::invertibility_report(frame));
    } else if (check == "balance") {
      const auto sol = fs::minimize_operator_norm(frame, flags.opts);
      solver_converged = solver_converged && sol.converged;
      results["balance"] = {{"balanceGap", sol.kkt_residual},
                            {"withinTolerance", sol.kkt_residual <= flags.opts.balance_tol},
                            {"residual", sol.residual},
                            {"converged", sol.converged}};
    } else {
      throw fs::ValidationError(
          "unknown check '" + check +
          "'; available: scalable, spark, independence, thm17, invertibility, balance");
    }
  }

  report["checks"] = std::move(results);
  report["durationSeconds"] = seconds_since(start);
  emit(report, out_path);
  std::cout << report["checks"].dump(2) << '\n';
  return solver_converged ? kExitOk : kExitNotConverged;
}

int run_polytope(const std::string& command, const InputSelection& in, std::size_t cap,
                 const std::string& out_path) {
  const auto start = std::chrono::steady_clock::now();
  const auto loaded = load_frame(in);
  const auto description = fs::enumerate_minimal_scalings(loaded.frame, cap);

  auto report = base_report(command, loaded);
  report["polytope"] = fs::to_json(description);
  report["durationSeconds"] = seconds_since(start);
  emit(report, out_path);

  std::printf("vertices  %zu\n", description.vertices.size());
  for (std::size_t k = 0; k < description.vertices.size(); ++k) {
    std::printf("  [");
    for (std::size_t i = 0; i < description.supports[k].size(); ++i)
      std::printf("%sv%zu", i ? " " : "", description.supports[k][i] + 1);
    std::printf("] ");
    for (double c : description.vertices[k].coefficients()) std::printf(" %.10g", c);
    std::printf("\n");
  }
  return kExitOk;
}

struct GenerateArgs {
  std::string kind;
  std::string name;
  std::size_t n = 2;
  std::size_t m = 2;
  double epsilon = 0.05;
  std::size_t extra = 0;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;
  InputSelection input;  // for --kind extend
};

int run_generate(const GenerateArgs& args) {
  std::optional<fs::FrameMatrix> frame;
  std::map<std::string, std::string> metadata;
  metadata["kind"] = args.kind;
  if (args.kind == "random") {
    frame = fs::random_unit_frame(args.n, args.m, args.seed);
    metadata["seed"] = std::to_string(args.seed);
  } else if (args.kind == "builtin") {
    if (args.name.empty()) throw fs::ValidationError("--name is required for --kind builtin");
    frame = fs::builtin_frame(args.name);
    metadata["name"] = args.name;
  } else if (args.kind == "tightness-witness") {
    frame = fs::tightness_witness(args.n, args.m, args.epsilon, args.seed);
    metadata["seed"] = std::to_string(args.seed);
    metadata["epsilon"] = std::to_string(args.epsilon);
  } else if (args.kind == "extend") {
    const auto loaded = load_frame(args.input);
    frame = fs::extend_within_cone(loaded.frame, args.extra, args.seed);
    metadata["seed"] = std::to_string(args.seed);
    metadata["base"] = loaded.source;
  } else {
    throw fs::ValidationError("unknown kind '" + args.kind +
                              "'; available: random, builtin, tightness-witness, extend");
  }

  const auto format =
      args.format == "json" ? fs::FrameFormat::kJson : fs::FrameFormat::kCsv;
  const auto bytes = fs::serialize_frame(*frame, format, metadata);
  if (args.out.empty()) {
    std::cout << bytes;
  } else {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw fs::Error("cannot write to '" + args.out + "'");
    out << bytes;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal scalings of finite frames"};
  app.require_subcommand(1);
  const std::string command = join_args(argc, argv);

  // scale
  auto* scale = app.add_subcommand("scale", "solve a scaling problem");
  InputSelection scale_in;
  add_input_options(scale, scale_in);
  std::string norm = "frobenius";
  scale->add_option("--norm", norm, "frobenius, operator or condition")
      ->check(CLI::IsMember({"frobenius", "operator", "condition"}));
  SolverFlags scale_flags;
  scale_flags.attach(scale);
  std::string scale_out;
  scale->add_option("--out", scale_out, "write the JSON report here");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "run diagnostics on a frame");
  InputSelection analyze_in;
  add_input_options(analyze, analyze_in);
  std::vector<std::string> checks;
  analyze->add_option("--checks", checks, "subset of scalable,spark,independence,thm17,invertibility,balance")
      ->delimiter(',');
  std::size_t analyze_cap = 20;
  analyze->add_option("--cap", analyze_cap, "enumeration cap for the spark check");
  SolverFlags analyze_flags;
  analyze_flags.attach(analyze);
  std::string analyze_out;
  analyze->add_option("--out", analyze_out, "write the JSON report here");

  // polytope
  auto* polytope = app.add_subcommand("polytope", "enumerate minimal optimal scalings");
  InputSelection polytope_in;
  add_input_options(polytope, polytope_in);
  std::size_t polytope_cap = 20;
  polytope->add_option("--cap", polytope_cap, "support enumeration cap");
  std::string polytope_out;
  polytope->add_option("--out", polytope_out, "write the JSON report here");

  // generate
  auto* generate = app.add_subcommand("generate", "produce a frame file");
  GenerateArgs gen;
  generate->add_option("--kind", gen.kind, "random, builtin, tightness-witness or extend")
      ->required();
  generate->add_option("--name", gen.name, "builtin name for --kind builtin");
  generate->add_option("--n", gen.n, "dimension");
  generate->add_option("--m", gen.m, "number of vectors");
  generate->add_option("--epsilon", gen.epsilon, "residual target for tightness-witness");
  generate->add_option("--extra", gen.extra, "columns to append for --kind extend");
  generate->add_option("--seed", gen.seed, "generator seed")->envname("FRAMESCALE_SEED");
  generate->add_option("--format", gen.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  generate->add_option("--out", gen.out, "output path (stdout when omitted)");
  add_input_options(generate, gen.input);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (scale->parsed()) return run_scale(command, scale_in, norm, scale_flags, scale_out);
    if (analyze->parsed())
      return run_analyze(command, analyze_in, checks, analyze_cap, analyze_flags, analyze_out);
    if (polytope->parsed()) return run_polytope(command, polytope_in, polytope_cap, polytope_out);
    if (generate->parsed()) return run_generate(gen);
  } catch (const fs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
