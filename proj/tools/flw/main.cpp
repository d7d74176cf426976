// flw: batch front end to the workbench.
//
// Exit codes: 0 success, 1 failure (diagnostics, violations, no answers),
// 2 usage error, 3 only floundered computations.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "flw/analysis.hpp"
#include "flw/frontend.hpp"
#include "flw/ir_json.hpp"
#include "flw/server.hpp"
#include "flw/solve.hpp"
#include "flw/trace.hpp"
#include "flw/validate.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;
constexpr int kFloundered = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Input {
  std::string file;
  std::string lang;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read `" + path + "`");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

flw::Lang resolve_lang(const Input& in) {
  auto lang = in.lang.empty() ? flw::lang_for_path(in.file) : flw::parse_lang(in.lang);
  if (!lang) throw UsageError("cannot determine the source language of `" + in.file + "`; use --lang");
  return *lang;
}

flw::Program load(const Input& in) {
  return flw::load_program(read_file(in.file), resolve_lang(in), flw::module_name_for_path(in.file));
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write `" + path + "`");
  out << text;
}

void add_input(CLI::App* cmd, Input& in) {
  cmd->add_option("file", in.file, "Source file (.mcy, .pl, or .json)")->required();
  cmd->add_option("--lang", in.lang, "Front end: mcy, prolog, or flat");
}

int cmd_check(const Input& in) {
  std::vector<flw::Violation> violations;
  std::size_t functions = 0;
  try {
    if (resolve_lang(in) == flw::Lang::Flat) {
      flw::Program p = flw::parse_ir(read_file(in.file));
      violations = flw::validate(p);
      functions = p.functions.size();
    } else {
      functions = load(in).functions.size();
    }
  } catch (const flw::ValidationError& e) {
    violations = e.violations;
  }
  for (const auto& v : violations) std::cout << flw::to_string(v) << "\n";
  if (!violations.empty()) return kFailure;
  std::cout << "ok: " << functions << " function(s)\n";
  return kOk;
}

int cmd_analyze(const Input& in, const std::string& name, const std::string& function) {
  flw::Program p = load(in);
  flw::AnalysisCache cache;
  auto registry = flw::default_registry();
  if (!registry.find(name)) throw UsageError("unknown analysis `" + name + "`");
  auto show = [](const std::string& f, const flw::AnalysisResult& r) {
    std::cout << f << ": " << (r.is_message() ? r.text() : flw::export_graph(r.dep_graph(), flw::GraphFormat::Json))
              << "\n";
  };
  if (function.empty()) {
    for (const auto& [f, r] : flw::analyze_all(cache, registry, p, name)) show(f, r);
  } else {
    try {
      show(function, flw::analyze(cache, registry, p, name, function));
    } catch (const flw::UnknownFunction& e) {
      throw UsageError(e.what());
    }
  }
  return kOk;
}

int cmd_graph(const Input& in, const std::string& function, const std::string& format) {
  flw::Program p = load(in);
  flw::AnalysisResult r = [&] {
    try {
      return flw::dep_graph(p, function);
    } catch (const flw::UnknownFunction& e) {
      throw UsageError(e.what());
    }
  }();
  std::string text = flw::export_graph(r.dep_graph(), format == "json" ? flw::GraphFormat::Json : flw::GraphFormat::Dot);
  std::cout << text;
  if (text.empty() || text.back() != '\n') std::cout << "\n";
  return kOk;
}

flw::MachineState start(const Input& in, const std::string& goal) {
  auto p = std::make_shared<const flw::Program>(load(in));
  try {
    return flw::inject(p, goal);
  } catch (const flw::Error& e) {
    throw UsageError(std::string("goal: ") + e.what());
  }
}

int cmd_solve(const Input& in, const std::string& goal, const std::string& strategy, std::uint64_t limit,
              bool first) {
  flw::SolveOptions opt;
  opt.strategy = strategy == "bfs" ? flw::Strategy::Bfs : flw::Strategy::Dfs;
  opt.limit = limit;
  opt.max_answers = first ? 1 : 0;
  flw::SolveResult r = flw::solve(start(in, goal), opt);
  for (const auto& a : r.answers) std::cout << a.text() << "\n";
  if (r.floundered) std::cout << "floundered\n";
  if (r.budget_exhausted) std::cout << "budget exhausted\n";
  if (!r.answers.empty()) return kOk;
  return r.floundered ? kFloundered : kFailure;
}

int cmd_trace(const Input& in, const std::string& goal, std::uint64_t steps, const std::string& out) {
  flw::TraceSession t(start(in, goal));
  t.run_to(flw::RunPolicy::count(steps));
  write_output(out, t.export_json() + "\n");
  return kOk;
}

int cmd_serve(const std::string& addr) {
  auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw UsageError("address must be HOST:PORT");
  std::string host = addr.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("invalid port in `" + addr + "`");
  }
  flw::Service service;
  flw::HttpServer server(service);
  int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "flw: cannot listen on " << addr << "\n";
    return kFailure;
  }
  std::cerr << "flw: listening on " << host << ":" << bound << "\n";
  server.listen();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional-logic analysis and tracing workbench"};
  app.require_subcommand(1);

  Input in;
  std::string out, name, function, format = "dot", goal, strategy = "dfs";
  std::uint64_t limit = 0, steps = 0;
  bool all = false, first = false;
  const char* env_addr = std::getenv("FLW_ADDR");
  std::string addr = env_addr ? env_addr : "127.0.0.1:8080";

  auto* check = app.add_subcommand("check", "Validate a program");
  add_input(check, in);

  auto* flat = app.add_subcommand("flat", "Print the JSON intermediate representation");
  add_input(flat, in);
  flat->add_option("-o,--output", out, "Output file");

  auto* analyze = app.add_subcommand("analyze", "Run an analysis on one or all functions");
  add_input(analyze, in);
  analyze->add_option("--name", name, "Analysis name")->required();
  analyze->add_option("--function", function, "Function (all when omitted)");

  auto* graph = app.add_subcommand("graph", "Dependency graph of a function");
  add_input(graph, in);
  graph->add_option("--function", function, "Root function")->required();
  graph->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}));

  auto* solve = app.add_subcommand("solve", "Enumerate answers of a goal");
  add_input(solve, in);
  solve->add_option("--goal", goal, "Goal in surface syntax")->required();
  solve->add_option("--strategy", strategy, "dfs or bfs")->check(CLI::IsMember({"dfs", "bfs"}));
  solve->add_option("--limit", limit, "Depth limit (dfs) or node limit (bfs)");
  auto* all_flag = solve->add_flag("--all", all, "Print every answer (default)");
  solve->add_flag("--first", first, "Stop after the first answer")->excludes(all_flag);

  auto* trace = app.add_subcommand("trace", "Write a trace of a goal");
  add_input(trace, in);
  trace->add_option("--goal", goal, "Goal in surface syntax")->required();
  trace->add_option("--steps", steps, "Steps to take along alternative 0")->required();
  trace->add_option("-o,--output", out, "Output file");

  auto* serve = app.add_subcommand("serve", "Start the session service");
  serve->add_option("--addr", addr, "Listen address HOST:PORT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(in);
    if (*flat) {
      std::string text = flw::serialize_ir(load(in));
      if (text.empty() || text.back() != '\n') text += "\n";
      write_output(out, text);
      return kOk;
    }
    if (*analyze) return cmd_analyze(in, name, function);
    if (*graph) return cmd_graph(in, function, format);
    if (*solve) return cmd_solve(in, goal, strategy, limit, first);
    if (*trace) return cmd_trace(in, goal, steps, out);
    if (*serve) return cmd_serve(addr);
  } catch (const UsageError& e) {
    std::cerr << "flw: " << e.what() << "\n";
    return kUsage;
  } catch (const flw::ValidationError& e) {
    std::cerr << "flw: " << e.what() << "\n";
    for (const auto& v : e.violations) std::cerr << "  " << flw::to_string(v) << "\n";
    return kFailure;
  } catch (const flw::Error& e) {
    std::cerr << "flw: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
