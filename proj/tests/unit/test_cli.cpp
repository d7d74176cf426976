#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using Json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string sample(const std::string& name) { return std::string(FLW_SAMPLES_DIR) + "/" + name; }

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run flw(const std::string& args) {
  std::string cmd = std::string(FLW_BINARY) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("check reports a clean program") {
  Run r = flw("check " + quote(sample("conc.mcy")));
  CHECK(r.code == 0);
  CHECK(r.out == "ok: 2 function(s)\n");
}

TEST_CASE("check lists violations of a flat program") {
  std::string path = "flw_cli_bad.json";
  std::ofstream(path) << R"({"module":"m","imports":[],"types":[],"functions":[
    {"name":"f","arity":1,"rule":{"params":["x"],"vars":["x"],"body":["call","fn","g",[["var","x"]]]}}
  ],"operators":[],"nametable":[]})";
  Run r = flw("check " + path);
  CHECK(r.code == 1);
  CHECK(r.out.find("[unknown-function]") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("analyze prints one line per function") {
  Run r = flw("analyze " + quote(sample("conc.mcy")) + " --name 'Overlapping Rules'");
  CHECK(r.code == 0);
  CHECK(r.out == "conc: not overlapping\nlast: not overlapping\n");
  Run one = flw("analyze " + quote(sample("leq.mcy")) + " --name Completeness --function '≤'");
  CHECK(one.out == "≤: complete\n");
  CHECK(flw("analyze " + quote(sample("conc.mcy")) + " --name Bogus").code == 2);
  CHECK(flw("analyze " + quote(sample("conc.mcy")) + " --name Completeness --function nope").code == 2);
}

TEST_CASE("solve prints answers and reports outcomes in the exit code") {
  Run last = flw("solve " + quote(sample("last.mcy")) + " --goal 'last [1,2,3]'");
  CHECK(last.code == 0);
  CHECK(last.out == "3\n");
  Run coin = flw("solve " + quote(sample("residuation.mcy")) + " --goal coin --all");
  CHECK(coin.out == "0\n1\n");
  Run first = flw("solve " + quote(sample("residuation.mcy")) + " --goal coin --first");
  CHECK(first.out == "0\n");
  Run split = flw("solve " + quote(sample("conc.mcy")) + " --goal 'conc xs ys =:= [1,2] where xs, ys free' --strategy bfs");
  CHECK(split.out == "{xs = [], ys = [1,2]} Success\n{xs = [1], ys = [2]} Success\n{xs = [1,2], ys = []} Success\n");
  Run none = flw("solve " + quote(sample("residuation.mcy")) + " --goal 'coin =:= 2'");
  CHECK(none.code == 1);
  CHECK(none.out.empty());
  Run stuck = flw("solve " + quote(sample("residuation.mcy")) + " --goal 'isZero x where x free'");
  CHECK(stuck.code == 3);
  CHECK(stuck.out == "floundered\n");
  Run woken = flw("solve " + quote(sample("residuation.mcy")) + " --goal 'x =:= 0 & isZero x where x free'");
  CHECK(woken.code == 0);
  CHECK(woken.out == "{x = 0} Success\n");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(flw("solve " + quote(sample("residuation.mcy")) + " --goal nope").code == 2);
  CHECK(flw("check /nonexistent/file.mcy").code == 2);
  CHECK(flw("frobnicate").code == 2);
  CHECK(flw("graph " + quote(sample("qsort.mcy"))).code == 2);
  CHECK(flw("check " + quote(sample("conc.mcy")) + " --lang cobol").code == 2);
}

TEST_CASE("parse errors exit with 1") {
  std::string path = "flw_cli_bad.mcy";
  std::ofstream(path) << "f = \n";
  CHECK(flw("check " + path).code == 1);
  std::remove(path.c_str());
}

TEST_CASE("flat translates Prolog clauses into nested flexible cases") {
  Run r = flw("flat " + quote(sample("app.pl")));
  CHECK(r.code == 0);
  Json ir = Json::parse(r.out);
  Json app;
  for (const auto& f : ir["functions"])
    if (f["name"] == "app") app = f;
  REQUIRE(app.is_object());
  CHECK(app["arity"] == 3);
  const Json& body = app["rule"]["body"];
  CHECK(body[0] == "fcase");
  REQUIRE(body[2].size() == 2);
  CHECK(body[2][0][0][1] == "[]");
  CHECK(body[2][1][0][1] == ":");
  CHECK(body[2][1][1][0] == "fcase");

  std::string path = "flw_cli_app.json";
  CHECK(flw("flat " + quote(sample("app.pl")) + " -o " + path).code == 0);
  CHECK(read_file(path) == r.out);
  CHECK(flw("check " + path).code == 0);
  std::remove(path.c_str());
}

TEST_CASE("graph prints the dependency graph") {
  Run dot = flw("graph " + quote(sample("qsort.mcy")) + " --function smaller");
  CHECK(dot.code == 0);
  CHECK(dot.out ==
        "digraph \"smaller\" {\n"
        "  \"smaller\" [shape=box, style=filled, fillcolor=\"#f4cccc\"];\n"
        "  \"<\";\n"
        "  \"smaller\" -> \"<\";\n"
        "  \"smaller\" -> \"smaller\";\n"
        "}\n");
  Run json = flw("graph " + quote(sample("qsort.mcy")) + " --function qsort --format json");
  Json g = Json::parse(json.out);
  CHECK(g["root"] == "qsort");
  CHECK(g["nodes"].size() == 5);
}

TEST_CASE("trace writes the wire format") {
  std::string path = "flw_cli_trace.json";
  Run r = flw("trace " + quote(sample("conc.mcy")) + " --goal 'conc [1] [2]' --steps 3 -o " + path);
  CHECK(r.code == 0);
  Json t = Json::parse(read_file(path));
  CHECK(t["root"] == 0);
  CHECK(t["cursor"] == 3);
  CHECK(t["nodes"].size() == 4);
  CHECK(t["nodes"][3]["stepinfo"]["kind"].is_string());
  std::remove(path.c_str());
}

TEST_CASE("stdout is byte-identical across runs") {
  const std::string commands[] = {
      "flat " + quote(sample("app.pl")),
      "analyze " + quote(sample("qsort.mcy")) + " --name '(D/I)Dependency'",
      "analyze " + quote(sample("qsort.mcy")) + " --name DGraph",
      "solve " + quote(sample("conc.mcy")) + " --goal 'conc xs ys =:= [1,2,3] where xs, ys free'",
      "trace " + quote(sample("last.mcy")) + " --goal 'last [1,2]' --steps 20",
  };
  for (const auto& c : commands) {
    Run a = flw(c);
    Run b = flw(c);
    CHECK(a.code == b.code);
    CHECK(!a.out.empty());
    CHECK(a.out == b.out);
  }
}
