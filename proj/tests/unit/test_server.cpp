#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "flw/server.hpp"
#include "httplib.h"
#include "json.hpp"
#include "support/corpus.hpp"
#include "support/terms.hpp"

using namespace flw;
using Json = nlohmann::json;

namespace {

std::string read_sample(const std::string& name) {
  std::ifstream in(std::string(FLW_SAMPLES_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Client {
  Service service;

  Response call(const std::string& method, const std::string& path, const Json& body = nullptr,
                std::map<std::string, std::string> query = {}) {
    Request r{method, path, std::move(query), body.is_null() ? std::string() : body.dump()};
    return service.handle(r);
  }

  Json ok(const std::string& method, const std::string& path, const Json& body = nullptr,
          std::map<std::string, std::string> query = {}) {
    Response r = call(method, path, body, std::move(query));
    INFO(method << " " << path << " -> " << r.body);
    REQUIRE(r.status == 200);
    return Json::parse(r.body);
  }

  std::string session() { return ok("POST", "/session")["session"]; }

  std::string loaded(const std::string& source, const std::string& lang = "mcy") {
    std::string id = session();
    ok("POST", "/session/" + id + "/load", {{"source", source}, {"lang", lang}});
    return id;
  }
};

}  // namespace

TEST_CASE("loading a program returns its summary") {
  Client c;
  std::string id = c.session();
  CHECK(c.service.session_count() == 1);
  Json j = c.ok("POST", "/session/" + id + "/load", {{"source", read_sample("conc.mcy")}, {"lang", "mcy"}});
  CHECK(j["functions"] == Json::array({"conc", "last"}));
  CHECK(j["lang"] == "mcy");
  CHECK(j["module"] == "main");
  CHECK(j["version"].get<std::string>().size() == 16);
  Json p = c.ok("POST", "/session/" + id + "/load", {{"source", read_sample("app.pl")}, {"lang", "prolog"}});
  CHECK(p["functions"] == Json::array({"app"}));
}

TEST_CASE("the analysis registry is listed in order") {
  Client c;
  std::string id = c.session();
  Json j = c.ok("GET", "/session/" + id + "/analyses");
  CHECK(j["analyses"] == Json::array({"Get Type", "Overlapping Rules", "Completeness", "(D/I)Dependency",
                                      "Called By", "Dead Code", "DGraph"}));
}

TEST_CASE("analyses return messages and graphs") {
  Client c;
  std::string id = c.loaded(read_sample("conc.mcy"));
  Json o = c.ok("GET", "/session/" + id + "/analyze", nullptr, {{"name", "Overlapping Rules"}, {"function", "conc"}});
  CHECK(o["message"] == "not overlapping");
  CHECK(o["function"] == "conc");
  CHECK(o["analysis"] == "Overlapping Rules");
  Json t = c.ok("GET", "/session/" + id + "/analyze", nullptr, {{"name", "Get Type"}, {"function", "conc"}});
  CHECK(t["message"] == "[a] -> [a] -> [a]");
  Json g = c.ok("GET", "/session/" + id + "/analyze", nullptr,
                {{"name", "DGraph"}, {"function", "last"}, {"format", "dot"}});
  CHECK(g["graph"]["root"] == "last");
  CHECK(g["dot"].get<std::string>().rfind("digraph \"last\" {", 0) == 0);
  Json all = c.ok("GET", "/session/" + id + "/analyze", nullptr, {{"name", "Completeness"}});
  REQUIRE(all["results"].size() == 2);
  CHECK(all["results"][0]["function"] == "conc");
  CHECK(all["results"][0]["message"] == "complete");
}

TEST_CASE("errors map to status codes") {
  Client c;
  CHECK(c.call("POST", "/session/nope/load", {{"source", ""}}).status == 404);
  CHECK(c.call("GET", "/trace/nope").status == 404);
  CHECK(c.call("GET", "/elsewhere").status == 404);
  std::string id = c.session();
  CHECK(c.call("GET", "/session/" + id + "/analyze", nullptr, {{"name", "Completeness"}, {"function", "conc"}})
            .status == 409);
  CHECK(c.call("POST", "/session/" + id + "/trace", {{"goal", "conc [] []"}}).status == 409);
  CHECK(c.call("POST", "/session/" + id + "/load", {{"lang", "mcy"}}).status == 400);
  CHECK(c.call("POST", "/session/" + id + "/load", {{"source", "f = "}}).status == 400);
  CHECK(c.call("POST", "/session/" + id + "/load", {{"source", "f = 1"}, {"lang", "cobol"}}).status == 400);
  Request bad{"POST", "/session/" + id + "/load", {}, "{not json"};
  CHECK(c.service.handle(bad).status == 400);

  const char* bad_ir = R"({"module":"m","imports":[],"types":[],"functions":[
    {"name":"f","arity":1,"rule":{"params":["x"],"vars":["x"],"body":["call","fn","g",[["var","x"]]]}}
  ],"operators":[],"nametable":[]})";
  Response v = c.call("POST", "/session/" + id + "/load", {{"source", bad_ir}, {"lang", "flat"}});
  CHECK(v.status == 400);
  Json vj = Json::parse(v.body);
  REQUIRE(vj.contains("violations"));
  CHECK(vj["violations"][0]["rule"] == "unknown-function");
  CHECK(vj["violations"][0]["decl"] == "f");

  c.ok("POST", "/session/" + id + "/load", {{"source", read_sample("conc.mcy")}});
  CHECK(c.call("GET", "/session/" + id + "/analyze", nullptr, {{"name", "Nope"}, {"function", "conc"}}).status ==
        404);
  CHECK(c.call("GET", "/session/" + id + "/analyze", nullptr, {{"name", "Completeness"}, {"function", "nope"}})
            .status == 404);
  CHECK(c.call("GET", "/session/" + id + "/analyze", nullptr, {}).status == 400);
  CHECK(c.call("POST", "/session/" + id + "/trace", {{"goal", "conc ["}}).status == 400);
}

TEST_CASE("trace endpoints step through a goal") {
  Client c;
  std::string id = c.loaded(read_sample("conc.mcy"));
  Json start = c.ok("POST", "/session/" + id + "/trace", {{"goal", "conc [1] [2]"}});
  std::string tid = start["trace"];
  CHECK(start["step"]["node"] == 0);
  CHECK(start["step"]["terminal"] == "running");
  std::string base = "/trace/" + tid;
  CHECK(c.call("POST", base + "/backward").status == 409);
  CHECK(c.call("POST", base + "/forward", {{"alt", 5}}).status == 400);
  CHECK(c.call("POST", base + "/forward", {{"alt", -1}}).status == 400);
  Json f = c.ok("POST", base + "/forward", {{"alt", 0}});
  CHECK(f["node"] == 1);
  Json b = c.ok("POST", base + "/backward");
  CHECK(b == start["step"]);
  CHECK(c.ok("GET", base) == start["step"]);
  Json bp = c.ok("POST", base + "/breakpoint", {{"fn", "conc"}, {"on", true}});
  CHECK(bp["breakpoints"] == Json::array({"conc"}));
  CHECK(c.call("POST", base + "/runto", {{"policy", "whenever"}}).status == 400);
  Json end = c.ok("POST", base + "/runto", {{"policy", "terminal"}});
  CHECK(end["terminal"] == "success");
  CHECK(end["answer"] == "[1,2]");
  CHECK(c.call("POST", base + "/forward", {{"alt", 0}}).status == 409);
  Json ex = c.ok("GET", base + "/export");
  CHECK(ex["root"] == 0);
  CHECK(ex["cursor"] == end["node"]);
  CHECK(ex["nodes"].is_array());
  CHECK(c.call("POST", base + "/nope").status == 404);
}

TEST_CASE("reloading invalidates cached analyses only when the program changes") {
  Client c;
  std::string src = read_sample("conc.mcy");
  std::string id = c.loaded(src);
  std::map<std::string, std::string> q{{"name", "Completeness"}, {"function", "conc"}};
  c.ok("GET", "/session/" + id + "/analyze", nullptr, q);
  c.ok("GET", "/session/" + id + "/analyze", nullptr, q);
  Json s1 = c.ok("GET", "/session/" + id + "/cache");
  CHECK(s1["computations"] == 1);
  CHECK(s1["entries"] == 1);

  c.ok("POST", "/session/" + id + "/load", {{"source", src}});
  c.ok("GET", "/session/" + id + "/analyze", nullptr, q);
  Json s2 = c.ok("GET", "/session/" + id + "/cache");
  CHECK(s2["computations"] == 1);
  CHECK(s2["entries"] == 1);

  c.ok("POST", "/session/" + id + "/load", {{"source", src + "\nextra = 1\n"}});
  CHECK(c.ok("GET", "/session/" + id + "/cache")["entries"] == 0);
  c.ok("GET", "/session/" + id + "/analyze", nullptr, q);
  CHECK(c.ok("GET", "/session/" + id + "/cache")["computations"] == 2);
}

TEST_CASE("concurrent commands on one trace are serialized") {
  Client c;
  std::string id = c.loaded(read_sample("conc.mcy"));
  std::vector<std::int64_t> xs(40, 7);
  std::string goal = "conc " + testing::list_text(xs) + " []";
  std::string tid = c.ok("POST", "/session/" + id + "/trace", {{"goal", goal}})["trace"];
  std::vector<std::thread> threads;
  std::atomic<int> errors{0};
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&] {
      for (int k = 0; k < 5; ++k) {
        Response r = c.call("POST", "/trace/" + tid + "/forward", {{"alt", 0}});
        if (r.status != 200) ++errors;
      }
    });
  for (auto& t : threads) t.join();
  CHECK(errors == 0);
  Json ex = c.ok("GET", "/trace/" + tid + "/export");
  CHECK(ex["cursor"] == 40);
  CHECK(ex["nodes"].size() == 41);
}

TEST_CASE("the HTTP binding serves on loopback") {
  Service service;
  HttpServer server(service);
  int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread loop([&] { server.listen(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/session", "", "application/json");
  REQUIRE(created);
  CHECK(created->status == 200);
  std::string id = Json::parse(created->body)["session"];
  Json load{{"source", read_sample("leq.mcy")}, {"lang", "mcy"}};
  auto loaded = client.Post("/session/" + id + "/load", load.dump(), "application/json");
  REQUIRE(loaded);
  CHECK(loaded->status == 200);
  auto analyzed = client.Get("/session/" + id + "/analyze?name=Completeness&function=%E2%89%A4");
  REQUIRE(analyzed);
  CHECK(analyzed->status == 200);
  CHECK(Json::parse(analyzed->body)["message"] == "complete");
  auto missing = client.Get("/trace/none");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(Json::parse(missing->body).contains("error"));
  server.stop();
  loop.join();
}
