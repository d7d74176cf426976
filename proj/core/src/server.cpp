#include "flw/server.hpp"

#include <cstdio>
#include <mutex>
#include <random>
#include <sstream>

#include "flw/analysis.hpp"
#include "flw/frontend.hpp"
#include "flw/ir_json.hpp"
#include "flw/trace.hpp"
#include "flw/validate.hpp"
#include "httplib.h"
#include "json.hpp"

namespace flw {

using Json = nlohmann::ordered_json;

namespace {

struct HttpError {
  int status;
  std::string message;
};

[[noreturn]] void fail(int status, std::string message) { throw HttpError{status, std::move(message)}; }

Json parse_body(const std::string& body) {
  if (body.empty()) return Json::object();
  try {
    Json j = Json::parse(body);
    if (!j.is_object()) fail(400, "request body must be a JSON object");
    return j;
  } catch (const Json::parse_error& e) {
    fail(400, std::string("malformed JSON body: ") + e.what());
  }
}

template <class T>
T field(const Json& j, const char* name) {
  if (!j.contains(name)) fail(400, std::string("missing field `") + name + "`");
  try {
    return j.at(name).get<T>();
  } catch (const Json::exception&) {
    fail(400, std::string("field `") + name + "` has the wrong type");
  }
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

Json graph_json(const DepGraph& g) { return Json::parse(export_graph(g, GraphFormat::Json)); }

Json result_json(const std::string& function, const AnalysisResult& r, const std::string& format) {
  Json j;
  j["function"] = function;
  if (r.is_message()) {
    j["message"] = r.text();
  } else {
    j["graph"] = graph_json(r.dep_graph());
    if (format == "dot") j["dot"] = export_graph(r.dep_graph(), GraphFormat::Dot);
  }
  return j;
}

struct TraceEntry {
  std::mutex mu;
  std::unique_ptr<TraceSession> trace;
};

struct Session {
  std::mutex mu;
  std::shared_ptr<const Program> program;
  std::string source;
  Lang lang = Lang::Mcy;
  std::uint64_t version = 0;
  AnalysisCache cache;
};

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  AnalysisRegistry registry = default_registry();
  mutable std::mutex mu;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  std::map<std::string, std::shared_ptr<TraceEntry>> traces;
  std::mt19937_64 rng{std::random_device{}()};

  std::string new_id(const char* prefix) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%016llx", prefix, static_cast<unsigned long long>(rng()));
    return buf;
  }

  std::shared_ptr<Session> session(const std::string& id) {
    std::lock_guard lock(mu);
    auto it = sessions.find(id);
    if (it == sessions.end()) fail(404, "unknown session `" + id + "`");
    return it->second;
  }

  std::shared_ptr<TraceEntry> trace(const std::string& id) {
    std::lock_guard lock(mu);
    auto it = traces.find(id);
    if (it == traces.end()) fail(404, "unknown trace `" + id + "`");
    return it->second;
  }

  Json create_session() {
    std::lock_guard lock(mu);
    std::string id = new_id("s");
    sessions.emplace(id, std::make_shared<Session>());
    return Json{{"session", id}};
  }

  Json load(Session& s, const Json& body) {
    std::string source = field<std::string>(body, "source");
    std::string lang_name = body.contains("lang") ? field<std::string>(body, "lang") : "mcy";
    auto lang = parse_lang(lang_name);
    if (!lang) fail(400, "unknown language `" + lang_name + "`");
    std::string module = body.contains("module") ? field<std::string>(body, "module") : "main";
    Program p;
    try {
      p = load_program(source, *lang, module);
    } catch (const ValidationError& e) {
      Json j{{"error", e.what()}};
      Json vs = Json::array();
      for (const auto& v : e.violations) vs.push_back({{"decl", v.decl}, {"rule", v.rule}, {"message", v.message}});
      j["violations"] = std::move(vs);
      throw HttpError{400, j.dump()};
    } catch (const Error& e) {
      fail(400, e.what());
    }
    std::lock_guard lock(s.mu);
    s.program = std::make_shared<const Program>(std::move(p));
    s.source = std::move(source);
    s.lang = *lang;
    s.version = content_hash(*s.program);
    s.cache.retain_version(s.version);
    Json functions = Json::array();
    for (const auto& f : s.program->functions) functions.push_back(f.name);
    char version[24];
    std::snprintf(version, sizeof version, "%016llx", static_cast<unsigned long long>(s.version));
    return Json{{"module", s.program->name},
                {"lang", std::string(to_string(*lang))},
                {"functions", std::move(functions)},
                {"version", version}};
  }

  std::shared_ptr<const Program> loaded(Session& s, std::uint64_t* version = nullptr) {
    std::lock_guard lock(s.mu);
    if (!s.program) fail(409, "no program loaded in this session");
    if (version) *version = s.version;
    return s.program;
  }

  Json analyze(Session& s, const std::map<std::string, std::string>& query) {
    std::uint64_t version = 0;
    auto program = loaded(s, &version);
    auto q = [&](const char* k) -> std::string {
      auto it = query.find(k);
      return it == query.end() ? std::string() : it->second;
    };
    std::string name = q("name");
    if (name.empty()) fail(400, "missing query parameter `name`");
    std::string format = q("format").empty() ? "json" : q("format");
    if (format != "json" && format != "dot") fail(400, "unknown graph format `" + format + "`");
    try {
      std::string function = q("function");
      if (function.empty()) {
        Json results = Json::array();
        for (const auto& f : program->functions)
          results.push_back(result_json(f.name, flw::analyze(s.cache, registry, *program, version, name, f.name), format));
        return Json{{"analysis", name}, {"results", std::move(results)}};
      }
      Json j = result_json(function, flw::analyze(s.cache, registry, *program, version, name, function), format);
      j["analysis"] = name;
      return j;
    } catch (const UnknownAnalysis& e) {
      fail(404, e.what());
    } catch (const UnknownFunction& e) {
      fail(404, e.what());
    }
  }

  Json start_trace(Session& s, const Json& body) {
    auto program = loaded(s);
    std::string goal = field<std::string>(body, "goal");
    auto entry = std::make_shared<TraceEntry>();
    try {
      entry->trace = std::make_unique<TraceSession>(program, goal);
    } catch (const Error& e) {
      fail(400, e.what());
    }
    Json step = Json::parse(to_json(entry->trace->render()));
    std::string id;
    {
      std::lock_guard lock(mu);
      id = new_id("t");
      traces.emplace(id, entry);
    }
    return Json{{"trace", id}, {"step", std::move(step)}};
  }

  Json trace_command(TraceEntry& t, const std::string& command, const Json& body, const std::string& method) {
    std::lock_guard lock(t.mu);
    TraceSession& tr = *t.trace;
    try {
      if (command.empty()) return Json::parse(to_json(tr.render()));
      if (command == "export") {
        if (method != "GET") fail(405, "use GET");
        return Json::parse(tr.export_json());
      }
      if (method != "POST") fail(405, "use POST");
      if (command == "forward") {
        long long alt = body.contains("alt") ? field<long long>(body, "alt") : 0;
        if (alt < 0) fail(400, "alternative must be non-negative");
        return Json::parse(to_json(tr.forward(static_cast<std::size_t>(alt))));
      }
      if (command == "backward") return Json::parse(to_json(tr.backward()));
      if (command == "runto") {
        std::string text = body.contains("policy") ? field<std::string>(body, "policy") : "breakpoint";
        auto policy = parse_run_policy(text);
        if (!policy) fail(400, "unknown run policy `" + text + "`");
        return Json::parse(to_json(tr.run_to(*policy, options.max_run_steps)));
      }
      if (command == "breakpoint") {
        std::string fn = field<std::string>(body, "fn");
        bool on = body.contains("on") ? field<bool>(body, "on") : true;
        if (on)
          tr.set_breakpoint(fn);
        else
          tr.clear_breakpoint(fn);
        Json j = Json::parse(to_json(tr.render()));
        j["breakpoints"] = tr.breakpoints();
        return j;
      }
    } catch (const TraceError& e) {
      fail(e.code == TraceError::Code::OutOfRange ? 400 : 409, e.what());
    }
    fail(404, "unknown trace command `" + command + "`");
  }

  Json route(const Request& r) {
    auto parts = split_path(r.path);
    Json body = r.method == "POST" ? parse_body(r.body) : Json::object();
    if (parts.size() == 1 && parts[0] == "session") {
      if (r.method != "POST") fail(405, "use POST");
      return create_session();
    }
    if (parts.size() == 3 && parts[0] == "session") {
      auto s = session(parts[1]);
      const std::string& cmd = parts[2];
      if (cmd == "load" && r.method == "POST") return load(*s, body);
      if (cmd == "analyses" && r.method == "GET") return Json{{"analyses", registry.names()}};
      if (cmd == "analyze" && r.method == "GET") return analyze(*s, r.query);
      if (cmd == "trace" && r.method == "POST") return start_trace(*s, body);
      if (cmd == "cache" && r.method == "GET")
        return Json{{"computations", s->cache.computations()}, {"entries", s->cache.size()}};
      fail(404, "unknown endpoint " + r.method + " " + r.path);
    }
    if ((parts.size() == 2 || parts.size() == 3) && parts[0] == "trace") {
      auto t = trace(parts[1]);
      return trace_command(*t, parts.size() == 3 ? parts[2] : std::string(), body, r.method);
    }
    fail(404, "unknown endpoint " + r.method + " " + r.path);
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>()) { impl_->options = options; }

Service::~Service() = default;

Response Service::handle(const Request& request) {
  Response out;
  try {
    out.body = impl_->route(request).dump();
  } catch (const HttpError& e) {
    out.status = e.status;
    // Load failures with violations arrive preformatted.
    if (!e.message.empty() && e.message.front() == '{')
      out.body = e.message;
    else
      out.body = Json{{"error", e.message}}.dump();
  } catch (const std::exception& e) {
    out.status = 500;
    out.body = Json{{"error", e.what()}}.dump();
  }
  return out;
}

std::size_t Service::session_count() const {
  std::lock_guard lock(impl_->mu);
  return impl_->sessions.size();
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      Request r;
      r.method = req.method;
      r.path = req.path;
      for (const auto& [k, v] : req.params) r.query[k] = v;
      r.body = req.body;
      Response out = service.handle(r);
      res.status = out.status;
      res.set_content(out.body, out.content_type);
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace flw
