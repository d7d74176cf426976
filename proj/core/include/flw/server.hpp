// Session service over HTTP/1.1 with JSON bodies.
//
//   POST /session                          -> {"session": id}
//   POST /session/{id}/load                {source, lang} -> program summary
//   GET  /session/{id}/analyses            -> registry names in order
//   GET  /session/{id}/analyze?name=&function=[&format=dot|json]
//   GET  /session/{id}/cache               -> cache statistics
//   POST /session/{id}/trace               {goal} -> {"trace": tid, "step": ...}
//   GET  /trace/{tid}                      -> current rendered step
//   POST /trace/{tid}/forward              {alt}
//   POST /trace/{tid}/backward
//   POST /trace/{tid}/runto                {policy: breakpoint|terminal|steps:N}
//   POST /trace/{tid}/breakpoint           {fn, on}
//   GET  /trace/{tid}/export               -> trace wire format
//
// Errors are {"error": text} with status 404 (unknown session or trace),
// 400 (bad request, parse, validation, or type errors), or 409 (stepping a
// terminal node, stepping back at the root, analyzing before loading).
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

namespace flw {

struct ServiceOptions {
  /// Upper bound on steps taken by one run-to request.
  std::uint64_t max_run_steps = 100000;
};

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Transport-independent request handling; safe for concurrent use.
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Response handle(const Request& request);

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// HTTP binding of a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds `host:port` (port 0 picks a free port) and returns the bound
  /// port, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace flw
