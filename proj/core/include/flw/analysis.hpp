// Pluggable per-function program analyses with a demand-driven cache.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "flw/ir.hpp"

namespace flw {

/// Call graph rooted at one function.  Nodes: root first, then sorted;
/// edges sorted.
struct DepGraph {
  std::string root;
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;

  friend bool operator==(const DepGraph&, const DepGraph&) = default;
};

class AnalysisResult {
 public:
  static AnalysisResult message(std::string text) { return AnalysisResult(std::move(text)); }
  static AnalysisResult graph(DepGraph g) { return AnalysisResult(std::move(g)); }

  bool is_message() const { return std::holds_alternative<std::string>(value_); }
  bool is_graph() const { return std::holds_alternative<DepGraph>(value_); }
  const std::string& text() const { return std::get<std::string>(value_); }
  const DepGraph& dep_graph() const { return std::get<DepGraph>(value_); }

  friend bool operator==(const AnalysisResult&, const AnalysisResult&) = default;

 private:
  explicit AnalysisResult(std::variant<std::string, DepGraph> v) : value_(std::move(v)) {}
  std::variant<std::string, DepGraph> value_;
};

/// Analyses one function of a program.  `function` is a program function
/// or a builtin name.
using Analysis = std::function<AnalysisResult(const Program&, const std::string& function)>;

struct UnknownAnalysis : Error {
  explicit UnknownAnalysis(const std::string& name) : Error("unknown analysis `" + name + "`") {}
};

struct UnknownFunction : Error {
  explicit UnknownFunction(const std::string& name) : Error("unknown function `" + name + "`") {}
};

struct DuplicateAnalysis : Error {
  explicit DuplicateAnalysis(const std::string& name)
      : Error("analysis `" + name + "` is already registered") {}
};

class AnalysisRegistry {
 public:
  /// Appends an entry; throws DuplicateAnalysis.
  void add(std::string name, Analysis analysis);
  const Analysis* find(const std::string& name) const;
  std::vector<std::string> names() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<std::string, Analysis>> entries_;
};

/// Get Type, Overlapping Rules, Completeness, (D/I)Dependency, Called By,
/// Dead Code, DGraph.
AnalysisRegistry default_registry();

/// Memoizes results per (program version, analysis, function).  The first
/// request for a key computes it; concurrent requests for the same key
/// wait for that computation.
class AnalysisCache {
 public:
  AnalysisResult get(std::uint64_t version, const std::string& analysis, const std::string& function,
                     const std::function<AnalysisResult()>& compute);

  /// Drops every entry whose version differs from `version`.
  void retain_version(std::uint64_t version);
  /// Number of computations started so far.
  std::size_t computations() const;
  std::size_t size() const;

 private:
  struct Slot {
    std::once_flag once;
    std::optional<AnalysisResult> result;
  };
  using Key = std::tuple<std::uint64_t, std::string, std::string>;

  mutable std::mutex mu_;
  std::map<Key, std::shared_ptr<Slot>> slots_;
  std::size_t computations_ = 0;
};

/// Checks that both names are known, then answers from the cache.
AnalysisResult analyze(AnalysisCache& cache, const AnalysisRegistry& registry, const Program& program,
                       std::uint64_t version, const std::string& analysis, const std::string& function);
/// Same, with the version computed as content_hash(program).
AnalysisResult analyze(AnalysisCache& cache, const AnalysisRegistry& registry, const Program& program,
                       const std::string& analysis, const std::string& function);

/// Whole-module form: one result per program function, in program order.
std::vector<std::pair<std::string, AnalysisResult>> analyze_all(AnalysisCache& cache,
                                                               const AnalysisRegistry& registry,
                                                               const Program& program,
                                                               const std::string& analysis);

// Individual analyses -------------------------------------------------------

AnalysisResult get_type(const Program& p, const std::string& f);
AnalysisResult overlapping(const Program& p, const std::string& f);
AnalysisResult completeness(const Program& p, const std::string& f);
AnalysisResult direct_deps(const Program& p, const std::string& f);
AnalysisResult indirect_deps(const Program& p, const std::string& f);
/// "direct: ...; indirect: ..."
AnalysisResult dependencies(const Program& p, const std::string& f);
AnalysisResult called_by(const Program& p, const std::string& f);
AnalysisResult dead_code(const Program& p, const std::string& f);
AnalysisResult dep_graph(const Program& p, const std::string& f);

/// Sorted names of functions (including builtins) called in `f`'s rule;
/// constructors are excluded.
std::vector<std::string> direct_callees(const Program& p, const std::string& f);
/// Transitive closure of direct_callees; contains `f` only if `f` is
/// reachable from itself.
std::vector<std::string> indirect_callees(const Program& p, const std::string& f);

/// Comma-separated list, as used in analysis messages.
std::string join_names(const std::vector<std::string>& names);

enum class GraphFormat { Dot, Json };
std::string export_graph(const DepGraph& g, GraphFormat format);

}  // namespace flw
