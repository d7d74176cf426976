#include "flw/ir_json.hpp"

#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "flw/validate.hpp"

namespace flw {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Parsing

[[noreturn]] void schema(const std::string& what, const std::string& field) {
  throw SchemaError(what, field);
}

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) schema(where + " must be an object", where);
  for (const char* k : required)
    if (!obj.contains(k)) schema(where + ": missing field `" + k + "`", k);
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* r : required) known = known || k == r;
    for (const char* o : optional) known = known || k == o;
    if (!known) schema(where + ": unexpected field `" + k + "`", k);
  }
}

const std::string& str(const json& j, const std::string& field) {
  if (!j.is_string()) schema("`" + field + "` must be a string", field);
  return j.get_ref<const std::string&>();
}

std::int64_t integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) schema("`" + field + "` must be an integer", field);
  return j.get<std::int64_t>();
}

const json& arr(const json& j, const std::string& field) {
  if (!j.is_array()) schema("`" + field + "` must be an array", field);
  return j;
}

TypeExpr parse_type(const json& j) {
  arr(j, "type");
  if (j.empty()) schema("empty type expression", "type");
  const std::string& tag = str(j[0], "type tag");
  if (tag == "tvar" && j.size() == 2) return TypeExpr::var(str(j[1], "tvar"));
  if (tag == "tcons" && j.size() == 3) {
    std::vector<TypeExpr> args;
    for (const auto& a : arr(j[2], "tcons args")) args.push_back(parse_type(a));
    return TypeExpr::cons(str(j[1], "tcons"), std::move(args));
  }
  if (tag == "func" && j.size() == 3) return TypeExpr::func(parse_type(j[1]), parse_type(j[2]));
  schema("malformed type expression with tag `" + tag + "`", "type");
}

class RuleReader {
 public:
  explicit RuleReader(const json* declared) {
    if (declared) {
      for (const auto& n : arr(*declared, "vars")) {
        const std::string& s = str(n, "vars");
        if (!ids_.emplace(s, static_cast<VarId>(names_.size())).second)
          schema("variable `" + s + "` listed twice in `vars`", "vars");
        names_.push_back(s);
      }
    }
  }

  VarId id(const std::string& name) {
    auto [it, fresh] = ids_.emplace(name, static_cast<VarId>(names_.size()));
    if (fresh) names_.push_back(name);
    return it->second;
  }

  ExprPtr expr(const json& j) {
    arr(j, "expr");
    if (j.empty()) schema("empty expression", "expr");
    const std::string& tag = str(j[0], "expr tag");
    if (tag == "var" && j.size() == 2) return build::var(id(str(j[1], "var")));
    if (tag == "lit" && j.size() == 2) return build::lit(integer(j[1], "lit"));
    if (tag == "call") {
      if (j.size() < 2) schema("malformed call", "call");
      const std::string& kind = str(j[1], "call kind");
      if ((kind == "fn" || kind == "cons") && j.size() == 4) {
        auto args = list(j[3]);
        return kind == "fn" ? build::call(str(j[2], "call name"), std::move(args))
                            : build::cons(str(j[2], "call name"), std::move(args));
      }
      if (kind == "part" && j.size() == 5)
        return build::part(str(j[2], "call name"), static_cast<int>(integer(j[3], "missing")),
                           list(j[4]));
      schema("malformed call of kind `" + kind + "`", "call");
    }
    if ((tag == "case" || tag == "fcase") && j.size() == 3) {
      ExprPtr scrut = expr(j[1]);
      std::vector<Branch> branches;
      for (const auto& b : arr(j[2], "branches")) {
        if (!b.is_array() || b.size() != 2) schema("branch must be [pattern, expr]", "branches");
        Pattern p = pattern(b[0]);
        branches.push_back({std::move(p), expr(b[1])});
      }
      return build::case_of(tag == "fcase" ? CaseKind::Flex : CaseKind::Rigid, std::move(scrut),
                            std::move(branches));
    }
    if (tag == "or" && j.size() == 3) {
      auto l = expr(j[1]);
      return build::or_(std::move(l), expr(j[2]));
    }
    if (tag == "free" && j.size() == 3) {
      std::vector<VarId> vs;
      for (const auto& n : arr(j[1], "free vars")) vs.push_back(id(str(n, "free vars")));
      return build::free(std::move(vs), expr(j[2]));
    }
    if (tag == "apply" && j.size() == 3) {
      auto f = expr(j[1]);
      return build::apply(std::move(f), expr(j[2]));
    }
    schema("malformed expression with tag `" + tag + "`", "expr");
  }

  std::vector<std::string> take_names() { return std::move(names_); }

 private:
  std::vector<ExprPtr> list(const json& j) {
    std::vector<ExprPtr> out;
    for (const auto& a : arr(j, "args")) out.push_back(expr(a));
    return out;
  }

  Pattern pattern(const json& j) {
    arr(j, "pattern");
    if (j.size() == 3 && j[0] == "pat") {
      std::vector<VarId> vs;
      for (const auto& n : arr(j[2], "pattern vars")) vs.push_back(id(str(n, "pattern vars")));
      return Pattern::cons(str(j[1], "pattern constructor"), std::move(vs));
    }
    if (j.size() == 2 && j[0] == "lpat") return Pattern::lit(integer(j[1], "lpat"));
    schema("malformed pattern", "pattern");
  }

  std::map<std::string, VarId> ids_;
  std::vector<std::string> names_;
};

FuncDecl parse_function(const json& j) {
  require_keys(j, "function", {"name", "arity", "rule"}, {"type"});
  FuncDecl f;
  f.name = str(j["name"], "name");
  f.arity = static_cast<int>(integer(j["arity"], "arity"));
  if (j.contains("type") && !j["type"].is_null()) f.signature = parse_type(j["type"]);
  const json& r = j["rule"];
  if (r.is_object() && r.contains("external")) {
    require_keys(r, "rule", {"external"});
    f.rule = External{str(r["external"], "external")};
    return f;
  }
  require_keys(r, "rule", {"params", "body"}, {"vars"});
  RuleReader reader(r.contains("vars") ? &r["vars"] : nullptr);
  Rule rule;
  for (const auto& p : arr(r["params"], "params")) rule.params.push_back(reader.id(str(p, "params")));
  rule.body = reader.expr(r["body"]);
  rule.var_names = reader.take_names();
  f.rule = std::move(rule);
  return f;
}

TypeDecl parse_typedecl(const json& j) {
  require_keys(j, "type declaration", {"name", "params", "constructors"});
  TypeDecl t;
  t.name = str(j["name"], "name");
  for (const auto& p : arr(j["params"], "params")) t.type_params.push_back(str(p, "params"));
  for (const auto& c : arr(j["constructors"], "constructors")) {
    require_keys(c, "constructor", {"name", "arity", "args"});
    ConsDecl cd;
    cd.name = str(c["name"], "name");
    cd.arity = static_cast<int>(integer(c["arity"], "arity"));
    for (const auto& a : arr(c["args"], "args")) cd.args.push_back(parse_type(a));
    t.constructors.push_back(std::move(cd));
  }
  return t;
}

Fixity parse_fixity(const std::string& s) {
  if (s == "infixl") return Fixity::InfixL;
  if (s == "infixr") return Fixity::InfixR;
  if (s == "infix") return Fixity::Infix;
  schema("unknown fixity `" + s + "`", "fixity");
}

std::pair<int, int> line_col(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// ---------------------------------------------------------------------------
// Serialization

ojson type_json(const TypeExpr& t) {
  switch (t.kind) {
    case TypeExpr::Kind::Var:
      return ojson::array({"tvar", t.name});
    case TypeExpr::Kind::Cons: {
      ojson args = ojson::array();
      for (const auto& a : t.args) args.push_back(type_json(a));
      return ojson::array({"tcons", t.name, args});
    }
    case TypeExpr::Kind::Func:
      return ojson::array({"func", type_json(t.domain()), type_json(t.range())});
  }
  return {};
}

class RuleWriter {
 public:
  explicit RuleWriter(const Rule& r) : r_(r) {}

  ojson expr(const Expr& e) const {
    return std::visit([&](const auto& n) { return node(n); }, e.node);
  }

 private:
  std::string name(VarId id) const { return r_.var_name(id); }

  ojson node(const Var& v) const { return ojson::array({"var", name(v.id)}); }
  ojson node(const Lit& l) const { return ojson::array({"lit", l.value}); }
  ojson node(const Comb& c) const {
    ojson args = ojson::array();
    for (const auto& a : c.args) args.push_back(expr(*a));
    switch (c.kind) {
      case CombKind::Fun:
        return ojson::array({"call", "fn", c.name, args});
      case CombKind::Cons:
        return ojson::array({"call", "cons", c.name, args});
      case CombKind::Part:
        return ojson::array({"call", "part", c.name, c.missing, args});
    }
    return {};
  }
  ojson node(const Case& c) const {
    ojson branches = ojson::array();
    for (const auto& b : c.branches) {
      ojson pat;
      if (b.pattern.is_literal()) {
        pat = ojson::array({"lpat", *b.pattern.literal});
      } else {
        ojson vs = ojson::array();
        for (VarId v : b.pattern.vars) vs.push_back(name(v));
        pat = ojson::array({"pat", b.pattern.constructor, vs});
      }
      branches.push_back(ojson::array({pat, expr(*b.body)}));
    }
    return ojson::array({c.kind == CaseKind::Flex ? "fcase" : "case", expr(*c.scrutinee), branches});
  }
  ojson node(const Or& o) const { return ojson::array({"or", expr(*o.left), expr(*o.right)}); }
  ojson node(const Free& f) const {
    ojson vs = ojson::array();
    for (VarId v : f.vars) vs.push_back(name(v));
    return ojson::array({"free", vs, expr(*f.body)});
  }
  ojson node(const Apply& a) const { return ojson::array({"apply", expr(*a.fn), expr(*a.arg)}); }

  const Rule& r_;
};

ojson function_json(const FuncDecl& f) {
  ojson j;
  j["name"] = f.name;
  j["arity"] = f.arity;
  j["type"] = f.signature ? type_json(*f.signature) : ojson(nullptr);
  if (const Rule* r = f.as_rule()) {
    ojson rule;
    ojson params = ojson::array();
    for (VarId p : r->params) params.push_back(r->var_name(p));
    ojson vars = ojson::array();
    for (std::size_t i = 0; i < r->var_names.size(); ++i) vars.push_back(r->var_name(static_cast<VarId>(i)));
    rule["params"] = params;
    rule["vars"] = vars;
    rule["body"] = r->body ? RuleWriter(*r).expr(*r->body) : ojson(nullptr);
    j["rule"] = rule;
  } else {
    j["rule"] = ojson{{"external", std::get<External>(f.rule).tag}};
  }
  return j;
}

const char* fixity_name(Fixity f) {
  switch (f) {
    case Fixity::InfixL: return "infixl";
    case Fixity::InfixR: return "infixr";
    case Fixity::Infix: return "infix";
  }
  return "infix";
}

void write_list(std::ostream& os, const char* key, const std::vector<ojson>& items, bool last) {
  os << "  \"" << key << "\": [";
  for (std::size_t i = 0; i < items.size(); ++i) {
    os << (i ? ",\n    " : "\n    ") << items[i].dump();
  }
  if (!items.empty()) os << "\n  ";
  os << ']' << (last ? "\n" : ",\n");
}

}  // namespace

Program parse_ir(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    throw ParseError("JSON syntax error: " + msg.substr(msg.find(']') + 2), line, col);
  }
  require_keys(doc, "program", {"module", "imports", "types", "functions", "operators", "nametable"});
  Program p;
  p.name = str(doc["module"], "module");
  for (const auto& i : arr(doc["imports"], "imports")) p.imports.push_back(str(i, "imports"));
  for (const auto& t : arr(doc["types"], "types")) p.types.push_back(parse_typedecl(t));
  for (const auto& f : arr(doc["functions"], "functions")) p.functions.push_back(parse_function(f));
  for (const auto& o : arr(doc["operators"], "operators")) {
    require_keys(o, "operator", {"name", "fixity", "prec"});
    p.operators.push_back({str(o["name"], "name"), parse_fixity(str(o["fixity"], "fixity")),
                           static_cast<int>(integer(o["prec"], "prec"))});
  }
  for (const auto& e : arr(doc["nametable"], "nametable")) {
    if (!e.is_array() || e.size() != 2) schema("nametable entries must be [external, internal]", "nametable");
    p.name_table.emplace_back(str(e[0], "nametable"), str(e[1], "nametable"));
  }
  return p;
}

std::string serialize_ir_unchecked(const Program& p) {
  std::vector<ojson> types, functions, operators, names;
  for (const auto& t : p.types) {
    ojson cs = ojson::array();
    for (const auto& c : t.constructors) {
      ojson args = ojson::array();
      for (const auto& a : c.args) args.push_back(type_json(a));
      ojson cj;
      cj["name"] = c.name;
      cj["arity"] = c.arity;
      cj["args"] = args;
      cs.push_back(cj);
    }
    ojson tj;
    tj["name"] = t.name;
    tj["params"] = t.type_params;
    tj["constructors"] = cs;
    types.push_back(tj);
  }
  for (const auto& f : p.functions) functions.push_back(function_json(f));
  for (const auto& o : p.operators) {
    ojson oj;
    oj["name"] = o.name;
    oj["fixity"] = fixity_name(o.fixity);
    oj["prec"] = o.precedence;
    operators.push_back(oj);
  }
  for (const auto& [ext, in] : p.name_table) names.push_back(ojson::array({ext, in}));

  std::ostringstream os;
  os << "{\n  \"module\": " << ojson(p.name).dump() << ",\n";
  os << "  \"imports\": " << ojson(p.imports).dump() << ",\n";
  write_list(os, "types", types, false);
  write_list(os, "functions", functions, false);
  write_list(os, "operators", operators, false);
  write_list(os, "nametable", names, true);
  os << "}\n";
  return os.str();
}

std::string serialize_ir(const Program& p) {
  auto violations = validate(p);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return serialize_ir_unchecked(p);
}

std::uint64_t content_hash(const Program& p) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : serialize_ir_unchecked(p)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace flw
