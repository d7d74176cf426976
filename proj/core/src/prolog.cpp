#include "flw/prolog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "flw/builtins.hpp"
#include "flw/pattern_compiler.hpp"

namespace flw {

PTerm PTerm::var(std::string name, SourceLoc loc) {
  PTerm t;
  t.kind = Kind::Var;
  t.name = std::move(name);
  t.loc = loc;
  return t;
}

PTerm PTerm::atom(std::string name, SourceLoc loc) {
  PTerm t;
  t.name = std::move(name);
  t.loc = loc;
  return t;
}

PTerm PTerm::integer(std::int64_t v, SourceLoc loc) {
  PTerm t;
  t.kind = Kind::Int;
  t.value = v;
  t.loc = loc;
  return t;
}

PTerm PTerm::compound(std::string name, std::vector<PTerm> args, SourceLoc loc) {
  PTerm t;
  t.kind = Kind::Compound;
  t.name = std::move(name);
  t.args = std::move(args);
  t.loc = loc;
  return t;
}

std::string to_string(const PTerm& t) {
  switch (t.kind) {
    case PTerm::Kind::Var:
    case PTerm::Kind::Atom:
      return t.name;
    case PTerm::Kind::Int:
      return std::to_string(t.value);
    case PTerm::Kind::Compound: {
      if (t.name == "." && t.args.size() == 2) {
        std::string s = "[" + to_string(t.args[0]);
        const PTerm* rest = &t.args[1];
        while (rest->kind == PTerm::Kind::Compound && rest->name == "." && rest->args.size() == 2) {
          s += "," + to_string(rest->args[0]);
          rest = &rest->args[1];
        }
        if (!(rest->kind == PTerm::Kind::Atom && rest->name == "[]")) s += "|" + to_string(*rest);
        return s + "]";
      }
      std::string s = t.name + "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) s += (i ? "," : "") + to_string(t.args[i]);
      return s + ")";
    }
  }
  return {};
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class PTok { Var, Atom, Int, Punct, End, Eof };

struct Tok {
  PTok kind = PTok::Eof;
  std::string text;
  std::int64_t value = 0;
  bool functional = false;  // atom immediately followed by `(`
  int line = 0;
  int column = 0;

  SourceLoc loc() const { return {line, column}; }
  bool punct(std::string_view p) const { return kind == PTok::Punct && text == p; }
};

bool symbol_char(char c) { return std::string_view("+-*/\\^<>=~:.?@#&$").find(c) != std::string_view::npos; }

std::vector<Tok> lex(std::string_view src) {
  std::vector<Tok> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto at = [&](std::size_t k) -> char { return i + k < src.size() ? src[i + k] : '\0'; };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && at(1) == '*') {
      int l = line, cl = col;
      advance(2);
      while (i < src.size() && !(src[i] == '*' && at(1) == '/')) advance(1);
      if (i >= src.size()) throw ParseError("unterminated block comment", l, cl);
      advance(2);
      continue;
    }
    Tok t;
    t.line = line;
    t.column = col;
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (std::isdigit(static_cast<unsigned char>(at(0)))) advance(1);
      t.kind = PTok::Int;
      t.text = std::string(src.substr(start, i - start));
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
      (void)p;
      if (ec != std::errc()) throw ParseError("integer out of range", t.line, t.column);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (std::isalnum(static_cast<unsigned char>(at(0))) || at(0) == '_') advance(1);
      t.text = std::string(src.substr(start, i - start));
      t.kind = (std::isupper(static_cast<unsigned char>(c)) || c == '_') ? PTok::Var : PTok::Atom;
    } else if (c == '\'') {
      advance(1);
      std::string s;
      while (true) {
        if (i >= src.size()) throw ParseError("unterminated quoted atom", t.line, t.column);
        if (src[i] == '\'') {
          if (at(1) == '\'') {
            s += '\'';
            advance(2);
            continue;
          }
          advance(1);
          break;
        }
        s += src[i];
        advance(1);
      }
      t.kind = PTok::Atom;
      t.text = std::move(s);
    } else if (c == '.' && (i + 1 >= src.size() || std::isspace(static_cast<unsigned char>(at(1))) ||
                            at(1) == '%')) {
      advance(1);
      t.kind = PTok::End;
      t.text = ".";
    } else if (symbol_char(c)) {
      while (symbol_char(at(0))) advance(1);
      t.kind = PTok::Atom;
      t.text = std::string(src.substr(start, i - start));
    } else if (c == '!' || c == ';') {
      advance(1);
      t.kind = PTok::Atom;
      t.text = std::string(1, c);
    } else if (std::string_view("()[],|{}").find(c) != std::string_view::npos) {
      advance(1);
      t.kind = PTok::Punct;
      t.text = std::string(1, c);
    } else {
      throw ParseError(std::string("unexpected character `") + c + "`", line, col);
    }
    if (t.kind == PTok::Atom && at(0) == '(') t.functional = true;
    out.push_back(std::move(t));
  }
  Tok eof;
  eof.line = line;
  eof.column = col;
  out.push_back(eof);
  return out;
}

// ---------------------------------------------------------------------------
// Term parser (operator precedence)

enum class Assoc { XFX, XFY, YFX, FY, FX };

struct OpInfo {
  int prec;
  Assoc assoc;
};

const std::map<std::string, OpInfo>& infix_ops() {
  static const std::map<std::string, OpInfo> ops = {
      {":-", {1200, Assoc::XFX}}, {";", {1100, Assoc::XFY}},   {"->", {1050, Assoc::XFY}},
      {",", {1000, Assoc::XFY}},  {"=", {700, Assoc::XFX}},    {"\\=", {700, Assoc::XFX}},
      {"==", {700, Assoc::XFX}},  {"\\==", {700, Assoc::XFX}}, {"is", {700, Assoc::XFX}},
      {"=:=", {700, Assoc::XFX}}, {"=\\=", {700, Assoc::XFX}}, {"<", {700, Assoc::XFX}},
      {">", {700, Assoc::XFX}},   {"=<", {700, Assoc::XFX}},   {">=", {700, Assoc::XFX}},
      {"+", {500, Assoc::YFX}},   {"-", {500, Assoc::YFX}},    {"*", {400, Assoc::YFX}},
      {"/", {400, Assoc::YFX}},   {"mod", {400, Assoc::YFX}},
  };
  return ops;
}

const std::map<std::string, OpInfo>& prefix_ops() {
  static const std::map<std::string, OpInfo> ops = {
      {":-", {1200, Assoc::FX}}, {"\\+", {900, Assoc::FY}}, {"-", {200, Assoc::FY}}};
  return ops;
}

class TermParser {
 public:
  explicit TermParser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  bool done() const { return peek().kind == PTok::Eof; }

  PTerm clause_term() {
    PTerm t = parse(1200).first;
    if (peek().kind != PTok::End) fail("expected `.` at end of clause");
    next();
    return t;
  }

 private:
  const Tok& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Tok& next() {
    const Tok& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Tok& t = peek();
    throw ParseError(msg + (t.kind == PTok::Eof ? " at end of input" : ", found `" + t.text + "`"),
                     t.line, t.column);
  }

  bool starts_term() const {
    const Tok& t = peek();
    return t.kind == PTok::Var || t.kind == PTok::Int || t.kind == PTok::Atom || t.punct("(") ||
           t.punct("[") || t.punct("{");
  }

  // Name of an infix operator at the current position.
  std::optional<std::string> infix_name() const {
    const Tok& t = peek();
    if (t.punct(",")) return ",";
    if (t.kind == PTok::Atom && !t.functional && infix_ops().count(t.text)) return t.text;
    return std::nullopt;
  }

  std::pair<PTerm, int> parse(int max) {
    auto [left, left_prec] = primary(max);
    while (auto name = infix_name()) {
      OpInfo op = infix_ops().at(*name);
      if (op.prec > max) break;
      int left_max = op.assoc == Assoc::YFX ? op.prec : op.prec - 1;
      if (left_prec > left_max) break;
      SourceLoc loc = peek().loc();
      next();
      int right_max = op.assoc == Assoc::XFY ? op.prec : op.prec - 1;
      PTerm right = parse(right_max).first;
      left = PTerm::compound(*name, {std::move(left), std::move(right)}, loc);
      left_prec = op.prec;
    }
    return {std::move(left), left_prec};
  }

  std::pair<PTerm, int> primary(int max) {
    const Tok& t = next();
    switch (t.kind) {
      case PTok::Int:
        return {PTerm::integer(t.value, t.loc()), 0};
      case PTok::Var:
        return {PTerm::var(t.text, t.loc()), 0};
      case PTok::Punct:
        if (t.punct("(")) {
          PTerm inner = parse(1200).first;
          expect(")");
          return {std::move(inner), 0};
        }
        if (t.punct("[")) return {list(t.loc()), 0};
        if (t.punct("{")) throw ParseError("curly-brace terms are not supported", t.line, t.column);
        break;
      case PTok::Atom: {
        if (t.functional) {
          std::string name = t.text;
          SourceLoc loc = t.loc();
          next();  // (
          std::vector<PTerm> args{parse(999).first};
          while (peek().punct(",")) {
            next();
            args.push_back(parse(999).first);
          }
          expect(")");
          return {PTerm::compound(name, std::move(args), loc), 0};
        }
        if (t.text == "-" && peek().kind == PTok::Int) return {PTerm::integer(-next().value, t.loc()), 0};
        auto pre = prefix_ops().find(t.text);
        if (pre != prefix_ops().end() && starts_term() && !infix_name()) {
          OpInfo op = pre->second;
          if (op.prec <= max) {
            int arg_max = op.assoc == Assoc::FY ? op.prec : op.prec - 1;
            PTerm arg = parse(arg_max).first;
            return {PTerm::compound(t.text, {std::move(arg)}, t.loc()), op.prec};
          }
        }
        return {PTerm::atom(t.text, t.loc()), 0};
      }
      default:
        break;
    }
    if (t.kind != PTok::Eof) pos_--;
    fail("expected a term");
  }

  PTerm list(SourceLoc loc) {
    if (peek().punct("]")) {
      next();
      return PTerm::atom("[]", loc);
    }
    std::vector<PTerm> elems{parse(999).first};
    while (peek().punct(",")) {
      next();
      elems.push_back(parse(999).first);
    }
    PTerm tail = PTerm::atom("[]", loc);
    if (peek().punct("|")) {
      next();
      tail = parse(999).first;
    }
    expect("]");
    for (auto it = elems.rbegin(); it != elems.rend(); ++it)
      tail = PTerm::compound(".", {std::move(*it), std::move(tail)}, loc);
    return tail;
  }

  void expect(std::string_view p) {
    if (!peek().punct(p)) fail("expected `" + std::string(p) + "`");
    next();
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

void flatten_conj(const PTerm& t, std::vector<PTerm>& out) {
  if (t.kind == PTerm::Kind::Compound && t.name == "," && t.args.size() == 2) {
    flatten_conj(t.args[0], out);
    flatten_conj(t.args[1], out);
  } else {
    out.push_back(t);
  }
}

}  // namespace

std::vector<PrologClause> parse_prolog(std::string_view text) {
  TermParser p(lex(text));
  std::vector<PrologClause> out;
  while (!p.done()) {
    PTerm t = p.clause_term();
    PrologClause c;
    c.loc = t.loc;
    if (t.kind == PTerm::Kind::Compound && t.name == ":-" && t.args.size() == 1)
      throw ParseError("directives are not supported", t.loc.line, t.loc.column);
    if (t.kind == PTerm::Kind::Compound && t.name == ":-" && t.args.size() == 2) {
      c.head = t.args[0];
      flatten_conj(t.args[1], c.body);
    } else {
      c.head = t;
    }
    c.loc = c.head.loc;
    if (c.head.kind != PTerm::Kind::Atom && c.head.kind != PTerm::Kind::Compound)
      throw ParseError("clause head must be an atom or compound term", c.loc.line, c.loc.column);
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Translation

namespace {

[[noreturn]] void unsupported(const std::string& what, SourceLoc loc) {
  throw ParseError("unsupported construct: " + what, loc.line, loc.column);
}

std::string display_name(const std::string& v) {
  std::string s = v;
  if (!s.empty() && std::isupper(static_cast<unsigned char>(s[0])))
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

bool is_list_nil(const PTerm& t) { return t.kind == PTerm::Kind::Atom && t.name == "[]"; }
bool is_list_cons(const PTerm& t) {
  return t.kind == PTerm::Kind::Compound && t.name == "." && t.args.size() == 2;
}

using Key = std::pair<std::string, std::size_t>;

class Translator {
 public:
  Translator(const std::vector<PrologClause>& clauses, std::string module)
      : clauses_(clauses), module_(std::move(module)) {}

  Program run() {
    for (const auto& c : clauses_) {
      Key k{c.head.name, c.head.args.size()};
      if (!preds_.count(k)) {
        preds_[k] = unique_name(c.head.name, k.second, function_names_);
        order_.push_back(k);
      }
      by_pred_[k].push_back(&c);
    }
    for (const auto& c : clauses_) {
      for (const auto& a : c.head.args) collect_constructors(a);
      for (const auto& g : c.body) check_goal(g);
    }

    Program p;
    p.name = module_;
    if (!term_type_.constructors.empty()) p.types.push_back(term_type_);
    add_missing_prelude_types(p);

    std::map<std::string, int> arities;
    for (const auto& [k, name] : preds_) arities[name] = static_cast<int>(k.second);
    Symbols symbols(p.types, arities);
    for (const Key& k : order_) p.functions.push_back(predicate(k, symbols));
    return p;
  }

 private:
  static std::string unique_name(const std::string& base, std::size_t arity,
                                 std::map<std::string, std::size_t>& used) {
    auto it = used.find(base);
    if (it == used.end()) {
      used[base] = arity;
      return base;
    }
    std::string n = base + "_" + std::to_string(arity);
    while (used.count(n)) n += "_";
    used[n] = arity;
    return n;
  }

  void collect_constructors(const PTerm& t) {
    if (t.kind == PTerm::Kind::Var || t.kind == PTerm::Kind::Int || is_list_nil(t)) return;
    if (is_list_cons(t)) {
      collect_constructors(t.args[0]);
      collect_constructors(t.args[1]);
      return;
    }
    Key k{t.name, t.args.size()};
    if (!ctors_.count(k)) {
      std::string n = unique_name(t.name, k.second, ctor_names_);
      ctors_[k] = n;
      ConsDecl c{n, static_cast<int>(k.second), {}};
      c.args.assign(k.second, TypeExpr::cons("Term"));
      term_type_.constructors.push_back(std::move(c));
    }
    for (const auto& a : t.args) collect_constructors(a);
  }

  void check_goal(const PTerm& g) {
    switch (g.kind) {
      case PTerm::Kind::Var:
        unsupported("variable goal `" + g.name + "`", g.loc);
      case PTerm::Kind::Int:
        unsupported("integer goal", g.loc);
      default:
        break;
    }
    const std::string& n = g.name;
    std::size_t arity = g.args.size();
    if (n == "!" && arity == 0) unsupported("cut (!)", g.loc);
    if (n == "\\+" && arity == 1) unsupported("negation (\\+)", g.loc);
    if (n == ";" && arity == 2) {
      const PTerm& l = g.args[0];
      if (l.kind == PTerm::Kind::Compound && l.name == "->") unsupported("if-then-else (->)", g.loc);
      unsupported("disjunction (;)", g.loc);
    }
    if (n == "->" && arity == 2) unsupported("if-then (->)", g.loc);
    if (n == "=" && arity == 2) {
      collect_constructors(g.args[0]);
      collect_constructors(g.args[1]);
      return;
    }
    if ((n == "true" || n == "fail" || n == "false") && arity == 0) return;
    if (!preds_.count({n, arity})) {
      if (infix_ops().count(n) || n == "call" || n == "findall" || n == "assert" || n == "write")
        unsupported("builtin predicate " + n + "/" + std::to_string(arity), g.loc);
      throw ParseError("unknown predicate " + n + "/" + std::to_string(arity), g.loc.line, g.loc.column);
    }
    for (const auto& a : g.args) collect_constructors(a);
  }

  // -- clause translation -----------------------------------------------------

  struct Equality {
    std::string var;  // pattern variable name
    PTerm term;
  };

  struct ClauseRow {
    std::vector<SPat> patterns;
    std::vector<Equality> eqs;
  };

  SPat to_pattern(const PTerm& t, std::set<std::string>& seen, std::vector<Equality>& eqs) {
    switch (t.kind) {
      case PTerm::Kind::Var:
        return var_pattern(t, seen, eqs);
      case PTerm::Kind::Int:
        return SPat::lit(t.value, t.loc);
      case PTerm::Kind::Atom:
        return SPat::con(is_list_nil(t) ? std::string(kNil) : ctors_.at({t.name, 0}), {}, t.loc);
      case PTerm::Kind::Compound: {
        std::vector<SPat> args;
        for (const auto& a : t.args) args.push_back(to_pattern(a, seen, eqs));
        std::string n = is_list_cons(t) ? std::string(kCons) : ctors_.at({t.name, t.args.size()});
        return SPat::con(n, std::move(args), t.loc);
      }
    }
    return SPat::wild(t.loc);
  }

  // A variable pattern; repeated variables are renamed and equated.
  SPat var_pattern(const PTerm& t, std::set<std::string>& seen, std::vector<Equality>& eqs) {
    if (t.name == "_") return SPat::wild(t.loc);
    if (seen.insert(t.name).second) {
      SPat p = SPat::var(t.name, t.loc);
      p.hint = display_name(t.name);
      return p;
    }
    std::string renamed = t.name + "#" + std::to_string(++synthetic_);
    eqs.push_back({t.name, PTerm::var(renamed, t.loc)});
    SPat p = SPat::var(renamed, t.loc);
    p.hint = display_name(t.name);
    return p;
  }

  ClauseRow row_for(const PrologClause& c, bool keep_patterns) {
    ClauseRow row;
    std::set<std::string> seen;
    for (const auto& a : c.head.args) {
      if (a.kind == PTerm::Kind::Var) {
        row.patterns.push_back(var_pattern(a, seen, row.eqs));
      } else if (keep_patterns) {
        row.patterns.push_back(to_pattern(a, seen, row.eqs));
      } else {
        std::string v = "$arg" + std::to_string(++synthetic_);
        SPat p = SPat::var(v, a.loc);
        p.hint = "x";
        row.patterns.push_back(std::move(p));
        row.eqs.push_back({v, a});
      }
    }
    return row;
  }

  ExprPtr lower_term(const PTerm& t, Env& env, std::vector<VarId>& locals, VarNames& names) {
    switch (t.kind) {
      case PTerm::Kind::Var: {
        if (t.name == "_") {
          VarId id = names.fresh("w");
          locals.push_back(id);
          return build::var(id);
        }
        auto it = env.find(t.name);
        if (it == env.end()) {
          VarId id = names.fresh(display_name(t.name));
          it = env.emplace(t.name, id).first;
          locals.push_back(id);
        }
        return build::var(it->second);
      }
      case PTerm::Kind::Int:
        return build::lit(t.value);
      case PTerm::Kind::Atom:
        return build::cons(is_list_nil(t) ? std::string(kNil) : ctors_.at({t.name, 0}));
      case PTerm::Kind::Compound: {
        std::vector<ExprPtr> args;
        for (const auto& a : t.args) args.push_back(lower_term(a, env, locals, names));
        std::string n = is_list_cons(t) ? std::string(kCons) : ctors_.at({t.name, t.args.size()});
        return build::cons(n, std::move(args));
      }
    }
    return nullptr;
  }

  ExprPtr lower_goal(const PTerm& g, Env& env, std::vector<VarId>& locals, VarNames& names) {
    if (g.name == "=" && g.args.size() == 2)
      return build::call("=:=", {lower_term(g.args[0], env, locals, names),
                                 lower_term(g.args[1], env, locals, names)});
    if (g.args.empty() && g.name == "true") return build::cons(std::string(kSuccess));
    if (g.args.empty() && (g.name == "fail" || g.name == "false")) return build::call("failed");
    std::vector<ExprPtr> args;
    for (const auto& a : g.args) args.push_back(lower_term(a, env, locals, names));
    return build::call(preds_.at({g.name, g.args.size()}), std::move(args));
  }

  FuncDecl predicate(const Key& k, const Symbols& symbols) {
    const auto& cls = by_pred_.at(k);
    bool discriminated = false;
    if (cls.size() >= 2)
      for (std::size_t i = 0; i < k.second && !discriminated; ++i)
        discriminated = std::all_of(cls.begin(), cls.end(), [&](const PrologClause* c) {
          return c->head.args[i].kind != PTerm::Kind::Var;
        });

    VarNames names;
    std::vector<ClauseRow> rows;
    for (const PrologClause* c : cls) rows.push_back(row_for(*c, discriminated));
    for (const PrologClause* c : cls) reserve_vars(c->head, names);

    std::vector<VarId> params;
    for (std::size_t i = 0; i < k.second; ++i) {
      auto named = std::find_if(rows.begin(), rows.end(), [&](const ClauseRow& r) {
        return r.patterns[i].kind == SPat::Kind::Var && r.patterns[i].hint != "x";
      });
      params.push_back(named != rows.end() ? names.fresh(named->patterns[i].display())
                                           : names.fresh("x", true));
    }

    std::vector<MatchRow> match_rows;
    for (std::size_t r = 0; r < cls.size(); ++r) {
      MatchRow m;
      m.patterns = rows[r].patterns;
      const PrologClause* c = cls[r];
      std::vector<Equality> eqs = rows[r].eqs;
      m.leaf = [this, c, eqs](const Env& env, VarNames& vn) {
        Env inner = env;
        std::vector<VarId> locals;
        std::vector<ExprPtr> parts;
        for (const auto& e : eqs)
          parts.push_back(build::call(
              "=:=", {lower_term(PTerm::var(e.var), inner, locals, vn), lower_term(e.term, inner, locals, vn)}));
        for (const auto& g : c->body) parts.push_back(lower_goal(g, inner, locals, vn));
        ExprPtr body;
        if (parts.empty()) {
          body = build::cons(std::string(kSuccess));
        } else {
          body = parts.back();
          for (std::size_t i = parts.size() - 1; i-- > 0;) body = build::call("&>", {parts[i], body});
        }
        if (!locals.empty()) body = build::free(std::move(locals), std::move(body));
        return body;
      };
      match_rows.push_back(std::move(m));
    }
    ExprPtr body = compile_match(params, std::move(match_rows), CaseKind::Flex, symbols, names);

    FuncDecl f;
    f.name = preds_.at(k);
    f.arity = static_cast<int>(k.second);
    f.rule = Rule{params, std::move(body), names.names()};
    return f;
  }

  static void reserve_vars(const PTerm& t, VarNames& names) {
    if (t.kind == PTerm::Kind::Var && t.name != "_") names.reserve(display_name(t.name));
    for (const auto& a : t.args) reserve_vars(a, names);
  }

  const std::vector<PrologClause>& clauses_;
  std::string module_;
  std::map<Key, std::string> preds_;
  std::vector<Key> order_;
  std::map<Key, std::vector<const PrologClause*>> by_pred_;
  std::map<std::string, std::size_t> function_names_;
  std::map<Key, std::string> ctors_;
  std::map<std::string, std::size_t> ctor_names_;
  TypeDecl term_type_{"Term", {}, {}};
  int synthetic_ = 0;
};

}  // namespace

Program translate_prolog(const std::vector<PrologClause>& clauses, const std::string& module_name) {
  return Translator(clauses, module_name).run();
}

}  // namespace flw
