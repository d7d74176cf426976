#include "flw/surface.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "flw/builtins.hpp"

namespace flw {

SPat SPat::var(std::string name, SourceLoc loc) {
  SPat p;
  p.kind = Kind::Var;
  p.name = std::move(name);
  p.loc = loc;
  return p;
}

SPat SPat::wild(SourceLoc loc) {
  SPat p;
  p.loc = loc;
  return p;
}

SPat SPat::lit(std::int64_t v, SourceLoc loc) {
  SPat p;
  p.kind = Kind::Lit;
  p.value = v;
  p.loc = loc;
  return p;
}

SPat SPat::con(std::string name, std::vector<SPat> args, SourceLoc loc) {
  SPat p;
  p.kind = Kind::Con;
  p.name = std::move(name);
  p.args = std::move(args);
  p.loc = loc;
  return p;
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { VarId, ConId, Int, Op, Special, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  int line = 0;
  int column = 0;

  SourceLoc loc() const { return {line, column}; }
  bool is(Tok k, std::string_view t) const { return kind == k && text == t; }
  bool special(std::string_view t) const { return is(Tok::Special, t); }
  bool reserved_op(std::string_view t) const { return is(Tok::Op, t); }
  bool keyword(std::string_view t) const { return is(Tok::VarId, t); }
};

bool is_op_char(unsigned char c) {
  return c >= 0x80 || std::string_view("!#$%&*+./<=>?@\\^|-~:").find(static_cast<char>(c)) !=
                          std::string_view::npos;
}

bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"data", "where", "free", "if",    "then",
                                          "else", "let",   "in",   "case",  "fcase",
                                          "of",   "eval",  "infixl", "infixr", "infix"};
  return k;
}

bool is_reserved_op(std::string_view s) { return s == "=" || s == "|" || s == "::" || s == "->"; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
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
  while (i < src.size()) {
    unsigned char c = src[i];
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    std::size_t start = i;
    if (std::isdigit(c)) {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance(1);
      t.kind = Tok::Int;
      t.text = std::string(src.substr(start, i - start));
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
      if (ec != std::errc()) throw ParseError("integer literal out of range", t.line, t.column);
      (void)p;
    } else if (std::isalpha(c) || c == '_') {
      while (i < src.size() && is_ident_char(src[i])) advance(1);
      t.text = std::string(src.substr(start, i - start));
      t.kind = std::isupper(c) ? Tok::ConId : Tok::VarId;
    } else if (is_op_char(c)) {
      std::size_t j = i;
      while (j < src.size() && is_op_char(src[j])) ++j;
      std::string_view run = src.substr(i, j - i);
      if (run.size() >= 2 && run.find_first_not_of('-') == std::string_view::npos) {
        while (i < src.size() && src[i] != '\n') advance(1);
        continue;
      }
      advance(j - i);
      t.kind = Tok::Op;
      t.text = std::string(run);
    } else if (std::string_view("()[],;{}`").find(static_cast<char>(c)) != std::string_view::npos) {
      advance(1);
      t.kind = Tok::Special;
      t.text = std::string(1, static_cast<char>(c));
    } else {
      throw ParseError(std::string("unexpected character `") + static_cast<char>(c) + "`", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
// Parser over a token range

struct FixityTable {
  std::map<std::string, OpDecl> ops;

  FixityTable() {
    for (auto& op : builtin_operators()) ops[op.name] = op;
    ops["div"] = {"div", Fixity::InfixL, 7};
    ops["mod"] = {"mod", Fixity::InfixL, 7};
  }
  void add(const OpDecl& op) { ops[op.name] = op; }
  OpDecl lookup(const std::string& name) const {
    auto it = ops.find(name);
    return it != ops.end() ? it->second : OpDecl{name, Fixity::InfixL, 9};
  }
};

SExprPtr make(SExpr e) { return std::make_shared<const SExpr>(std::move(e)); }

SExprPtr name_expr(std::string n, SourceLoc loc) {
  SExpr e;
  e.kind = SExpr::Kind::Name;
  e.name = std::move(n);
  e.loc = loc;
  return make(std::move(e));
}

SExprPtr app_expr(SExprPtr head, std::vector<SExprPtr> args, SourceLoc loc) {
  SExpr e;
  e.kind = SExpr::Kind::App;
  e.loc = loc;
  e.args.push_back(std::move(head));
  for (auto& a : args) e.args.push_back(std::move(a));
  return make(std::move(e));
}

SExprPtr lit_expr(std::int64_t v, SourceLoc loc) {
  SExpr e;
  e.kind = SExpr::Kind::Lit;
  e.value = v;
  e.loc = loc;
  return make(std::move(e));
}

class Parser {
 public:
  Parser(const std::vector<Token>& toks, std::size_t begin, std::size_t end, const FixityTable& fx)
      : toks_(toks), pos_(begin), end_(end), fx_(fx) {
    if (end > 0 && end <= toks.size()) {
      end_tok_.line = toks[end - 1].line;
      end_tok_.column = toks[end - 1].column + static_cast<int>(toks[end - 1].text.size());
    }
  }

  const Token& peek(std::size_t k = 0) const {
    std::size_t p = pos_ + k;
    return p < end_ ? toks_[p] : end_tok_;
  }
  bool at_end() const { return pos_ >= end_; }
  const Token& next() {
    const Token& t = peek();
    if (!at_end()) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg, const Token& t) const {
    throw ParseError(msg + (t.kind == Tok::End ? " at end of declaration" : ", found `" + t.text + "`"),
                     t.line, t.column);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, peek()); }
  void expect_special(std::string_view s) {
    if (!peek().special(s)) fail("expected `" + std::string(s) + "`");
    next();
  }
  void expect_end() {
    if (!at_end()) fail("unexpected token");
  }
  std::size_t pos() const { return pos_; }

  // -- types ----------------------------------------------------------------

  TypeExpr type() {
    TypeExpr t = btype();
    if (peek().reserved_op("->")) {
      next();
      return TypeExpr::func(std::move(t), type());
    }
    return t;
  }

  TypeExpr btype() {
    if (peek().kind == Tok::ConId) {
      std::string n = next().text;
      std::vector<TypeExpr> args;
      while (starts_atype()) args.push_back(atype());
      return TypeExpr::cons(std::move(n), std::move(args));
    }
    return atype();
  }

  bool starts_atype() const {
    const Token& t = peek();
    return (t.kind == Tok::VarId && !keywords().count(t.text)) || t.kind == Tok::ConId ||
           t.special("(") || t.special("[");
  }

  TypeExpr atype() {
    const Token& t = next();
    if (t.kind == Tok::VarId && !keywords().count(t.text)) return TypeExpr::var(t.text);
    if (t.kind == Tok::ConId) return TypeExpr::cons(t.text);
    if (t.special("(")) {
      TypeExpr inner = type();
      expect_special(")");
      return inner;
    }
    if (t.special("[")) {
      TypeExpr inner = type();
      expect_special("]");
      return TypeExpr::cons("List", {std::move(inner)});
    }
    fail("expected a type", t);
  }

  // -- patterns -------------------------------------------------------------

  SPat pattern() {
    SPat left = app_pattern();
    if (peek().kind == Tok::Op && peek().text.front() == ':' && !peek().reserved_op("::")) {
      const Token& op = next();
      SPat right = pattern();
      return SPat::con(op.text, {std::move(left), std::move(right)}, op.loc());
    }
    return left;
  }

  SPat app_pattern() {
    if (peek().kind == Tok::ConId) {
      const Token& c = next();
      std::vector<SPat> args;
      while (starts_apat()) args.push_back(apat());
      return SPat::con(c.text, std::move(args), c.loc());
    }
    return apat();
  }

  bool starts_apat() const {
    const Token& t = peek();
    return (t.kind == Tok::VarId && !keywords().count(t.text)) || t.kind == Tok::ConId ||
           t.kind == Tok::Int || t.special("(") || t.special("[") ||
           (t.reserved_op("-") && peek(1).kind == Tok::Int);
  }

  SPat apat() {
    const Token& t = next();
    if (t.kind == Tok::VarId && !keywords().count(t.text)) {
      if (t.text == "_") return SPat::wild(t.loc());
      if (t.text == "success") return SPat::con(std::string(kSuccess), {}, t.loc());
      return SPat::var(t.text, t.loc());
    }
    if (t.kind == Tok::ConId) return SPat::con(t.text, {}, t.loc());
    if (t.kind == Tok::Int) return SPat::lit(t.value, t.loc());
    if (t.is(Tok::Op, "-")) return SPat::lit(-next().value, t.loc());
    if (t.special("(")) {
      SPat p = pattern();
      expect_special(")");
      return p;
    }
    if (t.special("[")) {
      std::vector<SPat> elems;
      if (!peek().special("]")) {
        elems.push_back(pattern());
        while (peek().special(",")) {
          next();
          elems.push_back(pattern());
        }
      }
      expect_special("]");
      SPat list = SPat::con(std::string(kNil), {}, t.loc());
      for (auto it = elems.rbegin(); it != elems.rend(); ++it)
        list = SPat::con(std::string(kCons), {std::move(*it), std::move(list)}, t.loc());
      return list;
    }
    fail("expected a pattern", t);
  }

  // -- expressions ----------------------------------------------------------

  SExprPtr expr() {
    const Token& t = peek();
    if (t.keyword("if")) {
      next();
      SExpr e;
      e.kind = SExpr::Kind::If;
      e.loc = t.loc();
      e.args.push_back(expr());
      if (!peek().keyword("then")) fail("expected `then`");
      next();
      e.args.push_back(expr());
      if (!peek().keyword("else")) fail("expected `else`");
      next();
      e.args.push_back(expr());
      return make(std::move(e));
    }
    if (t.keyword("let")) {
      next();
      SExpr e;
      e.kind = SExpr::Kind::LetFree;
      e.loc = t.loc();
      e.vars = var_list();
      if (!peek().keyword("free")) fail("expected `free` (only `let ... free in` is supported)");
      next();
      if (!peek().keyword("in")) fail("expected `in`");
      next();
      e.args.push_back(expr());
      return make(std::move(e));
    }
    if (t.keyword("case") || t.keyword("fcase")) {
      next();
      SExpr e;
      e.kind = SExpr::Kind::Case;
      e.case_kind = t.text == "case" ? CaseKind::Rigid : CaseKind::Flex;
      e.loc = t.loc();
      e.args.push_back(expr());
      if (!peek().keyword("of")) fail("expected `of`");
      next();
      expect_special("{");
      while (true) {
        SAlt alt;
        alt.pattern = pattern();
        if (!peek().reserved_op("->")) fail("expected `->`");
        next();
        alt.body = expr();
        e.alts.push_back(std::move(alt));
        if (peek().special(";")) {
          next();
          if (peek().special("}")) break;
          continue;
        }
        break;
      }
      expect_special("}");
      return make(std::move(e));
    }
    return op_expr(0);
  }

  std::vector<std::string> var_list() {
    std::vector<std::string> vars;
    while (true) {
      const Token& v = next();
      if (v.kind != Tok::VarId || keywords().count(v.text)) fail("expected a variable name", v);
      vars.push_back(v.text);
      if (!peek().special(",")) break;
      next();
    }
    return vars;
  }

  // Infix operator at the current position, if any.
  std::optional<std::pair<std::string, SourceLoc>> peek_operator() const {
    const Token& t = peek();
    if (t.kind == Tok::Op && !is_reserved_op(t.text)) return std::pair{t.text, t.loc()};
    if (t.special("`") && (peek(1).kind == Tok::VarId || peek(1).kind == Tok::ConId) &&
        peek(2).special("`"))
      return std::pair{peek(1).text, t.loc()};
    return std::nullopt;
  }

  void skip_operator() {
    if (peek().special("`"))
      pos_ += 3;
    else
      next();
  }

  SExprPtr op_expr(int min_prec) {
    SExprPtr left = operand();
    while (auto op = peek_operator()) {
      OpDecl d = fx_.lookup(op->first);
      if (d.precedence < min_prec) break;
      skip_operator();
      int next_min = d.fixity == Fixity::InfixR ? d.precedence : d.precedence + 1;
      SExprPtr right = op_expr(next_min);
      left = app_expr(name_expr(op->first, op->second), {left, right}, op->second);
      if (d.fixity == Fixity::Infix) {
        if (auto again = peek_operator(); again && fx_.lookup(again->first).precedence == d.precedence)
          fail("non-associative operator `" + d.name + "` used in a chain");
      }
    }
    return left;
  }

  SExprPtr operand() {
    const Token& t = peek();
    if (t.is(Tok::Op, "-")) {
      next();
      if (peek().kind == Tok::Int) return lit_expr(-next().value, t.loc());
      SExprPtr e = application();
      return app_expr(name_expr("-", t.loc()), {lit_expr(0, t.loc()), e}, t.loc());
    }
    if (t.keyword("if") || t.keyword("let") || t.keyword("case") || t.keyword("fcase"))
      return expr();
    return application();
  }

  bool starts_atom() const {
    const Token& t = peek();
    return (t.kind == Tok::VarId && !keywords().count(t.text)) || t.kind == Tok::ConId ||
           t.kind == Tok::Int || t.special("(") || t.special("[");
  }

  SExprPtr application() {
    SourceLoc loc = peek().loc();
    SExprPtr head = atom();
    std::vector<SExprPtr> args;
    while (starts_atom()) args.push_back(atom());
    if (args.empty()) return head;
    return app_expr(std::move(head), std::move(args), loc);
  }

  SExprPtr atom() {
    const Token& t = next();
    if ((t.kind == Tok::VarId && !keywords().count(t.text)) || t.kind == Tok::ConId)
      return name_expr(t.text, t.loc());
    if (t.kind == Tok::Int) return lit_expr(t.value, t.loc());
    if (t.special("(")) {
      if (peek().kind == Tok::Op && !is_reserved_op(peek().text) && peek(1).special(")")) {
        std::string op = next().text;
        next();
        return name_expr(op, t.loc());
      }
      SExprPtr e = expr();
      expect_special(")");
      return e;
    }
    if (t.special("[")) {
      if (peek().special("]")) {
        next();
        return name_expr(std::string(kNil), t.loc());
      }
      SExpr e;
      e.kind = SExpr::Kind::List;
      e.loc = t.loc();
      e.args.push_back(expr());
      while (peek().special(",")) {
        next();
        e.args.push_back(expr());
      }
      expect_special("]");
      return make(std::move(e));
    }
    fail("expected an expression", t);
  }

 private:
  const std::vector<Token>& toks_;
  std::size_t pos_;
  std::size_t end_;
  const FixityTable& fx_;
  Token end_tok_;
};

// ---------------------------------------------------------------------------
// Declarations

struct Range {
  std::size_t begin, end;
};

std::vector<Range> split_decls(const std::vector<Token>& toks) {
  std::size_t begin = 0, end = toks.size() - 1;  // drop End
  if (end > begin && toks[begin].special("{") && toks[end - 1].special("}")) {
    ++begin;
    --end;
  }
  std::vector<Range> out;
  int depth = 0;
  std::size_t start = begin;
  for (std::size_t i = begin; i < end; ++i) {
    const Token& t = toks[i];
    if (i > start && t.column == 1) {
      out.push_back({start, i});
      start = i;
      depth = 0;
    }
    if (t.special("(") || t.special("[") || t.special("{")) ++depth;
    if (t.special(")") || t.special("]") || t.special("}")) --depth;
    if (t.special(";") && depth == 0) {
      out.push_back({start, i});
      start = i + 1;
    }
  }
  out.push_back({start, end});
  out.erase(std::remove_if(out.begin(), out.end(), [](const Range& r) { return r.begin >= r.end; }),
            out.end());
  return out;
}

// Index of the first depth-0 token satisfying `pred` in [begin, end).
template <class Pred>
std::optional<std::size_t> find_top(const std::vector<Token>& toks, Range r, Pred pred) {
  int depth = 0;
  for (std::size_t i = r.begin; i < r.end; ++i) {
    const Token& t = toks[i];
    if (depth == 0 && pred(t)) return i;
    if (t.special("(") || t.special("[") || t.special("{")) ++depth;
    if (t.special(")") || t.special("]") || t.special("}")) --depth;
  }
  return std::nullopt;
}

bool is_con_op(const std::string& s) { return !s.empty() && s.front() == ':' && s != "::"; }

class ModuleParser {
 public:
  explicit ModuleParser(std::string_view src) : toks_(lex(src)) {}

  SurfaceModule run() {
    auto ranges = split_decls(toks_);
    std::vector<Range> rest;
    for (const Range& r : ranges) {
      const Token& t = toks_[r.begin];
      if (t.keyword("infixl") || t.keyword("infixr") || t.keyword("infix"))
        fixity(r);
      else
        rest.push_back(r);
    }
    for (const Range& r : rest) decl(r);
    for (const auto& d : mod_.decls)
      if (d.equations.empty())
        throw ParseError("`" + d.name + "` is declared but has no equations", d.loc.line,
                         d.loc.column);
    return std::move(mod_);
  }

 private:
  void fixity(Range r) {
    Parser p(toks_, r.begin, r.end, fx_);
    const Token& kw = p.next();
    Fixity f = kw.text == "infixl" ? Fixity::InfixL : kw.text == "infixr" ? Fixity::InfixR : Fixity::Infix;
    const Token& prec = p.next();
    if (prec.kind != Tok::Int || prec.value > 9) p.fail("expected a precedence 0..9", prec);
    while (true) {
      std::string name;
      if (p.peek().kind == Tok::Op && !is_reserved_op(p.peek().text)) {
        name = p.next().text;
      } else if (p.peek().special("`")) {
        p.next();
        name = p.next().text;
        p.expect_special("`");
      } else {
        p.fail("expected an operator");
      }
      OpDecl op{name, f, static_cast<int>(prec.value)};
      fx_.add(op);
      mod_.operators.push_back(op);
      if (!p.peek().special(",")) break;
      p.next();
    }
    p.expect_end();
  }

  SurfaceDecl& entry(const std::string& name, SourceLoc loc) {
    auto it = index_.find(name);
    if (it != index_.end()) return mod_.decls[it->second];
    index_[name] = mod_.decls.size();
    SurfaceDecl d;
    d.name = name;
    d.loc = loc;
    mod_.decls.push_back(std::move(d));
    return mod_.decls.back();
  }

  // Function name at the start of a signature or annotation: `f` or `(op)`.
  std::optional<std::string> decl_name(Parser& p) {
    if (p.peek().kind == Tok::VarId && !keywords().count(p.peek().text)) return p.next().text;
    if (p.peek().special("(") && p.peek(1).kind == Tok::Op && p.peek(2).special(")")) {
      p.next();
      std::string n = p.next().text;
      p.next();
      return n;
    }
    return std::nullopt;
  }

  void decl(Range r) {
    const Token& first = toks_[r.begin];
    if (first.keyword("data")) return data(r);
    if (find_top(toks_, r, [](const Token& t) { return t.reserved_op("::"); })) return signature(r);
    {
      Parser p(toks_, r.begin, r.end, fx_);
      auto name = decl_name(p);
      if (name && p.peek().keyword("eval")) {
        p.next();
        const Token& mode = p.next();
        if (mode.kind != Tok::VarId || (mode.text != "flex" && mode.text != "rigid"))
          p.fail("expected `flex` or `rigid`", mode);
        p.expect_end();
        SurfaceDecl& d = entry(*name, first.loc());
        d.annotation = mode.text == "flex" ? CaseKind::Flex : CaseKind::Rigid;
        return;
      }
    }
    equation(r);
  }

  void data(Range r) {
    Parser p(toks_, r.begin, r.end, fx_);
    p.next();
    const Token& name = p.next();
    if (name.kind != Tok::ConId) p.fail("expected a type name", name);
    TypeDecl td;
    td.name = name.text;
    while (p.peek().kind == Tok::VarId && !keywords().count(p.peek().text))
      td.type_params.push_back(p.next().text);
    if (!p.peek().reserved_op("=")) p.fail("expected `=`");
    p.next();
    while (true) {
      ConsDecl c;
      if (p.peek().kind == Tok::ConId) {
        c.name = p.next().text;
        while (p.starts_atype()) c.args.push_back(p.atype());
      } else if (p.peek().special("[") && p.peek(1).special("]")) {
        p.next();
        p.next();
        c.name = std::string(kNil);
      } else {
        TypeExpr left = p.btype();
        if (p.peek().kind != Tok::Op || !is_con_op(p.peek().text))
          p.fail("expected a constructor");
        c.name = p.next().text;
        c.args = {std::move(left), p.btype()};
      }
      c.arity = static_cast<int>(c.args.size());
      td.constructors.push_back(std::move(c));
      if (!p.peek().reserved_op("|")) break;
      p.next();
    }
    p.expect_end();
    mod_.types.push_back(std::move(td));
  }

  void signature(Range r) {
    Parser p(toks_, r.begin, r.end, fx_);
    std::vector<std::pair<std::string, SourceLoc>> names;
    while (true) {
      SourceLoc loc = p.peek().loc();
      auto n = decl_name(p);
      if (!n) p.fail("expected a function name");
      names.emplace_back(*n, loc);
      if (!p.peek().special(",")) break;
      p.next();
    }
    if (!p.peek().reserved_op("::")) p.fail("expected `::`");
    p.next();
    TypeExpr t = p.type();
    p.expect_end();
    for (auto& [n, loc] : names) {
      SurfaceDecl& d = entry(n, loc);
      if (d.signature) throw ParseError("duplicate signature for `" + n + "`", loc.line, loc.column);
      d.signature = t;
    }
  }

  void equation(Range r) {
    auto eq_pos = find_top(toks_, r, [](const Token& t) { return t.reserved_op("="); });
    if (!eq_pos) {
      const Token& t = toks_[r.begin];
      throw ParseError("expected an equation `lhs = rhs`", t.line, t.column);
    }
    auto bar = find_top(toks_, {r.begin, *eq_pos}, [](const Token& t) { return t.reserved_op("|"); });
    std::size_t lhs_end = bar ? *bar : *eq_pos;

    Equation eq;
    eq.loc = toks_[r.begin].loc();
    std::string name = lhs({r.begin, lhs_end}, eq.patterns);

    if (bar) {
      Parser g(toks_, *bar + 1, *eq_pos, fx_);
      eq.guard = g.expr();
      g.expect_end();
    }
    auto where = find_top(toks_, {*eq_pos + 1, r.end}, [](const Token& t) { return t.keyword("where"); });
    std::size_t rhs_end = where ? *where : r.end;
    Parser b(toks_, *eq_pos + 1, rhs_end, fx_);
    if (b.at_end()) b.fail("expected an expression");
    eq.body = b.expr();
    b.expect_end();
    if (where) {
      Parser w(toks_, *where + 1, r.end, fx_);
      eq.free_vars = w.var_list();
      if (!w.peek().keyword("free")) w.fail("expected `free`");
      w.next();
      w.expect_end();
    }
    check_linear(name, eq);

    SurfaceDecl& d = entry(name, eq.loc);
    if (!d.equations.empty() && d.equations.front().patterns.size() != eq.patterns.size())
      throw ParseError("equations for `" + name + "` have different numbers of arguments (" +
                           std::to_string(d.equations.front().patterns.size()) + " and " +
                           std::to_string(eq.patterns.size()) + ")",
                       eq.loc.line, eq.loc.column);
    d.equations.push_back(std::move(eq));
  }

  // Parses a left-hand side, returning the function name.
  std::string lhs(Range r, std::vector<SPat>& pats) {
    Parser p(toks_, r.begin, r.end, fx_);
    if (p.at_end()) p.fail("expected a left-hand side");
    // (op) p1 ... pn
    if (p.peek().special("(") && p.peek(1).kind == Tok::Op && p.peek(2).special(")")) {
      p.next();
      std::string n = p.next().text;
      p.next();
      while (!p.at_end()) pats.push_back(p.apat());
      return n;
    }
    // p1 op p2, with op a function operator or a backquoted name
    auto infix = find_top(toks_, r, [](const Token& t) {
      return (t.kind == Tok::Op && !is_reserved_op(t.text) && !is_con_op(t.text)) || t.special("`");
    });
    if (infix) {
      Parser left(toks_, r.begin, *infix, fx_);
      pats.push_back(left.pattern());
      left.expect_end();
      std::string n;
      std::size_t after;
      if (toks_[*infix].special("`")) {
        if (*infix + 2 >= r.end || !toks_[*infix + 2].special("`"))
          throw ParseError("unterminated backquote", toks_[*infix].line, toks_[*infix].column);
        n = toks_[*infix + 1].text;
        after = *infix + 3;
      } else {
        n = toks_[*infix].text;
        after = *infix + 1;
      }
      Parser right(toks_, after, r.end, fx_);
      pats.push_back(right.pattern());
      right.expect_end();
      return n;
    }
    const Token& f = p.next();
    if (f.kind != Tok::VarId || keywords().count(f.text)) p.fail("expected a function name", f);
    while (!p.at_end()) pats.push_back(p.apat());
    return f.text;
  }

  static void collect(const SPat& p, std::vector<const SPat*>& vars) {
    if (p.kind == SPat::Kind::Var) vars.push_back(&p);
    for (const auto& a : p.args) collect(a, vars);
  }

  static void check_linear(const std::string& name, const Equation& eq) {
    std::vector<const SPat*> vars;
    for (const auto& p : eq.patterns) collect(p, vars);
    std::set<std::string> seen;
    for (const SPat* v : vars)
      if (!seen.insert(v->name).second)
        throw ParseError("variable `" + v->name + "` occurs more than once in the left-hand side of `" +
                             name + "`",
                         v->loc.line, v->loc.column);
  }

  std::vector<Token> toks_;
  FixityTable fx_;
  SurfaceModule mod_;
  std::map<std::string, std::size_t> index_;
};

[[noreturn]] void lower_error(const std::string& msg, SourceLoc loc) {
  throw ParseError(msg, loc.line, loc.column);
}

}  // namespace

SurfaceModule parse_surface(std::string_view source) { return ModuleParser(source).run(); }

SExprPtr parse_surface_expr(std::string_view text, const std::vector<OpDecl>& operators,
                            std::vector<std::string>* where_free) {
  auto toks = lex(text);
  FixityTable fx;
  for (const auto& op : operators) fx.add(op);
  std::size_t end = toks.size() - 1;
  auto where = find_top(toks, {0, end}, [](const Token& t) { return t.keyword("where"); });
  Parser p(toks, 0, where ? *where : end, fx);
  if (p.at_end()) p.fail("expected an expression");
  SExprPtr e = p.expr();
  p.expect_end();
  if (where) {
    if (!where_free) {
      const Token& t = toks[*where];
      throw ParseError("unexpected `where`", t.line, t.column);
    }
    Parser w(toks, *where + 1, end, fx);
    *where_free = w.var_list();
    if (!w.peek().keyword("free")) w.fail("expected `free`");
    w.next();
    w.expect_end();
  }
  return e;
}

// ---------------------------------------------------------------------------
// Lowering

VarId VarNames::fresh(std::string_view hint, bool generated) {
  std::string base(hint.empty() ? "x" : hint);
  auto taken = [&](const std::string& n) { return used_.count(n) || (generated && reserved_.count(n)); };
  std::string name = base;
  for (int k = 1; taken(name); ++k) name = base + std::to_string(k);
  used_.insert(name);
  names_.push_back(name);
  return static_cast<VarId>(names_.size()) - 1;
}

Symbols::Symbols(const Program& program) : types_(program.types) {
  for (const auto& f : program.functions) functions_[f.name] = f.arity;
}

Symbols::Symbols(const std::vector<TypeDecl>& types, std::map<std::string, int> function_arities)
    : types_(types), functions_(std::move(function_arities)) {}

std::optional<int> Symbols::function_arity(const std::string& name) const {
  if (auto it = functions_.find(name); it != functions_.end()) return it->second;
  if (const Builtin* b = find_builtin(name)) return b->arity;
  return std::nullopt;
}

const ConsDecl* Symbols::constructor(const std::string& name) const {
  for (const auto& t : types_)
    for (const auto& c : t.constructors)
      if (c.name == name) return &c;
  return nullptr;
}

const TypeDecl* Symbols::owner(const std::string& name) const {
  for (const auto& t : types_)
    for (const auto& c : t.constructors)
      if (c.name == name) return &t;
  return nullptr;
}

namespace {

class Lowerer {
 public:
  Lowerer(VarNames& names, const Symbols& symbols) : names_(names), sym_(symbols) {}

  ExprPtr lower(const SExpr& e, const Env& env) {
    switch (e.kind) {
      case SExpr::Kind::Name:
        return head(e.name, {}, env, e.loc);
      case SExpr::Kind::Lit:
        return build::lit(e.value);
      case SExpr::Kind::App: {
        std::vector<ExprPtr> args;
        for (std::size_t i = 1; i < e.args.size(); ++i) args.push_back(lower(*e.args[i], env));
        const SExpr& h = *e.args[0];
        if (h.kind == SExpr::Kind::Name) return head(h.name, std::move(args), env, h.loc);
        return apply_all(lower(h, env), std::move(args));
      }
      case SExpr::Kind::If:
        return build::rcase(lower(*e.args[0], env),
                            {{Pattern::cons(std::string(kTrue)), lower(*e.args[1], env)},
                             {Pattern::cons(std::string(kFalse)), lower(*e.args[2], env)}});
      case SExpr::Kind::LetFree: {
        Env inner = env;
        std::vector<VarId> ids;
        for (const auto& v : e.vars) {
          VarId id = names_.fresh(v);
          inner[v] = id;
          ids.push_back(id);
        }
        return build::free(std::move(ids), lower(*e.args[0], inner));
      }
      case SExpr::Kind::Case:
        return lower_case(e, env);
      case SExpr::Kind::List: {
        std::vector<ExprPtr> elems;
        for (const auto& a : e.args) elems.push_back(lower(*a, env));
        return build::list(std::move(elems));
      }
    }
    lower_error("unsupported expression", e.loc);
  }

 private:
  static ExprPtr apply_all(ExprPtr f, std::vector<ExprPtr> args) {
    for (auto& a : args) f = build::apply(std::move(f), std::move(a));
    return f;
  }

  ExprPtr head(const std::string& name, std::vector<ExprPtr> args, const Env& env, SourceLoc loc) {
    if (auto it = env.find(name); it != env.end()) return apply_all(build::var(it->second), std::move(args));
    std::string n = name == "success" ? std::string(kSuccess) : name;
    bool is_cons = false;
    int arity;
    if (auto a = sym_.function_arity(n)) {
      arity = *a;
    } else if (const ConsDecl* c = sym_.constructor(n)) {
      arity = c->arity;
      is_cons = true;
    } else {
      lower_error("unknown name `" + name + "`", loc);
    }
    const int given = static_cast<int>(args.size());
    if (given < arity) return build::part(n, arity - given, std::move(args));
    std::vector<ExprPtr> rest(args.begin() + arity, args.end());
    args.resize(arity);
    ExprPtr call = is_cons ? build::cons(n, std::move(args)) : build::call(n, std::move(args));
    return apply_all(std::move(call), std::move(rest));
  }

  ExprPtr lower_case(const SExpr& e, const Env& env) {
    ExprPtr scrut = lower(*e.args[0], env);
    std::vector<Branch> branches;
    for (const auto& alt : e.alts) {
      const SPat& p = alt.pattern;
      Env inner = env;
      Pattern pat;
      if (p.kind == SPat::Kind::Lit) {
        pat = Pattern::lit(p.value);
      } else if (p.kind == SPat::Kind::Con) {
        const ConsDecl* c = sym_.constructor(p.name);
        if (!c) lower_error("unknown constructor `" + p.name + "`", p.loc);
        if (c->arity != static_cast<int>(p.args.size()))
          lower_error("constructor `" + p.name + "` expects " + std::to_string(c->arity) +
                          " argument(s)",
                      p.loc);
        std::vector<VarId> vars;
        for (const auto& a : p.args) {
          if (!a.is_var_like())
            lower_error("nested patterns are not supported in case alternatives", a.loc);
          VarId id = names_.fresh(a.kind == SPat::Kind::Var ? a.name : "w");
          if (a.kind == SPat::Kind::Var) inner[a.name] = id;
          vars.push_back(id);
        }
        pat = Pattern::cons(p.name, std::move(vars));
      } else {
        lower_error("case alternatives need a constructor or literal pattern", p.loc);
      }
      branches.push_back({std::move(pat), lower(*alt.body, inner)});
    }
    return build::case_of(e.case_kind, std::move(scrut), std::move(branches));
  }

  VarNames& names_;
  const Symbols& sym_;
};

}  // namespace

ExprPtr lower_expr(const SExpr& e, const Env& env, VarNames& names, const Symbols& symbols) {
  return Lowerer(names, symbols).lower(e, env);
}

Goal parse_goal(std::string_view text, const Program& program) {
  std::vector<std::string> free_vars;
  SExprPtr e = parse_surface_expr(text, program.operators, &free_vars);
  VarNames names;
  Symbols symbols(program);
  Env env;
  std::vector<VarId> ids;
  for (const auto& v : free_vars) {
    VarId id = names.fresh(v);
    env[v] = id;
    ids.push_back(id);
  }
  ExprPtr body = lower_expr(*e, env, names, symbols);
  if (!ids.empty()) body = build::free(std::move(ids), std::move(body));
  return {std::move(body), names.names()};
}

}  // namespace flw
