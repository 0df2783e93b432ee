#pragma once

// Specification language: declarations of env/sys variables plus assumption
// and guarantee constraints classified as initial, safety (G ...) or justice
// (GF ...). Line-oriented grammar with ';' terminators.
//
//   spec       := (decl | constraint)* ;
//   decl       := ("env"|"sys") type IDENT ";" ;
//   type       := "boolean" | "boolean[" INT "]" | "Int(" INT ".." INT ")" ;
//   constraint := ("asm"|"gar") [IDENT ":"] tempexpr ";" ;
//   tempexpr   := expr | "G" expr | "GF" expr ;
//
// Operator precedence, loosest first: <->, ->, |, &, !, comparisons, +/-.

#include <cctype>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace gr1kit {

enum class Owner { Env, Sys };
enum class TypeKind { Bool, BoolArray, IntRange };
enum class ConstraintKind { Asm, Gar };
enum class Temporal { Init, Safety, Justice };

struct VarDecl {
  Owner owner = Owner::Env;
  std::string name;
  TypeKind kind = TypeKind::Bool;
  int array_len = 0;  // BoolArray
  long lo = 0, hi = 0;  // IntRange
  int line = 0, col = 0;
};

enum class ExprOp {
  VarRef,   // name [, index for array element]
  IntLit,   // value
  BoolLit,  // value (0/1)
  Next,     // lhs = variable reference
  Not,      // lhs
  And, Or, Implies, Iff,  // lhs, rhs
  Cmp,      // lhs, rhs, cmp
  Add, Sub  // lhs, rhs (int terms)
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprOp op;
  CmpOp cmp = CmpOp::Eq;
  std::string name;
  int index = -1;  // array element, -1 = scalar reference
  long value = 0;
  ExprPtr lhs, rhs;
  int line = 0, col = 0;
};

struct Constraint {
  ConstraintKind kind = ConstraintKind::Gar;
  Temporal temporal = Temporal::Init;
  std::string name;  // synthetic if not given in the source
  ExprPtr expr;
  int line = 0, col = 0;
};

struct Specification {
  std::vector<VarDecl> decls;
  std::vector<Constraint> constraints;  // textual order, load-bearing
};

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                           std::to_string(col)),
        line(line), col(col) {}
  int line, col;
};

namespace speclang_detail {

struct Token {
  enum Kind {
    Ident, Int, Punct, End
  } kind = End;
  std::string text;
  long value = 0;
  int line = 1, col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    skip_ws();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::End;
      tok_.text.clear();
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        bump();
      tok_.kind = Token::Ident;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long v = 0;
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        v = v * 10 + (src_[pos_] - '0');
        bump();
      }
      tok_.kind = Token::Int;
      tok_.value = v;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    // Multi-char operators first.
    static const char* ops[] = {"<->", "->", "..", "!=", "<=", ">=", nullptr};
    for (int i = 0; ops[i]; ++i) {
      std::size_t n = std::char_traits<char>::length(ops[i]);
      if (src_.compare(pos_, n, ops[i]) == 0) {
        tok_.kind = Token::Punct;
        tok_.text = ops[i];
        for (std::size_t k = 0; k < n; ++k) bump();
        return;
      }
    }
    static const std::string singles = ";:()[]&|!=<>+-";
    if (singles.find(c) != std::string::npos) {
      tok_.kind = Token::Punct;
      tok_.text = std::string(1, c);
      bump();
      return;
    }
    throw ParseError(std::string("lexical error: unexpected character '") + c +
                         "'",
                     line_, col_);
  }

  void skip_ws() {
    for (;;) {
      while (pos_ < src_.size() &&
             std::isspace(static_cast<unsigned char>(src_[pos_])))
        bump();
      if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
        continue;
      }
      break;
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

inline bool is_keyword(const std::string& s) {
  static const std::unordered_set<std::string> kw = {
      "env", "sys", "asm", "gar", "G", "GF", "next", "boolean", "Int",
      "true", "false"};
  return kw.count(s) > 0;
}

class Parser {
public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Specification parse() {
    Specification spec;
    int gar_count = 0, asm_count = 0;
    while (lex_.peek().kind != Token::End) {
      const Token& t = lex_.peek();
      if (t.kind != Token::Ident)
        throw ParseError("expected declaration or constraint", t.line, t.col);
      if (t.text == "env" || t.text == "sys") {
        spec.decls.push_back(parse_decl());
      } else if (t.text == "asm" || t.text == "gar") {
        int ordinal = t.text == "gar" ? ++gar_count : ++asm_count;
        spec.constraints.push_back(parse_constraint(ordinal));
      } else {
        throw ParseError("expected 'env', 'sys', 'asm' or 'gar', got '" +
                             t.text + "'",
                         t.line, t.col);
      }
    }
    validate(spec);
    return spec;
  }

private:
  VarDecl parse_decl() {
    Token kw = lex_.take();
    VarDecl d;
    d.owner = kw.text == "env" ? Owner::Env : Owner::Sys;
    d.line = kw.line;
    d.col = kw.col;
    Token ty = expect_ident("type");
    if (ty.text == "boolean") {
      if (lex_.peek().kind == Token::Punct && lex_.peek().text == "[") {
        lex_.take();
        Token len = expect_int("array length");
        expect_punct("]");
        if (len.value < 1)
          throw ParseError("boolean array length must be >= 1", len.line,
                           len.col);
        d.kind = TypeKind::BoolArray;
        d.array_len = static_cast<int>(len.value);
      } else {
        d.kind = TypeKind::Bool;
      }
    } else if (ty.text == "Int") {
      expect_punct("(");
      Token lo = expect_int("lower bound");
      expect_punct("..");
      Token hi = expect_int("upper bound");
      expect_punct(")");
      if (hi.value < lo.value)
        throw ParseError("integer range upper bound below lower bound",
                         hi.line, hi.col);
      d.kind = TypeKind::IntRange;
      d.lo = lo.value;
      d.hi = hi.value;
    } else {
      throw ParseError("unknown type '" + ty.text + "'", ty.line, ty.col);
    }
    Token name = expect_ident("variable name");
    if (is_keyword(name.text))
      throw ParseError("keyword '" + name.text + "' cannot name a variable",
                       name.line, name.col);
    d.name = name.text;
    expect_punct(";");
    return d;
  }

  Constraint parse_constraint(int ordinal) {
    Token kw = lex_.take();
    Constraint c;
    c.kind = kw.text == "asm" ? ConstraintKind::Asm : ConstraintKind::Gar;
    c.line = kw.line;
    c.col = kw.col;
    // Optional label "name :". Needs one token of lookahead past an ident.
    if (lex_.peek().kind == Token::Ident && !is_keyword(lex_.peek().text)) {
      Token maybe = lex_.take();
      if (lex_.peek().kind == Token::Punct && lex_.peek().text == ":") {
        lex_.take();
        c.name = maybe.text;
      } else {
        pushed_back_ = maybe;
      }
    }
    if (c.name.empty())
      c.name = (c.kind == ConstraintKind::Gar ? "gar_" : "asm_") +
               std::to_string(ordinal);
    c.temporal = Temporal::Init;
    if (!pushed_back_ && lex_.peek().kind == Token::Ident) {
      if (lex_.peek().text == "G") {
        lex_.take();
        c.temporal = Temporal::Safety;
      } else if (lex_.peek().text == "GF") {
        lex_.take();
        c.temporal = Temporal::Justice;
      }
    }
    c.expr = parse_iff();
    expect_punct(";");
    return c;
  }

  ExprPtr parse_iff() {
    ExprPtr e = parse_implies();
    while (at_punct("<->")) {
      Token op = lex_.take();
      ExprPtr rhs = parse_implies();
      e = mk(ExprOp::Iff, op, e, rhs);
    }
    return e;
  }

  ExprPtr parse_implies() {
    ExprPtr e = parse_or();
    if (at_punct("->")) {
      Token op = lex_.take();
      ExprPtr rhs = parse_implies();  // right associative
      e = mk(ExprOp::Implies, op, e, rhs);
    }
    return e;
  }

  ExprPtr parse_or() {
    ExprPtr e = parse_and();
    while (at_punct("|")) {
      Token op = lex_.take();
      e = mk(ExprOp::Or, op, e, parse_and());
    }
    return e;
  }

  ExprPtr parse_and() {
    ExprPtr e = parse_unary();
    while (at_punct("&")) {
      Token op = lex_.take();
      e = mk(ExprOp::And, op, e, parse_unary());
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (at_punct("!")) {
      Token op = lex_.take();
      ExprPtr e = parse_unary();
      return mk(ExprOp::Not, op, e, nullptr);
    }
    return parse_comparison();
  }

  ExprPtr parse_comparison() {
    ExprPtr e = parse_sum();
    static const std::pair<const char*, CmpOp> cmps[] = {
        {"!=", CmpOp::Ne}, {"<=", CmpOp::Le}, {">=", CmpOp::Ge},
        {"=", CmpOp::Eq},  {"<", CmpOp::Lt},  {">", CmpOp::Gt}};
    for (const auto& [txt, op] : cmps) {
      if (at_punct(txt)) {
        Token t = lex_.take();
        ExprPtr rhs = parse_sum();
        ExprPtr node = mk(ExprOp::Cmp, t, e, rhs);
        const_cast<Expr*>(node.get())->cmp = op;
        return node;
      }
    }
    return e;
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_primary();
    for (;;) {
      if (at_punct("+")) {
        Token t = lex_.take();
        e = mk(ExprOp::Add, t, e, parse_primary());
      } else if (at_punct("-")) {
        Token t = lex_.take();
        e = mk(ExprOp::Sub, t, e, parse_primary());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_primary() {
    if (pushed_back_) {
      Token t = *pushed_back_;
      pushed_back_.reset();
      return finish_varref(t);
    }
    Token t = lex_.take();
    if (t.kind == Token::Punct && t.text == "(") {
      ExprPtr e = parse_iff();
      expect_punct(")");
      return e;
    }
    if (t.kind == Token::Int) {
      ExprPtr e = mk(ExprOp::IntLit, t, nullptr, nullptr);
      const_cast<Expr*>(e.get())->value = t.value;
      return e;
    }
    if (t.kind == Token::Ident) {
      if (t.text == "true" || t.text == "false") {
        ExprPtr e = mk(ExprOp::BoolLit, t, nullptr, nullptr);
        const_cast<Expr*>(e.get())->value = t.text == "true" ? 1 : 0;
        return e;
      }
      if (t.text == "next") {
        expect_punct("(");
        Token inner = lex_.take();
        if (inner.kind == Token::Ident && inner.text == "next")
          throw ParseError("nested next(next(...)) is not allowed", inner.line,
                           inner.col);
        if (inner.kind != Token::Ident || is_keyword(inner.text))
          throw ParseError("next(...) takes a variable reference", inner.line,
                           inner.col);
        ExprPtr ref = finish_varref(inner);
        expect_punct(")");
        ExprPtr e = mk(ExprOp::Next, t, ref, nullptr);
        return e;
      }
      if (is_keyword(t.text))
        throw ParseError("unexpected keyword '" + t.text + "'", t.line, t.col);
      return finish_varref(t);
    }
    throw ParseError("unexpected token '" + t.text + "'", t.line, t.col);
  }

  ExprPtr finish_varref(const Token& name) {
    ExprPtr e = mk(ExprOp::VarRef, name, nullptr, nullptr);
    Expr* m = const_cast<Expr*>(e.get());
    m->name = name.text;
    if (at_punct("[")) {
      lex_.take();
      Token idx = expect_int("array index");
      expect_punct("]");
      m->index = static_cast<int>(idx.value);
    }
    return e;
  }

  bool at_punct(const std::string& p) const {
    return !pushed_back_ && lex_.peek().kind == Token::Punct &&
           lex_.peek().text == p;
  }

  Token expect_ident(const std::string& what) {
    Token t = lex_.take();
    if (t.kind != Token::Ident)
      throw ParseError("expected " + what, t.line, t.col);
    return t;
  }
  Token expect_int(const std::string& what) {
    Token t = lex_.take();
    if (t.kind != Token::Int)
      throw ParseError("expected " + what, t.line, t.col);
    return t;
  }
  void expect_punct(const std::string& p) {
    Token t = lex_.take();
    if (t.kind != Token::Punct || t.text != p)
      throw ParseError("expected '" + p + "'", t.line, t.col);
  }

  ExprPtr mk(ExprOp op, const Token& t, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    e->line = t.line;
    e->col = t.col;
    return e;
  }

  // -- static checks ---------------------------------------------------------

  enum class ValType { Bool, Int };

  void validate(const Specification& spec) {
    vars_.clear();
    for (const VarDecl& d : spec.decls) {
      if (vars_.count(d.name))
        throw ParseError("duplicate variable name '" + d.name + "'", d.line,
                         d.col);
      vars_.emplace(d.name, &d);
    }
    std::unordered_set<std::string> cnames;
    for (const Constraint& c : spec.constraints) {
      if (!cnames.insert(c.name).second)
        throw ParseError("duplicate constraint name '" + c.name + "'", c.line,
                         c.col);
      check_expr(*c.expr, c);
    }
  }

  ValType check_expr(const Expr& e, const Constraint& ctx) {
    switch (e.op) {
      case ExprOp::VarRef:
        return check_varref(e, ctx, /*under_next=*/false);
      case ExprOp::IntLit:
        return ValType::Int;
      case ExprOp::BoolLit:
        return ValType::Bool;
      case ExprOp::Next: {
        if (ctx.temporal != Temporal::Safety)
          throw ParseError("next(...) is only allowed in safety constraints",
                           e.line, e.col);
        return check_varref(*e.lhs, ctx, /*under_next=*/true);
      }
      case ExprOp::Not:
        require(check_expr(*e.lhs, ctx) == ValType::Bool, e,
                "operand of ! must be boolean");
        return ValType::Bool;
      case ExprOp::And:
      case ExprOp::Or:
      case ExprOp::Implies:
      case ExprOp::Iff:
        require(check_expr(*e.lhs, ctx) == ValType::Bool, e,
                "operand must be boolean");
        require(check_expr(*e.rhs, ctx) == ValType::Bool, e,
                "operand must be boolean");
        return ValType::Bool;
      case ExprOp::Cmp: {
        ValType l = check_expr(*e.lhs, ctx);
        ValType r = check_expr(*e.rhs, ctx);
        require(l == r, e, "comparison mixes integer and boolean terms");
        if (l == ValType::Bool)
          require(e.cmp == CmpOp::Eq || e.cmp == CmpOp::Ne, e,
                  "only = and != compare booleans");
        return ValType::Bool;
      }
      case ExprOp::Add:
      case ExprOp::Sub:
        require(check_expr(*e.lhs, ctx) == ValType::Int, e,
                "arithmetic needs integer terms");
        require(check_expr(*e.rhs, ctx) == ValType::Int, e,
                "arithmetic needs integer terms");
        return ValType::Int;
    }
    throw ParseError("malformed expression", e.line, e.col);
  }

  ValType check_varref(const Expr& e, const Constraint& ctx, bool under_next) {
    auto it = vars_.find(e.name);
    if (it == vars_.end())
      throw ParseError("unknown identifier '" + e.name + "'", e.line, e.col);
    const VarDecl& d = *it->second;
    if (under_next && ctx.kind == ConstraintKind::Asm &&
        d.owner == Owner::Sys)
      throw ParseError("assumptions may apply next(...) only to env variables",
                       e.line, e.col);
    if (ctx.kind == ConstraintKind::Asm && ctx.temporal == Temporal::Init &&
        d.owner == Owner::Sys)
      throw ParseError("initial assumptions may refer only to env variables",
                       e.line, e.col);
    switch (d.kind) {
      case TypeKind::Bool:
        if (e.index >= 0)
          throw ParseError("'" + e.name + "' is not an array", e.line, e.col);
        return ValType::Bool;
      case TypeKind::BoolArray:
        if (e.index < 0)
          throw ParseError("array '" + e.name + "' needs an index", e.line,
                           e.col);
        if (e.index >= d.array_len)
          throw ParseError("index out of bounds for '" + e.name + "'", e.line,
                           e.col);
        return ValType::Bool;
      case TypeKind::IntRange:
        if (e.index >= 0)
          throw ParseError("'" + e.name + "' is not an array", e.line, e.col);
        return ValType::Int;
    }
    throw ParseError("bad declaration", e.line, e.col);
  }

  static void require(bool ok, const Expr& e, const std::string& msg) {
    if (!ok) throw ParseError(msg, e.line, e.col);
  }

  Lexer lex_;
  std::optional<Token> pushed_back_;
  std::unordered_map<std::string, const VarDecl*> vars_;
};

}  // namespace speclang_detail

inline Specification parse_spec(const std::string& text) {
  return speclang_detail::Parser(text).parse();
}

// Appends one trivially-true justice assumption and/or guarantee when a side
// has none; the fixed-point loops need at least one of each. Everything else
// defaults to true at compile time.
inline Specification default_completion(const Specification& spec) {
  bool has_je = false, has_js = false;
  for (const Constraint& c : spec.constraints) {
    if (c.temporal != Temporal::Justice) continue;
    (c.kind == ConstraintKind::Asm ? has_je : has_js) = true;
  }
  if (has_je && has_js) return spec;
  Specification out = spec;
  auto push_true = [&out](ConstraintKind kind, const char* name) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::BoolLit;
    e->value = 1;
    Constraint c;
    c.kind = kind;
    c.temporal = Temporal::Justice;
    c.name = name;
    c.expr = e;
    out.constraints.push_back(c);
  };
  if (!has_je) push_true(ConstraintKind::Asm, "asm_justice_true");
  if (!has_js) push_true(ConstraintKind::Gar, "gar_justice_true");
  return out;
}

// -- pretty printing ----------------------------------------------------------

namespace speclang_detail {

inline int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Iff: return 0;
    case ExprOp::Implies: return 1;
    case ExprOp::Or: return 2;
    case ExprOp::And: return 3;
    case ExprOp::Not: return 4;
    case ExprOp::Cmp: return 5;
    case ExprOp::Add:
    case ExprOp::Sub: return 6;
    default: return 7;
  }
}

inline void print_expr(const Expr& e, std::ostringstream& os, int parent_prec) {
  int prec = precedence(e.op);
  bool paren = prec < parent_prec;
  if (paren) os << "(";
  switch (e.op) {
    case ExprOp::VarRef:
      os << e.name;
      if (e.index >= 0) os << "[" << e.index << "]";
      break;
    case ExprOp::IntLit: os << e.value; break;
    case ExprOp::BoolLit: os << (e.value ? "true" : "false"); break;
    case ExprOp::Next:
      os << "next(";
      print_expr(*e.lhs, os, 0);
      os << ")";
      break;
    case ExprOp::Not:
      os << "!";
      print_expr(*e.lhs, os, prec + 1);
      break;
    case ExprOp::And:
    case ExprOp::Or:
    case ExprOp::Implies:
    case ExprOp::Iff: {
      const char* sym = e.op == ExprOp::And ? " & "
                        : e.op == ExprOp::Or ? " | "
                        : e.op == ExprOp::Implies ? " -> " : " <-> ";
      print_expr(*e.lhs, os, e.op == ExprOp::Implies ? prec + 1 : prec);
      os << sym;
      print_expr(*e.rhs, os, e.op == ExprOp::Implies ? prec : prec + 1);
      break;
    }
    case ExprOp::Cmp: {
      static const char* syms[] = {"=", "!=", "<", "<=", ">", ">="};
      print_expr(*e.lhs, os, prec + 1);
      os << " " << syms[static_cast<int>(e.cmp)] << " ";
      print_expr(*e.rhs, os, prec + 1);
      break;
    }
    case ExprOp::Add:
    case ExprOp::Sub:
      print_expr(*e.lhs, os, prec);
      os << (e.op == ExprOp::Add ? " + " : " - ");
      print_expr(*e.rhs, os, prec + 1);
      break;
  }
  if (paren) os << ")";
}

}  // namespace speclang_detail

inline std::string pretty_print(const Specification& spec) {
  std::ostringstream os;
  for (const VarDecl& d : spec.decls) {
    os << (d.owner == Owner::Env ? "env " : "sys ");
    switch (d.kind) {
      case TypeKind::Bool: os << "boolean"; break;
      case TypeKind::BoolArray: os << "boolean[" << d.array_len << "]"; break;
      case TypeKind::IntRange: os << "Int(" << d.lo << ".." << d.hi << ")"; break;
    }
    os << " " << d.name << ";\n";
  }
  for (const Constraint& c : spec.constraints) {
    os << (c.kind == ConstraintKind::Asm ? "asm " : "gar ");
    os << c.name << ": ";
    if (c.temporal == Temporal::Safety) os << "G ";
    if (c.temporal == Temporal::Justice) os << "GF ";
    speclang_detail::print_expr(*c.expr, os, 0);
    os << ";\n";
  }
  return os.str();
}

// Structural equality, used by round-trip tests and trace bookkeeping.
inline bool expr_equal(const Expr& a, const Expr& b) {
  if (a.op != b.op || a.cmp != b.cmp || a.name != b.name ||
      a.index != b.index || a.value != b.value)
    return false;
  if ((a.lhs == nullptr) != (b.lhs == nullptr)) return false;
  if ((a.rhs == nullptr) != (b.rhs == nullptr)) return false;
  if (a.lhs && !expr_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !expr_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

inline bool spec_equal(const Specification& a, const Specification& b) {
  if (a.decls.size() != b.decls.size() ||
      a.constraints.size() != b.constraints.size())
    return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i) {
    const VarDecl &x = a.decls[i], &y = b.decls[i];
    if (x.owner != y.owner || x.name != y.name || x.kind != y.kind ||
        x.array_len != y.array_len || x.lo != y.lo || x.hi != y.hi)
      return false;
  }
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    const Constraint &x = a.constraints[i], &y = b.constraints[i];
    if (x.kind != y.kind || x.temporal != y.temporal || x.name != y.name)
      return false;
    if (!expr_equal(*x.expr, *y.expr)) return false;
  }
  return true;
}

}  // namespace gr1kit
