#include "topo/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace topo {

const char* name_of(Dir d) {
  switch (d) {
    case Dir::None: return "";
    case Dir::Nord: return "nord";
    case Dir::MinusNord: return "-nord";
    case Dir::Est: return "est";
    case Dir::MinusEst: return "-est";
  }
  return "";
}

std::string neighbor_builtin_of(Dir d) {
  return std::string(name_of(d)) + "_nb";
}

ExprPtr e_var(std::string name, Loc loc) {
  auto e = std::make_shared<Expr>(ExprKind::Var);
  e->name = std::move(name);
  e->loc = loc;
  return e;
}

ExprPtr e_const(std::string name, Loc loc) {
  auto e = std::make_shared<Expr>(ExprKind::Const);
  e->name = std::move(name);
  e->loc = loc;
  return e;
}

ExprPtr e_lambda(std::string param, ExprPtr body, Loc loc) {
  auto e = std::make_shared<Expr>(ExprKind::Lambda);
  e->name = std::move(param);
  e->a = std::move(body);
  e->loc = loc;
  return e;
}

ExprPtr e_app(ExprPtr fn, ExprPtr arg, Loc loc) {
  auto e = std::make_shared<Expr>(ExprKind::App);
  e->a = std::move(fn);
  e->b = std::move(arg);
  e->loc = loc;
  return e;
}

ExprPtr e_let(std::string name, ExprPtr bound, ExprPtr body, Loc loc) {
  auto e = std::make_shared<Expr>(ExprKind::Let);
  e->name = std::move(name);
  e->a = std::move(bound);
  e->b = std::move(body);
  e->loc = loc;
  return e;
}

ExprPtr e_trans(std::vector<Rule> rules, Loc loc) {
  auto e = std::make_shared<Expr>(ExprKind::Trans);
  e->rules = std::move(rules);
  e->loc = loc;
  return e;
}

ExprPtr e_true() {
  static ExprPtr t = e_const("true");
  return t;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  Ident, Int, Float, String,
  LBrace, RBrace, LBracket, RBracket, LParen, RParen,
  Comma, Semi, Slash, FatArrow, ThinArrow,
  Eq, Lt, Gt, AndAnd, OrOr, Pipe,
  ColonColon, Colon, Dot, Backslash,
  Plus, Minus, Star, MinusNord, MinusEst,
  End
};

struct Token {
  Tok kind;
  std::string text;
  Loc loc;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto loc = [&] { return Loc{line, col}; };
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  auto push = [&](Tok k, size_t n) {
    out.push_back(Token{k, src.substr(i, n), loc()});
    advance(n);
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      if (j + 1 < src.size() && src[j] == '.' &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[j])))
          ++j;
        push(Tok::Float, j - i);
      } else {
        push(Tok::Int, j - i);
      }
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_'))
        ++j;
      push(Tok::Ident, j - i);
      continue;
    }
    if (c == '"') {
      size_t j = i + 1;
      std::string text = "\"";
      while (j < src.size() && src[j] != '"') {
        if (src[j] == '\\' && j + 1 < src.size()) {
          char e = src[j + 1];
          text += (e == 'n' ? '\n' : e);
          j += 2;
        } else {
          text += src[j];
          ++j;
        }
      }
      if (j >= src.size())
        throw SyntaxError("unterminated string literal", loc());
      text += "\"";
      out.push_back(Token{Tok::String, text, loc()});
      advance(j + 1 - i);
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    if (two('=', '>')) { push(Tok::FatArrow, 2); continue; }
    if (two('-', '>')) { push(Tok::ThinArrow, 2); continue; }
    if (two(':', ':')) { push(Tok::ColonColon, 2); continue; }
    if (two('&', '&')) { push(Tok::AndAnd, 2); continue; }
    if (two('|', '|')) { push(Tok::OrOr, 2); continue; }
    if (c == '-') {
      // Fuse the reversed direction constructors and their neighborhood
      // predicates: -nord, -est, -nord_nb, -est_nb.
      size_t j = i + 1;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_'))
        ++j;
      std::string word = src.substr(i + 1, j - i - 1);
      if (word == "nord") { push(Tok::MinusNord, j - i); continue; }
      if (word == "est") { push(Tok::MinusEst, j - i); continue; }
      if (word == "nord_nb" || word == "est_nb") {
        out.push_back(Token{Tok::Ident, "-" + word, loc()});
        advance(j - i);
        continue;
      }
      push(Tok::Minus, 1);
      continue;
    }
    switch (c) {
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case '[': push(Tok::LBracket, 1); continue;
      case ']': push(Tok::RBracket, 1); continue;
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case ';': push(Tok::Semi, 1); continue;
      case '/': push(Tok::Slash, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      case '<': push(Tok::Lt, 1); continue;
      case '>': push(Tok::Gt, 1); continue;
      case '|': push(Tok::Pipe, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '.': push(Tok::Dot, 1); continue;
      case '\\': push(Tok::Backslash, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '*': push(Tok::Star, 1); continue;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'",
                          loc());
    }
  }
  out.push_back(Token{Tok::End, "", loc()});
  return out;
}

const std::set<std::string>& reserved_binders() {
  static const std::set<std::string> r = {
      "let", "in",  "fun",  "as",   "self", "true",  "false",
      "int", "bool", "float", "string", "mod",  "nord", "est",
      "if",  "empty_seq", "empty_set", "empty_bag", "empty_grid",
      "nord_nb", "est_nb"};
  return r;
}

// Identifiers that act as infix operators and therefore terminate an
// application chain.
bool is_infix_word(const std::string& s) {
  return s == "nord" || s == "est" || s == "mod";
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::vector<Token> toks, Dialect dialect)
      : toks_(std::move(toks)), dialect_(dialect) {}

  ExprPtr run() {
    ExprPtr e = expr();
    expect(Tok::End, "end of input");
    check_self(e, 0);
    return e;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t n = 1) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  Token eat() { return toks_[pos_++]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool try_eat(Tok k) {
    if (at(k)) {
      ++pos_;
      return true;
    }
    return false;
  }
  Token expect(Tok k, const std::string& what) {
    if (!at(k))
      throw SyntaxError("expected " + what + ", found '" + cur().text + "'",
                        cur().loc);
    return eat();
  }

  ExprPtr expr() {
    if (at(Tok::Backslash)) {
      Loc loc = eat().loc;
      std::string p = binder();
      expect(Tok::Dot, "'.'");
      return e_lambda(p, expr(), loc);
    }
    if (at(Tok::Ident) && cur().text == "fun") {
      Loc loc = eat().loc;
      std::string p = binder();
      expect(Tok::ThinArrow, "'->'");
      return e_lambda(p, expr(), loc);
    }
    if (at(Tok::Ident) && cur().text == "let") {
      Loc loc = eat().loc;
      std::string n = binder();
      expect(Tok::Eq, "'='");
      ExprPtr bound = expr();
      if (!(at(Tok::Ident) && cur().text == "in"))
        throw SyntaxError("expected 'in'", cur().loc);
      eat();
      return e_let(n, bound, expr(), loc);
    }
    return cons_level();
  }

  std::string binder() {
    Token t = expect(Tok::Ident, "identifier");
    if (reserved_binders().count(t.text) || is_builtin_name(t.text))
      throw SyntaxError("'" + t.text + "' is reserved and cannot be bound",
                        t.loc);
    return t.text;
  }

  // ::, nord, -nord, est, -est — right-associative, loosest.
  ExprPtr cons_level() {
    ExprPtr l = or_level();
    std::string op;
    Loc loc = cur().loc;
    if (at(Tok::ColonColon)) op = "::";
    else if (at(Tok::MinusNord)) op = "-nord";
    else if (at(Tok::MinusEst)) op = "-est";
    else if (at(Tok::Ident) && (cur().text == "nord" || cur().text == "est"))
      op = cur().text;
    if (op.empty()) return l;
    eat();
    ExprPtr r = cons_level();
    return e_app(e_app(e_const(op, loc), l, loc), r, loc);
  }

  ExprPtr or_level() {
    ExprPtr l = cmp_level();
    while (at(Tok::AndAnd) || at(Tok::OrOr)) {
      std::string op = at(Tok::AndAnd) ? "&&" : "||";
      Loc loc = eat().loc;
      ExprPtr r = cmp_level();
      l = e_app(e_app(e_const(op, loc), l, loc), r, loc);
    }
    return l;
  }

  ExprPtr cmp_level() {
    ExprPtr l = add_level();
    while (at(Tok::Gt) || at(Tok::Lt) || at(Tok::Eq)) {
      std::string op = at(Tok::Gt) ? ">" : at(Tok::Lt) ? "<" : "=";
      Loc loc = eat().loc;
      ExprPtr r = add_level();
      l = e_app(e_app(e_const(op, loc), l, loc), r, loc);
    }
    return l;
  }

  ExprPtr add_level() {
    ExprPtr l = mul_level();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      std::string op = at(Tok::Plus) ? "+" : "-";
      Loc loc = eat().loc;
      ExprPtr r = mul_level();
      l = e_app(e_app(e_const(op, loc), l, loc), r, loc);
    }
    return l;
  }

  ExprPtr mul_level() {
    ExprPtr l = app_level();
    while (at(Tok::Star) || (at(Tok::Ident) && cur().text == "mod")) {
      std::string op = at(Tok::Star) ? "*" : "mod";
      Loc loc = eat().loc;
      ExprPtr r = app_level();
      l = e_app(e_app(e_const(op, loc), l, loc), r, loc);
    }
    return l;
  }

  bool starts_atom() const {
    switch (cur().kind) {
      case Tok::Int:
      case Tok::Float:
      case Tok::String:
      case Tok::LParen:
      case Tok::LBracket:
      case Tok::LBrace:
        return true;
      case Tok::Ident:
        return cur().text != "in" && cur().text != "as" &&
               !is_infix_word(cur().text) && cur().text != "let" &&
               cur().text != "fun";
      default:
        return false;
    }
  }

  ExprPtr app_level() {
    ExprPtr l = atom();
    while (starts_atom()) {
      Loc loc = cur().loc;
      l = e_app(l, atom(), loc);
    }
    return l;
  }

  ExprPtr atom() {
    Token t = cur();
    switch (t.kind) {
      case Tok::Int:
      case Tok::Float:
      case Tok::String:
        eat();
        return e_const(t.text, t.loc);
      case Tok::Ident: {
        eat();
        if (is_builtin_name(t.text)) return e_const(t.text, t.loc);
        return e_var(t.text, t.loc);
      }
      case Tok::LParen: {
        eat();
        ExprPtr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::LBracket:
        return seq_literal();
      case Tok::LBrace:
        return trans();
      default:
        throw SyntaxError("expected an expression, found '" + t.text + "'",
                          t.loc);
    }
  }

  // [e1, e2, ...] desugars to e1 :: ... :: empty_seq. Elements may be
  // separated by ',' or ';'.
  ExprPtr seq_literal() {
    Loc loc = expect(Tok::LBracket, "'['").loc;
    std::vector<ExprPtr> elems;
    if (!at(Tok::RBracket)) {
      elems.push_back(expr());
      while (try_eat(Tok::Comma) || try_eat(Tok::Semi)) elems.push_back(expr());
    }
    expect(Tok::RBracket, "']'");
    ExprPtr acc = e_const("empty_seq", loc);
    for (auto it = elems.rbegin(); it != elems.rend(); ++it)
      acc = e_app(e_app(e_const("::", loc), *it, loc), acc, loc);
    return acc;
  }

  ExprPtr trans() {
    Loc loc = expect(Tok::LBrace, "'{'").loc;
    std::vector<Rule> rules;
    rules.push_back(rule());
    while (try_eat(Tok::Semi)) rules.push_back(rule());
    expect(Tok::RBrace, "'}'");
    if (dialect_ == Dialect::Strong) {
      const Rule& last = rules.back();
      if (!is_catch_all(last.pattern))
        throw DialectError(
            "strong dialect requires a final catch-all rule (a single plain "
            "variable without guard)",
            last.loc);
    }
    return e_trans(std::move(rules), loc);
  }

  Rule rule() {
    Rule r;
    r.loc = cur().loc;
    r.pattern = pattern();
    expect(Tok::FatArrow, "'=>'");
    r.replacement = expr();
    return r;
  }

  Pattern pattern() {
    Pattern p;
    p.elements.push_back(element(Dir::None));
    while (true) {
      if (try_eat(Tok::Comma)) {
        p.elements.push_back(element(Dir::None));
        continue;
      }
      if (at(Tok::Pipe)) {
        Loc loc = eat().loc;
        Dir d;
        if (try_eat(Tok::MinusNord)) d = Dir::MinusNord;
        else if (try_eat(Tok::MinusEst)) d = Dir::MinusEst;
        else {
          Token w = expect(Tok::Ident, "direction name");
          if (w.text == "nord") d = Dir::Nord;
          else if (w.text == "est") d = Dir::Est;
          else throw SyntaxError("unknown direction '" + w.text + "'", w.loc);
        }
        expect(Tok::Gt, "'>'");
        ElemPattern e = element(d);
        if (e.kind == ElemKind::Star || e.kind == ElemKind::TypedStar)
          throw SyntaxError("direction tag cannot apply to a star element",
                            loc);
        p.elements.push_back(e);
        continue;
      }
      break;
    }
    if (try_eat(Tok::Slash)) p.guard = expr();

    if (dialect_ == Dialect::Strong) {
      for (const auto& e : p.elements)
        if (e.kind != ElemKind::Plain)
          throw DialectError(
              "typed and star patterns are not part of the strong dialect",
              e.loc);
    }
    // Patterns are linear.
    std::set<std::string> seen;
    for (const auto& e : p.elements)
      if (!seen.insert(e.var).second)
        throw SyntaxError("pattern variable '" + e.var + "' is bound twice",
                          e.loc);
    return p;
  }

  ElemPattern element(Dir dir) {
    ElemPattern e;
    e.dir_before = dir;
    e.loc = cur().loc;
    if (try_eat(Tok::Star)) {
      e.kind = ElemKind::Star;
      expect_as();
      e.var = binder();
      return e;
    }
    if (at(Tok::Ident) && base_from_name(cur().text) &&
        peek().kind == Tok::Star) {
      e.base = *base_from_name(eat().text);
      eat();  // '*'
      e.kind = ElemKind::TypedStar;
      expect_as();
      e.var = binder();
      return e;
    }
    e.var = binder();
    if (try_eat(Tok::Colon)) {
      Token b = expect(Tok::Ident, "base type");
      auto base = base_from_name(b.text);
      if (!base)
        throw SyntaxError("unknown base type '" + b.text + "'", b.loc);
      e.kind = ElemKind::Typed;
      e.base = *base;
    }
    return e;
  }

  void expect_as() {
    if (!(at(Tok::Ident) && cur().text == "as"))
      throw SyntaxError("expected 'as' after star pattern", cur().loc);
    eat();
  }

  // `self` may appear free only inside a transformation body.
  void check_self(const ExprPtr& e, int trans_depth) {
    switch (e->kind) {
      case ExprKind::Var:
        if (e->name == "self" && trans_depth == 0)
          throw SyntaxError("'self' may only appear inside a transformation",
                            e->loc);
        return;
      case ExprKind::Const:
        return;
      case ExprKind::Lambda:
        check_self(e->a, trans_depth);
        return;
      case ExprKind::App:
        check_self(e->a, trans_depth);
        check_self(e->b, trans_depth);
        return;
      case ExprKind::Let:
        check_self(e->a, trans_depth);
        check_self(e->b, trans_depth);
        return;
      case ExprKind::Trans:
        for (const auto& r : e->rules) {
          if (r.pattern.guard) check_self(r.pattern.guard, trans_depth + 1);
          check_self(r.replacement, trans_depth + 1);
        }
        return;
    }
  }

  std::vector<Token> toks_;
  Dialect dialect_;
  size_t pos_ = 0;
};

}  // namespace

ExprPtr parse(const std::string& source, Dialect dialect) {
  return Parser(lex(source), dialect).run();
}

// ---------------------------------------------------------------------------
// Direction desugaring

bool pattern_has_direction(const Pattern& p) {
  return std::any_of(p.elements.begin(), p.elements.end(),
                     [](const ElemPattern& e) { return e.dir_before != Dir::None; });
}

bool is_catch_all(const Pattern& p) {
  return p.elements.size() == 1 && p.elements[0].kind == ElemKind::Plain &&
         p.elements[0].dir_before == Dir::None && !p.guard;
}

Pattern desugar_direction(const Pattern& p) {
  if (!pattern_has_direction(p)) return p;
  Pattern out;
  std::vector<ExprPtr> conjuncts;
  for (size_t i = 0; i < p.elements.size(); ++i) {
    ElemPattern e = p.elements[i];
    if (e.dir_before != Dir::None) {
      Loc loc = e.loc;
      ExprPtr call = e_app(
          e_app(e_app(e_const(neighbor_builtin_of(e.dir_before), loc),
                      e_var("self", loc), loc),
                e_var(p.elements[i - 1].var, loc), loc),
          e_var(e.var, loc), loc);
      conjuncts.push_back(call);
      e.dir_before = Dir::None;
    }
    out.elements.push_back(e);
  }
  ExprPtr guard;
  for (const auto& c : conjuncts)
    guard = guard ? e_app(e_app(e_const("&&"), guard), c) : c;
  if (p.guard)
    guard = guard ? e_app(e_app(e_const("&&"), guard), p.guard) : p.guard;
  out.guard = guard;
  return out;
}

std::vector<std::string> pattern_vars(const Pattern& p) {
  std::vector<std::string> out;
  for (const auto& e : p.elements) out.push_back(e.var);
  return out;
}

// ---------------------------------------------------------------------------
// Pretty-printing

namespace {

struct OpInfo {
  int prec;
  bool right;
};

const std::map<std::string, OpInfo>& infix_ops() {
  // Higher binds tighter. Application is 6, atoms 7.
  static const std::map<std::string, OpInfo> ops = {
      {"::", {1, true}},  {"nord", {1, true}}, {"-nord", {1, true}},
      {"est", {1, true}}, {"-est", {1, true}}, {"&&", {2, false}},
      {"||", {2, false}}, {">", {3, false}},   {"<", {3, false}},
      {"=", {3, false}},  {"+", {4, false}},   {"-", {4, false}},
      {"*", {5, false}},  {"mod", {5, false}}};
  return ops;
}

bool as_infix(const ExprPtr& e, std::string& op, ExprPtr& l, ExprPtr& r) {
  if (e->kind != ExprKind::App) return false;
  const ExprPtr& f = e->a;
  if (f->kind != ExprKind::App) return false;
  const ExprPtr& g = f->a;
  if (g->kind != ExprKind::Const || !infix_ops().count(g->name)) return false;
  op = g->name;
  l = f->b;
  r = e->b;
  return true;
}

// Recognize e1 :: e2 :: ... :: empty_seq chains for [..] sugar.
bool as_seq_literal(const ExprPtr& e, std::vector<ExprPtr>& elems) {
  ExprPtr cur = e;
  while (true) {
    if (cur->kind == ExprKind::Const && cur->name == "empty_seq")
      return !elems.empty();
    std::string op;
    ExprPtr l, r;
    if (!as_infix(cur, op, l, r) || op != "::") return false;
    elems.push_back(l);
    cur = r;
  }
}

void print_expr(std::ostringstream& os, const ExprPtr& e, int prec);

void print_pattern(std::ostringstream& os, const Pattern& p) {
  for (size_t i = 0; i < p.elements.size(); ++i) {
    const auto& el = p.elements[i];
    if (i) {
      if (el.dir_before == Dir::None)
        os << ", ";
      else
        os << " |" << name_of(el.dir_before) << "> ";
    }
    switch (el.kind) {
      case ElemKind::Plain:
        os << el.var;
        break;
      case ElemKind::Typed:
        os << el.var << ":" << name_of(el.base);
        break;
      case ElemKind::Star:
        os << "* as " << el.var;
        break;
      case ElemKind::TypedStar:
        os << name_of(el.base) << "* as " << el.var;
        break;
    }
  }
  if (p.guard) {
    os << " / ";
    bool atom = p.guard->kind == ExprKind::Var || p.guard->kind == ExprKind::Const;
    if (!atom) os << "(";
    print_expr(os, p.guard, 0);
    if (!atom) os << ")";
  }
}

void print_expr(std::ostringstream& os, const ExprPtr& e, int prec) {
  auto paren = [&](int mine, auto&& body) {
    if (prec > mine) os << "(";
    body();
    if (prec > mine) os << ")";
  };
  std::vector<ExprPtr> elems;
  if (as_seq_literal(e, elems)) {
    os << "[";
    for (size_t i = 0; i < elems.size(); ++i) {
      if (i) os << ", ";
      print_expr(os, elems[i], 0);
    }
    os << "]";
    return;
  }
  std::string op;
  ExprPtr l, r;
  if (as_infix(e, op, l, r)) {
    OpInfo info = infix_ops().at(op);
    paren(info.prec, [&] {
      print_expr(os, l, info.right ? info.prec + 1 : info.prec);
      os << " " << op << " ";
      print_expr(os, r, info.right ? info.prec : info.prec + 1);
    });
    return;
  }
  switch (e->kind) {
    case ExprKind::Var:
    case ExprKind::Const:
      os << e->name;
      break;
    case ExprKind::Lambda:
      paren(0, [&] {
        os << "\\" << e->name << ". ";
        print_expr(os, e->a, 0);
      });
      break;
    case ExprKind::App:
      paren(6, [&] {
        print_expr(os, e->a, 6);
        os << " ";
        print_expr(os, e->b, 7);
      });
      break;
    case ExprKind::Let:
      paren(0, [&] {
        os << "let " << e->name << " = ";
        print_expr(os, e->a, 0);
        os << " in ";
        print_expr(os, e->b, 0);
      });
      break;
    case ExprKind::Trans: {
      os << "{";
      for (size_t i = 0; i < e->rules.size(); ++i) {
        if (i) os << "; ";
        print_pattern(os, e->rules[i].pattern);
        os << " => ";
        print_expr(os, e->rules[i].replacement, 0);
      }
      os << "}";
      break;
    }
  }
}

}  // namespace

std::string pretty(const ExprPtr& e) {
  std::ostringstream os;
  print_expr(os, e, 0);
  return os.str();
}

std::string pretty(const Pattern& p) {
  std::ostringstream os;
  print_pattern(os, p);
  return os.str();
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

bool alpha_eq_expr(const ExprPtr& a, const ExprPtr& b,
                   std::map<std::string, std::string>& env) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Const:
      return a->name == b->name;
    case ExprKind::Var: {
      auto it = env.find(a->name);
      if (it != env.end()) return it->second == b->name;
      return a->name == b->name;
    }
    case ExprKind::Lambda: {
      auto saved = env;
      env[a->name] = b->name;
      bool ok = alpha_eq_expr(a->a, b->a, env);
      env = saved;
      return ok;
    }
    case ExprKind::App:
      return alpha_eq_expr(a->a, b->a, env) && alpha_eq_expr(a->b, b->b, env);
    case ExprKind::Let: {
      if (!alpha_eq_expr(a->a, b->a, env)) return false;
      auto saved = env;
      env[a->name] = b->name;
      bool ok = alpha_eq_expr(a->b, b->b, env);
      env = saved;
      return ok;
    }
    case ExprKind::Trans: {
      if (a->rules.size() != b->rules.size()) return false;
      for (size_t i = 0; i < a->rules.size(); ++i) {
        const Rule& ra = a->rules[i];
        const Rule& rb = b->rules[i];
        if (ra.pattern.elements.size() != rb.pattern.elements.size())
          return false;
        auto saved = env;
        for (size_t j = 0; j < ra.pattern.elements.size(); ++j) {
          const auto& ea = ra.pattern.elements[j];
          const auto& eb = rb.pattern.elements[j];
          if (ea.kind != eb.kind || ea.dir_before != eb.dir_before)
            return false;
          if ((ea.kind == ElemKind::Typed || ea.kind == ElemKind::TypedStar) &&
              ea.base != eb.base)
            return false;
          env[ea.var] = eb.var;
        }
        bool ok = true;
        if (static_cast<bool>(ra.pattern.guard) !=
            static_cast<bool>(rb.pattern.guard))
          ok = false;
        if (ok && ra.pattern.guard)
          ok = alpha_eq_expr(ra.pattern.guard, rb.pattern.guard, env);
        if (ok) ok = alpha_eq_expr(ra.replacement, rb.replacement, env);
        env = saved;
        if (!ok) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace

bool alpha_equal(const ExprPtr& a, const ExprPtr& b) {
  std::map<std::string, std::string> env;
  return alpha_eq_expr(a, b, env);
}

}  // namespace topo
