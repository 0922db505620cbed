// Copyright 2026 The Aspen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aspen/asp/parser.h"

#include <cctype>
#include <functional>
#include <set>

namespace aspen::asp {
namespace {

enum class Tok {
  End, Ident, Var, Number, String, LParen, RParen, LBrace, RBrace, LBracket,
  RBracket, Comma, Semi, Colon, Dot, DotDot, If, WeakIf, Not, Plus, Minus,
  Star, Bar, At, Eq, Neq, Lt, Leq, Gt, Geq, Const, Count, Anon
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int64_t num = 0;
  int line = 1, col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skipWs();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) adv();
      t.kind = Tok::Number;
      t.num = std::stoll(src_.substr(start, pos_ - start));
      return t;
    }
    if (c == '_' || std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (src_[pos_] == '_' || src_[pos_] == '\'' ||
              std::isalnum(static_cast<unsigned char>(src_[pos_]))))
        adv();
      t.text = src_.substr(start, pos_ - start);
      if (t.text == "not") t.kind = Tok::Not;
      else if (t.text == "_") t.kind = Tok::Anon;
      else if (t.text[0] == '_' || std::isupper(static_cast<unsigned char>(t.text[0])))
        t.kind = Tok::Var;
      else t.kind = Tok::Ident;
      return t;
    }
    if (c == '"') {
      adv();
      std::string s;
      while (pos_ < src_.size() && src_[pos_] != '"') {
        if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) adv();
        s += src_[pos_];
        adv();
      }
      if (pos_ >= src_.size()) fail("unterminated string");
      adv();
      t.kind = Tok::String;
      t.text = std::move(s);
      return t;
    }
    if (c == '#') {
      size_t start = pos_;
      adv();
      while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) adv();
      std::string kw = src_.substr(start, pos_ - start);
      if (kw == "#const") { t.kind = Tok::Const; return t; }
      if (kw == "#count") { t.kind = Tok::Count; return t; }
      fail("unsupported directive '" + kw + "' (subset supports #const and #count only)");
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
    };
    if (two(':', '-')) { adv(); adv(); t.kind = Tok::If; return t; }
    if (two(':', '~')) { adv(); adv(); t.kind = Tok::WeakIf; return t; }
    if (two('.', '.')) { adv(); adv(); t.kind = Tok::DotDot; return t; }
    if (two('!', '=')) { adv(); adv(); t.kind = Tok::Neq; return t; }
    if (two('<', '=')) { adv(); adv(); t.kind = Tok::Leq; return t; }
    if (two('>', '=')) { adv(); adv(); t.kind = Tok::Geq; return t; }
    adv();
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case '[': t.kind = Tok::LBracket; return t;
      case ']': t.kind = Tok::RBracket; return t;
      case ',': t.kind = Tok::Comma; return t;
      case ';': t.kind = Tok::Semi; return t;
      case ':': t.kind = Tok::Colon; return t;
      case '.': t.kind = Tok::Dot; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '|': t.kind = Tok::Bar; return t;
      case '@': t.kind = Tok::At; return t;
      case '=': t.kind = Tok::Eq; return t;
      case '<': t.kind = Tok::Lt; return t;
      case '>': t.kind = Tok::Gt; return t;
      default: fail(std::string("unexpected character '") + c + "'");
    }
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

private:
  void adv() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skipWs() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        adv();
      } else if (c == '%' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        adv();
        adv();
        while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '%')) adv();
        if (pos_ + 1 >= src_.size()) fail("unterminated block comment");
        adv();
        adv();
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') adv();
      } else {
        break;
      }
    }
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
public:
  Parser(const std::string& text, std::string name) : lex_(text) {
    prog_.name = std::move(name);
    advance();
  }

  Program run() {
    while (cur_.kind != Tok::End) statement();
    return std::move(prog_);
  }

private:
  void advance() { cur_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, cur_.line, cur_.col); }

  bool accept(Tok k) {
    if (cur_.kind != k) return false;
    advance();
    return true;
  }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) fail(std::string("expected ") + what);
    advance();
  }

  Tok peekKind() {
    Lexer copy = lex_;
    return copy.next().kind;
  }

  void statement() {
    anonCounter_ = 0;
    int line = cur_.line;
    if (accept(Tok::Const)) {
      if (cur_.kind != Tok::Ident) fail("expected constant name after #const");
      std::string name = cur_.text;
      advance();
      expect(Tok::Eq, "'='");
      Term value = parseTerm();
      if (!value.isGround()) fail("#const value must be ground");
      expect(Tok::Dot, "'.'");
      if (prog_.constants.count(name)) fail("redefinition of constant '" + name + "'");
      prog_.constants.emplace(name, std::move(value));
      return;
    }
    Rule r;
    r.line = line;
    if (accept(Tok::If)) {
      r.kind = RuleKind::Constraint;
      r.body = parseBody();
      expect(Tok::Dot, "'.'");
      addRule(std::move(r), {});
      return;
    }
    if (accept(Tok::WeakIf)) {
      r.kind = RuleKind::Weak;
      r.body = parseBody();
      expect(Tok::Dot, "'.'");
      expect(Tok::LBracket, "'['");
      r.weight = parseTerm();
      if (accept(Tok::At)) r.level = parseTerm();
      else r.level = Term::number(0); // "@level" absent -> level 0
      while (accept(Tok::Comma)) r.tuple.push_back(parseTerm());
      expect(Tok::RBracket, "']'");
      accept(Tok::Dot); // tolerated after ']'
      addRule(std::move(r), {});
      return;
    }
    std::vector<std::vector<Term>> pools; // per-head-literal alternatives
    if (cur_.kind == Tok::LBrace || startsChoiceBound()) {
      r.kind = RuleKind::Choice;
      if (cur_.kind != Tok::LBrace) r.choice.lower = parseTerm();
      expect(Tok::LBrace, "'{'");
      if (cur_.kind != Tok::RBrace) {
        r.choice.elements.push_back(parseChoiceElement());
        while (accept(Tok::Semi)) r.choice.elements.push_back(parseChoiceElement());
      }
      expect(Tok::RBrace, "'}'");
      if (cur_.kind == Tok::Eq) {
        advance();
        r.choice.exact = parseTerm();
      } else if (startsTerm()) {
        r.choice.upper = parseTerm();
      }
    } else {
      r.kind = RuleKind::Basic;
      std::vector<Term> pool;
      r.head.push_back(parseHeadLiteral(&pool));
      pools.push_back(std::move(pool));
      while (accept(Tok::Semi)) {
        std::vector<Term> p2;
        r.head.push_back(parseHeadLiteral(&p2));
        pools.push_back(std::move(p2));
      }
    }
    if (accept(Tok::If)) r.body = parseBody();
    expect(Tok::Dot, "'.'");
    addRule(std::move(r), std::move(pools));
  }

  bool startsChoiceBound() {
    if (cur_.kind != Tok::Number && cur_.kind != Tok::Ident && cur_.kind != Tok::Var)
      return false;
    return peekKind() == Tok::LBrace;
  }

  bool startsTerm() const {
    switch (cur_.kind) {
      case Tok::Number:
      case Tok::Ident:
      case Tok::Var:
      case Tok::String:
      case Tok::LParen:
      case Tok::Minus:
      case Tok::Bar:
      case Tok::Anon:
        return true;
      default:
        return false;
    }
  }

  Literal parseHeadLiteral(std::vector<Term>* pool) {
    bool sneg = accept(Tok::Minus);
    Literal l = parseAtomLiteral(sneg, false, pool);
    if (l.builtin) fail("head literal must be an atom");
    return l;
  }

  ChoiceElement parseChoiceElement() {
    ChoiceElement e;
    e.lit = parseLiteral();
    if (accept(Tok::Colon)) {
      e.condition.push_back(parseLiteral());
      while (accept(Tok::Comma)) e.condition.push_back(parseLiteral());
    }
    return e;
  }

  // Elements separated by "," or ";". A ":" after a literal starts a
  // condition list (items separated by ","); the conditional ends at ";"
  // or at the statement dot.
  std::vector<BodyElement> parseBody() {
    std::vector<BodyElement> out;
    out.push_back(parseBodyElement());
    while (cur_.kind == Tok::Semi || cur_.kind == Tok::Comma) {
      advance();
      out.push_back(parseBodyElement());
    }
    return out;
  }

  BodyElement parseBodyElement() {
    if (cur_.kind == Tok::Count || cur_.kind == Tok::LBrace || startsBodyAggregate())
      return parseAggregate();
    Literal l = parseLiteral();
    if (accept(Tok::Colon)) {
      ConditionalLiteral c;
      c.head = std::move(l);
      c.condition.push_back(parseLiteral());
      while (accept(Tok::Comma)) c.condition.push_back(parseLiteral());
      return c;
    }
    return l;
  }

  // Lookahead for "N = #count{...}", "2{...}" and "lo{a; b}hi" elements.
  bool startsBodyAggregate() {
    if (cur_.kind != Tok::Number && cur_.kind != Tok::Var && cur_.kind != Tok::Ident)
      return false;
    Lexer copy = lex_;
    Token t = copy.next();
    if (t.kind == Tok::LBrace) return true;
    if (t.kind == Tok::Eq || t.kind == Tok::Leq || t.kind == Tok::Lt || t.kind == Tok::Geq ||
        t.kind == Tok::Gt || t.kind == Tok::Neq) {
      Token t2 = copy.next();
      return t2.kind == Tok::Count || t2.kind == Tok::LBrace;
    }
    return false;
  }

  Aggregate parseAggregate() {
    Aggregate agg;
    if (startsTerm() && cur_.kind != Tok::LBrace) {
      Term guard = parseTerm();
      Rel rel = Rel::Leq; // "2{...}" means 2 <= count
      if (isRelTok(cur_.kind)) rel = parseRel();
      agg.leftGuard = {flipRel(rel), std::move(guard)}; // normalized to: count REL' guard
    }
    bool explicitCount = accept(Tok::Count);
    expect(Tok::LBrace, "'{'");
    if (cur_.kind != Tok::RBrace) {
      agg.elements.push_back(parseAggregateElement(explicitCount));
      while (accept(Tok::Semi)) agg.elements.push_back(parseAggregateElement(explicitCount));
    }
    expect(Tok::RBrace, "'}'");
    if (isRelTok(cur_.kind)) {
      Rel rel = parseRel();
      agg.rightGuard = {rel, parseTerm()};
    } else if (startsTerm()) {
      agg.rightGuard = {Rel::Leq, parseTerm()}; // "{...}1" means count <= 1
    }
    return agg;
  }

  static bool isRelTok(Tok k) {
    return k == Tok::Eq || k == Tok::Neq || k == Tok::Lt || k == Tok::Leq || k == Tok::Gt ||
           k == Tok::Geq;
  }

  Rel parseRel() {
    Rel r;
    switch (cur_.kind) {
      case Tok::Eq: r = Rel::Eq; break;
      case Tok::Neq: r = Rel::Neq; break;
      case Tok::Lt: r = Rel::Lt; break;
      case Tok::Leq: r = Rel::Leq; break;
      case Tok::Gt: r = Rel::Gt; break;
      case Tok::Geq: r = Rel::Geq; break;
      default: fail("expected comparison operator");
    }
    advance();
    return r;
  }

  static Rel flipRel(Rel r) {
    switch (r) {
      case Rel::Lt: return Rel::Gt;
      case Rel::Leq: return Rel::Geq;
      case Rel::Gt: return Rel::Lt;
      case Rel::Geq: return Rel::Leq;
      default: return r;
    }
  }

  AggregateElement parseAggregateElement(bool explicitCount) {
    AggregateElement e;
    if (explicitCount) {
      e.tuple.push_back(parseTerm());
      while (accept(Tok::Comma)) e.tuple.push_back(parseTerm());
      expect(Tok::Colon, "':'");
      e.condition.push_back(parseLiteral());
      while (accept(Tok::Comma)) e.condition.push_back(parseLiteral());
      return e;
    }
    Literal l = parseLiteral();
    if (l.builtin) {
      e.tuple.push_back(Term::compound(relText(l.rel), {l.lhs, l.rhs}));
    } else {
      Term key = l.atom;
      if (l.strongNeg) key = Term::compound("-", {key});
      e.tuple.push_back(std::move(key));
    }
    e.condition.push_back(l);
    if (accept(Tok::Colon)) {
      e.condition.push_back(parseLiteral());
      while (accept(Tok::Comma)) e.condition.push_back(parseLiteral());
    }
    return e;
  }

  Literal parseLiteral() {
    bool dneg = false;
    while (accept(Tok::Not)) dneg = !dneg;
    bool sneg = false;
    if (cur_.kind == Tok::Minus && peekKind() == Tok::Ident) {
      advance();
      sneg = true;
    }
    return parseAtomLiteral(sneg, dneg, nullptr);
  }

  // Parses an atom (with argument-list pooling when `pool` is non-null) or a
  // builtin comparison. When pooling occurs the returned literal carries the
  // first alternative and `pool` receives all of them.
  Literal parseAtomLiteral(bool sneg, bool dneg, std::vector<Term>* pool) {
    if (cur_.kind == Tok::Ident) {
      std::string name = cur_.text;
      int line = cur_.line;
      advance();
      if (cur_.kind == Tok::LParen) {
        advance();
        std::vector<std::vector<Term>> groups(1);
        if (cur_.kind != Tok::RParen) {
          groups.back().push_back(parseTerm());
          while (cur_.kind == Tok::Comma || cur_.kind == Tok::Semi) {
            bool newGroup = cur_.kind == Tok::Semi;
            advance();
            if (newGroup) groups.emplace_back();
            groups.back().push_back(parseTerm());
          }
        }
        expect(Tok::RParen, "')'");
        if (groups.size() > 1) {
          if (!pool)
            throw ParseError("pooling ';' is only supported in rule heads", line, 1);
          for (auto& g : groups) pool->push_back(Term::compound(name, g));
          return Literal::fromAtom(Term::compound(std::move(name), std::move(groups[0])),
                                   sneg, dneg);
        }
        return Literal::fromAtom(Term::compound(std::move(name), std::move(groups[0])), sneg,
                                 dneg);
      }
      // Bare identifier: may be the lhs of a comparison or a 0-ary atom.
      Term sym = Term::symbol(std::move(name));
      if (!sneg && isRelTok(cur_.kind)) {
        Rel r = parseRel();
        return Literal::comparison(std::move(sym), r, parseTerm(), dneg);
      }
      if (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus || cur_.kind == Tok::Star ||
          cur_.kind == Tok::DotDot) {
        Term lhs = continueTerm(std::move(sym));
        if (!isRelTok(cur_.kind)) fail("expected comparison operator");
        Rel r = parseRel();
        return Literal::comparison(std::move(lhs), r, parseTerm(), dneg);
      }
      return Literal::fromAtom(std::move(sym), sneg, dneg);
    }
    if (sneg) fail("expected atom after '-'");
    Term first = parseTerm();
    if (isRelTok(cur_.kind)) {
      Rel r = parseRel();
      return Literal::comparison(std::move(first), r, parseTerm(), dneg);
    }
    if (first.kind != TermKind::Compound && first.kind != TermKind::Symbol)
      fail("expected an atom or comparison");
    return Literal::fromAtom(std::move(first), sneg, dneg);
  }

  // Continues arithmetic/interval parsing when a term started elsewhere.
  Term continueTerm(Term t) {
    while (cur_.kind == Tok::Star) {
      advance();
      t = foldConst(Term::binary(ArithOp::Mul, std::move(t), parsePrimary()));
    }
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      ArithOp op = cur_.kind == Tok::Plus ? ArithOp::Add : ArithOp::Sub;
      advance();
      t = foldConst(Term::binary(op, std::move(t), parseProduct()));
    }
    if (accept(Tok::DotDot)) t = Term::interval(std::move(t), parseSum());
    return t;
  }

  Term parseTerm() {
    Term t = parseSum();
    if (accept(Tok::DotDot)) return Term::interval(std::move(t), parseSum());
    return t;
  }

  Term parseSum() {
    Term t = parseProduct();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      ArithOp op = cur_.kind == Tok::Plus ? ArithOp::Add : ArithOp::Sub;
      advance();
      t = foldConst(Term::binary(op, std::move(t), parseProduct()));
    }
    return t;
  }

  Term parseProduct() {
    Term t = parsePrimary();
    while (cur_.kind == Tok::Star) {
      advance();
      t = foldConst(Term::binary(ArithOp::Mul, std::move(t), parsePrimary()));
    }
    return t;
  }

  Term parsePrimary() {
    switch (cur_.kind) {
      case Tok::Number: {
        Term t = Term::number(cur_.num);
        advance();
        return t;
      }
      case Tok::String: {
        Term t = Term::string(cur_.text);
        advance();
        return t;
      }
      case Tok::Anon: {
        advance();
        return Term::variable("_" + std::to_string(++anonCounter_) + "#", true);
      }
      case Tok::Var: {
        Term t = Term::variable(cur_.text);
        advance();
        return t;
      }
      case Tok::Minus: {
        advance();
        return foldConst(Term::unary(ArithOp::Neg, parsePrimary()));
      }
      case Tok::Bar: {
        advance();
        Term inner = parseSum();
        expect(Tok::Bar, "'|'");
        return foldConst(Term::unary(ArithOp::Abs, std::move(inner)));
      }
      case Tok::At:
        fail("unsupported construct: @-function terms are outside the subset");
      case Tok::LParen: {
        advance();
        std::vector<Term> items;
        if (cur_.kind != Tok::RParen) {
          items.push_back(parseTerm());
          while (accept(Tok::Comma)) items.push_back(parseTerm());
        }
        expect(Tok::RParen, "')'");
        if (items.size() == 1) return std::move(items[0]); // "(t)" is just t
        return Term::tuple(std::move(items));
      }
      case Tok::Ident: {
        std::string name = cur_.text;
        advance();
        if (accept(Tok::LParen)) {
          std::vector<Term> args;
          if (cur_.kind != Tok::RParen) {
            args.push_back(parseTerm());
            while (accept(Tok::Comma)) args.push_back(parseTerm());
          }
          expect(Tok::RParen, "')'");
          return Term::compound(std::move(name), std::move(args));
        }
        return Term::symbol(std::move(name));
      }
      default:
        fail("expected a term");
    }
  }

  static Term foldConst(Term t) {
    if (t.kind == TermKind::Unary && t.op == ArithOp::Neg &&
        t.args[0].kind == TermKind::Number)
      return Term::number(-t.args[0].num);
    if (t.kind == TermKind::Unary && t.op == ArithOp::Abs &&
        t.args[0].kind == TermKind::Number)
      return Term::number(t.args[0].num < 0 ? -t.args[0].num : t.args[0].num);
    if (t.kind == TermKind::Binary && t.args[0].kind == TermKind::Number &&
        t.args[1].kind == TermKind::Number) {
      int64_t a = t.args[0].num, b = t.args[1].num;
      switch (t.op) {
        case ArithOp::Add: return Term::number(a + b);
        case ArithOp::Sub: return Term::number(a - b);
        case ArithOp::Mul: return Term::number(a * b);
        default: break;
      }
    }
    return t;
  }

  void addRule(Rule r, std::vector<std::vector<Term>> pools) {
    bool pooled = false;
    for (const auto& p : pools) pooled = pooled || p.size() > 1;
    if (pooled) {
      if (r.head.size() != 1)
        throw ParseError("pooling in disjunctive heads is not supported", r.line, 1);
      for (Term& alt : pools[0]) {
        Rule copy = r;
        copy.head[0].atom = std::move(alt);
        checkSafety(copy);
        prog_.rules.push_back(std::move(copy));
      }
      return;
    }
    checkSafety(r);
    prog_.rules.push_back(std::move(r));
  }

  // --- safety -------------------------------------------------------------

  static void collectVars(const Term& t, std::set<std::string>& out) {
    if (t.kind == TermKind::Variable) out.insert(t.text);
    for (const Term& a : t.args) collectVars(a, out);
  }

  static void collectVars(const Literal& l, std::set<std::string>& out) {
    if (l.builtin) {
      collectVars(l.lhs, out);
      collectVars(l.rhs, out);
    } else {
      collectVars(l.atom, out);
    }
  }

  static bool bindsVar(const Literal& b, const std::set<std::string>& bound,
                       std::string* var) {
    if (!b.builtin || b.defaultNeg || b.rel != Rel::Eq) return false;
    auto tryside = [&](const Term& solveSide, const Term& otherSide) {
      std::set<std::string> sv, ov;
      collectVars(solveSide, sv);
      collectVars(otherSide, ov);
      std::vector<std::string> unbound;
      for (const auto& v : sv)
        if (!bound.count(v)) unbound.push_back(v);
      for (const auto& v : ov)
        if (!bound.count(v)) return false;
      if (unbound.size() != 1) return false;
      *var = unbound[0];
      return true;
    };
    return tryside(b.lhs, b.rhs) || tryside(b.rhs, b.lhs);
  }

  static void positiveBinders(const Literal& l, std::set<std::string>& out) {
    if (l.builtin || l.defaultNeg) return;
    std::function<void(const Term&)> scan = [&](const Term& t) {
      switch (t.kind) {
        case TermKind::Variable:
          out.insert(t.text);
          break;
        case TermKind::Compound:
          for (const Term& a : t.args) scan(a);
          break;
        default:
          break; // interval/arith arguments do not bind their variables
      }
    };
    for (const Term& a : l.atom.args) scan(a);
  }

  void checkSafety(const Rule& r) {
    std::set<std::string> bound;
    bool changed = true;
    while (changed) {
      changed = false;
      size_t before = bound.size();
      for (const BodyElement& e : r.body) {
        if (auto* l = std::get_if<Literal>(&e)) {
          if (!l->builtin && !l->defaultNeg) positiveBinders(*l, bound);
          std::string v;
          if (l->builtin && bindsVar(*l, bound, &v)) bound.insert(v);
        } else if (auto* a = std::get_if<Aggregate>(&e)) {
          for (const auto& g : {a->leftGuard, a->rightGuard}) {
            if (g && g->first == Rel::Eq && g->second.kind == TermKind::Variable)
              bound.insert(g->second.text);
          }
        }
      }
      if (bound.size() != before) changed = true;
    }

    auto requireBound = [&](const std::set<std::string>& vars, const std::string& where) {
      for (const auto& v : vars) {
        if (v.back() == '#') continue;
        if (!bound.count(v))
          throw ParseError("unsafe variable '" + v + "' in " + where + " (rule at line " +
                               std::to_string(r.line) + ")",
                           r.line, 1);
      }
    };
    auto checkConditional = [&](const Literal& head, const std::vector<Literal>& cond,
                                const std::string& where) {
      std::set<std::string> local;
      for (const Literal& cl : cond)
        if (!cl.builtin && !cl.defaultNeg) positiveBinders(cl, local);
      // builtins inside the condition may bind further local vars
      bool more = true;
      while (more) {
        more = false;
        for (const Literal& cl : cond) {
          std::string v;
          std::set<std::string> known = local;
          known.insert(bound.begin(), bound.end());
          if (cl.builtin && bindsVar(cl, known, &v) && local.insert(v).second) more = true;
        }
      }
      std::set<std::string> vars;
      collectVars(head, vars);
      for (const Literal& cl : cond) collectVars(cl, vars);
      for (const auto& v : vars) {
        if (v.back() == '#') continue;
        if (!bound.count(v) && !local.count(v))
          throw ParseError("unsafe variable '" + v + "' in " + where + " (rule at line " +
                               std::to_string(r.line) + ")",
                           r.line, 1);
      }
    };

    std::set<std::string> vars;
    for (const Literal& h : r.head) {
      vars.clear();
      collectVars(h, vars);
      for (const auto& v : vars)
        if (v.back() == '#')
          throw ParseError("anonymous variable in rule head (rule at line " +
                               std::to_string(r.line) + ")",
                           r.line, 1);
      requireBound(vars, "head");
    }
    for (const BodyElement& e : r.body) {
      if (auto* l = std::get_if<Literal>(&e)) {
        if (l->defaultNeg || l->builtin) {
          vars.clear();
          collectVars(*l, vars);
          requireBound(vars, l->defaultNeg ? "negative literal" : "builtin");
        }
      } else if (auto* c = std::get_if<ConditionalLiteral>(&e)) {
        checkConditional(c->head, c->condition, "conditional literal");
      } else if (auto* a = std::get_if<Aggregate>(&e)) {
        for (const AggregateElement& el : a->elements) {
          Literal fake = el.condition.empty() ? Literal{} : el.condition[0];
          std::set<std::string> local;
          for (const Literal& cl : el.condition)
            if (!cl.builtin && !cl.defaultNeg) positiveBinders(cl, local);
          std::set<std::string> evars;
          for (const Term& t : el.tuple) collectVars(t, evars);
          for (const Literal& cl : el.condition) collectVars(cl, evars);
          for (const auto& v : evars) {
            if (v.back() == '#') continue;
            if (!bound.count(v) && !local.count(v))
              throw ParseError("unsafe variable '" + v + "' in aggregate (rule at line " +
                                   std::to_string(r.line) + ")",
                               r.line, 1);
          }
          (void)fake;
        }
        for (const auto& g : {a->leftGuard, a->rightGuard}) {
          if (!g) continue;
          vars.clear();
          collectVars(g->second, vars);
          requireBound(vars, "aggregate guard");
        }
      }
    }
    for (const ChoiceElement& el : r.choice.elements)
      checkConditional(el.lit, el.condition, "choice element");
    if (r.kind == RuleKind::Weak) {
      vars.clear();
      collectVars(r.weight, vars);
      collectVars(r.level, vars);
      for (const Term& t : r.tuple) collectVars(t, vars);
      requireBound(vars, "weak constraint annotation");
    }
  }

  Lexer lex_;
  Token cur_;
  Program prog_;
  int anonCounter_ = 0;
};

} // namespace

Program parseProgram(const std::string& text, const std::string& name) {
  Parser p(text, name);
  return p.run();
}

Term parseGroundAtom(const std::string& text) {
  Program p = parseProgram(text + ".", "atom");
  if (p.rules.size() != 1 || p.rules[0].kind != RuleKind::Basic ||
      p.rules[0].head.size() != 1 || !p.rules[0].body.empty())
    throw ParseError("not a single atom", 1, 1);
  Term t = p.rules[0].head[0].atom;
  if (!t.isGround()) throw ParseError("atom is not ground", 1, 1);
  return t;
}

} // namespace aspen::asp
