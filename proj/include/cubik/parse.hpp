// Concrete syntax: lexer and recursive-descent parser for .cub files and
// standalone expressions. Cofibrations in surface syntax may be arbitrary
// and/or/paren formulas; they are normalized to disjunctive normal form at
// parse time.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubik/cofib.hpp"
#include "cubik/syntax.hpp"

namespace cubik {

struct ParseError : std::runtime_error {
  std::string message;
  uint32_t offset = 0;
  int line = 1;
  int col = 1;
  std::vector<std::string> expected;

  ParseError(std::string msg, uint32_t off, int ln, int c,
             std::vector<std::string> exp)
      : std::runtime_error(msg + " (at " + std::to_string(ln) + ":" +
                           std::to_string(c) + ")"),
        message(std::move(msg)),
        offset(off),
        line(ln),
        col(c),
        expected(std::move(exp)) {}
};

inline std::pair<int, int> lineColOf(const std::string& text, uint32_t offset) {
  int line = 1, col = 1;
  for (uint32_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

struct Param {
  Name name;
  TermPtr type;
  Span span;
};

struct Decl {
  Name name;
  std::vector<Param> params;
  TermPtr resultType;
  TermPtr body;
  Span span;
};

struct SourceFile {
  std::string path;
  std::string text;
  std::vector<Decl> decls;
};

namespace detail {

enum class Tok {
  Ident, Zero, One, LParen, RParen, LBBar, RBBar, Bar, Lam, PLamTok, Dot,
  Colon, Arrow, DArrow, Eq, EqEq, Tilde, Wedge, Vee, At,
  KwDef, KwU, KwI, KwPartial, KwSub, KwExt, KwInS, KwOutS, KwCoe, KwHComp,
  KwTop, KwBot, Eof,
};

struct Token {
  Tok kind;
  std::string text;
  uint32_t begin = 0;
  uint32_t end = 0;
};

inline const char* tokName(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Zero: return "'0'";
    case Tok::One: return "'1'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBBar: return "'[|'";
    case Tok::RBBar: return "'|]'";
    case Tok::Bar: return "'|'";
    case Tok::Lam: return "'\\'";
    case Tok::PLamTok: return "'\\^'";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'->'";
    case Tok::DArrow: return "'=>'";
    case Tok::Eq: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::Tilde: return "'~'";
    case Tok::Wedge: return "'/\\'";
    case Tok::Vee: return "'\\/'";
    case Tok::At: return "'@'";
    case Tok::KwDef: return "'def'";
    case Tok::KwU: return "'U'";
    case Tok::KwI: return "'I'";
    case Tok::KwPartial: return "'Partial'";
    case Tok::KwSub: return "'Sub'";
    case Tok::KwExt: return "'Ext'";
    case Tok::KwInS: return "'inS'";
    case Tok::KwOutS: return "'outS'";
    case Tok::KwCoe: return "'coe'";
    case Tok::KwHComp: return "'hcomp'";
    case Tok::KwTop: return "'TOP'";
    case Tok::KwBot: return "'BOT'";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skipSpace();
      uint32_t begin = pos_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::Eof, "", begin, begin});
        return out;
      }
      char c = text_[pos_];
      if (isIdentStart(c)) {
        while (pos_ < text_.size() && isIdentCont(text_[pos_])) ++pos_;
        std::string s = text_.substr(begin, pos_ - begin);
        out.push_back({keyword(s), s, begin, pos_});
        continue;
      }
      if (c >= '0' && c <= '9') {
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
        std::string s = text_.substr(begin, pos_ - begin);
        if (s == "0")
          out.push_back({Tok::Zero, s, begin, pos_});
        else if (s == "1")
          out.push_back({Tok::One, s, begin, pos_});
        else
          err("the only numeric literals are the endpoints 0 and 1", begin);
        continue;
      }
      auto two = [&](char a, char b) {
        return c == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
      };
      if (two('[', '|')) { push(out, Tok::LBBar, 2, begin); continue; }
      if (two('|', ']')) { push(out, Tok::RBBar, 2, begin); continue; }
      if (two('-', '>')) { push(out, Tok::Arrow, 2, begin); continue; }
      if (two('=', '>')) { push(out, Tok::DArrow, 2, begin); continue; }
      if (two('=', '=')) { push(out, Tok::EqEq, 2, begin); continue; }
      if (two('/', '\\')) { push(out, Tok::Wedge, 2, begin); continue; }
      if (two('\\', '/')) { push(out, Tok::Vee, 2, begin); continue; }
      if (two('\\', '^')) { push(out, Tok::PLamTok, 2, begin); continue; }
      switch (c) {
        case '(': push(out, Tok::LParen, 1, begin); continue;
        case ')': push(out, Tok::RParen, 1, begin); continue;
        case '|': push(out, Tok::Bar, 1, begin); continue;
        case '\\': push(out, Tok::Lam, 1, begin); continue;
        case '.': push(out, Tok::Dot, 1, begin); continue;
        case ':': push(out, Tok::Colon, 1, begin); continue;
        case '=': push(out, Tok::Eq, 1, begin); continue;
        case '~': push(out, Tok::Tilde, 1, begin); continue;
        case '@': push(out, Tok::At, 1, begin); continue;
        default: err(std::string("unexpected character '") + c + "'", begin);
      }
    }
  }

  [[noreturn]] void err(std::string msg, uint32_t at) {
    auto [line, col] = lineColOf(text_, at);
    throw ParseError{std::move(msg), at, line, col, {}};
  }

 private:
  static bool isIdentStart(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool isIdentCont(char c) {
    return isIdentStart(c) || (c >= '0' && c <= '9') || c == '\'';
  }

  static Tok keyword(const std::string& s) {
    if (s == "def") return Tok::KwDef;
    if (s == "U") return Tok::KwU;
    if (s == "I") return Tok::KwI;
    if (s == "Partial") return Tok::KwPartial;
    if (s == "Sub") return Tok::KwSub;
    if (s == "Ext") return Tok::KwExt;
    if (s == "inS") return Tok::KwInS;
    if (s == "outS") return Tok::KwOutS;
    if (s == "coe") return Tok::KwCoe;
    if (s == "hcomp") return Tok::KwHComp;
    if (s == "TOP") return Tok::KwTop;
    if (s == "BOT") return Tok::KwBot;
    return Tok::Ident;
  }

  void push(std::vector<Token>& out, Tok k, uint32_t len, uint32_t begin) {
    out.push_back({k, text_.substr(begin, len), begin, begin + len});
    pos_ += len;
  }

  void skipSpace() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  uint32_t pos_ = 0;
};

class Parser {
 public:
  Parser(const std::string& text) : text_(text), toks_(Lexer(text).run()) {}

  SourceFile file(std::string path) {
    SourceFile sf{std::move(path), text_, {}};
    while (!at(Tok::Eof)) {
      expect(Tok::KwDef);
      sf.decls.push_back(decl());
    }
    for (size_t i = 0; i < sf.decls.size(); ++i)
      for (size_t j = i + 1; j < sf.decls.size(); ++j)
        if (sf.decls[i].name == sf.decls[j].name)
          err("duplicate declaration of '" + sf.decls[i].name + "'",
              sf.decls[j].span.begin);
    return sf;
  }

  TermPtr expr() {
    TermPtr t = term();
    expect(Tok::Eof);
    return t;
  }

  std::pair<TermPtr, TermPtr> exprColonExpr() {
    TermPtr a = term();
    expect(Tok::Colon);
    TermPtr b = term();
    expect(Tok::Eof);
    return {a, b};
  }

  std::tuple<TermPtr, TermPtr, TermPtr> convQuery() {
    TermPtr a = term();
    expect(Tok::EqEq);
    TermPtr b = term();
    expect(Tok::Colon);
    TermPtr c = term();
    expect(Tok::Eof);
    return {a, b, c};
  }

  std::pair<std::vector<Name>, TermPtr> assume() {
    std::vector<Name> names;
    while (at(Tok::Ident)) names.push_back(next().text);
    if (names.empty()) err("expected at least one name to assume", peek().begin);
    expect(Tok::Colon);
    TermPtr ty = term();
    expect(Tok::Eof);
    return {std::move(names), ty};
  }

 private:
  // --- declarations ---

  Decl decl() {
    Token name = expect(Tok::Ident);
    Decl d;
    d.name = name.text;
    d.span = Span{name.begin, name.end};
    while (at(Tok::LParen)) {
      expect(Tok::LParen);
      std::vector<Token> names;
      while (at(Tok::Ident)) names.push_back(next());
      if (names.empty()) err("expected parameter name", peek().begin);
      expect(Tok::Colon);
      TermPtr ty = term();
      expect(Tok::RParen);
      for (const Token& n : names)
        d.params.push_back(Param{n.text, ty, Span{n.begin, n.end}});
    }
    expect(Tok::Colon);
    d.resultType = term();
    expect(Tok::DArrow);
    d.body = term();
    return d;
  }

  // --- terms ---

  TermPtr term() {
    if (at(Tok::Lam)) {
      Token start = next();
      Token binder = expectBinder();
      expect(Tok::Dot);
      TermPtr body = term();
      return mk(tm::Lam{binder.text, body}, Span{start.begin, spanEnd(body)});
    }
    if (at(Tok::PLamTok)) {
      Token start = next();
      std::vector<Name> binders;
      while (at(Tok::Ident)) binders.push_back(next().text);
      if (binders.empty()) err("expected interval binder(s)", peek().begin);
      expect(Tok::Dot);
      TermPtr body = term();
      return mk(tm::PLam{std::move(binders), body}, Span{start.begin, spanEnd(body)});
    }
    return arrow();
  }

  bool telescopeAhead() const {
    if (!at(Tok::LParen)) return false;
    size_t i = pos_ + 1;
    size_t names = 0;
    while (i < toks_.size() && toks_[i].kind == Tok::Ident) {
      ++i;
      ++names;
    }
    return names > 0 && i < toks_.size() && toks_[i].kind == Tok::Colon;
  }

  TermPtr arrow() {
    if (telescopeAhead()) {
      Token start = peek();
      std::vector<Param> groups;
      while (telescopeAhead()) {
        expect(Tok::LParen);
        std::vector<Token> names;
        while (at(Tok::Ident)) names.push_back(next());
        expect(Tok::Colon);
        TermPtr ty = term();
        expect(Tok::RParen);
        for (const Token& n : names) groups.push_back(Param{n.text, ty, {}});
      }
      expect(Tok::Arrow);
      TermPtr cod = arrow();
      for (auto it = groups.rbegin(); it != groups.rend(); ++it)
        cod = mk(tm::Pi{it->name, it->type, cod}, Span{start.begin, spanEnd(cod)});
      return cod;
    }
    TermPtr lhs = orExpr();
    if (at(Tok::Arrow)) {
      next();
      TermPtr cod = arrow();
      return mk(tm::Pi{"_", lhs, cod}, Span{spanBegin(lhs), spanEnd(cod)});
    }
    return lhs;
  }

  TermPtr orExpr() {
    TermPtr lhs = andExpr();
    while (at(Tok::Vee)) {
      next();
      TermPtr rhs = andExpr();
      lhs = mk(tm::IOr{lhs, rhs}, Span{spanBegin(lhs), spanEnd(rhs)});
    }
    return lhs;
  }

  TermPtr andExpr() {
    TermPtr lhs = appExpr();
    while (at(Tok::Wedge)) {
      next();
      TermPtr rhs = appExpr();
      lhs = mk(tm::IAnd{lhs, rhs}, Span{spanBegin(lhs), spanEnd(rhs)});
    }
    return lhs;
  }

  bool atUnaryStart() const {
    switch (peek().kind) {
      case Tok::Ident: case Tok::Zero: case Tok::One: case Tok::LParen:
      case Tok::LBBar: case Tok::Tilde: case Tok::KwU: case Tok::KwI:
      case Tok::KwPartial: case Tok::KwSub: case Tok::KwExt: case Tok::KwInS:
      case Tok::KwOutS: case Tok::KwCoe: case Tok::KwHComp:
        return true;
      default:
        return false;
    }
  }

  TermPtr appExpr() {
    TermPtr head = unary();
    while (atUnaryStart()) {
      TermPtr arg = unary();
      head = mk(tm::App{head, arg}, Span{spanBegin(head), spanEnd(arg)});
    }
    return head;
  }

  TermPtr unary() {
    if (at(Tok::Tilde)) {
      Token start = next();
      TermPtr body = unary();
      return mk(tm::INeg{body}, Span{start.begin, spanEnd(body)});
    }
    return postfix();
  }

  TermPtr postfix() {
    TermPtr head = atom();
    if (!at(Tok::At)) return head;
    std::vector<TermPtr> args;
    uint32_t end = spanEnd(head);
    while (at(Tok::At)) {
      next();
      TermPtr a = iatom();
      end = spanEnd(a);
      args.push_back(a);
    }
    return mk(tm::PApp{head, std::move(args)}, Span{spanBegin(head), end});
  }

  TermPtr iatom() {
    Token t = peek();
    switch (t.kind) {
      case Tok::Ident: next(); return var(t.text, Span{t.begin, t.end});
      case Tok::Zero: next(); return mk(tm::IConst{false}, Span{t.begin, t.end});
      case Tok::One: next(); return mk(tm::IConst{true}, Span{t.begin, t.end});
      case Tok::Tilde: {
        next();
        TermPtr body = iatom();
        return mk(tm::INeg{body}, Span{t.begin, spanEnd(body)});
      }
      case Tok::LParen: {
        next();
        TermPtr inner = term();
        expect(Tok::RParen);
        return inner;
      }
      default:
        err(std::string("expected an interval atom, found ") + tokName(t.kind), t.begin,
            {"identifier", "'0'", "'1'", "'~'", "'('"});
    }
  }

  TermPtr atom() {
    Token t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        next();
        if (t.text == "_") err("'_' only binds; it cannot be referenced", t.begin);
        return var(t.text, Span{t.begin, t.end});
      }
      case Tok::Zero: next(); return mk(tm::IConst{false}, Span{t.begin, t.end});
      case Tok::One: next(); return mk(tm::IConst{true}, Span{t.begin, t.end});
      case Tok::KwU: next(); return mk(tm::Univ{}, Span{t.begin, t.end});
      case Tok::KwI: next(); return mk(tm::ITy{}, Span{t.begin, t.end});
      case Tok::LParen: {
        next();
        TermPtr inner = term();
        expect(Tok::RParen);
        return inner;
      }
      case Tok::LBBar: return partialAtom();
      case Tok::KwPartial: {
        next();
        Disj c = cofib();
        TermPtr carrier = atom();
        return mk(tm::PartialTy{c, carrier}, Span{t.begin, spanEnd(carrier)});
      }
      case Tok::KwSub: {
        next();
        TermPtr carrier = atom();
        Disj c = cofib();
        auto [faces, end] = facesBlock();
        return mk(tm::SubTy{carrier, c, faces}, Span{t.begin, end});
      }
      case Tok::KwExt: {
        next();
        expect(Tok::LParen);
        std::vector<Name> binders;
        while (at(Tok::Ident)) binders.push_back(next().text);
        if (binders.empty()) err("expected interval binder(s)", peek().begin);
        expect(Tok::RParen);
        TermPtr carrier = atom();
        auto [faces, end] = facesBlock();
        return mk(tm::ExtTy{std::move(binders), carrier, faces}, Span{t.begin, end});
      }
      case Tok::KwInS: {
        next();
        Disj c = cofib();
        TermPtr body = atom();
        return mk(tm::InS{c, body}, Span{t.begin, spanEnd(body)});
      }
      case Tok::KwOutS: {
        next();
        Disj c = cofib();
        TermPtr body = atom();
        return mk(tm::OutS{c, body}, Span{t.begin, spanEnd(body)});
      }
      case Tok::KwCoe: {
        next();
        Disj c = cofib();
        TermPtr line = atom();
        // the line is written in path-lambda form; internally it is a function
        if (const auto* pl = as<tm::PLam>(line))
          if (pl->binders.size() == 1) line = lam(pl->binders[0], pl->body);
        return mk(tm::Coe{line, c}, Span{t.begin, spanEnd(line)});
      }
      case Tok::KwHComp: {
        next();
        Disj c = cofib();
        TermPtr carrier = atom();
        TermPtr walls = atom();
        TermPtr floor = atom();
        return mk(tm::HComp{carrier, c, walls, floor}, Span{t.begin, spanEnd(floor)});
      }
      default:
        err(std::string("expected a term, found ") + tokName(t.kind), t.begin,
            {"identifier", "'('", "'[|'", "'\\'", "'0'", "'1'", "'U'", "'I'"});
    }
  }

  // A '[|' block in term position: a partial element, a trivial partial
  // element, or empty.
  TermPtr partialAtom() {
    Token start = expect(Tok::LBBar);
    if (at(Tok::RBBar)) {
      Token end = next();
      return mk(tm::PartialEl{{}}, Span{start.begin, end.end});
    }
    size_t save = pos_;
    bool faceMode = false;
    try {
      (void)cofib();
      faceMode = at(Tok::Arrow);
    } catch (const ParseError&) {
      faceMode = false;
    }
    pos_ = save;
    if (!faceMode) {
      TermPtr body = term();
      Token end = expect(Tok::RBBar);
      return mk(tm::TrivialPartial{body}, Span{start.begin, end.end});
    }
    Faces faces;
    while (true) {
      Disj c = cofib();
      expect(Tok::Arrow);
      TermPtr body = term();
      appendFaces(faces, c, body);
      if (at(Tok::Bar)) {
        next();
        continue;
      }
      break;
    }
    Token end = expect(Tok::RBBar);
    return mk(tm::PartialEl{std::move(faces)}, Span{start.begin, end.end});
  }

  // A '[|' block in type position (Ext/Sub): always a face list; a trivial
  // element denotes the single face under the truth cofibration.
  std::pair<Faces, uint32_t> facesBlock() {
    Token start = expect(Tok::LBBar);
    Faces faces;
    if (at(Tok::RBBar)) {
      Token end = next();
      return {faces, end.end};
    }
    size_t save = pos_;
    bool faceMode = false;
    try {
      (void)cofib();
      faceMode = at(Tok::Arrow);
    } catch (const ParseError&) {
      faceMode = false;
    }
    pos_ = save;
    if (!faceMode) {
      TermPtr body = term();
      Token end = expect(Tok::RBBar);
      faces.push_back(Face{Conj{}, body});
      return {faces, end.end};
    }
    while (true) {
      Disj c = cofib();
      expect(Tok::Arrow);
      TermPtr body = term();
      appendFaces(faces, c, body);
      if (at(Tok::Bar)) {
        next();
        continue;
      }
      break;
    }
    Token end = expect(Tok::RBBar);
    return {std::move(faces), end.end};
  }

  // One surface face may normalize to several clauses (or none).
  static void appendFaces(Faces& out, const Disj& c, const TermPtr& body) {
    switch (c.tag) {
      case Disj::Tag::Absurd: return;
      case Disj::Tag::Truth: out.push_back(Face{Conj{}, body}); return;
      case Disj::Tag::Clauses:
        for (const Conj& conj : c.clauses) out.push_back(Face{conj, body});
        return;
    }
  }

  // --- cofibrations ---

  Disj cofib() {
    Disj acc = cofConj();
    while (at(Tok::Vee)) {
      next();
      acc = disjOr(acc, cofConj());
    }
    return acc;
  }

  Disj cofConj() {
    Disj acc = cofAtom();
    while (at(Tok::Wedge)) {
      next();
      acc = disjAnd(acc, cofAtom());
    }
    return acc;
  }

  Disj cofAtom() {
    Token t = peek();
    switch (t.kind) {
      case Tok::KwTop: next(); return Disj::truth();
      case Tok::KwBot: next(); return Disj::absurd();
      case Tok::Ident: {
        next();
        expect(Tok::Eq);
        Token v = peek();
        if (at(Tok::Zero)) {
          next();
          return Disj::of({Conj{{Cond{t.text, false}}}});
        }
        if (at(Tok::One)) {
          next();
          return Disj::of({Conj{{Cond{t.text, true}}}});
        }
        err(std::string("expected '0' or '1' after '=', found ") + tokName(v.kind),
            v.begin, {"'0'", "'1'"});
      }
      case Tok::LParen: {
        next();
        Disj inner = cofib();
        expect(Tok::RParen);
        return inner;
      }
      default:
        err(std::string("expected a face condition, found ") + tokName(t.kind), t.begin,
            {"identifier", "'TOP'", "'BOT'", "'('"});
    }
  }

  // --- machinery ---

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token next() { return toks_[pos_++]; }

  Token expect(Tok k) {
    if (!at(k))
      err(std::string("expected ") + tokName(k) + ", found " + tokName(peek().kind),
          peek().begin, {tokName(k)});
    return next();
  }

  Token expectBinder() { return expect(Tok::Ident); }

  static uint32_t spanBegin(const TermPtr& t) { return t ? t->span.begin : 0; }
  static uint32_t spanEnd(const TermPtr& t) { return t ? t->span.end : 0; }

  [[noreturn]] void err(std::string msg, uint32_t at,
                        std::vector<std::string> expected = {}) const {
    auto [line, col] = lineColOf(text_, at);
    throw ParseError{std::move(msg), at, line, col, std::move(expected)};
  }

  const std::string& text_;
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace detail

inline SourceFile parseFile(std::string text, std::string path) {
  detail::Parser p(text);
  return p.file(std::move(path));
}

inline TermPtr parseExpr(const std::string& text) {
  detail::Parser p(text);
  return p.expr();
}

inline std::pair<TermPtr, TermPtr> parseExprColonExpr(const std::string& text) {
  detail::Parser p(text);
  return p.exprColonExpr();
}

inline std::tuple<TermPtr, TermPtr, TermPtr> parseConvQuery(const std::string& text) {
  detail::Parser p(text);
  return p.convQuery();
}

inline std::pair<std::vector<Name>, TermPtr> parseAssume(const std::string& text) {
  detail::Parser p(text);
  return p.assume();
}

}  // namespace cubik
