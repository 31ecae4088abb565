// Concrete-syntax printer. Output reparses to an alpha-equivalent term;
// parentheses are minimal for the grammar's precedence table.
#pragma once

#include <sstream>
#include <string>

#include "cubik/syntax.hpp"

namespace cubik {

namespace prec {
// lam < arrow < \/ < /\ < ~ < application < @ < atom
constexpr int Lam = 0;
constexpr int Arrow = 1;
constexpr int Or = 2;
constexpr int And = 3;
constexpr int Neg = 4;
constexpr int App = 5;
constexpr int PApp = 6;
constexpr int Atom = 7;
}  // namespace prec

inline std::string prettyCond(const Cond& c) {
  return c.var + " = " + (c.isOne ? "1" : "0");
}

inline std::string prettyConj(const Conj& c) {
  if (c.conds.empty()) return "TOP";
  std::string out;
  for (size_t i = 0; i < c.conds.size(); ++i) {
    if (i) out += " /\\ ";
    out += prettyCond(c.conds[i]);
  }
  return out;
}

inline std::string prettyCofib(const Disj& d) {
  switch (d.tag) {
    case Disj::Tag::Absurd: return "BOT";
    case Disj::Tag::Truth: return "TOP";
    case Disj::Tag::Clauses: break;
  }
  std::string out;
  for (size_t i = 0; i < d.clauses.size(); ++i) {
    if (i) out += " \\/ ";
    out += prettyConj(d.clauses[i]);
  }
  return out;
}

namespace detail {

inline void prettyGo(const TermPtr& t, int level, std::string& out);

inline void wrap(bool needed, const TermPtr& t, std::string& out) {
  if (needed) out += '(';
  prettyGo(t, prec::Lam, out);
  if (needed) out += ')';
}

inline void prettyAtom(const TermPtr& t, std::string& out) {
  // atom position: parenthesize anything below atom precedence
  prettyGo(t, prec::Atom, out);
}

inline void prettyIAtom(const TermPtr& t, std::string& out) {
  if (as<tm::Var>(t) || as<tm::IConst>(t)) {
    prettyGo(t, prec::Atom, out);
  } else if (const auto* n = as<tm::INeg>(t)) {
    out += '~';
    prettyIAtom(n->body, out);
  } else {
    out += '(';
    prettyGo(t, prec::Lam, out);
    out += ')';
  }
}

inline void prettyFaces(const Faces& fs, std::string& out) {
  out += "[|";
  for (size_t i = 0; i < fs.size(); ++i) {
    out += i ? " | " : " ";
    out += prettyConj(fs[i].cof);
    out += " -> ";
    prettyGo(fs[i].body, prec::Lam, out);
  }
  out += fs.empty() ? "|]" : " |]";
}

// The line argument of coe prints in path-lambda form.
inline void prettyLine(const TermPtr& line, std::string& out) {
  out += "(\\^";
  if (const auto* l = as<tm::Lam>(line)) {
    out += l->binder;
    out += ". ";
    prettyGo(l->body, prec::Lam, out);
  } else {
    auto avoid = freeVars(line).all();
    Name x = freshName("i", avoid);
    out += x;
    out += ". ";
    prettyGo(app(line, var(x)), prec::Lam, out);
  }
  out += ')';
}

inline int precOf(const TermPtr& t) {
  return std::visit(
      Overloaded{
          [](const tm::Var&) { return prec::Atom; },
          [](const tm::Lam&) { return prec::Lam; },
          [](const tm::PLam&) { return prec::Lam; },
          [](const tm::Pi&) { return prec::Arrow; },
          [](const tm::App&) { return prec::App; },
          [](const tm::Univ&) { return prec::Atom; },
          [](const tm::ITy&) { return prec::Atom; },
          [](const tm::IConst&) { return prec::Atom; },
          [](const tm::INeg&) { return prec::Neg; },
          [](const tm::IAnd&) { return prec::And; },
          [](const tm::IOr&) { return prec::Or; },
          [](const tm::PartialEl&) { return prec::Atom; },
          [](const tm::TrivialPartial&) { return prec::Atom; },
          [](const tm::PartialTy&) { return prec::App; },
          [](const tm::ExtTy&) { return prec::App; },
          [](const tm::PApp&) { return prec::PApp; },
          [](const tm::SubTy&) { return prec::App; },
          [](const tm::InS&) { return prec::App; },
          [](const tm::OutS&) { return prec::App; },
          [](const tm::Coe&) { return prec::App; },
          [](const tm::HComp&) { return prec::App; },
      },
      t->node);
}

inline void prettyGo(const TermPtr& t, int level, std::string& out) {
  if (!t) {
    out += "<null>";
    return;
  }
  bool parens = precOf(t) < level;
  if (parens) out += '(';
  std::visit(
      Overloaded{
          [&](const tm::Var& n) { out += n.name; },
          [&](const tm::Lam& n) {
            out += '\\';
            out += n.binder;
            out += ". ";
            prettyGo(n.body, prec::Lam, out);
          },
          [&](const tm::PLam& n) {
            out += "\\^";
            for (size_t i = 0; i < n.binders.size(); ++i) {
              if (i) out += ' ';
              out += n.binders[i];
            }
            out += ". ";
            prettyGo(n.body, prec::Lam, out);
          },
          [&](const tm::Pi& n) {
            FreeVars fv = freeVars(n.cod);
            if (fv.mentions(n.binder)) {
              // chains of dependent binders share one arrow
              out += '(';
              out += n.binder;
              out += " : ";
              prettyGo(n.dom, prec::Lam, out);
              out += ')';
              TermPtr cur = n.cod;
              while (const auto* p = as<tm::Pi>(cur)) {
                if (!freeVars(p->cod).mentions(p->binder)) break;
                out += " (";
                out += p->binder;
                out += " : ";
                prettyGo(p->dom, prec::Lam, out);
                out += ')';
                cur = p->cod;
              }
              out += " -> ";
              prettyGo(cur, prec::Arrow, out);
            } else {
              prettyGo(n.dom, prec::Or, out);
              out += " -> ";
              prettyGo(n.cod, prec::Arrow, out);
            }
          },
          [&](const tm::App& n) {
            prettyGo(n.fn, prec::App, out);
            out += ' ';
            prettyGo(n.arg, prec::PApp, out);
          },
          [&](const tm::Univ&) { out += 'U'; },
          [&](const tm::ITy&) { out += 'I'; },
          [&](const tm::IConst& n) { out += n.one ? '1' : '0'; },
          [&](const tm::INeg& n) {
            out += '~';
            prettyGo(n.body, prec::Neg, out);
          },
          [&](const tm::IAnd& n) {
            prettyGo(n.lhs, prec::And, out);
            out += " /\\ ";
            prettyGo(n.rhs, prec::Neg, out);
          },
          [&](const tm::IOr& n) {
            prettyGo(n.lhs, prec::Or, out);
            out += " \\/ ";
            prettyGo(n.rhs, prec::And, out);
          },
          [&](const tm::PartialEl& n) { prettyFaces(n.faces, out); },
          [&](const tm::TrivialPartial& n) {
            out += "[| ";
            prettyGo(n.body, prec::Lam, out);
            out += " |]";
          },
          [&](const tm::PartialTy& n) {
            out += "Partial ";
            out += prettyCofib(n.cof);
            out += ' ';
            prettyAtom(n.carrier, out);
          },
          [&](const tm::ExtTy& n) {
            out += "Ext (";
            for (size_t i = 0; i < n.binders.size(); ++i) {
              if (i) out += ' ';
              out += n.binders[i];
            }
            out += ") ";
            prettyAtom(n.carrier, out);
            out += ' ';
            prettyFaces(n.faces, out);
          },
          [&](const tm::PApp& n) {
            prettyGo(n.fn, prec::PApp, out);
            for (const TermPtr& a : n.args) {
              out += " @ ";
              prettyIAtom(a, out);
            }
          },
          [&](const tm::SubTy& n) {
            out += "Sub ";
            prettyAtom(n.carrier, out);
            out += ' ';
            out += prettyCofib(n.cof);
            out += ' ';
            prettyFaces(n.faces, out);
          },
          [&](const tm::InS& n) {
            out += "inS ";
            out += prettyCofib(n.cof);
            out += ' ';
            prettyAtom(n.body, out);
          },
          [&](const tm::OutS& n) {
            out += "outS ";
            out += prettyCofib(n.cof);
            out += ' ';
            prettyAtom(n.body, out);
          },
          [&](const tm::Coe& n) {
            out += "coe ";
            out += prettyCofib(n.cof);
            out += ' ';
            prettyLine(n.line, out);
          },
          [&](const tm::HComp& n) {
            out += "hcomp ";
            out += prettyCofib(n.cof);
            out += ' ';
            prettyAtom(n.carrier, out);
            out += ' ';
            prettyAtom(n.walls, out);
            out += ' ';
            prettyAtom(n.floor, out);
          },
      },
      t->node);
  if (parens) out += ')';
}

}  // namespace detail

inline std::string pretty(const TermPtr& t) {
  std::string out;
  detail::prettyGo(t, prec::Lam, out);
  return out;
}

// Substitution witness rendering for diagnostics, e.g. "[1/z, 0/y]".
inline std::string prettySubstWitness(const Conj& theta) {
  std::string out = "[";
  for (size_t i = 0; i < theta.conds.size(); ++i) {
    if (i) out += ", ";
    out += theta.conds[i].isOne ? "1/" : "0/";
    out += theta.conds[i].var;
  }
  out += "]";
  return out;
}

}  // namespace cubik
