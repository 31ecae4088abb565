// Checking pipeline shared by the CLI and the test suites: run a parsed
// source file through the checker declaration by declaration, accumulating
// accepted definitions in the context and diagnostics for the rest.
#pragma once

#include "cubik/parse.hpp"
#include "cubik/tyck.hpp"

namespace cubik {

struct Diagnostic {
  std::string code;
  std::string message;
  std::string file;
  int line = 0;
  int col = 0;
  std::string witness;
};

struct CheckEvent {
  bool ok = false;
  Name name;
  Diagnostic diag;
};

struct CheckOutcome {
  std::vector<CheckEvent> events;
  bool allOk = true;
};

inline TermPtr declType(const Decl& d) {
  TermPtr ty = d.resultType;
  for (auto it = d.params.rbegin(); it != d.params.rend(); ++it)
    ty = mk(tm::Pi{it->name, it->type, ty});
  return ty;
}

inline TermPtr declValue(const Decl& d) {
  TermPtr v = d.body;
  for (auto it = d.params.rbegin(); it != d.params.rend(); ++it)
    v = mk(tm::Lam{it->name, v});
  return v;
}

inline Diagnostic diagnosticOf(const TypeError& e, const SourceFile& sf, Span fallback) {
  Span sp = e.span.known() ? e.span : fallback;
  auto [line, col] = lineColOf(sf.text, sp.begin);
  return Diagnostic{errCodeString(e.code), e.message, sf.path, line, col, e.witness};
}

// The context in which a declaration's body lives: the telescope pushed on
// top of the globals. Assumes the declaration already checked.
inline Context declContext(const Context& globals, const Decl& d) {
  Context local = globals;
  for (const Param& p : d.params) {
    bool iv = as<tm::ITy>(whnf(local, p.type)) != nullptr;
    local = local.extend(p.name, p.type, iv);
  }
  return local;
}

inline CheckOutcome checkSource(Context& ctx, const SourceFile& sf) {
  CheckOutcome out;
  for (const Decl& d : sf.decls) {
    try {
      Context local = ctx;
      for (const Param& p : d.params) {
        TermPtr pv = checkType(local, p.type);
        local = local.extend(p.name, p.type, as<tm::ITy>(pv) != nullptr);
      }
      TermPtr resultV = checkType(local, d.resultType);
      check(local, d.body, resultV);
      bool iv = d.params.empty() && as<tm::ITy>(resultV) != nullptr;
      ctx.push(d.name, declType(d), iv, declValue(d));
      out.events.push_back(CheckEvent{true, d.name, {}});
    } catch (const TypeError& e) {
      out.allOk = false;
      out.events.push_back(CheckEvent{false, d.name, diagnosticOf(e, sf, d.span)});
    }
  }
  return out;
}

inline const Decl* findDecl(const SourceFile& sf, const Name& n) {
  for (const Decl& d : sf.decls)
    if (d.name == n) return &d;
  return nullptr;
}

}  // namespace cubik
