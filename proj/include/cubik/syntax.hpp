// Core term syntax: the AST for every term former of the theory, plus
// alpha-equivalence and free-variable computation. Cofibration syntax
// (conditions, conjunctions, disjunctions) lives here too because several
// term formers embed it.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cubik {

using Name = std::string;

template <class... Fs> struct Overloaded : Fs... { using Fs::operator()...; };
template <class... Fs> Overloaded(Fs...) -> Overloaded<Fs...>;

// Byte range into the source buffer; zero-width means "no position".
struct Span {
  uint32_t begin = 0;
  uint32_t end = 0;
  bool known() const { return end > begin; }
};

// ---------------------------------------------------------------------------
// Cofibrations: disjunctive normal form of face conditions x=0 / x=1.

struct Cond {
  Name var;
  bool isOne = false;  // true: var=1, false: var=0

  friend bool operator==(const Cond& a, const Cond& b) {
    return a.var == b.var && a.isOne == b.isOne;
  }
  friend bool operator<(const Cond& a, const Cond& b) {
    return a.var != b.var ? a.var < b.var : a.isOne < b.isOne;
  }
};

// A conjunction of conditions. The empty list is the always-true
// conjunction; it arises from substitution and from the TOP face.
struct Conj {
  std::vector<Cond> conds;

  friend bool operator==(const Conj& a, const Conj& b) { return a.conds == b.conds; }
  friend bool operator<(const Conj& a, const Conj& b) { return a.conds < b.conds; }
};

struct Disj {
  enum class Tag { Absurd, Truth, Clauses };
  Tag tag = Tag::Truth;
  std::vector<Conj> clauses;  // nonempty iff tag == Clauses

  static Disj absurd() { return Disj{Tag::Absurd, {}}; }
  static Disj truth() { return Disj{Tag::Truth, {}}; }
  static Disj of(std::vector<Conj> cs) {
    if (cs.empty()) return absurd();
    return Disj{Tag::Clauses, std::move(cs)};
  }
  bool isAbsurd() const { return tag == Tag::Absurd; }
  bool isTruth() const { return tag == Tag::Truth; }

  friend bool operator==(const Disj& a, const Disj& b) {
    return a.tag == b.tag && a.clauses == b.clauses;
  }
};

// The conjunctions a disjunction quantifies over when a judgment is checked
// clause by clause: none for absurd, the single empty conjunction for truth.
inline std::vector<Conj> clausesOf(const Disj& d) {
  switch (d.tag) {
    case Disj::Tag::Absurd: return {};
    case Disj::Tag::Truth: return {Conj{}};
    case Disj::Tag::Clauses: return d.clauses;
  }
  return {};
}

// ---------------------------------------------------------------------------
// Terms.

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Face {
  Conj cof;
  TermPtr body;
};
using Faces = std::vector<Face>;

namespace tm {

struct Var { Name name; };
struct Lam { Name binder; TermPtr body; };
struct App { TermPtr fn; TermPtr arg; };
struct Pi { Name binder; TermPtr dom; TermPtr cod; };
struct Univ {};
struct ITy {};                       // the interval pretype
struct IConst { bool one = false; }; // endpoints 0 and 1
struct INeg { TermPtr body; };
struct IAnd { TermPtr lhs; TermPtr rhs; };
struct IOr { TermPtr lhs; TermPtr rhs; };
struct PartialEl { Faces faces; };
struct TrivialPartial { TermPtr body; };
struct PartialTy { Disj cof; TermPtr carrier; };
// Extension type: binders scope over carrier and faces; face conditions may
// mention only the binders.
struct ExtTy { std::vector<Name> binders; TermPtr carrier; Faces faces; };
struct PLam { std::vector<Name> binders; TermPtr body; };
struct PApp { TermPtr fn; std::vector<TermPtr> args; };
struct SubTy { TermPtr carrier; Disj cof; Faces faces; };
struct InS { Disj cof; TermPtr body; };
struct OutS { Disj cof; TermPtr body; };
struct Coe { TermPtr line; Disj cof; };
struct HComp { TermPtr carrier; Disj cof; TermPtr walls; TermPtr floor; };

}  // namespace tm

using TermNode = std::variant<
    tm::Var, tm::Lam, tm::App, tm::Pi, tm::Univ, tm::ITy, tm::IConst,
    tm::INeg, tm::IAnd, tm::IOr, tm::PartialEl, tm::TrivialPartial,
    tm::PartialTy, tm::ExtTy, tm::PLam, tm::PApp, tm::SubTy, tm::InS,
    tm::OutS, tm::Coe, tm::HComp>;

struct Term {
  TermNode node;
  Span span;
};

template <class N>
TermPtr mk(N node, Span sp = {}) {
  return std::make_shared<Term>(Term{TermNode{std::move(node)}, sp});
}

template <class N>
const N* as(const TermPtr& t) {
  return t ? std::get_if<N>(&t->node) : nullptr;
}

inline TermPtr withSpan(const TermPtr& t, Span sp) {
  if (!t || t->span.known()) return t;
  return std::make_shared<Term>(Term{t->node, sp});
}

inline TermPtr var(Name n, Span sp = {}) { return mk(tm::Var{std::move(n)}, sp); }
inline TermPtr lam(Name x, TermPtr b) { return mk(tm::Lam{std::move(x), std::move(b)}); }
inline TermPtr app(TermPtr f, TermPtr a) { return mk(tm::App{std::move(f), std::move(a)}); }
inline TermPtr pi(Name x, TermPtr d, TermPtr c) {
  return mk(tm::Pi{std::move(x), std::move(d), std::move(c)});
}
inline TermPtr univ() { return mk(tm::Univ{}); }
inline TermPtr ity() { return mk(tm::ITy{}); }
inline TermPtr izero() { return mk(tm::IConst{false}); }
inline TermPtr ione() { return mk(tm::IConst{true}); }
inline TermPtr ineg(TermPtr e) { return mk(tm::INeg{std::move(e)}); }
inline TermPtr iand(TermPtr l, TermPtr r) { return mk(tm::IAnd{std::move(l), std::move(r)}); }
inline TermPtr ior(TermPtr l, TermPtr r) { return mk(tm::IOr{std::move(l), std::move(r)}); }
inline TermPtr plam(std::vector<Name> xs, TermPtr b) {
  return mk(tm::PLam{std::move(xs), std::move(b)});
}
inline TermPtr papp(TermPtr f, std::vector<TermPtr> args) {
  return mk(tm::PApp{std::move(f), std::move(args)});
}

// Spine-style application helpers.
inline TermPtr apps(TermPtr f, std::initializer_list<TermPtr> args) {
  for (const auto& a : args) f = app(std::move(f), a);
  return f;
}

// ---------------------------------------------------------------------------
// Free variables, reported per the interval/term split of the context.
// Classification is positional: occurrences inside interval expressions,
// path application arguments, and face conditions count as interval names.

struct FreeVars {
  std::set<Name> terms;
  std::set<Name> intervals;
  bool mentions(const Name& n) const {
    return terms.count(n) != 0 || intervals.count(n) != 0;
  }
  std::set<Name> all() const {
    std::set<Name> s = terms;
    s.insert(intervals.begin(), intervals.end());
    return s;
  }
};

namespace detail {

inline void freeVarsGo(const TermPtr& t, std::set<Name>& bound, bool intervalPos,
                       FreeVars& out) {
  if (!t) return;
  auto goCof = [&](const Disj& d) {
    for (const Conj& c : d.clauses)
      for (const Cond& cond : c.conds)
        if (!bound.count(cond.var)) out.intervals.insert(cond.var);
  };
  auto goFaces = [&](const Faces& fs) {
    for (const Face& f : fs) {
      for (const Cond& cond : f.cof.conds)
        if (!bound.count(cond.var)) out.intervals.insert(cond.var);
      freeVarsGo(f.body, bound, false, out);
    }
  };
  std::visit(
      Overloaded{
          [&](const tm::Var& v) {
            if (bound.count(v.name)) return;
            if (intervalPos)
              out.intervals.insert(v.name);
            else
              out.terms.insert(v.name);
          },
          [&](const tm::Lam& n) {
            auto [it, fresh] = bound.insert(n.binder);
            freeVarsGo(n.body, bound, false, out);
            if (fresh) bound.erase(n.binder);
          },
          [&](const tm::App& n) {
            freeVarsGo(n.fn, bound, false, out);
            freeVarsGo(n.arg, bound, false, out);
          },
          [&](const tm::Pi& n) {
            freeVarsGo(n.dom, bound, false, out);
            auto [it, fresh] = bound.insert(n.binder);
            freeVarsGo(n.cod, bound, false, out);
            if (fresh) bound.erase(n.binder);
          },
          [&](const tm::Univ&) {}, [&](const tm::ITy&) {}, [&](const tm::IConst&) {},
          [&](const tm::INeg& n) { freeVarsGo(n.body, bound, true, out); },
          [&](const tm::IAnd& n) {
            freeVarsGo(n.lhs, bound, true, out);
            freeVarsGo(n.rhs, bound, true, out);
          },
          [&](const tm::IOr& n) {
            freeVarsGo(n.lhs, bound, true, out);
            freeVarsGo(n.rhs, bound, true, out);
          },
          [&](const tm::PartialEl& n) { goFaces(n.faces); },
          [&](const tm::TrivialPartial& n) { freeVarsGo(n.body, bound, false, out); },
          [&](const tm::PartialTy& n) {
            goCof(n.cof);
            freeVarsGo(n.carrier, bound, false, out);
          },
          [&](const tm::ExtTy& n) {
            std::vector<Name> added;
            for (const Name& b : n.binders)
              if (bound.insert(b).second) added.push_back(b);
            freeVarsGo(n.carrier, bound, false, out);
            goFaces(n.faces);
            for (const Name& b : added) bound.erase(b);
          },
          [&](const tm::PLam& n) {
            std::vector<Name> added;
            for (const Name& b : n.binders)
              if (bound.insert(b).second) added.push_back(b);
            freeVarsGo(n.body, bound, false, out);
            for (const Name& b : added) bound.erase(b);
          },
          [&](const tm::PApp& n) {
            freeVarsGo(n.fn, bound, false, out);
            for (const TermPtr& a : n.args) freeVarsGo(a, bound, true, out);
          },
          [&](const tm::SubTy& n) {
            freeVarsGo(n.carrier, bound, false, out);
            goCof(n.cof);
            goFaces(n.faces);
          },
          [&](const tm::InS& n) {
            goCof(n.cof);
            freeVarsGo(n.body, bound, false, out);
          },
          [&](const tm::OutS& n) {
            goCof(n.cof);
            freeVarsGo(n.body, bound, false, out);
          },
          [&](const tm::Coe& n) {
            freeVarsGo(n.line, bound, false, out);
            goCof(n.cof);
          },
          [&](const tm::HComp& n) {
            freeVarsGo(n.carrier, bound, false, out);
            goCof(n.cof);
            freeVarsGo(n.walls, bound, false, out);
            freeVarsGo(n.floor, bound, false, out);
          },
      },
      t->node);
}

}  // namespace detail

inline FreeVars freeVars(const TermPtr& t) {
  FreeVars out;
  std::set<Name> bound;
  detail::freeVarsGo(t, bound, false, out);
  return out;
}

// Deterministic fresh-name choice: keep `base` when unused, else append
// primes until free of the avoid set.
inline Name freshName(Name base, const std::set<Name>& avoid) {
  if (base.empty() || base == "_") base = "x";
  Name candidate = base;
  while (avoid.count(candidate)) candidate += '\'';
  return candidate;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence. Bound variables are compared by binding depth; face
// lists compare as ordered lists at this syntactic level.

namespace detail {

struct AlphaEnv {
  std::map<Name, int> left, right;
  int depth = 0;

  struct Frame {
    AlphaEnv& env;
    std::vector<std::pair<Name, std::optional<int>>> savedL, savedR;
    int savedDepth;
    ~Frame() {
      for (auto& [n, v] : savedL) {
        if (v)
          env.left[n] = *v;
        else
          env.left.erase(n);
      }
      for (auto& [n, v] : savedR) {
        if (v)
          env.right[n] = *v;
        else
          env.right.erase(n);
      }
      env.depth = savedDepth;
    }
  };

  Frame bind(const std::vector<Name>& ls, const std::vector<Name>& rs) {
    Frame f{*this, {}, {}, depth};
    for (size_t i = 0; i < ls.size(); ++i) {
      auto saveL = left.find(ls[i]);
      f.savedL.emplace_back(ls[i], saveL == left.end()
                                       ? std::nullopt
                                       : std::optional<int>(saveL->second));
      auto saveR = right.find(rs[i]);
      f.savedR.emplace_back(rs[i], saveR == right.end()
                                       ? std::nullopt
                                       : std::optional<int>(saveR->second));
      left[ls[i]] = depth;
      right[rs[i]] = depth;
      ++depth;
    }
    return f;
  }

  bool sameVar(const Name& a, const Name& b) const {
    auto la = left.find(a);
    auto rb = right.find(b);
    if (la != left.end() || rb != right.end()) {
      return la != left.end() && rb != right.end() && la->second == rb->second;
    }
    return a == b;  // both free
  }
};

inline bool alphaGo(const TermPtr& a, const TermPtr& b, AlphaEnv& env);

inline bool alphaCond(const Cond& a, const Cond& b, AlphaEnv& env) {
  return a.isOne == b.isOne && env.sameVar(a.var, b.var);
}

inline bool alphaConj(const Conj& a, const Conj& b, AlphaEnv& env) {
  if (a.conds.size() != b.conds.size()) return false;
  for (size_t i = 0; i < a.conds.size(); ++i)
    if (!alphaCond(a.conds[i], b.conds[i], env)) return false;
  return true;
}

inline bool alphaDisj(const Disj& a, const Disj& b, AlphaEnv& env) {
  if (a.tag != b.tag || a.clauses.size() != b.clauses.size()) return false;
  for (size_t i = 0; i < a.clauses.size(); ++i)
    if (!alphaConj(a.clauses[i], b.clauses[i], env)) return false;
  return true;
}

inline bool alphaFaces(const Faces& a, const Faces& b, AlphaEnv& env) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!alphaConj(a[i].cof, b[i].cof, env)) return false;
    if (!alphaGo(a[i].body, b[i].body, env)) return false;
  }
  return true;
}

inline bool alphaGo(const TermPtr& a, const TermPtr& b, AlphaEnv& env) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      Overloaded{
          [&](const tm::Var& x) {
            return env.sameVar(x.name, std::get<tm::Var>(b->node).name);
          },
          [&](const tm::Lam& x) {
            const auto& y = std::get<tm::Lam>(b->node);
            auto frame = env.bind({x.binder}, {y.binder});
            return alphaGo(x.body, y.body, env);
          },
          [&](const tm::App& x) {
            const auto& y = std::get<tm::App>(b->node);
            return alphaGo(x.fn, y.fn, env) && alphaGo(x.arg, y.arg, env);
          },
          [&](const tm::Pi& x) {
            const auto& y = std::get<tm::Pi>(b->node);
            if (!alphaGo(x.dom, y.dom, env)) return false;
            auto frame = env.bind({x.binder}, {y.binder});
            return alphaGo(x.cod, y.cod, env);
          },
          [&](const tm::Univ&) { return true; },
          [&](const tm::ITy&) { return true; },
          [&](const tm::IConst& x) {
            return x.one == std::get<tm::IConst>(b->node).one;
          },
          [&](const tm::INeg& x) {
            return alphaGo(x.body, std::get<tm::INeg>(b->node).body, env);
          },
          [&](const tm::IAnd& x) {
            const auto& y = std::get<tm::IAnd>(b->node);
            return alphaGo(x.lhs, y.lhs, env) && alphaGo(x.rhs, y.rhs, env);
          },
          [&](const tm::IOr& x) {
            const auto& y = std::get<tm::IOr>(b->node);
            return alphaGo(x.lhs, y.lhs, env) && alphaGo(x.rhs, y.rhs, env);
          },
          [&](const tm::PartialEl& x) {
            return alphaFaces(x.faces, std::get<tm::PartialEl>(b->node).faces, env);
          },
          [&](const tm::TrivialPartial& x) {
            return alphaGo(x.body, std::get<tm::TrivialPartial>(b->node).body, env);
          },
          [&](const tm::PartialTy& x) {
            const auto& y = std::get<tm::PartialTy>(b->node);
            return alphaDisj(x.cof, y.cof, env) && alphaGo(x.carrier, y.carrier, env);
          },
          [&](const tm::ExtTy& x) {
            const auto& y = std::get<tm::ExtTy>(b->node);
            if (x.binders.size() != y.binders.size()) return false;
            auto frame = env.bind(x.binders, y.binders);
            return alphaGo(x.carrier, y.carrier, env) &&
                   alphaFaces(x.faces, y.faces, env);
          },
          [&](const tm::PLam& x) {
            const auto& y = std::get<tm::PLam>(b->node);
            if (x.binders.size() != y.binders.size()) return false;
            auto frame = env.bind(x.binders, y.binders);
            return alphaGo(x.body, y.body, env);
          },
          [&](const tm::PApp& x) {
            const auto& y = std::get<tm::PApp>(b->node);
            if (x.args.size() != y.args.size()) return false;
            if (!alphaGo(x.fn, y.fn, env)) return false;
            for (size_t i = 0; i < x.args.size(); ++i)
              if (!alphaGo(x.args[i], y.args[i], env)) return false;
            return true;
          },
          [&](const tm::SubTy& x) {
            const auto& y = std::get<tm::SubTy>(b->node);
            return alphaGo(x.carrier, y.carrier, env) && alphaDisj(x.cof, y.cof, env) &&
                   alphaFaces(x.faces, y.faces, env);
          },
          [&](const tm::InS& x) {
            const auto& y = std::get<tm::InS>(b->node);
            return alphaDisj(x.cof, y.cof, env) && alphaGo(x.body, y.body, env);
          },
          [&](const tm::OutS& x) {
            const auto& y = std::get<tm::OutS>(b->node);
            return alphaDisj(x.cof, y.cof, env) && alphaGo(x.body, y.body, env);
          },
          [&](const tm::Coe& x) {
            const auto& y = std::get<tm::Coe>(b->node);
            return alphaGo(x.line, y.line, env) && alphaDisj(x.cof, y.cof, env);
          },
          [&](const tm::HComp& x) {
            const auto& y = std::get<tm::HComp>(b->node);
            return alphaGo(x.carrier, y.carrier, env) && alphaDisj(x.cof, y.cof, env) &&
                   alphaGo(x.walls, y.walls, env) && alphaGo(x.floor, y.floor, env);
          },
      },
      a->node);
}

}  // namespace detail

inline bool alphaEq(const TermPtr& a, const TermPtr& b) {
  detail::AlphaEnv env;
  return detail::alphaGo(a, b, env);
}

}  // namespace cubik
