// Simultaneous capture-avoiding substitution over terms. Substitution
// commutes into the faces of partial elements without reducing them: a
// satisfied clause is kept as an empty conjunction, a contradicted clause is
// dropped, and a compound interval replacement may split one clause into
// several. Collapsing a satisfied face to a trivial partial is evaluation's
// job, not substitution's.
#pragma once

#include "cubik/cofib.hpp"
#include "cubik/syntax.hpp"

namespace cubik {

using Subst = ISubst;  // names to terms; interval names map to interval exprs

inline TermPtr subst(const TermPtr& t, const Subst& s);

// Substitute into a face list. Faces may be dropped or duplicated; bodies
// receive the substitution unchanged otherwise.
inline Faces substFaces(const Faces& fs, const Subst& s) {
  Faces out;
  for (const Face& f : fs) {
    Disj d = substConjCofib(f.cof, s);
    if (d.isAbsurd()) continue;
    TermPtr body = subst(f.body, s);
    if (d.isTruth()) {
      out.push_back(Face{Conj{}, body});
    } else {
      for (const Conj& c : d.clauses) out.push_back(Face{c, body});
    }
  }
  return out;
}

namespace detail {

struct BinderPlan {
  std::vector<Name> binders;
  Subst inner;
  bool trivial = false;  // nothing to substitute under the binders
};

// Scope a substitution under a binder group: shadowed entries are removed
// and binders that would capture a replacement's free variable are renamed.
inline BinderPlan scopeBinders(const std::vector<Name>& binders, const Subst& s,
                               const std::initializer_list<TermPtr>& scoped) {
  BinderPlan plan;
  plan.inner = s;
  for (const Name& b : binders) plan.inner.erase(b);
  if (plan.inner.empty()) {
    plan.binders = binders;
    plan.trivial = true;
    return plan;
  }
  std::set<Name> repFvs;
  for (const auto& [k, v] : plan.inner) {
    FreeVars fv = freeVars(v);
    auto all = fv.all();
    repFvs.insert(all.begin(), all.end());
  }
  std::set<Name> avoid = repFvs;
  for (const auto& [k, v] : plan.inner) avoid.insert(k);
  for (const TermPtr& body : scoped) {
    auto all = freeVars(body).all();
    avoid.insert(all.begin(), all.end());
  }
  for (const Name& b : binders) avoid.insert(b);
  for (const Name& b : binders) {
    if (repFvs.count(b)) {
      Name fresh = freshName(b, avoid);
      avoid.insert(fresh);
      plan.inner[b] = var(fresh);
      plan.binders.push_back(fresh);
    } else {
      plan.binders.push_back(b);
    }
  }
  return plan;
}

}  // namespace detail

inline TermPtr subst(const TermPtr& t, const Subst& s) {
  if (!t || s.empty()) return t;
  Span sp = t->span;
  return std::visit(
      Overloaded{
          [&](const tm::Var& n) -> TermPtr {
            auto it = s.find(n.name);
            return it == s.end() ? t : it->second;
          },
          [&](const tm::Lam& n) -> TermPtr {
            auto plan = detail::scopeBinders({n.binder}, s, {n.body});
            if (plan.trivial) return t;
            return mk(tm::Lam{plan.binders[0], subst(n.body, plan.inner)}, sp);
          },
          [&](const tm::App& n) -> TermPtr {
            return mk(tm::App{subst(n.fn, s), subst(n.arg, s)}, sp);
          },
          [&](const tm::Pi& n) -> TermPtr {
            TermPtr dom = subst(n.dom, s);
            auto plan = detail::scopeBinders({n.binder}, s, {n.cod});
            TermPtr cod = plan.trivial ? n.cod : subst(n.cod, plan.inner);
            return mk(tm::Pi{plan.binders[0], std::move(dom), std::move(cod)}, sp);
          },
          [&](const tm::Univ&) { return t; },
          [&](const tm::ITy&) { return t; },
          [&](const tm::IConst&) { return t; },
          [&](const tm::INeg& n) -> TermPtr { return mk(tm::INeg{subst(n.body, s)}, sp); },
          [&](const tm::IAnd& n) -> TermPtr {
            return mk(tm::IAnd{subst(n.lhs, s), subst(n.rhs, s)}, sp);
          },
          [&](const tm::IOr& n) -> TermPtr {
            return mk(tm::IOr{subst(n.lhs, s), subst(n.rhs, s)}, sp);
          },
          [&](const tm::PartialEl& n) -> TermPtr {
            return mk(tm::PartialEl{substFaces(n.faces, s)}, sp);
          },
          [&](const tm::TrivialPartial& n) -> TermPtr {
            return mk(tm::TrivialPartial{subst(n.body, s)}, sp);
          },
          [&](const tm::PartialTy& n) -> TermPtr {
            return mk(tm::PartialTy{substCofib(n.cof, s), subst(n.carrier, s)}, sp);
          },
          [&](const tm::ExtTy& n) -> TermPtr {
            std::vector<TermPtr> bodies;
            bodies.push_back(n.carrier);
            for (const Face& f : n.faces) bodies.push_back(f.body);
            Subst inner = s;
            for (const Name& b : n.binders) inner.erase(b);
            if (inner.empty()) return t;
            // rename binders that would capture
            std::set<Name> repFvs;
            for (const auto& [k, v] : inner) {
              auto all = freeVars(v).all();
              repFvs.insert(all.begin(), all.end());
            }
            std::set<Name> avoid = repFvs;
            for (const auto& [k, v] : inner) avoid.insert(k);
            for (const TermPtr& b : bodies) {
              auto all = freeVars(b).all();
              avoid.insert(all.begin(), all.end());
            }
            for (const Name& b : n.binders) avoid.insert(b);
            std::vector<Name> newBinders;
            for (const Name& b : n.binders) {
              if (repFvs.count(b)) {
                Name fresh = freshName(b, avoid);
                avoid.insert(fresh);
                inner[b] = var(fresh);
                newBinders.push_back(fresh);
              } else {
                newBinders.push_back(b);
              }
            }
            return mk(tm::ExtTy{std::move(newBinders), subst(n.carrier, inner),
                                substFaces(n.faces, inner)},
                      sp);
          },
          [&](const tm::PLam& n) -> TermPtr {
            auto plan = detail::scopeBinders(n.binders, s, {n.body});
            if (plan.trivial) return t;
            return mk(tm::PLam{plan.binders, subst(n.body, plan.inner)}, sp);
          },
          [&](const tm::PApp& n) -> TermPtr {
            std::vector<TermPtr> args;
            args.reserve(n.args.size());
            for (const TermPtr& a : n.args) args.push_back(subst(a, s));
            return mk(tm::PApp{subst(n.fn, s), std::move(args)}, sp);
          },
          [&](const tm::SubTy& n) -> TermPtr {
            return mk(tm::SubTy{subst(n.carrier, s), substCofib(n.cof, s),
                                substFaces(n.faces, s)},
                      sp);
          },
          [&](const tm::InS& n) -> TermPtr {
            return mk(tm::InS{substCofib(n.cof, s), subst(n.body, s)}, sp);
          },
          [&](const tm::OutS& n) -> TermPtr {
            return mk(tm::OutS{substCofib(n.cof, s), subst(n.body, s)}, sp);
          },
          [&](const tm::Coe& n) -> TermPtr {
            return mk(tm::Coe{subst(n.line, s), substCofib(n.cof, s)}, sp);
          },
          [&](const tm::HComp& n) -> TermPtr {
            return mk(tm::HComp{subst(n.carrier, s), substCofib(n.cof, s),
                                subst(n.walls, s), subst(n.floor, s)},
                      sp);
          },
      },
      t->node);
}

inline TermPtr subst1(const TermPtr& t, const Name& x, const TermPtr& v) {
  return subst(t, Subst{{x, v}});
}

}  // namespace cubik
