// Weak-head normalization and the Kan machinery: beta rules, partial-element
// reduction, subtype cancellation, coercion and homogeneous composition
// reduction, and the derived fill/forward/comp operations. Evaluation is
// untyped except where a boundary rule needs the type of a stuck head, which
// is synthesized from the context on demand.
#pragma once

#include <cstdlib>
#include <iostream>

#include "cubik/context.hpp"
#include "cubik/pretty.hpp"
#include "cubik/subst.hpp"

namespace cubik {

inline bool& traceFlag() {
  static bool on = [] {
    const char* v = std::getenv("CUBIK_TRACE");
    return v && *v && std::string(v) != "0";
  }();
  return on;
}

inline TermPtr whnf(const Context& ctx, TermPtr t);

// ---------------------------------------------------------------------------
// Partial-element reduction by a substitution: a satisfied clause wins and
// the rest are ignored, contradicted clauses are dropped, everything else is
// rewritten in place.

struct PartialReduct {
  bool trivial = false;
  TermPtr body;  // set iff trivial
  Faces faces;   // set iff !trivial
};

inline PartialReduct reducePartial(const Faces& faces, const Subst& s) {
  PartialReduct out;
  for (const Face& f : faces) {
    Disj d = substConjCofib(f.cof, s);
    if (d.isAbsurd()) continue;
    if (d.isTruth()) {
      out.trivial = true;
      out.body = subst(f.body, s);
      out.faces.clear();
      return out;
    }
    TermPtr body = subst(f.body, s);
    for (const Conj& c : d.clauses) out.faces.push_back(Face{c, body});
  }
  return out;
}

// Apply a type line without leaving a beta redex behind; constructed terms
// must stay checkable under the bidirectional discipline.
inline TermPtr applyLine(const TermPtr& line, const TermPtr& arg) {
  if (const auto* l = as<tm::Lam>(line)) return subst1(l->body, l->binder, arg);
  return app(line, arg);
}

// ---------------------------------------------------------------------------
// Type synthesis for stuck terms, assuming well-typedness. Used by the
// boundary rule for path application, by the satisfied-face rule for outS,
// and by the type-directed reader of normal forms.

inline std::optional<TermPtr> neutralType(const Context& ctx, const TermPtr& t);

inline Faces hcompResultFaces(const tm::HComp& h) {
  Faces out;
  for (const Conj& c : clausesOf(h.cof)) {
    auto s = simplifyConj(c);
    if (!s) continue;
    out.push_back(Face{*s, subst(applyLine(h.walls, ione()), conjToSubst(*s))});
  }
  return out;
}

inline std::optional<TermPtr> neutralType(const Context& ctx, const TermPtr& t) {
  if (!t) return std::nullopt;
  if (const auto* v = as<tm::Var>(t)) {
    const Binding* b = ctx.lookup(v->name);
    if (!b || !b->type) return std::nullopt;
    return b->type;
  }
  if (const auto* a = as<tm::App>(t)) {
    if (const auto* coe = as<tm::Coe>(a->fn))
      return whnf(ctx, applyLine(coe->line, ione()));
    auto fty = neutralType(ctx, a->fn);
    if (!fty) return std::nullopt;
    TermPtr f = whnf(ctx, *fty);
    if (const auto* p = as<tm::Pi>(f)) return subst1(p->cod, p->binder, a->arg);
    return std::nullopt;
  }
  if (const auto* pa = as<tm::PApp>(t)) {
    auto fty = neutralType(ctx, pa->fn);
    if (!fty) return std::nullopt;
    TermPtr f = whnf(ctx, *fty);
    size_t consumed = 0;
    while (consumed < pa->args.size()) {
      const auto* e = as<tm::ExtTy>(f);
      if (!e || pa->args.size() - consumed < e->binders.size()) return std::nullopt;
      Subst m;
      for (size_t i = 0; i < e->binders.size(); ++i)
        m[e->binders[i]] = pa->args[consumed + i];
      consumed += e->binders.size();
      f = whnf(ctx, subst(e->carrier, m));
    }
    return f;
  }
  if (const auto* o = as<tm::OutS>(t)) {
    auto bty = neutralType(ctx, o->body);
    if (!bty) return std::nullopt;
    TermPtr b = whnf(ctx, *bty);
    if (const auto* sub = as<tm::SubTy>(b)) return sub->carrier;
    return std::nullopt;
  }
  if (const auto* h = as<tm::HComp>(t))
    return mk(tm::SubTy{h->carrier, h->cof, hcompResultFaces(*h)});
  if (const auto* c = as<tm::Coe>(t))
    return pi("_", applyLine(c->line, izero()), applyLine(c->line, ione()));
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Derived Kan operations, as term builders.

// coe(\x. A (x /\ y), cof \/ x=0) applied pointwise: the filler path from u
// to coe A cof u.
inline TermPtr transpFill(const Context& ctx, const TermPtr& line, const Disj& cof,
                          const TermPtr& u) {
  Name x = freshFor(ctx, "x", {line, u});
  Name y = freshName("y", {x});
  std::set<Name> avoid = freeVars(line).all();
  avoid.insert(x);
  y = freshName(y, avoid);
  TermPtr fillLine = lam(y, applyLine(line, iand(var(x), var(y))));
  Disj c = disjOr(cof, Disj::of({Conj{{Cond{x, false}}}}));
  return plam({x}, app(mk(tm::Coe{fillLine, c}), u));
}

// forward along A from r to 1: coe(\x. A (x \/ r), r=1). The cofibration is
// the image of r under the interval-to-cofibration map.
inline TermPtr forwardTerm(const Context&, const TermPtr& line, const TermPtr& r) {
  std::set<Name> avoid = freeVars(line).all();
  auto rv = freeVars(r).all();
  avoid.insert(rv.begin(), rv.end());
  Name x = freshName("x", avoid);
  return mk(tm::Coe{lam(x, applyLine(line, ior(var(x), r))), toCofib(r)});
}

// Heterogeneous composition along a type line, as a term: forward the walls
// and the floor to the top of the line, then compose homogeneously there.
// Requires the walls to expose a literal partial element.
inline TermPtr compTerm(const Context& ctx, const TermPtr& line, const Disj& cof,
                        const TermPtr& walls, const TermPtr& floor) {
  TermPtr floorFwd = app(forwardTerm(ctx, line, izero()), floor);
  std::set<Name> avoid = ctx.names();
  for (const TermPtr& t : {line, walls, floor}) {
    auto fv = freeVars(t).all();
    avoid.insert(fv.begin(), fv.end());
  }
  Name y = freshName("y", avoid);
  TermPtr atY = whnf(ctx, app(walls, var(y)));
  TermPtr inner;
  if (const auto* tp = as<tm::TrivialPartial>(atY)) {
    inner = mk(tm::TrivialPartial{app(forwardTerm(ctx, line, var(y)), tp->body)});
  } else if (const auto* pe = as<tm::PartialEl>(atY)) {
    Faces fs;
    for (const Face& f : pe->faces)
      fs.push_back(Face{f.cof, app(forwardTerm(ctx, line, var(y)), f.body)});
    inner = mk(tm::PartialEl{std::move(fs)});
  } else {
    throw std::logic_error("comp: walls must reduce to a literal partial element");
  }
  return mk(tm::HComp{applyLine(line, ione()), cof, lam(y, inner), floorFwd});
}

inline TermPtr comp(const Context& ctx, const TermPtr& line, const Disj& cof,
                    const TermPtr& walls, const TermPtr& floor) {
  return whnf(ctx, compTerm(ctx, line, cof, walls, floor));
}

// ---------------------------------------------------------------------------
// Coercion reduction, dispatched on the head of the line's body.

namespace detail {

inline TermPtr stuckCoeApp(const TermPtr& line, const Disj& cof, const TermPtr& arg) {
  return mk(tm::App{mk(tm::Coe{line, cof}), arg});
}

inline TermPtr coeApp(const Context& ctx, const TermPtr& line, const Disj& cof0,
                      const TermPtr& arg) {
  Disj cof = simplifyDisj(cof0);
  if (cof.isTruth()) return whnf(ctx, arg);

  std::set<Name> avoid = ctx.names();
  for (const TermPtr& t : {line, arg}) {
    auto fv = freeVars(t).all();
    avoid.insert(fv.begin(), fv.end());
  }
  Name xh = freshName("i", avoid);
  avoid.insert(xh);
  TermPtr body = whnf(ctx, applyLine(line, var(xh)));

  if (const auto* p = as<tm::Pi>(body)) {
    // The coerced function: take a at the top, slide it back along the
    // domain, apply, and carry the result forward along the codomain
    // instantiated with the domain filler.
    {
      auto fv = freeVars(body).all();
      avoid.insert(fv.begin(), fv.end());
    }
    Name a = freshName("a", avoid);
    avoid.insert(a);
    Name x2 = freshName(xh, avoid);
    avoid.insert(x2);
    Name x3 = freshName(xh, avoid);
    avoid.insert(x3);
    Name y2 = freshName("j", avoid);
    avoid.insert(y2);

    TermPtr dom = p->dom;  // mentions xh
    TermPtr backLine = lam(x2, subst1(dom, xh, ineg(var(x2))));
    TermPtr back = app(mk(tm::Coe{backLine, cof}), var(a));
    // dfill(x3): the domain filler, equal to a at x3=1 and to back at x3=0.
    TermPtr fillBody = subst1(dom, xh, ineg(iand(ineg(var(x3)), var(y2))));
    Disj fillCof = disjOr(cof, Disj::of({Conj{{Cond{x3, true}}}}));
    TermPtr dfill = app(mk(tm::Coe{lam(y2, fillBody), fillCof}), var(a));
    TermPtr codLine = lam(x3, subst(p->cod, Subst{{p->binder, dfill}, {xh, var(x3)}}));
    return lam(a, app(mk(tm::Coe{codLine, cof}), app(arg, back)));
  }

  if (const auto* e = as<tm::ExtTy>(body)) {
    if (e->binders.size() != 1) return stuckCoeApp(line, cof, arg);
    // Coercion of a one-dimensional generalized path: compose along the
    // carrier line with the frozen faces reducing to the path itself and
    // the path's own faces preserved.
    {
      auto fv = freeVars(body).all();
      avoid.insert(fv.begin(), fv.end());
    }
    Name xb = freshName(e->binders[0], avoid);
    avoid.insert(xb);
    TermPtr carrier = e->carrier;
    Faces extFaces = e->faces;
    if (xb != e->binders[0]) {
      Subst rn{{e->binders[0], var(xb)}};
      carrier = subst(carrier, rn);
      extFaces = substFaces(extFaces, rn);
    }
    TermPtr carrierLine = lam(xh, carrier);
    Faces wallFaces;
    for (const Conj& c : clausesOf(cof)) {
      auto sc = simplifyConj(c);
      if (!sc) continue;
      wallFaces.push_back(Face{*sc, papp(arg, {var(xb)})});
    }
    Disj thetaExt = Disj::absurd();
    for (const Face& f : extFaces) {
      wallFaces.push_back(f);
      thetaExt = disjOr(thetaExt, Disj::of({f.cof}));
    }
    Disj thetaTotal = disjOr(cof, thetaExt);
    TermPtr walls = lam(xh, mk(tm::PartialEl{std::move(wallFaces)}));
    TermPtr floor = papp(arg, {var(xb)});
    Context inner = ctx.extend(xb, ity(), true);
    return plam({xb}, compTerm(inner, carrierLine, thetaTotal, walls, floor));
  }

  return stuckCoeApp(line, cof, arg);
}

// Homogeneous composition eliminated at a Pi carrier.
inline TermPtr hcompApp(const Context& ctx, const tm::HComp& h, const tm::Pi& p,
                        const TermPtr& self, const TermPtr& arg) {
  std::set<Name> avoid = ctx.names();
  for (const TermPtr& t : {h.walls, h.floor, arg}) {
    auto fv = freeVars(t).all();
    avoid.insert(fv.begin(), fv.end());
  }
  Name y = freshName("y", avoid);
  TermPtr atY = whnf(ctx, app(h.walls, var(y)));
  TermPtr inner;
  if (const auto* tp = as<tm::TrivialPartial>(atY)) {
    inner = mk(tm::TrivialPartial{app(tp->body, arg)});
  } else if (const auto* pe = as<tm::PartialEl>(atY)) {
    Faces fs;
    for (const Face& f : pe->faces) fs.push_back(Face{f.cof, app(f.body, arg)});
    inner = mk(tm::PartialEl{std::move(fs)});
  } else {
    return mk(tm::App{self, arg});  // walls not literal: stuck
  }
  return whnf(ctx, mk(tm::HComp{subst1(p.cod, p.binder, arg), h.cof, lam(y, inner),
                                app(h.floor, arg)}));
}

// Homogeneous composition eliminated at an extension-type carrier: the
// instantiated faces of the carrier join the walls as degenerate sides.
inline TermPtr hcompPApp(const Context& ctx, const tm::HComp& h, const tm::ExtTy& e,
                         const TermPtr& self, const std::vector<TermPtr>& args) {
  size_t k = e.binders.size();
  if (args.size() < k) return mk(tm::PApp{self, args});
  std::vector<TermPtr> taken(args.begin(), args.begin() + k);
  std::vector<TermPtr> rest(args.begin() + k, args.end());
  Subst m;
  for (size_t i = 0; i < k; ++i) m[e.binders[i]] = taken[i];
  TermPtr carrier = subst(e.carrier, m);
  Faces extFaces = substFaces(e.faces, m);

  std::set<Name> avoid = ctx.names();
  for (const TermPtr& t : {h.walls, h.floor}) {
    auto fv = freeVars(t).all();
    avoid.insert(fv.begin(), fv.end());
  }
  for (const TermPtr& a : args) {
    auto fv = freeVars(a).all();
    avoid.insert(fv.begin(), fv.end());
  }
  Name y = freshName("y", avoid);
  TermPtr atY = whnf(ctx, app(h.walls, var(y)));
  Faces wallFaces;
  if (const auto* tp = as<tm::TrivialPartial>(atY)) {
    wallFaces.push_back(Face{Conj{}, papp(tp->body, taken)});
  } else if (const auto* pe = as<tm::PartialEl>(atY)) {
    for (const Face& f : pe->faces) wallFaces.push_back(Face{f.cof, papp(f.body, taken)});
  } else {
    return mk(tm::PApp{self, args});  // stuck
  }
  Disj thetaExt = Disj::absurd();
  for (const Face& f : extFaces) {
    wallFaces.push_back(f);
    thetaExt = disjOr(thetaExt, Disj::of({f.cof}));
  }
  Disj theta = disjOr(h.cof, thetaExt);
  TermPtr result = mk(tm::HComp{carrier, theta, lam(y, mk(tm::PartialEl{wallFaces})),
                                papp(h.floor, taken)});
  if (!rest.empty()) return whnf(ctx, mk(tm::PApp{result, rest}));
  return whnf(ctx, result);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Weak-head normalization.

namespace detail {
inline std::string traceSummary(const TermPtr& t) {
  std::string s = pretty(t);
  if (s.size() > 120) {
    s.resize(117);
    s += "...";
  }
  return s;
}
}  // namespace detail

inline TermPtr whnf(const Context& ctx, TermPtr t) {
  if (!t) return t;
  if (traceFlag()) std::cerr << "[trace] whnf " << detail::traceSummary(t) << "\n";
  return std::visit(
      Overloaded{
          [&](const tm::Var& n) -> TermPtr {
            const Binding* b = ctx.lookup(n.name);
            if (b && b->def) return whnf(ctx, b->def);
            return t;
          },
          [&](const tm::App& n) -> TermPtr {
            TermPtr f = whnf(ctx, n.fn);
            if (const auto* l = as<tm::Lam>(f))
              return whnf(ctx, subst1(l->body, l->binder, n.arg));
            if (const auto* c = as<tm::Coe>(f))
              return detail::coeApp(ctx, c->line, c->cof, n.arg);
            if (const auto* h = as<tm::HComp>(f)) {
              TermPtr carrier = whnf(ctx, h->carrier);
              if (const auto* p = as<tm::Pi>(carrier))
                return detail::hcompApp(ctx, *h, *p, f, n.arg);
            }
            if (f == n.fn) return t;
            return mk(tm::App{f, n.arg}, t->span);
          },
          [&](const tm::PApp& n) -> TermPtr {
            TermPtr f = whnf(ctx, n.fn);
            if (const auto* pl = as<tm::PLam>(f)) {
              size_t k = pl->binders.size();
              if (n.args.size() < k) return f == n.fn ? t : mk(tm::PApp{f, n.args});
              Subst m;
              for (size_t i = 0; i < k; ++i) m[pl->binders[i]] = n.args[i];
              TermPtr body = subst(pl->body, m);
              if (n.args.size() == k) return whnf(ctx, body);
              std::vector<TermPtr> rest(n.args.begin() + k, n.args.end());
              return whnf(ctx, mk(tm::PApp{body, std::move(rest)}));
            }
            if (const auto* h = as<tm::HComp>(f)) {
              TermPtr carrier = whnf(ctx, h->carrier);
              if (const auto* e = as<tm::ExtTy>(carrier))
                return detail::hcompPApp(ctx, *h, *e, f, n.args);
            }
            // Boundary rule: a stuck path applied at arguments on which one
            // of its type's faces is satisfied reduces to that face.
            if (auto ty = neutralType(ctx, f)) {
              TermPtr tv = whnf(ctx, *ty);
              if (const auto* e = as<tm::ExtTy>(tv)) {
                if (n.args.size() >= e->binders.size()) {
                  Subst m;
                  for (size_t i = 0; i < e->binders.size(); ++i)
                    m[e->binders[i]] = n.args[i];
                  PartialReduct red = reducePartial(e->faces, m);
                  if (red.trivial) {
                    if (n.args.size() == e->binders.size()) return whnf(ctx, red.body);
                    std::vector<TermPtr> rest(n.args.begin() + e->binders.size(),
                                              n.args.end());
                    return whnf(ctx, mk(tm::PApp{red.body, std::move(rest)}));
                  }
                }
              }
            }
            // Canonicalize stuck interval arguments.
            std::vector<TermPtr> args;
            args.reserve(n.args.size());
            bool changed = f != n.fn;
            for (const TermPtr& a : n.args) {
              TermPtr ca = isIExpr(a) ? embedINormal(inorm(a)) : a;
              changed = changed || !alphaEq(ca, a);
              args.push_back(std::move(ca));
            }
            if (!changed) return t;
            return mk(tm::PApp{f, std::move(args)}, t->span);
          },
          [&](const tm::OutS& n) -> TermPtr {
            TermPtr u = whnf(ctx, n.body);
            if (const auto* i = as<tm::InS>(u)) return whnf(ctx, i->body);
            if (auto ty = neutralType(ctx, u)) {
              TermPtr tv = whnf(ctx, *ty);
              if (const auto* sub = as<tm::SubTy>(tv)) {
                PartialReduct red = reducePartial(sub->faces, {});
                if (red.trivial) return whnf(ctx, red.body);
              }
            }
            return mk(tm::OutS{simplifyDisj(n.cof), u}, t->span);
          },
          [&](const tm::InS& n) -> TermPtr {
            TermPtr u = whnf(ctx, n.body);
            if (const auto* o = as<tm::OutS>(u)) return whnf(ctx, o->body);
            return mk(tm::InS{simplifyDisj(n.cof), u}, t->span);
          },
          [&](const tm::PartialEl& n) -> TermPtr {
            PartialReduct red = reducePartial(n.faces, {});
            if (red.trivial) return mk(tm::TrivialPartial{red.body}, t->span);
            return mk(tm::PartialEl{std::move(red.faces)}, t->span);
          },
          [&](const tm::PartialTy& n) -> TermPtr {
            return mk(tm::PartialTy{simplifyDisj(n.cof), n.carrier}, t->span);
          },
          [&](const tm::SubTy& n) -> TermPtr {
            return mk(tm::SubTy{n.carrier, simplifyDisj(n.cof), n.faces}, t->span);
          },
          [&](const tm::Coe& n) -> TermPtr {
            Disj cof = simplifyDisj(n.cof);
            if (cof.isTruth()) {
              Name x = freshName("v", freeVars(t).all());
              return lam(x, var(x));
            }
            return mk(tm::Coe{n.line, std::move(cof)}, t->span);
          },
          [&](const tm::HComp& n) -> TermPtr {
            Disj cof = simplifyDisj(n.cof);
            if (cof.isTruth()) {
              // Walls cover everything: the composite is the walls' top.
              TermPtr top = whnf(ctx, app(n.walls, ione()));
              if (const auto* tp = as<tm::TrivialPartial>(top)) return whnf(ctx, tp->body);
              return mk(tm::HComp{whnf(ctx, n.carrier), std::move(cof), n.walls, n.floor},
                        t->span);
            }
            if (cof.isAbsurd()) {
              // No walls at all: the composite is its floor, provided the
              // walls are a literal (hence vacuously constant) partial.
              Name y = freshName("y", freeVars(n.walls).all());
              TermPtr atY = whnf(ctx, app(n.walls, var(y)));
              if (as<tm::PartialEl>(atY) || as<tm::TrivialPartial>(atY))
                return whnf(ctx, n.floor);
            }
            return mk(tm::HComp{whnf(ctx, n.carrier), std::move(cof), n.walls, n.floor},
                      t->span);
          },
          [&](const tm::IConst&) -> TermPtr { return t; },
          [&](const tm::INeg&) -> TermPtr { return embedINormal(inorm(t)); },
          [&](const tm::IAnd&) -> TermPtr { return embedINormal(inorm(t)); },
          [&](const tm::IOr&) -> TermPtr { return embedINormal(inorm(t)); },
          [&](const auto&) -> TermPtr { return t; },  // canonical heads
      },
      t->node);
}

// ---------------------------------------------------------------------------
// Full type-directed normalization (the readback used by the CLI): eta-long
// at function and extension types, interval expressions in canonical normal
// form, recursion into stuck spines guided by synthesized types.

inline TermPtr rnf(const Context& ctx, TermPtr t, TermPtr type);

namespace detail {

inline TermPtr rnfUntyped(const Context& ctx, TermPtr t);

inline std::pair<TermPtr, TermPtr> rnfNeutral(const Context& ctx, const TermPtr& n) {
  if (const auto* v = as<tm::Var>(n)) {
    const Binding* b = ctx.lookup(v->name);
    return {n, b && b->type ? b->type : nullptr};
  }
  if (const auto* a = as<tm::App>(n)) {
    if (const auto* c = as<tm::Coe>(a->fn)) {
      TermPtr lineTy = pi("_", ity(), univ());
      TermPtr line = rnf(ctx, c->line, lineTy);
      TermPtr dom = whnf(ctx, applyLine(c->line, izero()));
      TermPtr arg = rnf(ctx, a->arg, dom);
      return {mk(tm::App{mk(tm::Coe{line, c->cof}), arg}),
              whnf(ctx, applyLine(c->line, ione()))};
    }
    auto [f, fty] = rnfNeutral(ctx, a->fn);
    if (!fty) return {mk(tm::App{f, rnfUntyped(ctx, a->arg)}), nullptr};
    TermPtr ftyv = whnf(ctx, fty);
    if (const auto* p = as<tm::Pi>(ftyv))
      return {mk(tm::App{f, rnf(ctx, a->arg, p->dom)}),
              whnf(ctx, subst1(p->cod, p->binder, a->arg))};
    return {mk(tm::App{f, rnfUntyped(ctx, a->arg)}), nullptr};
  }
  if (const auto* pa = as<tm::PApp>(n)) {
    auto [f, fty] = rnfNeutral(ctx, pa->fn);
    std::vector<TermPtr> args;
    for (const TermPtr& a : pa->args)
      args.push_back(isIExpr(a) ? embedINormal(inorm(a)) : rnfUntyped(ctx, a));
    TermPtr resTy;
    if (fty) {
      TermPtr cur = whnf(ctx, fty);
      size_t consumed = 0;
      while (consumed < pa->args.size()) {
        const auto* e = as<tm::ExtTy>(cur);
        if (!e || pa->args.size() - consumed < e->binders.size()) break;
        Subst m;
        for (size_t i = 0; i < e->binders.size(); ++i)
          m[e->binders[i]] = pa->args[consumed + i];
        consumed += e->binders.size();
        cur = whnf(ctx, subst(e->carrier, m));
      }
      if (consumed == pa->args.size()) resTy = cur;
    }
    return {mk(tm::PApp{f, std::move(args)}), resTy};
  }
  if (const auto* o = as<tm::OutS>(n)) {
    auto [b, bty] = rnfNeutral(ctx, o->body);
    TermPtr carrier;
    if (bty) {
      TermPtr bv = whnf(ctx, bty);
      if (const auto* sub = as<tm::SubTy>(bv)) carrier = sub->carrier;
    }
    return {mk(tm::OutS{o->cof, b}), carrier};
  }
  if (const auto* h = as<tm::HComp>(n)) {
    TermPtr carrier = rnf(ctx, h->carrier, univ());
    TermPtr wallsTy = pi("_", ity(), mk(tm::PartialTy{h->cof, h->carrier}));
    TermPtr walls = rnf(ctx, h->walls, wallsTy);
    TermPtr floor = rnf(ctx, h->floor, h->carrier);
    TermPtr self = mk(tm::HComp{carrier, h->cof, walls, floor});
    return {self, mk(tm::SubTy{h->carrier, h->cof, hcompResultFaces(*h)})};
  }
  return {rnfUntyped(ctx, n), nullptr};
}

// Structural descent without a guiding type; boundary rules that would need
// one simply stay stuck. Only reached off the well-typed path.
inline TermPtr rnfUntyped(const Context& ctx, TermPtr t) {
  TermPtr v = whnf(ctx, t);
  if (isIExpr(v)) return embedINormal(inorm(v));
  return std::visit(
      Overloaded{
          [&](const tm::Lam& n) -> TermPtr {
            Context inner = ctx.extend(n.binder, nullptr, false);
            return lam(n.binder, rnfUntyped(inner, n.body));
          },
          [&](const tm::PLam& n) -> TermPtr {
            Context inner = ctx;
            for (const Name& b : n.binders) inner = inner.extend(b, ity(), true);
            return plam(n.binders, rnfUntyped(inner, n.body));
          },
          [&](const tm::App& n) -> TermPtr {
            return mk(tm::App{rnfUntyped(ctx, n.fn), rnfUntyped(ctx, n.arg)});
          },
          [&](const auto&) -> TermPtr { return v; },
      },
      v->node);
}

}  // namespace detail

inline TermPtr rnf(const Context& ctx, TermPtr t, TermPtr type) {
  TermPtr ty = whnf(ctx, type);

  if (const auto* p = as<tm::Pi>(ty)) {
    TermPtr v = whnf(ctx, t);
    Name base = p->binder;
    if (const auto* l = as<tm::Lam>(v)) base = l->binder;
    Name z = freshFor(ctx, base, {v, p->cod});
    bool interval = as<tm::ITy>(whnf(ctx, p->dom)) != nullptr;
    Context inner = ctx.extend(z, p->dom, interval);
    TermPtr body = rnf(inner, app(v, var(z)), subst1(p->cod, p->binder, var(z)));
    return lam(z, body);
  }
  if (const auto* e = as<tm::ExtTy>(ty)) {
    TermPtr v = whnf(ctx, t);
    std::vector<Name> bases = e->binders;
    if (const auto* pl = as<tm::PLam>(v))
      if (pl->binders.size() == bases.size()) bases = pl->binders;
    std::set<Name> avoid = ctx.names();
    auto fv = freeVars(v).all();
    avoid.insert(fv.begin(), fv.end());
    auto fvc = freeVars(ty).all();  // binders are bound in the whole type
    avoid.insert(fvc.begin(), fvc.end());
    std::vector<Name> zs;
    std::vector<TermPtr> zvars;
    Context inner = ctx;
    Subst m;
    for (size_t i = 0; i < bases.size(); ++i) {
      Name z = freshName(bases[i], avoid);
      avoid.insert(z);
      zs.push_back(z);
      zvars.push_back(var(z));
      inner = inner.extend(z, ity(), true);
      m[e->binders[i]] = var(z);
    }
    TermPtr body = rnf(inner, papp(v, zvars), subst(e->carrier, m));
    return plam(zs, body);
  }
  if (as<tm::ITy>(ty)) {
    TermPtr v = whnf(ctx, t);
    return isIExpr(v) ? embedINormal(inorm(v)) : detail::rnfUntyped(ctx, v);
  }
  if (const auto* pt = as<tm::PartialTy>(ty)) {
    TermPtr v = whnf(ctx, t);
    if (const auto* tp = as<tm::TrivialPartial>(v))
      return mk(tm::TrivialPartial{rnf(ctx, tp->body, pt->carrier)});
    if (const auto* pe = as<tm::PartialEl>(v)) {
      Faces fs;
      for (const Face& f : pe->faces) fs.push_back(Face{f.cof, rnf(ctx, f.body, pt->carrier)});
      return mk(tm::PartialEl{std::move(fs)});
    }
    return detail::rnfNeutral(ctx, v).first;
  }
  if (const auto* st = as<tm::SubTy>(ty)) {
    TermPtr v = whnf(ctx, t);
    if (const auto* i = as<tm::InS>(v))
      return mk(tm::InS{i->cof, rnf(ctx, i->body, st->carrier)});
    return detail::rnfNeutral(ctx, v).first;
  }

  TermPtr v = whnf(ctx, t);
  if (as<tm::Univ>(ty)) {
    if (const auto* p = as<tm::Pi>(v)) {
      TermPtr dom = rnf(ctx, p->dom, univ());
      Name z = freshFor(ctx, p->binder, {p->cod});
      bool interval = as<tm::ITy>(whnf(ctx, p->dom)) != nullptr;
      Context inner = ctx.extend(z, p->dom, interval);
      return pi(z, dom, rnf(inner, subst1(p->cod, p->binder, var(z)), univ()));
    }
    if (const auto* e = as<tm::ExtTy>(v)) {
      std::set<Name> avoid = ctx.names();
      auto fv = freeVars(v).all();
      avoid.insert(fv.begin(), fv.end());
      Context inner = ctx;
      Subst m;
      std::vector<Name> zs;
      for (const Name& b : e->binders) {
        Name z = freshName(b, avoid);
        avoid.insert(z);
        zs.push_back(z);
        inner = inner.extend(z, ity(), true);
        m[b] = var(z);
      }
      TermPtr carrier = subst(e->carrier, m);
      TermPtr carrierNf = rnf(inner, carrier, univ());
      Faces fs;
      for (const Face& f : substFaces(e->faces, m))
        fs.push_back(Face{f.cof, rnf(inner, f.body, carrier)});
      return mk(tm::ExtTy{std::move(zs), carrierNf, std::move(fs)});
    }
    if (const auto* pt = as<tm::PartialTy>(v))
      return mk(tm::PartialTy{pt->cof, rnf(ctx, pt->carrier, univ())});
    if (const auto* st = as<tm::SubTy>(v)) {
      Faces fs;
      for (const Face& f : st->faces)
        fs.push_back(Face{f.cof, rnf(ctx, f.body, st->carrier)});
      return mk(tm::SubTy{rnf(ctx, st->carrier, univ()), st->cof, std::move(fs)});
    }
    if (as<tm::Univ>(v) || as<tm::ITy>(v)) return v;
    return detail::rnfNeutral(ctx, v).first;
  }

  // Neutral type: the inhabitants are stuck terms.
  return detail::rnfNeutral(ctx, v).first;
}

}  // namespace cubik
