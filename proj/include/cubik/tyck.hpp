// Bidirectional type checker: introduction forms check, elimination forms
// infer, and conversion mediates the mode switches. Judgments under a
// cofibration are run clause by clause by turning each conjunction into a
// substitution and applying it to the context, the terms and the type.
#pragma once

#include "cubik/eval.hpp"
#include "cubik/pretty.hpp"

namespace cubik {

enum class ErrCode {
  TypeMismatch,
  NotAType,
  IllFormedCofibration,
  FaceDisagreement,
  FreezeViolation,
  FloorWallDisagreement,
  BoundaryMismatch,
  UnboundVariable,
  NotFibrant,
  CoeExtArity,
  CannotInfer,
};

inline const char* errCodeString(ErrCode c) {
  switch (c) {
    case ErrCode::TypeMismatch: return "E-TYPE-MISMATCH";
    case ErrCode::NotAType: return "E-NOT-A-TYPE";
    case ErrCode::IllFormedCofibration: return "E-ILL-COFIB";
    case ErrCode::FaceDisagreement: return "E-FACE-DISAGREE";
    case ErrCode::FreezeViolation: return "E-FREEZE-VIOLATION";
    case ErrCode::FloorWallDisagreement: return "E-FLOOR-WALL-DISAGREE";
    case ErrCode::BoundaryMismatch: return "E-BOUNDARY-MISMATCH";
    case ErrCode::UnboundVariable: return "E-UNBOUND-VAR";
    case ErrCode::NotFibrant: return "E-NOT-FIBRANT";
    case ErrCode::CoeExtArity: return "E-COE-EXT-ARITY";
    case ErrCode::CannotInfer: return "E-CANNOT-INFER";
  }
  return "E-INTERNAL";
}

struct TypeError : std::runtime_error {
  ErrCode code;
  std::string message;
  Span span;
  std::string witness;  // counterexample substitution, when one exists

  TypeError(ErrCode c, std::string msg, Span sp, std::string w)
      : std::runtime_error(std::string(errCodeString(c)) + ": " + msg),
        code(c),
        message(std::move(msg)),
        span(sp),
        witness(std::move(w)) {}
};

[[noreturn]] inline void fail(ErrCode code, std::string msg, Span sp,
                              std::string witness = {}) {
  throw TypeError(code, std::move(msg), sp, std::move(witness));
}

inline void check(const Context& ctx, const TermPtr& t, const TermPtr& expected);
inline TermPtr infer(const Context& ctx, const TermPtr& t);
inline bool convert(const Context& ctx, const TermPtr& a, const TermPtr& b,
                    const TermPtr& type);

// ---------------------------------------------------------------------------
// Judgments under cofibrations.

inline bool convUnderConj(const Context& ctx, const Conj& theta, const TermPtr& a,
                          const TermPtr& b, const TermPtr& type) {
  Subst s = conjToSubst(theta);
  Context restricted = ctx.applySubst(s);
  return convert(restricted, subst(a, s), subst(b, s), subst(type, s));
}

inline bool convertUnderDisj(const Context& ctx, const Disj& d, const TermPtr& a,
                             const TermPtr& b, const TermPtr& type) {
  for (const Conj& c : clausesOf(d)) {
    auto s = simplifyConj(c);
    if (!s) continue;  // self-contradictory branch holds vacuously
    if (!convUnderConj(ctx, *s, a, b, type)) return false;
  }
  return true;
}

inline void checkUnderConj(const Context& ctx, const Conj& theta, const TermPtr& t,
                           const TermPtr& type) {
  Subst s = conjToSubst(theta);
  Context restricted = ctx.applySubst(s);
  check(restricted, subst(t, s), subst(type, s));
}

// A type line is frozen on a cofibration when it is judgmentally constant
// under it: with a fresh interval x, A 0 and A x convert under every clause.
inline bool freezes(const Context& ctx, const TermPtr& line, const Disj& cof) {
  Name x = freshFor(ctx, "x", {line});
  Context inner = ctx.extend(x, ity(), true);
  for (const Conj& c : clausesOf(cof)) {
    auto s = simplifyConj(c);
    if (!s) continue;
    if (!convUnderConj(inner, *s, applyLine(line, izero()), applyLine(line, var(x)), univ()))
      return false;
  }
  return true;
}

// Pretypes do not support the Kan operations.
inline bool isFibrant(const TermPtr& whnfType) {
  return !(as<tm::ITy>(whnfType) || as<tm::PartialTy>(whnfType) ||
           as<tm::SubTy>(whnfType));
}

// ---------------------------------------------------------------------------
// Conversion.

namespace detail {

inline bool valueConvert(const Context& ctx, const TermPtr& a, const TermPtr& b);

// Structural comparison of stuck terms; returns their common type when the
// spines match, so arguments can be compared type-directed.
inline std::optional<TermPtr> convertNeutral(const Context& ctx, const TermPtr& a,
                                             const TermPtr& b) {
  if (a->node.index() != b->node.index()) return std::nullopt;

  if (const auto* va = as<tm::Var>(a)) {
    const auto* vb = as<tm::Var>(b);
    if (va->name != vb->name) return std::nullopt;
    const Binding* bind = ctx.lookup(va->name);
    if (!bind || !bind->type) return std::nullopt;
    return bind->type;
  }
  if (const auto* aa = as<tm::App>(a)) {
    const auto* ab = as<tm::App>(b);
    const auto* ca = as<tm::Coe>(aa->fn);
    const auto* cb = as<tm::Coe>(ab->fn);
    if (ca && cb) {
      if (!cofibEquiv(ca->cof, cb->cof)) return std::nullopt;
      if (!convert(ctx, ca->line, cb->line, pi("_", ity(), univ()))) return std::nullopt;
      TermPtr dom = whnf(ctx, applyLine(ca->line, izero()));
      if (!convert(ctx, aa->arg, ab->arg, dom)) return std::nullopt;
      return whnf(ctx, applyLine(ca->line, ione()));
    }
    if (ca || cb) return std::nullopt;
    auto fty = convertNeutral(ctx, aa->fn, ab->fn);
    if (!fty) return std::nullopt;
    TermPtr f = whnf(ctx, *fty);
    const auto* p = as<tm::Pi>(f);
    if (!p) return std::nullopt;
    if (!convert(ctx, aa->arg, ab->arg, p->dom)) return std::nullopt;
    return whnf(ctx, subst1(p->cod, p->binder, aa->arg));
  }
  if (const auto* pa = as<tm::PApp>(a)) {
    const auto* pb = as<tm::PApp>(b);
    if (pa->args.size() != pb->args.size()) return std::nullopt;
    auto fty = convertNeutral(ctx, pa->fn, pb->fn);
    if (!fty) return std::nullopt;
    for (size_t i = 0; i < pa->args.size(); ++i) {
      if (!isIExpr(pa->args[i]) || !isIExpr(pb->args[i])) return std::nullopt;
      if (!iconv(pa->args[i], pb->args[i])) return std::nullopt;
    }
    TermPtr cur = whnf(ctx, *fty);
    size_t consumed = 0;
    while (consumed < pa->args.size()) {
      const auto* e = as<tm::ExtTy>(cur);
      if (!e || pa->args.size() - consumed < e->binders.size()) return std::nullopt;
      Subst m;
      for (size_t i = 0; i < e->binders.size(); ++i)
        m[e->binders[i]] = pa->args[consumed + i];
      consumed += e->binders.size();
      cur = whnf(ctx, subst(e->carrier, m));
    }
    return cur;
  }
  if (const auto* oa = as<tm::OutS>(a)) {
    const auto* ob = as<tm::OutS>(b);
    if (!cofibEquiv(oa->cof, ob->cof)) return std::nullopt;
    auto bty = convertNeutral(ctx, oa->body, ob->body);
    if (!bty) return std::nullopt;
    TermPtr s = whnf(ctx, *bty);
    const auto* sub = as<tm::SubTy>(s);
    if (!sub) return std::nullopt;
    return sub->carrier;
  }
  if (const auto* ha = as<tm::HComp>(a)) {
    const auto* hb = as<tm::HComp>(b);
    if (!cofibEquiv(ha->cof, hb->cof)) return std::nullopt;
    if (!convert(ctx, ha->carrier, hb->carrier, univ())) return std::nullopt;
    TermPtr wallsTy = pi("_", ity(), mk(tm::PartialTy{ha->cof, ha->carrier}));
    if (!convert(ctx, ha->walls, hb->walls, wallsTy)) return std::nullopt;
    if (!convert(ctx, ha->floor, hb->floor, ha->carrier)) return std::nullopt;
    return mk(tm::SubTy{ha->carrier, ha->cof, hcompResultFaces(*ha)});
  }
  return std::nullopt;
}

// Face agreement between two face lists over equivalent cofibrations: under
// every clause both restrict to trivial partials with convertible bodies.
inline bool facesAgree(const Context& ctx, const Faces& fa, const Faces& fb,
                       const TermPtr& carrier) {
  Disj da = Disj::absurd();
  for (const Face& f : fa) da = disjOr(da, Disj::of({f.cof}));
  Disj db = Disj::absurd();
  for (const Face& f : fb) db = disjOr(db, Disj::of({f.cof}));
  if (!cofibEquiv(da, db)) return false;
  std::vector<Conj> all = clausesOf(da);
  auto more = clausesOf(db);
  all.insert(all.end(), more.begin(), more.end());
  for (const Conj& c : all) {
    auto sc = simplifyConj(c);
    if (!sc) continue;
    Subst s = conjToSubst(*sc);
    PartialReduct ra = reducePartial(fa, s);
    PartialReduct rb = reducePartial(fb, s);
    if (!ra.trivial || !rb.trivial) return false;
    Context restricted = ctx.applySubst(s);
    if (!convert(restricted, ra.body, rb.body, subst(carrier, s))) return false;
  }
  return true;
}

inline bool typeConvert(const Context& ctx, const TermPtr& a, const TermPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  if (const auto* pa = as<tm::Pi>(a)) {
    const auto* pb = as<tm::Pi>(b);
    if (!convert(ctx, pa->dom, pb->dom, univ())) return false;
    Name z = freshFor(ctx, pa->binder, {pa->cod, pb->cod});
    bool iv = as<tm::ITy>(whnf(ctx, pa->dom)) != nullptr;
    Context inner = ctx.extend(z, pa->dom, iv);
    return convert(inner, subst1(pa->cod, pa->binder, var(z)),
                   subst1(pb->cod, pb->binder, var(z)), univ());
  }
  if (const auto* ea = as<tm::ExtTy>(a)) {
    const auto* eb = as<tm::ExtTy>(b);
    if (ea->binders.size() != eb->binders.size()) return false;
    std::set<Name> avoid = ctx.names();
    for (const TermPtr& t : {a, b}) {
      auto fv = freeVars(t).all();
      avoid.insert(fv.begin(), fv.end());
    }
    Context inner = ctx;
    Subst ma, mb;
    for (size_t i = 0; i < ea->binders.size(); ++i) {
      Name z = freshName(ea->binders[i], avoid);
      avoid.insert(z);
      inner = inner.extend(z, ity(), true);
      ma[ea->binders[i]] = var(z);
      mb[eb->binders[i]] = var(z);
    }
    TermPtr carA = subst(ea->carrier, ma);
    if (!convert(inner, carA, subst(eb->carrier, mb), univ())) return false;
    return facesAgree(inner, substFaces(ea->faces, ma), substFaces(eb->faces, mb), carA);
  }
  if (const auto* ta = as<tm::PartialTy>(a)) {
    const auto* tb = as<tm::PartialTy>(b);
    return cofibEquiv(ta->cof, tb->cof) && convert(ctx, ta->carrier, tb->carrier, univ());
  }
  if (const auto* sa = as<tm::SubTy>(a)) {
    const auto* sb = as<tm::SubTy>(b);
    if (!cofibEquiv(sa->cof, sb->cof)) return false;
    if (!convert(ctx, sa->carrier, sb->carrier, univ())) return false;
    return facesAgree(ctx, sa->faces, sb->faces, sa->carrier);
  }
  if (as<tm::Univ>(a) || as<tm::ITy>(a)) return true;
  return valueConvert(ctx, a, b);
}

inline bool valueConvert(const Context& ctx, const TermPtr& a0, const TermPtr& b0) {
  TermPtr a = whnf(ctx, a0);
  TermPtr b = whnf(ctx, b0);
  if (alphaEq(a, b)) return true;
  if (isIExpr(a) && isIExpr(b)) return iconv(a, b);
  if (a->node.index() != b->node.index()) return false;
  if (as<tm::Pi>(a) || as<tm::ExtTy>(a) || as<tm::PartialTy>(a) || as<tm::SubTy>(a))
    return typeConvert(ctx, a, b);
  if (const auto* la = as<tm::Lam>(a)) {
    const auto* lb = as<tm::Lam>(b);
    Name z = freshFor(ctx, la->binder, {a, b});
    Context inner = ctx.extend(z, nullptr, false);
    return valueConvert(inner, subst1(la->body, la->binder, var(z)),
                        subst1(lb->body, lb->binder, var(z)));
  }
  if (const auto* pa = as<tm::PLam>(a)) {
    const auto* pb = as<tm::PLam>(b);
    if (pa->binders.size() != pb->binders.size()) return false;
    std::set<Name> avoid = ctx.names();
    for (const TermPtr& t : {a, b}) {
      auto fv = freeVars(t).all();
      avoid.insert(fv.begin(), fv.end());
    }
    Subst ma, mb;
    Context inner = ctx;
    for (size_t i = 0; i < pa->binders.size(); ++i) {
      Name z = freshName(pa->binders[i], avoid);
      avoid.insert(z);
      inner = inner.extend(z, ity(), true);
      ma[pa->binders[i]] = var(z);
      mb[pb->binders[i]] = var(z);
    }
    return valueConvert(inner, subst(pa->body, ma), subst(pb->body, mb));
  }
  if (const auto* ia = as<tm::InS>(a)) {
    const auto* ib = as<tm::InS>(b);
    return cofibEquiv(ia->cof, ib->cof) && valueConvert(ctx, ia->body, ib->body);
  }
  if (const auto* ta = as<tm::TrivialPartial>(a)) {
    const auto* tb = as<tm::TrivialPartial>(b);
    return valueConvert(ctx, ta->body, tb->body);
  }
  if (const auto* ca = as<tm::Coe>(a)) {
    const auto* cb = as<tm::Coe>(b);
    return cofibEquiv(ca->cof, cb->cof) &&
           convert(ctx, ca->line, cb->line, pi("_", ity(), univ()));
  }
  return convertNeutral(ctx, a, b).has_value();
}

}  // namespace detail

inline bool convert(const Context& ctx0, const TermPtr& a, const TermPtr& b,
                    const TermPtr& type) {
  // A nontrivial ambient restriction runs the check clause by clause; the
  // absurd restriction has no clauses and every check holds vacuously.
  if (!ctx0.restriction().isTruth()) {
    Disj r = ctx0.restriction();
    Context ctx = ctx0.withRestriction(Disj::truth());
    return convertUnderDisj(ctx, r, a, b, type);
  }
  const Context& ctx = ctx0;
  TermPtr T = whnf(ctx, type);

  if (const auto* p = as<tm::Pi>(T)) {
    Name z = freshFor(ctx, p->binder, {a, b, p->cod});
    bool iv = as<tm::ITy>(whnf(ctx, p->dom)) != nullptr;
    Context inner = ctx.extend(z, p->dom, iv);
    return convert(inner, app(a, var(z)), app(b, var(z)),
                   subst1(p->cod, p->binder, var(z)));
  }
  if (const auto* e = as<tm::ExtTy>(T)) {
    std::set<Name> avoid = ctx.names();
    for (const TermPtr& t : {a, b, e->carrier}) {
      auto fv = freeVars(t).all();
      avoid.insert(fv.begin(), fv.end());
    }
    for (const Face& f : e->faces) {
      auto fv = freeVars(f.body).all();
      avoid.insert(fv.begin(), fv.end());
    }
    Context inner = ctx;
    Subst m;
    std::vector<TermPtr> zvars;
    for (const Name& bn : e->binders) {
      Name z = freshName(bn, avoid);
      avoid.insert(z);
      inner = inner.extend(z, ity(), true);
      m[bn] = var(z);
      zvars.push_back(var(z));
    }
    return convert(inner, papp(a, zvars), papp(b, zvars), subst(e->carrier, m));
  }
  if (as<tm::ITy>(T)) {
    TermPtr va = whnf(ctx, a);
    TermPtr vb = whnf(ctx, b);
    return isIExpr(va) && isIExpr(vb) && iconv(va, vb);
  }
  if (const auto* pt = as<tm::PartialTy>(T)) {
    for (const Conj& c : clausesOf(pt->cof)) {
      auto sc = simplifyConj(c);
      if (!sc) continue;
      Subst s = conjToSubst(*sc);
      Context restricted = ctx.applySubst(s);
      TermPtr va = whnf(restricted, subst(a, s));
      TermPtr vb = whnf(restricted, subst(b, s));
      TermPtr carrier = subst(pt->carrier, s);
      const auto* ta = as<tm::TrivialPartial>(va);
      const auto* tb = as<tm::TrivialPartial>(vb);
      if (ta && tb) {
        if (!convert(restricted, ta->body, tb->body, carrier)) return false;
        continue;
      }
      const auto* ea = as<tm::PartialEl>(va);
      const auto* eb = as<tm::PartialEl>(vb);
      if (ea && eb) {
        if (ea->faces.size() != eb->faces.size()) return false;
        for (size_t i = 0; i < ea->faces.size(); ++i) {
          auto fa = simplifyConj(ea->faces[i].cof);
          auto fb = simplifyConj(eb->faces[i].cof);
          if (!fa || !fb || !(*fa == *fb)) return false;
          if (!convUnderConj(restricted, *fa, ea->faces[i].body, eb->faces[i].body,
                             carrier))
            return false;
        }
        continue;
      }
      if (ta || tb || ea || eb) return false;
      if (!detail::valueConvert(restricted, va, vb)) return false;
    }
    return true;
  }
  if (const auto* st = as<tm::SubTy>(T)) {
    return convert(ctx, mk(tm::OutS{st->cof, a}), mk(tm::OutS{st->cof, b}), st->carrier);
  }
  if (as<tm::Univ>(T)) {
    TermPtr va = whnf(ctx, a);
    TermPtr vb = whnf(ctx, b);
    if (alphaEq(va, vb)) return true;
    if (va->node.index() != vb->node.index())
      return detail::convertNeutral(ctx, va, vb).has_value();
    return detail::typeConvert(ctx, va, vb);
  }
  // Neutral type: structural comparison of values.
  return detail::valueConvert(ctx, a, b);
}

// ---------------------------------------------------------------------------
// Partial elements: every face checks under its clause, every pair of faces
// agrees on the (possibly absurd) intersection. Returns the covered
// cofibration.

inline Disj checkPartial(const Context& ctx, const Faces& faces, const TermPtr& type) {
  std::set<Name> psi = ctx.psi();
  struct Kept {
    Conj cof;
    TermPtr body;
    Span span;
  };
  std::vector<Kept> kept;
  for (const Face& f : faces) {
    if (!wellFormed(psi, Disj::of({f.cof})))
      fail(ErrCode::IllFormedCofibration,
           "cofibration mentions an interval variable that is not in scope: " +
               prettyConj(f.cof),
           f.body ? f.body->span : Span{});
    auto sc = simplifyConj(f.cof);
    if (!sc) continue;  // self-contradictory face: dropped
    checkUnderConj(ctx, *sc, f.body, type);
    kept.push_back(Kept{*sc, f.body, f.body->span});
  }
  for (size_t i = 0; i < kept.size(); ++i) {
    for (size_t j = i + 1; j < kept.size(); ++j) {
      Conj both = kept[i].cof;
      both.conds.insert(both.conds.end(), kept[j].cof.conds.begin(),
                        kept[j].cof.conds.end());
      auto meet = simplifyConj(both);
      if (!meet) continue;  // no overlap
      if (!convUnderConj(ctx, *meet, kept[i].body, kept[j].body, type)) {
        std::string witness = prettySubstWitness(*meet);
        fail(ErrCode::FaceDisagreement,
             "faces " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                 " disagree on their overlap " + witness + ": " +
                 pretty(subst(kept[i].body, conjToSubst(*meet))) + " /= " +
                 pretty(subst(kept[j].body, conjToSubst(*meet))),
             kept[j].span, witness);
      }
    }
  }
  std::vector<Conj> cover;
  for (const Kept& k : kept) cover.push_back(k.cof);
  return simplifyDisj(Disj::of(std::move(cover)));
}

// ---------------------------------------------------------------------------
// Inference.

namespace detail {

struct HCompTypes {
  TermPtr carrier;  // whnf'd
  TermPtr subResult;
};

inline HCompTypes inferHComp(const Context& ctx, const tm::HComp& h, Span sp);

}  // namespace detail

inline TermPtr checkType(const Context& ctx, const TermPtr& t) {
  if (as<tm::Lam>(t) || as<tm::PLam>(t) || as<tm::PartialEl>(t) ||
      as<tm::TrivialPartial>(t) || as<tm::InS>(t))
    fail(ErrCode::NotAType, "this term is not a type", t->span);
  check(ctx, t, univ());
  return whnf(ctx, t);
}

inline TermPtr infer(const Context& ctx, const TermPtr& t) {
  if (!t) fail(ErrCode::CannotInfer, "no term", Span{});
  return std::visit(
      Overloaded{
          [&](const tm::Var& n) -> TermPtr {
            const Binding* b = ctx.lookup(n.name);
            if (!b) fail(ErrCode::UnboundVariable, "unbound variable '" + n.name + "'", t->span);
            return b->type;
          },
          [&](const tm::App& n) -> TermPtr {
            TermPtr fty = whnf(ctx, infer(ctx, n.fn));
            const auto* p = as<tm::Pi>(fty);
            if (!p)
              fail(ErrCode::TypeMismatch,
                   "cannot apply a term of type " + pretty(fty), t->span);
            check(ctx, n.arg, p->dom);
            return subst1(p->cod, p->binder, n.arg);
          },
          [&](const tm::PApp& n) -> TermPtr {
            TermPtr cur = whnf(ctx, infer(ctx, n.fn));
            size_t consumed = 0;
            for (const TermPtr& a : n.args) check(ctx, a, ity());
            while (consumed < n.args.size()) {
              const auto* e = as<tm::ExtTy>(cur);
              if (!e)
                fail(ErrCode::TypeMismatch,
                     "path application to a term of type " + pretty(cur), t->span);
              if (n.args.size() - consumed < e->binders.size())
                fail(ErrCode::TypeMismatch,
                     "path application expects " + std::to_string(e->binders.size()) +
                         " interval argument(s) here but got " +
                         std::to_string(n.args.size() - consumed),
                     t->span);
              Subst m;
              for (size_t i = 0; i < e->binders.size(); ++i)
                m[e->binders[i]] = n.args[consumed + i];
              consumed += e->binders.size();
              cur = whnf(ctx, subst(e->carrier, m));
            }
            return cur;
          },
          [&](const tm::OutS& n) -> TermPtr {
            TermPtr bty = whnf(ctx, infer(ctx, n.body));
            const auto* sub = as<tm::SubTy>(bty);
            if (!sub)
              fail(ErrCode::TypeMismatch, "outS applied to a term of type " + pretty(bty),
                   t->span);
            if (!cofibEquiv(n.cof, sub->cof))
              fail(ErrCode::TypeMismatch,
                   "outS cofibration " + prettyCofib(n.cof) +
                       " does not match the subtype's " + prettyCofib(sub->cof),
                   t->span);
            return sub->carrier;
          },
          [&](const tm::Coe& n) -> TermPtr {
            check(ctx, n.line, pi("_", ity(), univ()));
            if (!wellFormed(ctx.psi(), n.cof))
              fail(ErrCode::IllFormedCofibration,
                   "cofibration mentions an interval variable that is not in scope: " +
                       prettyCofib(n.cof),
                   t->span);
            Name x = freshFor(ctx, "x", {n.line});
            Context inner = ctx.extend(x, ity(), true);
            TermPtr body = whnf(inner, applyLine(n.line, var(x)));
            if (!isFibrant(body))
              fail(ErrCode::NotFibrant,
                   "coercion along a line of non-fibrant types: " + pretty(body), t->span);
            if (const auto* e = as<tm::ExtTy>(body))
              if (e->binders.size() > 1)
                fail(ErrCode::CoeExtArity,
                     "coercion along a line of multi-dimensional extension types is "
                     "not supported; one interval binder is the limit",
                     t->span);
            if (!freezes(ctx, n.line, n.cof))
              fail(ErrCode::FreezeViolation,
                   "the line is not constant on its cofibration " + prettyCofib(n.cof),
                   t->span);
            return pi("_", applyLine(n.line, izero()), applyLine(n.line, ione()));
          },
          [&](const tm::HComp& n) -> TermPtr {
            return detail::inferHComp(ctx, n, t->span).subResult;
          },
          [&](const tm::Pi& n) -> TermPtr {
            checkType(ctx, n.dom);
            Name z = freshFor(ctx, n.binder, {n.cod});
            TermPtr cod = z == n.binder ? n.cod : subst1(n.cod, n.binder, var(z));
            bool iv = as<tm::ITy>(whnf(ctx, n.dom)) != nullptr;
            Context inner = ctx.extend(z, n.dom, iv);
            check(inner, cod, univ());
            return univ();
          },
          [&](const tm::Univ&) -> TermPtr { return univ(); },
          [&](const tm::ITy&) -> TermPtr { return univ(); },
          [&](const tm::IConst&) -> TermPtr { return ity(); },
          [&](const tm::INeg& n) -> TermPtr {
            check(ctx, n.body, ity());
            return ity();
          },
          [&](const tm::IAnd& n) -> TermPtr {
            check(ctx, n.lhs, ity());
            check(ctx, n.rhs, ity());
            return ity();
          },
          [&](const tm::IOr& n) -> TermPtr {
            check(ctx, n.lhs, ity());
            check(ctx, n.rhs, ity());
            return ity();
          },
          [&](const tm::ExtTy& n) -> TermPtr {
            // Bound cofibrations: face conditions may mention only the
            // binders introduced here.
            std::set<Name> binderSet(n.binders.begin(), n.binders.end());
            for (const Face& f : n.faces)
              for (const Cond& c : f.cof.conds)
                if (!binderSet.count(c.var))
                  fail(ErrCode::IllFormedCofibration,
                       "extension-type faces may mention only its own binders; '" +
                           c.var + "' is not one of them",
                       t->span);
            std::set<Name> avoid = ctx.names();
            auto fv = freeVars(t).all();
            avoid.insert(fv.begin(), fv.end());
            Context inner = ctx;
            Subst m;
            bool renamed = false;
            for (const Name& b : n.binders) {
              Name z = freshName(b, avoid);
              avoid.insert(z);
              if (z != b) renamed = true;
              m[b] = var(z);
              inner = inner.extend(z, ity(), true);
            }
            TermPtr carrier = renamed ? subst(n.carrier, m) : n.carrier;
            Faces faces = renamed ? substFaces(n.faces, m) : n.faces;
            TermPtr carrierV = checkType(inner, carrier);
            checkPartial(inner, faces, carrierV);
            return univ();
          },
          [&](const tm::PartialTy& n) -> TermPtr {
            if (!wellFormed(ctx.psi(), n.cof))
              fail(ErrCode::IllFormedCofibration,
                   "cofibration mentions an interval variable that is not in scope: " +
                       prettyCofib(n.cof),
                   t->span);
            checkType(ctx, n.carrier);
            return univ();
          },
          [&](const tm::SubTy& n) -> TermPtr {
            TermPtr carrierV = checkType(ctx, n.carrier);
            if (!wellFormed(ctx.psi(), n.cof))
              fail(ErrCode::IllFormedCofibration,
                   "cofibration mentions an interval variable that is not in scope: " +
                       prettyCofib(n.cof),
                   t->span);
            Disj covered = checkPartial(ctx, n.faces, carrierV);
            if (!cofibEquiv(covered, n.cof))
              fail(ErrCode::TypeMismatch,
                   "subtype faces cover " + prettyCofib(covered) +
                       " but the cofibration is " + prettyCofib(n.cof),
                   t->span);
            return univ();
          },
          [&](const auto&) -> TermPtr {
            fail(ErrCode::CannotInfer,
                 "cannot infer a type for this term; it only checks against a "
                 "given type",
                 t->span);
          },
      },
      t->node);
}

namespace detail {

inline HCompTypes inferHComp(const Context& ctx, const tm::HComp& h, Span sp) {
  TermPtr carrier = checkType(ctx, h.carrier);
  if (!isFibrant(carrier))
    fail(ErrCode::NotFibrant,
         "homogeneous composition at a non-fibrant type: " + pretty(carrier), sp);
  if (!wellFormed(ctx.psi(), h.cof))
    fail(ErrCode::IllFormedCofibration,
         "cofibration mentions an interval variable that is not in scope: " +
             prettyCofib(h.cof),
         sp);
  check(ctx, h.floor, carrier);
  check(ctx, h.walls, pi("_", ity(), mk(tm::PartialTy{h.cof, carrier})));
  // The floor must agree with the walls at the base of the composition.
  for (const Conj& c : clausesOf(h.cof)) {
    auto sc = simplifyConj(c);
    if (!sc) continue;
    Subst s = conjToSubst(*sc);
    Context restricted = ctx.applySubst(s);
    TermPtr w0 = whnf(restricted, subst(applyLine(h.walls, izero()), s));
    TermPtr floorS = subst(h.floor, s);
    TermPtr carrierS = subst(carrier, s);
    bool ok;
    if (const auto* tp = as<tm::TrivialPartial>(w0)) {
      ok = convert(restricted, tp->body, floorS, carrierS);
    } else {
      ok = convert(restricted, w0, mk(tm::TrivialPartial{floorS}),
                   mk(tm::PartialTy{Disj::truth(), carrierS}));
    }
    if (!ok)
      fail(ErrCode::FloorWallDisagreement,
           "the floor does not agree with the walls at 0 under " + prettyConj(*sc),
           sp, prettySubstWitness(*sc));
  }
  Faces atTop = hcompResultFaces(h);
  return HCompTypes{carrier, mk(tm::SubTy{carrier, h.cof, atTop})};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Checking.

inline void check(const Context& ctx, const TermPtr& t, const TermPtr& expected) {
  TermPtr T = whnf(ctx, expected);

  if (as<tm::ITy>(T) && !isIExpr(t))
    fail(ErrCode::TypeMismatch,
         "interval expressions are built from 0, 1, variables, ~, /\\ and \\/",
         t->span);

  if (const auto* l = as<tm::Lam>(t)) {
    const auto* p = as<tm::Pi>(T);
    if (!p)
      fail(ErrCode::TypeMismatch, "lambda checked against " + pretty(T), t->span);
    std::set<Name> avoid = ctx.names();
    for (const TermPtr& part : {l->body, p->cod}) {
      auto fv = freeVars(part).all();
      avoid.insert(fv.begin(), fv.end());
    }
    Name z = freshName(l->binder, avoid);
    TermPtr body = z == l->binder ? l->body : subst1(l->body, l->binder, var(z));
    TermPtr cod = subst1(p->cod, p->binder, var(z));
    bool iv = as<tm::ITy>(whnf(ctx, p->dom)) != nullptr;
    check(ctx.extend(z, p->dom, iv), body, cod);
    return;
  }

  if (const auto* pl = as<tm::PLam>(t)) {
    const auto* e = as<tm::ExtTy>(T);
    if (!e)
      fail(ErrCode::TypeMismatch, "path lambda checked against " + pretty(T), t->span);
    if (pl->binders.size() != e->binders.size())
      fail(ErrCode::TypeMismatch,
           "path lambda binds " + std::to_string(pl->binders.size()) +
               " interval(s) but the type has " + std::to_string(e->binders.size()),
           t->span);
    // Adapt the type to the term's binders: substitute the type's intervals
    // by (freshened copies of) the term's, then check the body in place.
    std::set<Name> avoid = ctx.names();
    for (const TermPtr& part : {pl->body, e->carrier}) {
      auto fv = freeVars(part).all();
      avoid.insert(fv.begin(), fv.end());
    }
    for (const Face& f : e->faces) {
      auto fv = freeVars(f.body).all();
      avoid.insert(fv.begin(), fv.end());
    }
    Subst mTerm, mType;
    Context inner = ctx;
    bool renamedTerm = false;
    for (size_t i = 0; i < pl->binders.size(); ++i) {
      Name z = freshName(pl->binders[i], avoid);
      avoid.insert(z);
      if (z != pl->binders[i]) renamedTerm = true;
      mTerm[pl->binders[i]] = var(z);
      mType[e->binders[i]] = var(z);
      inner = inner.extend(z, ity(), true);
    }
    TermPtr body = renamedTerm ? subst(pl->body, mTerm) : pl->body;
    TermPtr carrier = subst(e->carrier, mType);
    Faces faces = substFaces(e->faces, mType);
    check(inner, body, carrier);
    for (const Face& f : faces) {
      auto sc = simplifyConj(f.cof);
      if (!sc) continue;
      if (!convUnderConj(inner, *sc, body, f.body, carrier))
        fail(ErrCode::BoundaryMismatch,
             "the body does not match the face " + prettyConj(*sc) + " -> " +
                 pretty(f.body),
             t->span, prettySubstWitness(*sc));
    }
    return;
  }

  if (const auto* pe = as<tm::PartialEl>(t)) {
    const auto* pt = as<tm::PartialTy>(T);
    if (!pt)
      fail(ErrCode::TypeMismatch, "partial element checked against " + pretty(T),
           t->span);
    Disj covered = checkPartial(ctx, pe->faces, pt->carrier);
    if (!cofibEquiv(covered, pt->cof))
      fail(ErrCode::TypeMismatch,
           "partial element covers " + prettyCofib(covered) +
               " but the type expects " + prettyCofib(pt->cof),
           t->span);
    return;
  }

  if (const auto* tp = as<tm::TrivialPartial>(t)) {
    const auto* pt = as<tm::PartialTy>(T);
    if (!pt)
      fail(ErrCode::TypeMismatch, "trivial partial element checked against " + pretty(T),
           t->span);
    if (!cofibEquiv(pt->cof, Disj::truth()))
      fail(ErrCode::TypeMismatch,
           "a trivial partial element covers everything; the type expects " +
               prettyCofib(pt->cof),
           t->span);
    check(ctx, tp->body, pt->carrier);
    return;
  }

  if (const auto* i = as<tm::InS>(t)) {
    const auto* st = as<tm::SubTy>(T);
    if (!st) fail(ErrCode::TypeMismatch, "inS checked against " + pretty(T), t->span);
    if (!cofibEquiv(i->cof, st->cof))
      fail(ErrCode::TypeMismatch,
           "inS cofibration " + prettyCofib(i->cof) + " does not match the subtype's " +
               prettyCofib(st->cof),
           t->span);
    check(ctx, i->body, st->carrier);
    for (const Face& f : st->faces) {
      auto sc = simplifyConj(f.cof);
      if (!sc) continue;
      if (!convUnderConj(ctx, *sc, i->body, f.body, st->carrier))
        fail(ErrCode::BoundaryMismatch,
             "inS body does not match the face " + prettyConj(*sc) + " -> " +
                 pretty(f.body),
             t->span, prettySubstWitness(*sc));
    }
    return;
  }

  if (const auto* h = as<tm::HComp>(t)) {
    // The figure types hcomp as a subtype of its carrier; the composite is
    // also accepted directly at the carrier, which is how the derived
    // heterogeneous composition uses it.
    auto types = detail::inferHComp(ctx, *h, t->span);
    if (convert(ctx, types.subResult, T, univ())) return;
    if (convert(ctx, types.carrier, T, univ())) return;
    fail(ErrCode::TypeMismatch,
         "hcomp produces " + pretty(types.subResult) + " (usable at " +
             pretty(types.carrier) + ") but the expected type is " + pretty(T),
         t->span);
  }

  TermPtr inferred = infer(ctx, t);
  if (!convert(ctx, inferred, T, univ()))
    fail(ErrCode::TypeMismatch,
         "expected " + pretty(T) + " but this term has type " +
             pretty(whnf(ctx, inferred)),
         t->span);
}

}  // namespace cubik
