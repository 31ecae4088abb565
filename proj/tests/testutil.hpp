// Shared test machinery: the four-element De Morgan algebra oracle and the
// random generators. The oracle evaluates expressions directly by truth
// tables and never touches the normal-form code it is used to judge.
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cubik/cofib.hpp"
#include "cubik/interval.hpp"
#include "cubik/syntax.hpp"

namespace testutil {

using namespace cubik;

// ---------------------------------------------------------------------------
// DM4 = {0, a, b, 1}: the diamond lattice with both middle elements fixed by
// negation. Evaluation over all DM4 assignments decides equality in the free
// De Morgan algebra.

enum class DM : uint8_t { Z = 0, A = 1, B = 2, O = 3 };

inline DM dmNeg(DM x) {
  switch (x) {
    case DM::Z: return DM::O;
    case DM::O: return DM::Z;
    default: return x;  // a and b are fixed points
  }
}

inline DM dmAnd(DM x, DM y) {
  static const DM table[4][4] = {
      {DM::Z, DM::Z, DM::Z, DM::Z},
      {DM::Z, DM::A, DM::Z, DM::A},
      {DM::Z, DM::Z, DM::B, DM::B},
      {DM::Z, DM::A, DM::B, DM::O},
  };
  return table[int(x)][int(y)];
}

inline DM dmOr(DM x, DM y) {
  static const DM table[4][4] = {
      {DM::Z, DM::A, DM::B, DM::O},
      {DM::A, DM::A, DM::O, DM::O},
      {DM::B, DM::O, DM::B, DM::O},
      {DM::O, DM::O, DM::O, DM::O},
  };
  return table[int(x)][int(y)];
}

inline DM dmEval(const TermPtr& t, const std::map<Name, DM>& env) {
  if (const auto* v = as<tm::Var>(t)) return env.at(v->name);
  if (const auto* c = as<tm::IConst>(t)) return c->one ? DM::O : DM::Z;
  if (const auto* n = as<tm::INeg>(t)) return dmNeg(dmEval(n->body, env));
  if (const auto* n = as<tm::IAnd>(t)) return dmAnd(dmEval(n->lhs, env), dmEval(n->rhs, env));
  if (const auto* n = as<tm::IOr>(t)) return dmOr(dmEval(n->lhs, env), dmEval(n->rhs, env));
  throw std::logic_error("dmEval: not an interval expression");
}

// Truth table over all DM4 assignments of the given variables.
inline std::vector<DM> dmTable(const TermPtr& t, const std::vector<Name>& vars) {
  size_t count = 1;
  for (size_t i = 0; i < vars.size(); ++i) count *= 4;
  std::vector<DM> out;
  out.reserve(count);
  std::map<Name, DM> env;
  for (size_t mask = 0; mask < count; ++mask) {
    size_t m = mask;
    for (const Name& v : vars) {
      env[v] = DM(m & 3);
      m >>= 2;
    }
    out.push_back(dmEval(t, env));
  }
  return out;
}

inline bool dmEquiv(const TermPtr& a, const TermPtr& b, const std::vector<Name>& vars) {
  return dmTable(a, vars) == dmTable(b, vars);
}

// ---------------------------------------------------------------------------
// Random interval expressions.

inline TermPtr randIExpr(std::mt19937& rng, int depth, const std::vector<Name>& vars,
                         bool constants) {
  std::uniform_int_distribution<int> pick(0, 99);
  if (depth <= 0 || pick(rng) < 25) {
    if (constants && pick(rng) < 20) return pick(rng) < 50 ? izero() : ione();
    std::uniform_int_distribution<size_t> vi(0, vars.size() - 1);
    return var(vars[vi(rng)]);
  }
  int k = pick(rng);
  if (k < 30) return ineg(randIExpr(rng, depth - 1, vars, constants));
  if (k < 65)
    return iand(randIExpr(rng, depth - 1, vars, constants),
                randIExpr(rng, depth - 1, vars, constants));
  return ior(randIExpr(rng, depth - 1, vars, constants),
             randIExpr(rng, depth - 1, vars, constants));
}

// An algebra-preserving shuffle: swap operands, double-negate, push one
// negation through De Morgan.
inline TermPtr shuffleEquiv(std::mt19937& rng, const TermPtr& t) {
  std::uniform_int_distribution<int> pick(0, 99);
  TermPtr out;
  if (const auto* n = as<tm::IAnd>(t)) {
    TermPtr l = shuffleEquiv(rng, n->lhs);
    TermPtr r = shuffleEquiv(rng, n->rhs);
    out = pick(rng) < 50 ? iand(r, l) : iand(l, r);
  } else if (const auto* n = as<tm::IOr>(t)) {
    TermPtr l = shuffleEquiv(rng, n->lhs);
    TermPtr r = shuffleEquiv(rng, n->rhs);
    out = pick(rng) < 50 ? ior(r, l) : ior(l, r);
  } else if (const auto* n = as<tm::INeg>(t)) {
    TermPtr b = n->body;
    if (pick(rng) < 40) {
      if (const auto* a = as<tm::IAnd>(b))
        return ior(shuffleEquiv(rng, ineg(a->lhs)), shuffleEquiv(rng, ineg(a->rhs)));
      if (const auto* o = as<tm::IOr>(b))
        return iand(shuffleEquiv(rng, ineg(o->lhs)), shuffleEquiv(rng, ineg(o->rhs)));
    }
    out = ineg(shuffleEquiv(rng, b));
  } else {
    out = t;
  }
  if (pick(rng) < 10) out = ineg(ineg(out));
  return out;
}

// ---------------------------------------------------------------------------
// Random cofibrations (canonical form, as the parser would produce).

inline Conj randConj(std::mt19937& rng, const std::vector<Name>& vars) {
  std::uniform_int_distribution<size_t> count(1, 3);
  std::uniform_int_distribution<size_t> vi(0, vars.size() - 1);
  std::uniform_int_distribution<int> bit(0, 1);
  while (true) {
    Conj c;
    size_t n = count(rng);
    for (size_t i = 0; i < n; ++i) c.conds.push_back(Cond{vars[vi(rng)], bit(rng) == 1});
    if (auto s = simplifyConj(c)) return *s;
  }
}

inline Disj randDisj(std::mt19937& rng, const std::vector<Name>& vars) {
  std::uniform_int_distribution<int> pick(0, 99);
  int k = pick(rng);
  if (k < 5) return Disj::absurd();
  if (k < 10) return Disj::truth();
  std::uniform_int_distribution<size_t> count(1, 3);
  std::vector<Conj> cs;
  size_t n = count(rng);
  for (size_t i = 0; i < n; ++i) cs.push_back(randConj(rng, vars));
  return simplifyDisj(Disj::of(std::move(cs)));
}

// ---------------------------------------------------------------------------
// Random well-formed surface-expressible terms for the round-trip property.

struct TermGen {
  std::mt19937& rng;
  std::vector<Name> termVars{"f", "g", "u", "v", "w"};
  std::vector<Name> intervalVars{"i", "j", "k"};

  int pct() {
    std::uniform_int_distribution<int> d(0, 99);
    return d(rng);
  }
  template <class T>
  const T& pickOf(const std::vector<T>& xs) {
    std::uniform_int_distribution<size_t> d(0, xs.size() - 1);
    return xs[d(rng)];
  }

  TermPtr iexpr(int depth) { return randIExpr(rng, depth, intervalVars, true); }

  Conj conj(const std::vector<Name>& vars) { return randConj(rng, vars); }

  Disj disj(const std::vector<Name>& vars) { return randDisj(rng, vars); }

  Faces faces(const std::vector<Name>& vars, int depth) {
    std::uniform_int_distribution<size_t> count(0, 2);
    Faces fs;
    size_t n = count(rng);
    for (size_t i = 0; i < n; ++i) fs.push_back(Face{conj(vars), term(depth)});
    return fs;
  }

  TermPtr atomTerm() {
    switch (pct() % 5) {
      case 0: return var(pickOf(termVars));
      case 1: return var(pickOf(intervalVars));
      case 2: return univ();
      case 3: return ity();
      default: return pct() < 50 ? izero() : ione();
    }
  }

  TermPtr term(int depth) {
    if (depth <= 0) return atomTerm();
    switch (pct() % 16) {
      case 0: return lam(pickOf(termVars), term(depth - 1));
      case 1: return app(term(depth - 1), term(depth - 1));
      case 2: {
        Name b = pickOf(termVars);
        return pi(b, term(depth - 1), pct() < 50 ? app(term(depth - 1), var(b))
                                                 : term(depth - 1));
      }
      case 3: return ineg(iexpr(depth - 1));
      case 4: return iand(iexpr(depth - 1), iexpr(depth - 1));
      case 5: return ior(iexpr(depth - 1), iexpr(depth - 1));
      case 6: return mk(tm::PartialEl{faces(intervalVars, depth - 1)});
      case 7: return mk(tm::TrivialPartial{term(depth - 1)});
      case 8: return mk(tm::PartialTy{disj(intervalVars), term(depth - 1)});
      case 9: {
        std::vector<Name> bs{pickOf(intervalVars)};
        if (pct() < 30) {
          Name other = pickOf(intervalVars);
          if (other != bs[0]) bs.push_back(other);
        }
        return mk(tm::ExtTy{bs, term(depth - 1), faces(bs, depth - 1)});
      }
      case 10: {
        std::vector<Name> bs{pickOf(intervalVars)};
        return mk(tm::PLam{bs, term(depth - 1)});
      }
      case 11: {
        std::vector<TermPtr> args{iexpr(depth - 1)};
        if (pct() < 40) args.push_back(iexpr(depth - 1));
        return papp(var(pickOf(termVars)), std::move(args));
      }
      case 12:
        return mk(tm::SubTy{term(depth - 1), disj(intervalVars),
                            faces(intervalVars, depth - 1)});
      case 13:
        return pct() < 50
                   ? mk(tm::InS{disj(intervalVars), term(depth - 1)})
                   : mk(tm::OutS{disj(intervalVars), term(depth - 1)});
      case 14:
        return mk(tm::Coe{lam(pickOf(intervalVars), term(depth - 1)),
                          disj(intervalVars)});
      default:
        return mk(tm::HComp{term(depth - 1), disj(intervalVars), term(depth - 1),
                            term(depth - 1)});
    }
  }
};

}  // namespace testutil
