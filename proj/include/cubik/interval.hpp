// Decision procedure for the free De Morgan interval algebra: unique normal
// forms (antichains of literal clauses), conversion checking, and the
// isomorphism with cofibrations. Literals x and ~x are distinct atoms: the
// algebra is De Morgan, not Boolean, so a clause containing both is kept.
#pragma once

#include <algorithm>
#include <stdexcept>

#include "cubik/syntax.hpp"

namespace cubik {

struct ILit {
  Name var;
  bool neg = false;

  friend bool operator==(const ILit& a, const ILit& b) {
    return a.var == b.var && a.neg == b.neg;
  }
  friend bool operator<(const ILit& a, const ILit& b) {
    return a.var != b.var ? a.var < b.var : a.neg < b.neg;
  }
};

using IClause = std::vector<ILit>;  // sorted, no duplicate literal

struct INormal {
  enum class Tag { Zero, One, Clauses };
  Tag tag = Tag::Zero;
  std::vector<IClause> clauses;  // sorted antichain, nonempty iff Clauses

  static INormal zero() { return INormal{Tag::Zero, {}}; }
  static INormal one() { return INormal{Tag::One, {}}; }

  friend bool operator==(const INormal& a, const INormal& b) {
    return a.tag == b.tag && a.clauses == b.clauses;
  }
  friend bool operator!=(const INormal& a, const INormal& b) { return !(a == b); }
};

inline bool isIExpr(const TermPtr& t) {
  if (!t) return false;
  return std::visit(Overloaded{
                        [](const tm::Var&) { return true; },
                        [](const tm::IConst&) { return true; },
                        [](const tm::INeg& n) { return isIExpr(n.body); },
                        [](const tm::IAnd& n) { return isIExpr(n.lhs) && isIExpr(n.rhs); },
                        [](const tm::IOr& n) { return isIExpr(n.lhs) && isIExpr(n.rhs); },
                        [](const auto&) { return false; },
                    },
                    t->node);
}

namespace detail {

// Drop clauses that are supersets of another clause (absorption); sort and
// deduplicate. Clauses are kept minimal, so structural equality decides
// algebra equality.
inline std::vector<IClause> antichain(std::vector<IClause> cs) {
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::vector<IClause> keep;
  for (size_t i = 0; i < cs.size(); ++i) {
    bool absorbed = false;
    for (size_t j = 0; j < cs.size() && !absorbed; ++j) {
      if (i == j) continue;
      // cs[j] subset of cs[i]: cs[i] is redundant. Break ties (equal sets
      // cannot happen after unique) by index only for genuine subsets.
      if (cs[j].size() < cs[i].size() &&
          std::includes(cs[i].begin(), cs[i].end(), cs[j].begin(), cs[j].end()))
        absorbed = true;
    }
    if (!absorbed) keep.push_back(cs[i]);
  }
  return keep;
}

inline IClause mergeClause(const IClause& a, const IClause& b) {
  IClause out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline INormal normAnd(const INormal& a, const INormal& b) {
  if (a.tag == INormal::Tag::Zero || b.tag == INormal::Tag::Zero) return INormal::zero();
  if (a.tag == INormal::Tag::One) return b;
  if (b.tag == INormal::Tag::One) return a;
  std::vector<IClause> cs;
  cs.reserve(a.clauses.size() * b.clauses.size());
  for (const IClause& x : a.clauses)
    for (const IClause& y : b.clauses) cs.push_back(mergeClause(x, y));
  return INormal{INormal::Tag::Clauses, antichain(std::move(cs))};
}

inline INormal normOr(const INormal& a, const INormal& b) {
  if (a.tag == INormal::Tag::One || b.tag == INormal::Tag::One) return INormal::one();
  if (a.tag == INormal::Tag::Zero) return b;
  if (b.tag == INormal::Tag::Zero) return a;
  std::vector<IClause> cs = a.clauses;
  cs.insert(cs.end(), b.clauses.begin(), b.clauses.end());
  return INormal{INormal::Tag::Clauses, antichain(std::move(cs))};
}

inline INormal normNeg(const INormal& a) {
  if (a.tag == INormal::Tag::Zero) return INormal::one();
  if (a.tag == INormal::Tag::One) return INormal::zero();
  // ~(c1 \/ ... \/ cn) = ~c1 /\ ... /\ ~cn, with ~(l1 /\ ... /\ lk) the
  // disjunction of the negated literals.
  INormal acc = INormal::one();
  for (const IClause& c : a.clauses) {
    std::vector<IClause> negs;
    negs.reserve(c.size());
    for (const ILit& l : c) negs.push_back({ILit{l.var, !l.neg}});
    acc = normAnd(acc, INormal{INormal::Tag::Clauses, antichain(std::move(negs))});
  }
  return acc;
}

}  // namespace detail

// Unique normal form of an interval expression. Throws on terms outside the
// interval fragment; callers guard with isIExpr or typing.
inline INormal inorm(const TermPtr& e) {
  if (!e) throw std::logic_error("inorm: null interval expression");
  return std::visit(
      Overloaded{
          [](const tm::Var& v) {
            return INormal{INormal::Tag::Clauses, {{ILit{v.name, false}}}};
          },
          [](const tm::IConst& c) { return c.one ? INormal::one() : INormal::zero(); },
          [](const tm::INeg& n) { return detail::normNeg(inorm(n.body)); },
          [](const tm::IAnd& n) { return detail::normAnd(inorm(n.lhs), inorm(n.rhs)); },
          [](const tm::IOr& n) { return detail::normOr(inorm(n.lhs), inorm(n.rhs)); },
          [](const auto&) -> INormal {
            throw std::logic_error("inorm: not an interval expression");
          },
      },
      e->node);
}

// Canonical term rendering of a normal form.
inline TermPtr embedINormal(const INormal& n) {
  switch (n.tag) {
    case INormal::Tag::Zero: return izero();
    case INormal::Tag::One: return ione();
    case INormal::Tag::Clauses: break;
  }
  TermPtr out;
  for (const IClause& c : n.clauses) {
    TermPtr clause;
    for (const ILit& l : c) {
      TermPtr lit = l.neg ? ineg(var(l.var)) : var(l.var);
      clause = clause ? iand(std::move(clause), std::move(lit)) : std::move(lit);
    }
    out = out ? ior(std::move(out), std::move(clause)) : std::move(clause);
  }
  return out;
}

inline bool iconv(const TermPtr& a, const TermPtr& b) { return inorm(a) == inorm(b); }

// The bijection onto cofibrations: x maps to x=1, ~x to x=0, homomorphic on
// meets and joins; endpoints map to the truth and absurd cofibrations. A
// clause mentioning both polarities of one variable has no cofibration
// counterpart and is dropped (it is self-contradictory on faces).
inline Disj toCofib(const TermPtr& e) {
  INormal n = inorm(e);
  switch (n.tag) {
    case INormal::Tag::Zero: return Disj::absurd();
    case INormal::Tag::One: return Disj::truth();
    case INormal::Tag::Clauses: break;
  }
  std::vector<Conj> clauses;
  for (const IClause& c : n.clauses) {
    Conj conj;
    bool contradictory = false;
    for (size_t i = 0; i < c.size(); ++i) {
      if (i + 1 < c.size() && c[i].var == c[i + 1].var) contradictory = true;
      conj.conds.push_back(Cond{c[i].var, !c[i].neg});
    }
    if (!contradictory) clauses.push_back(std::move(conj));
  }
  return Disj::of(std::move(clauses));
}

inline TermPtr fromCofib(const Disj& d) {
  switch (d.tag) {
    case Disj::Tag::Absurd: return izero();
    case Disj::Tag::Truth: return ione();
    case Disj::Tag::Clauses: break;
  }
  TermPtr out;
  for (const Conj& c : d.clauses) {
    TermPtr clause;
    for (const Cond& cond : c.conds) {
      TermPtr lit = cond.isOne ? var(cond.var) : ineg(var(cond.var));
      clause = clause ? iand(std::move(clause), std::move(lit)) : std::move(lit);
    }
    if (!clause) clause = ione();  // empty conjunction
    out = out ? ior(std::move(out), std::move(clause)) : std::move(clause);
  }
  return out;
}

}  // namespace cubik
