// Cofibration well-formedness, simplification, substitution, entailment and
// equivalence. Substituting a compound interval expression for a condition
// variable rewrites the condition through the isomorphism with the interval
// algebra and flattens back to disjunctive normal form.
#pragma once

#include <algorithm>
#include <stdexcept>

#include "cubik/interval.hpp"
#include "cubik/syntax.hpp"

namespace cubik {

// Interval substitution: names to interval expressions (variables,
// endpoints, or compound expressions).
using ISubst = std::map<Name, TermPtr>;

inline bool wellFormed(const std::set<Name>& psi, const Disj& d) {
  for (const Conj& c : d.clauses)
    for (const Cond& cond : c.conds)
      if (!psi.count(cond.var)) return false;
  return true;
}

// Deduplicate and sort; nullopt marks a self-contradictory conjunction
// (some variable constrained to both endpoints).
inline std::optional<Conj> simplifyConj(const Conj& c) {
  std::vector<Cond> conds = c.conds;
  std::sort(conds.begin(), conds.end());
  conds.erase(std::unique(conds.begin(), conds.end()), conds.end());
  for (size_t i = 0; i + 1 < conds.size(); ++i)
    if (conds[i].var == conds[i + 1].var) return std::nullopt;
  return Conj{std::move(conds)};
}

// Canonical form of a disjunction: clauses simplified, contradictions
// dropped, absorption applied, truth detected via an empty clause.
inline Disj simplifyDisj(const Disj& d) {
  if (d.tag != Disj::Tag::Clauses) return d;
  std::vector<Conj> cs;
  for (const Conj& c : d.clauses) {
    if (auto s = simplifyConj(c)) {
      if (s->conds.empty()) return Disj::truth();
      cs.push_back(std::move(*s));
    }
  }
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  // Absorption: a clause subsuming a smaller one is redundant.
  std::vector<Conj> keep;
  for (size_t i = 0; i < cs.size(); ++i) {
    bool absorbed = false;
    for (size_t j = 0; j < cs.size() && !absorbed; ++j) {
      if (i == j) continue;
      if (cs[j].conds.size() < cs[i].conds.size() &&
          std::includes(cs[i].conds.begin(), cs[i].conds.end(),
                        cs[j].conds.begin(), cs[j].conds.end()))
        absorbed = true;
    }
    if (!absorbed) keep.push_back(cs[i]);
  }
  return Disj::of(std::move(keep));
}

inline Disj disjOr(const Disj& a, const Disj& b) {
  if (a.isTruth() || b.isTruth()) return Disj::truth();
  if (a.isAbsurd()) return simplifyDisj(b);
  if (b.isAbsurd()) return simplifyDisj(a);
  std::vector<Conj> cs = a.clauses;
  cs.insert(cs.end(), b.clauses.begin(), b.clauses.end());
  return simplifyDisj(Disj::of(std::move(cs)));
}

inline Disj disjAnd(const Disj& a, const Disj& b) {
  if (a.isAbsurd() || b.isAbsurd()) return Disj::absurd();
  if (a.isTruth()) return simplifyDisj(b);
  if (b.isTruth()) return simplifyDisj(a);
  std::vector<Conj> cs;
  for (const Conj& x : a.clauses)
    for (const Conj& y : b.clauses) {
      Conj merged = x;
      merged.conds.insert(merged.conds.end(), y.conds.begin(), y.conds.end());
      cs.push_back(std::move(merged));
    }
  return simplifyDisj(Disj::of(std::move(cs)));
}

// The substitution a simplified conjunction denotes: each variable to its
// endpoint. Rejects contradictory input; callers skip absurd branches.
inline ISubst conjToSubst(const Conj& c) {
  auto s = simplifyConj(c);
  if (!s) throw std::logic_error("conjToSubst: self-contradictory conjunction");
  ISubst out;
  for (const Cond& cond : s->conds) out[cond.var] = cond.isOne ? ione() : izero();
  return out;
}

namespace detail {

// One condition under substitution, as a disjunction: satisfied conditions
// become truth, contradicted ones absurd, variables rename, and compound
// expressions go through the interval isomorphism.
inline Disj substCond(const Cond& cond, const ISubst& s) {
  auto it = s.find(cond.var);
  if (it == s.end()) return Disj::of({Conj{{cond}}});
  const TermPtr& rep = it->second;
  if (const auto* v = as<tm::Var>(rep)) return Disj::of({Conj{{Cond{v->name, cond.isOne}}}});
  if (const auto* k = as<tm::IConst>(rep))
    return k->one == cond.isOne ? Disj::truth() : Disj::absurd();
  if (!isIExpr(rep))
    throw std::logic_error("substCofib: replacement is not an interval expression");
  return toCofib(cond.isOne ? rep : ineg(rep));
}

}  // namespace detail

inline Disj substConjCofib(const Conj& c, const ISubst& s) {
  Disj acc = Disj::truth();
  for (const Cond& cond : c.conds) {
    acc = disjAnd(acc, detail::substCond(cond, s));
    if (acc.isAbsurd()) return acc;
  }
  return acc;
}

inline Disj substCofib(const Disj& d, const ISubst& s) {
  if (d.tag != Disj::Tag::Clauses) return d;
  Disj acc = Disj::absurd();
  for (const Conj& c : d.clauses) {
    acc = disjOr(acc, substConjCofib(c, s));
    if (acc.isTruth()) return acc;
  }
  return acc;
}

// theta entails c when the substitution theta denotes satisfies c outright.
inline bool entails(const Conj& theta, const Disj& c) {
  return substCofib(c, conjToSubst(theta)).isTruth();
}

// Mutual satisfaction, clause by clause. Both absurd: vacuously equivalent.
inline bool cofibEquiv(const Disj& a, const Disj& b) {
  for (const Conj& c : clausesOf(a)) {
    auto s = simplifyConj(c);
    if (!s) continue;
    if (!entails(*s, b)) return false;
  }
  for (const Conj& c : clausesOf(b)) {
    auto s = simplifyConj(c);
    if (!s) continue;
    if (!entails(*s, a)) return false;
  }
  return true;
}

}  // namespace cubik
