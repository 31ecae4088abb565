// The checker's environment: one ordered sequence of bindings in which
// interval and term variables interleave, plus an active cofibration
// restriction. The interval/term split is a computed view. Top-level
// definitions are bindings that carry a body.
#pragma once

#include "cubik/subst.hpp"
#include "cubik/syntax.hpp"

namespace cubik {

struct Binding {
  Name name;
  TermPtr type;
  TermPtr def;  // null for variables; set for top-level definitions
  bool interval = false;
};

class Context {
 public:
  Context() = default;

  const Binding* lookup(const Name& n) const {
    for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it)
      if (it->name == n) return &*it;
    return nullptr;
  }

  Context extend(Name n, TermPtr type, bool interval, TermPtr def = nullptr) const {
    Context out = *this;
    out.bindings_.push_back(Binding{std::move(n), std::move(type), std::move(def), interval});
    return out;
  }

  void push(Name n, TermPtr type, bool interval, TermPtr def = nullptr) {
    bindings_.push_back(Binding{std::move(n), std::move(type), std::move(def), interval});
  }

  // Interval bindings (the Psi view).
  std::set<Name> psi() const {
    std::set<Name> out;
    for (const Binding& b : bindings_)
      if (b.interval) out.insert(b.name);
    return out;
  }

  std::set<Name> names() const {
    std::set<Name> out;
    for (const Binding& b : bindings_) out.insert(b.name);
    return out;
  }

  const Disj& restriction() const { return restriction_; }

  Context withRestriction(Disj d) const {
    Context out = *this;
    out.restriction_ = std::move(d);
    return out;
  }

  // Push an interval substitution through the local binding types.
  // Definitions are closed, so their entries are left alone.
  Context applySubst(const Subst& s) const {
    Context out;
    out.restriction_ = substCofib(restriction_, s);
    out.bindings_.reserve(bindings_.size());
    for (const Binding& b : bindings_) {
      if (b.def) {
        out.bindings_.push_back(b);
      } else {
        out.bindings_.push_back(Binding{b.name, subst(b.type, s), nullptr, b.interval});
      }
    }
    return out;
  }

  const std::vector<Binding>& bindings() const { return bindings_; }

 private:
  std::vector<Binding> bindings_;
  Disj restriction_ = Disj::truth();
};

// A fresh name unused by the context and the given terms.
inline Name freshFor(const Context& ctx, Name base,
                     std::initializer_list<TermPtr> terms = {}) {
  std::set<Name> avoid = ctx.names();
  for (const TermPtr& t : terms) {
    auto all = freeVars(t).all();
    avoid.insert(all.begin(), all.end());
  }
  return freshName(std::move(base), avoid);
}

}  // namespace cubik
