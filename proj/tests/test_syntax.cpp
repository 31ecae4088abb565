#include <catch2/catch_amalgamated.hpp>

#include "cubik/subst.hpp"
#include "cubik/syntax.hpp"
#include "testutil.hpp"

using namespace cubik;
using namespace testutil;

TEST_CASE("substitution leaves bound occurrences alone") {
  // (\y. x)[v/x] = \y. v
  TermPtr t = lam("y", var("x"));
  TermPtr r = subst1(t, "x", var("v"));
  CHECK(alphaEq(r, lam("y", var("v"))));
  // (\x. x)[v/x] = \x. x
  CHECK(alphaEq(subst1(lam("x", var("x")), "x", var("v")), lam("x", var("x"))));
}

TEST_CASE("simultaneous substitution into applications") {
  // (u x y)[1/z, 0/y] = u x 0
  TermPtr t = apps(var("u"), {var("x"), var("y")});
  TermPtr r = subst(t, {{"z", ione()}, {"y", izero()}});
  CHECK(alphaEq(r, apps(var("u"), {var("x"), izero()})));
}

TEST_CASE("identity substitution is alpha-identity") {
  std::mt19937 rng(5);
  TermGen gen{rng};
  for (int i = 0; i < 200; ++i) {
    TermPtr t = gen.term(3);
    CHECK(alphaEq(subst(t, {{"x", var("x")}}), t));
    CHECK(alphaEq(subst(t, {}), t));
  }
}

TEST_CASE("capture avoidance renames binders") {
  // (\y. x y)[y/x] must not capture: the result applies the free y
  TermPtr t = lam("y", app(var("x"), var("y")));
  TermPtr r = subst1(t, "x", var("y"));
  const auto* l = as<tm::Lam>(r);
  REQUIRE(l);
  CHECK(l->binder != "y");
  CHECK(alphaEq(r, lam("q", app(var("y"), var("q")))));
}

TEST_CASE("substitution commutes into partial-element faces without reducing") {
  // {x=0 -> u} under [y/x] renames; under [0/x] keeps a satisfied face;
  // under [1/x] drops the clause
  Faces fs{Face{Conj{{Cond{"x", false}}}, var("u")}};
  TermPtr t = mk(tm::PartialEl{fs});

  TermPtr renamed = subst1(t, "x", var("y"));
  const auto* pr = as<tm::PartialEl>(renamed);
  REQUIRE(pr);
  REQUIRE(pr->faces.size() == 1);
  CHECK(pr->faces[0].cof == Conj{{Cond{"y", false}}});

  TermPtr satisfied = subst1(t, "x", izero());
  const auto* ps = as<tm::PartialEl>(satisfied);
  REQUIRE(ps);
  REQUIRE(ps->faces.size() == 1);
  CHECK(ps->faces[0].cof == Conj{});  // satisfied clause, not yet collapsed

  TermPtr dropped = subst1(t, "x", ione());
  const auto* pd = as<tm::PartialEl>(dropped);
  REQUIRE(pd);
  CHECK(pd->faces.empty());
}

TEST_CASE("a compound interval replacement splits a face") {
  Faces fs{Face{Conj{{Cond{"x", false}}}, var("u")}};
  TermPtr t = mk(tm::PartialEl{fs});
  TermPtr r = subst1(t, "x", iand(var("i"), var("j")));
  const auto* p = as<tm::PartialEl>(r);
  REQUIRE(p);
  REQUIRE(p->faces.size() == 2);  // (i=0) and (j=0), same body
  CHECK(alphaEq(p->faces[0].body, var("u")));
  CHECK(alphaEq(p->faces[1].body, var("u")));
}

TEST_CASE("freeVars splits interval and term names") {
  CHECK(freeVars(lam("x", var("x"))).terms.empty());
  CHECK(freeVars(lam("x", var("x"))).intervals.empty());

  FreeVars fv = freeVars(papp(var("p"), {var("i")}));
  CHECK(fv.terms == std::set<Name>{"p"});
  CHECK(fv.intervals == std::set<Name>{"i"});

  TermPtr pe = mk(tm::PartialEl{Faces{Face{Conj{{Cond{"x", false}}}, var("u")}}});
  fv = freeVars(pe);
  CHECK(fv.terms == std::set<Name>{"u"});
  CHECK(fv.intervals == std::set<Name>{"x"});

  // extension binders capture their face conditions
  TermPtr ext = mk(tm::ExtTy{{"i"}, var("A"), Faces{Face{Conj{{Cond{"i", false}}}, var("a")}}});
  fv = freeVars(ext);
  CHECK(fv.intervals.empty());
  CHECK(fv.terms == std::set<Name>{"A", "a"});
}

TEST_CASE("freeVars after substitution excludes the replaced variable") {
  std::mt19937 rng(11);
  TermGen gen{rng};
  for (int i = 0; i < 200; ++i) {
    TermPtr t = gen.term(3);
    TermPtr v = gen.term(2);
    if (freeVars(v).mentions("u")) continue;
    TermPtr r = subst1(t, "u", v);
    CHECK_FALSE(freeVars(r).terms.count("u"));
  }
}

TEST_CASE("sequential substitution agrees with simultaneous on disjoint variables") {
  std::mt19937 rng(13);
  TermGen gen{rng};
  for (int i = 0; i < 200; ++i) {
    TermPtr t = gen.term(3);
    TermPtr a = var("g");  // avoid introducing u or the interval pool
    TermPtr b = izero();
    TermPtr seq = subst1(subst1(t, "u", a), "j", b);
    TermPtr sim = subst(t, {{"u", a}, {"j", b}});
    CHECK(alphaEq(seq, sim));
  }
}

TEST_CASE("alphaEq on binders") {
  CHECK(alphaEq(lam("x", var("x")), lam("y", var("y"))));
  CHECK_FALSE(alphaEq(lam("x", var("y")), lam("x", var("z"))));
  CHECK(alphaEq(plam({"x"}, papp(var("p"), {var("x")})),
                plam({"y"}, papp(var("p"), {var("y")}))));
  // cofibration variables bound by path binders rename too
  TermPtr a = plam({"x"}, mk(tm::OutS{Disj::of({Conj{{Cond{"x", false}}}}), var("u")}));
  TermPtr b = plam({"y"}, mk(tm::OutS{Disj::of({Conj{{Cond{"y", false}}}}), var("u")}));
  CHECK(alphaEq(a, b));
}

TEST_CASE("alphaEq is an equivalence relation on generated terms") {
  std::mt19937 rng(29);
  TermGen gen{rng};
  std::vector<TermPtr> pool;
  for (int i = 0; i < 60; ++i) pool.push_back(gen.term(3));
  for (const TermPtr& t : pool) CHECK(alphaEq(t, t));
  for (size_t i = 0; i < pool.size(); ++i)
    for (size_t j = 0; j < i; ++j) {
      bool ab = alphaEq(pool[i], pool[j]);
      bool ba = alphaEq(pool[j], pool[i]);
      CHECK(ab == ba);
    }
  // transitivity on a renamed chain
  for (const TermPtr& t : pool) {
    TermPtr t2 = subst(t, {});  // structural copy
    CHECK((alphaEq(t, t2) && alphaEq(t2, t)));
  }
}

TEST_CASE("ordered face lists are compared positionally") {
  Faces ab{Face{Conj{{Cond{"x", false}}}, var("a")},
           Face{Conj{{Cond{"x", true}}}, var("b")}};
  Faces ba{Face{Conj{{Cond{"x", true}}}, var("b")},
           Face{Conj{{Cond{"x", false}}}, var("a")}};
  CHECK_FALSE(alphaEq(mk(tm::PartialEl{ab}), mk(tm::PartialEl{ba})));
  CHECK(alphaEq(mk(tm::PartialEl{ab}), mk(tm::PartialEl{ab})));
}
