#include <catch2/catch_amalgamated.hpp>

#include "cubik/cofib.hpp"
#include "testutil.hpp"

using namespace cubik;
using namespace testutil;

namespace {
Cond c0(const char* v) { return Cond{v, false}; }
Cond c1(const char* v) { return Cond{v, true}; }
Disj single(Cond c) { return Disj::of({Conj{{c}}}); }
}  // namespace

TEST_CASE("wellFormed") {
  std::set<Name> psi{"x"};
  CHECK(wellFormed(psi, single(c0("x"))));
  CHECK(wellFormed({}, Disj::truth()));
  CHECK(wellFormed({}, Disj::absurd()));
  CHECK_FALSE(wellFormed(psi, single(c1("y"))));
}

TEST_CASE("simplifyConj") {
  CHECK_FALSE(simplifyConj(Conj{{c0("x"), c1("x")}}).has_value());
  CHECK(simplifyConj(Conj{{c0("x"), c0("x")}}) == Conj{{c0("x")}});
  CHECK(simplifyConj(Conj{{c1("y"), c0("x")}}) == Conj{{c0("x"), c1("y")}});
  CHECK(simplifyConj(Conj{}) == Conj{});
}

TEST_CASE("conjToSubst") {
  ISubst s = conjToSubst(Conj{{c1("z"), c0("y")}});
  REQUIRE(s.size() == 2);
  CHECK(as<tm::IConst>(s["z"])->one);
  CHECK_FALSE(as<tm::IConst>(s["y"])->one);
  CHECK(conjToSubst(Conj{}).empty());
  CHECK_THROWS(conjToSubst(Conj{{c0("x"), c1("x")}}));
}

TEST_CASE("substCofib on conditions") {
  Disj x0 = single(c0("x"));
  CHECK(substCofib(x0, {{"x", izero()}}) == Disj::truth());
  CHECK(substCofib(x0, {{"x", ione()}}) == Disj::absurd());
  CHECK(substCofib(x0, {{"x", var("y")}}) == single(c0("y")));
}

TEST_CASE("substCofib with compound interval expressions") {
  // (x=1)[i/\j / x] = (i=1 /\ j=1); (x=0)[i/\j / x] = (i=0 \/ j=0)
  Disj x1 = single(c1("x"));
  Disj x0 = single(c0("x"));
  ISubst s{{"x", iand(var("i"), var("j"))}};
  CHECK(substCofib(x1, s) == Disj::of({Conj{{c1("i"), c1("j")}}}));
  CHECK(substCofib(x0, s) == Disj::of({Conj{{c0("i")}}, Conj{{c0("j")}}}));
}

TEST_CASE("substCofib identity and distribution over disjunction") {
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    Disj d = randDisj(rng, {"x", "y", "z"});
    CHECK(cofibEquiv(substCofib(d, {}), d));
    ISubst ren{{"x", var("w")}};
    Disj whole = substCofib(d, ren);
    Disj clauseWise = Disj::absurd();
    for (const Conj& c : clausesOf(d))
      clauseWise = disjOr(clauseWise, substConjCofib(c, ren));
    if (d.isTruth()) clauseWise = Disj::truth();
    CHECK(cofibEquiv(whole, clauseWise));
  }
}

TEST_CASE("entails") {
  CHECK(entails(Conj{{c0("x")}}, Disj::of({Conj{{c0("x")}}, Conj{{c1("y")}}})));
  CHECK_FALSE(entails(Conj{{c0("x")}}, single(c1("x"))));
  CHECK(entails(Conj{{c0("x"), c1("y")}}, single(c1("y"))));
  CHECK(entails(Conj{}, Disj::truth()));
  CHECK_FALSE(entails(Conj{}, Disj::absurd()));
}

TEST_CASE("conjToSubst then substCofib on the source yields truth") {
  std::mt19937 rng(17);
  for (int i = 0; i < 200; ++i) {
    Conj c = randConj(rng, {"x", "y", "z"});
    CHECK(substCofib(Disj::of({c}), conjToSubst(c)).isTruth());
  }
}

TEST_CASE("cofibEquiv") {
  Disj a = Disj::of({Conj{{c0("x")}}, Conj{{c1("x")}}});
  Disj b = Disj::of({Conj{{c1("x")}}, Conj{{c0("x")}}});
  CHECK(cofibEquiv(a, b));
  CHECK(cofibEquiv(a, a));
  CHECK_FALSE(cofibEquiv(Disj::absurd(), single(c0("x"))));
  CHECK(cofibEquiv(Disj::absurd(), Disj::absurd()));
  CHECK_FALSE(cofibEquiv(a, Disj::truth()));  // x=0 \/ x=1 is not the truth cofibration
}

TEST_CASE("cofibEquiv agrees with interval conversion through the isomorphism") {
  std::mt19937 rng(23);
  for (int i = 0; i < 400; ++i) {
    Disj a = randDisj(rng, {"x", "y", "z"});
    Disj b = randDisj(rng, {"x", "y", "z"});
    CHECK(cofibEquiv(a, b) == iconv(fromCofib(a), fromCofib(b)));
  }
}
