#include <catch2/catch_amalgamated.hpp>

#include "cubik/parse.hpp"
#include "cubik/pretty.hpp"
#include "testutil.hpp"

using namespace cubik;
using namespace testutil;

namespace {
TermPtr roundTrip(const TermPtr& t) { return parseExpr(pretty(t)); }
}  // namespace

TEST_CASE("parsing the term formers") {
  CHECK(as<tm::Lam>(parseExpr("\\x. x")));
  CHECK(alphaEq(parseExpr("\\x. x"), lam("q", var("q"))));

  TermPtr pe = parseExpr("[| x = 0 -> a | x = 1 -> b |]");
  const auto* p = as<tm::PartialEl>(pe);
  REQUIRE(p);
  REQUIRE(p->faces.size() == 2);
  CHECK(p->faces[0].cof == Conj{{Cond{"x", false}}});

  TermPtr triv = parseExpr("[| f x |]");
  CHECK(as<tm::TrivialPartial>(triv));
  CHECK(as<tm::PartialEl>(parseExpr("[| |]")));

  TermPtr c = parseExpr("coe BOT (\\^i. A)");
  const auto* coe = as<tm::Coe>(c);
  REQUIRE(coe);
  CHECK(coe->cof.isAbsurd());
  CHECK(as<tm::Lam>(coe->line));  // the path-lambda line is a function

  CHECK(as<tm::HComp>(parseExpr("hcomp (x = 0) A (\\y. [| x = 0 -> a |]) b")));
  CHECK(as<tm::SubTy>(parseExpr("Sub A (x = 0) [| x = 0 -> a |]")));
  TermPtr subTriv = parseExpr("Sub A TOP [| a |]");
  const auto* st = as<tm::SubTy>(subTriv);
  REQUIRE(st);
  REQUIRE(st->faces.size() == 1);
  CHECK(st->faces[0].cof == Conj{});
  CHECK(as<tm::PartialTy>(parseExpr("Partial (x = 0 \\/ y = 1) A")));
  CHECK(as<tm::ExtTy>(parseExpr("Ext (i j) A [| i = 0 -> a |]")));
  CHECK(as<tm::InS>(parseExpr("inS TOP a")));
  CHECK(as<tm::OutS>(parseExpr("outS TOP a")));
}

TEST_CASE("precedence") {
  // application binds tighter than the lattice operators
  CHECK(alphaEq(parseExpr("f x /\\ g y"),
                iand(app(var("f"), var("x")), app(var("g"), var("y")))));
  // ~ binds tighter than /\ which binds tighter than \/
  CHECK(alphaEq(parseExpr("~x /\\ y \\/ z"),
                ior(iand(ineg(var("x")), var("y")), var("z"))));
  // @ binds tighter than application
  CHECK(alphaEq(parseExpr("f p @ x"), app(var("f"), papp(var("p"), {var("x")}))));
  // chained @ collects into one application
  TermPtr chained = parseExpr("p @ x @ y");
  const auto* pa = as<tm::PApp>(chained);
  REQUIRE(pa);
  CHECK(pa->args.size() == 2);
  // arrows are right-associative and looser than \/
  TermPtr arrows = parseExpr("A -> B -> C");
  const auto* pi1 = as<tm::Pi>(arrows);
  REQUIRE(pi1);
  CHECK(as<tm::Pi>(pi1->cod));
  CHECK(alphaEq(parseExpr("x \\/ y -> A"), pi("_", ior(var("x"), var("y")), var("A"))));
}

TEST_CASE("dependent telescopes") {
  TermPtr t = parseExpr("(v : A) (w : B) -> C v w");
  const auto* p1 = as<tm::Pi>(t);
  REQUIRE(p1);
  const auto* p2 = as<tm::Pi>(p1->cod);
  REQUIRE(p2);
  CHECK(alphaEq(t, pi("q", var("A"), pi("r", var("B"),
                                        apps(var("C"), {var("q"), var("r")})))));
  // shared type for several names
  CHECK(alphaEq(parseExpr("(v w : A) -> A"),
                pi("v", var("A"), pi("w", var("A"), var("A")))));
}

TEST_CASE("non-DNF cofibrations normalize at parse time") {
  TermPtr t = parseExpr("Partial ((x = 0 \\/ y = 1) /\\ z = 0) A");
  const auto* p = as<tm::PartialTy>(t);
  REQUIRE(p);
  Disj expected = Disj::of({Conj{{Cond{"x", false}, Cond{"z", false}}},
                            Conj{{Cond{"y", true}, Cond{"z", false}}}});
  CHECK(cofibEquiv(p->cof, expected));
  CHECK(p->cof == expected);  // canonical order, structurally
  // a face over a disjunction splits into one clause per face
  TermPtr pe = parseExpr("[| x = 0 \\/ y = 1 -> a |]");
  const auto* el = as<tm::PartialEl>(pe);
  REQUIRE(el);
  CHECK(el->faces.size() == 2);
}

TEST_CASE("declarations") {
  SourceFile sf = parseFile("-- comment\n"
                            "def id (A : U) (v : A) : A => v\n"
                            "def pick (A : U) (v w : A) : A => w\n",
                            "t.cub");
  REQUIRE(sf.decls.size() == 2);
  CHECK(sf.decls[0].name == "id");
  CHECK(sf.decls[0].params.size() == 2);
  CHECK(sf.decls[1].params.size() == 3);
  CHECK_THROWS_AS(parseFile("def d : U => U\ndef d : U => U\n", "t.cub"), ParseError);
}

TEST_CASE("parse errors carry positions") {
  try {
    parseExpr("\\x x");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.col == 4);
    CHECK_FALSE(e.expected.empty());
  }
  try {
    parseFile("def broken (x : I : I => x\n", "t.cub");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.offset > 0);
  }
  CHECK_THROWS_AS(parseExpr("p @ @"), ParseError);
  CHECK_THROWS_AS(parseExpr("coe (x = 2) (\\^i. A)"), ParseError);
  CHECK_THROWS_AS(parseExpr("_"), ParseError);
}

TEST_CASE("pretty-printing round trips on handwritten terms") {
  const char* samples[] = {
      "\\x. x",
      "\\^i j. p @ i @ j",
      "(v : A) (w : B v) -> C",
      "A -> B",
      "f (g x) (p @ 0)",
      "~(x /\\ y) \\/ ~z",
      "[| x = 0 /\\ y = 1 -> f a | z = 0 -> b |]",
      "[| f x |]",
      "[| |]",
      "Partial (x = 0 \\/ y = 1) A",
      "Ext (i j) A [| i = 0 /\\ j = 1 -> a |]",
      "Sub A (x = 0) [| x = 0 -> a |]",
      "inS (x = 0) (f a)",
      "outS TOP u",
      "coe (x = 0 \\/ y = 1) (\\^i. P i) u",
      "hcomp (x = 0) A (\\y. [| x = 0 -> a |]) (p @ x)",
      "f p @ x",
      "(f p) @ x",
  };
  for (const char* s : samples) {
    TermPtr t = parseExpr(s);
    INFO(s << "  pretty: " << pretty(t));
    CHECK(alphaEq(roundTrip(t), t));
  }
}

TEST_CASE("pretty-parse round trip on generated terms") {
  std::mt19937 rng(20250809);
  TermGen gen{rng};
  for (int i = 0; i < 1500; ++i) {
    TermPtr t = gen.term(4);
    TermPtr back;
    INFO("term: " << pretty(t));
    REQUIRE_NOTHROW(back = roundTrip(t));
    CHECK(alphaEq(back, t));
  }
}
