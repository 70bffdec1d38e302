#include "doctest.h"
#include "helpers.hpp"

#include "rdinst/errors.hpp"
#include "rdinst/term.hpp"

using namespace rdinst;

TEST_CASE("interning gives identical handles for structurally equal terms") {
  TermManager tm;
  const Symbol* f = tm.declare_fun("f", {Sort::Int}, Sort::Int);
  Term a = tm.app(f, {tm.numeral(3, Sort::Int)});
  Term b = tm.app(f, {tm.numeral(3, Sort::Int)});
  CHECK(a == b);
  CHECK(a != tm.app(f, {tm.numeral(4, Sort::Int)}));
  CHECK(tm.numeral(3, Sort::Int) != tm.numeral(3, Sort::Real));
}

TEST_CASE("declarations are checked") {
  TermManager tm;
  const Symbol* f = tm.declare_fun("f", {Sort::Int}, Sort::Int);
  CHECK(tm.declare_fun("f", {Sort::Int}, Sort::Int) == f);
  CHECK_THROWS_AS(tm.declare_fun("f", {Sort::Real}, Sort::Int), SortError);
  CHECK_THROWS_AS(tm.app(f, {tm.boolean(true)}), SortError);
  CHECK_THROWS_AS(tm.app(f, {}), SortError);
}

TEST_CASE("fresh symbols avoid declared names") {
  TermManager tm;
  tm.declare_fun("sk!1", {}, Sort::Int);
  const Symbol* s = tm.fresh_fun("sk", {}, Sort::Int);
  CHECK(s->name != "sk!1");
  CHECK(tm.lookup_fun(s->name) == s);
}

TEST_CASE("printing") {
  TermManager tm;
  CHECK(print_smtlib(tm.numeral(-5, Sort::Int)) == "(- 5)");
  CHECK(print_smtlib(tm.numeral(3, Sort::Real)) == "(/ 3 1)");
  CHECK(print_smtlib(tm.numeral(Rational(-1, 2), Sort::Real)) == "(- (/ 1 2))");
  CHECK(print_smtlib(testing::term(tm, "(+ 1 (* 2 3))")) == "(+ 1 (* 2 3))");
  CHECK(quote_symbol("a b") == "|a b|");
  CHECK(quote_symbol("x!1") == "x!1");
}

TEST_CASE("mk_not folds") {
  TermManager tm;
  Term p = testing::term(tm, "(< 1 2)");
  CHECK(tm.mk_not(tm.mk_not(p)) == p);
  CHECK(tm.mk_not(tm.boolean(true)).is_false());
  CHECK(tm.mk_or({}).is_false());
  CHECK(tm.mk_and({}).is_true());
  CHECK(tm.mk_or({p}) == p);
}

TEST_CASE("substitution and free variables") {
  TermManager tm;
  const Symbol* f = tm.declare_fun("f", {Sort::Int}, Sort::Int);
  const Symbol* x = tm.make_var("x", Sort::Int, 1);
  Term body = tm.app(Op::Lt, {tm.app(f, {tm.var(x)}), tm.var(x)});
  CHECK(!body.is_ground());
  CHECK(free_vars(body) == std::vector<const Symbol*>{x});
  Term inst = substitute(tm, body, {{x, tm.numeral(2, Sort::Int)}});
  CHECK(inst.is_ground());
  CHECK(print_smtlib(inst) == "(< (f 2) 2)");
  CHECK_THROWS_AS(substitute_ground(tm, body, {}), EvalError);
}

TEST_CASE("leaves have depth 0") {
  TermManager tm;
  tm.declare_fun("g", {Sort::Int}, Sort::Int);
  tm.declare_fun("b", {}, Sort::Int);
  CHECK(testing::term(tm, "b").depth() == 0);
  CHECK(testing::term(tm, "(g b)").depth() == 1);
  CHECK(testing::term(tm, "(+ 4 (g b))").depth() == 2);
}

TEST_CASE("top-level symbol") {
  TermManager tm;
  const Symbol* f = tm.declare_fun("f", {Sort::Int}, Sort::Int);
  const Symbol* x = tm.make_var("x", Sort::Int, 2);
  Term fx = tm.app(f, {tm.var(x)});
  CHECK(tls(fx).kind == TlsResult::Kind::UninterpretedHead);
  CHECK(tls(fx).symbol == f);
  CHECK(tls(tm.app(Op::Add, {tm.var(x), tm.numeral(2, Sort::Int)})).kind == TlsResult::Kind::Variable);
  CHECK(tls(tm.app(Op::Add, {tm.var(x), tm.numeral(2, Sort::Int)})).unit() == 2);
  CHECK(tls(tm.numeral(7, Sort::Int)).kind == TlsResult::Kind::GroundAtom);
  CHECK(tls(tm.app(Op::Add, {tm.numeral(1, Sort::Int), fx})).kind == TlsResult::Kind::GroundAtom);
  CHECK(tls(tm.app(Op::IntDiv, {tm.var(x), tm.numeral(2, Sort::Int)})).kind == TlsResult::Kind::Undefined);
}
