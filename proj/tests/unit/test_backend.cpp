#include "doctest.h"
#include "helpers.hpp"

#include "rdinst/errors.hpp"

using namespace rdinst;

namespace {

BackendConfig fake(const char* mode, long timeout_ms = 2000) {
  BackendConfig c;
  c.command = {"python3", RDINST_SUPPORT "/fake_backend.py", mode};
  c.timeout = std::chrono::milliseconds(timeout_ms);
  return c;
}

}  // namespace

TEST_CASE("split_command") {
  CHECK(split_command("z3 -in") == std::vector<std::string>{"z3", "-in"});
  CHECK(split_command("  'my solver' --opt=\"a b\" ") == std::vector<std::string>{"my solver", "--opt=a b"});
  CHECK(split_command("").empty());
}

TEST_CASE("spawn failure names the executable") {
  BackendConfig c;
  c.command = {"/nonexistent/solver", "-in"};
  CHECK_THROWS_WITH_AS(SolverSession{c}, doctest::Contains("/nonexistent/solver"), BackendError);
}

TEST_CASE("a hanging check times out and kills the session") {
  SolverSession s(fake("hang", 300));
  CheckResult r = s.check();
  CHECK(r.status == CheckStatus::Unknown);
  CHECK(r.reason == "backend-timeout");
  CHECK(!s.alive());
}

TEST_CASE("backend errors mark the session dead") {
  SolverSession s(fake("error"));
  CHECK_THROWS_AS(s.check(), BackendError);
  CHECK(!s.alive());
}

TEST_CASE("parse_model inlines auxiliary definitions") {
  TermManager tm;
  const Symbol* f = tm.declare_fun("f", {Sort::Int}, Sort::Int);
  const Symbol* r = tm.declare_fun("r", {}, Sort::Real);
  SExpr resp = parse_sexprs(R"((
    (define-fun r () Real (/ 1 2))
    (define-fun f ((x!0 Int)) Int (ite (= x!0 1) 2 (aux!1 x!0)))
    (define-fun aux!1 ((y Int)) Int (+ y 3))))")[0];
  Model m = parse_model(tm, resp, {{"f", f}, {"r", r}});
  CHECK(eval_ground(tm.app(f, {tm.numeral(1, Sort::Int)}), m).number == 2);
  CHECK(eval_ground(tm.app(f, {tm.numeral(5, Sort::Int)}), m).number == 8);
  CHECK(eval_ground(tm.constant(r), m).number == Rational(1, 2));
  CHECK(m.find(tm.lookup_fun("f")));
}

TEST_CASE("parse_model rejects cyclic definitions") {
  TermManager tm;
  const Symbol* c = tm.declare_fun("c", {}, Sort::Int);
  SExpr resp = parse_sexprs("((define-fun c () Int (k!0)) (define-fun k!0 () Int (+ c 1)))")[0];
  CHECK_THROWS(parse_model(tm, resp, {{"c", c}}));
}

TEST_CASE("live session: check, model, values, cores, scopes") {
  if (!testing::have_backend()) return;
  TermManager tm;
  const Symbol* f = tm.declare_fun("f", {Sort::Int}, Sort::Int);
  tm.declare_fun("a", {}, Sort::Int);
  std::ostringstream transcript;
  BackendConfig cfg = testing::backend();
  cfg.transcript = &transcript;
  SolverSession s(cfg);

  s.assert_formula(testing::term(tm, "(< 3 (f a))"));
  REQUIRE(s.check().sat());
  const Symbol* syms[] = {f, tm.lookup_fun("a")};
  Model m = s.get_model(tm, syms);
  CHECK(eval_ground(testing::term(tm, "(f a)"), m).number > 3);
  auto vals = s.get_values(tm, std::vector<Term>{testing::term(tm, "(f a)"), testing::term(tm, "(< 3 (f a))")});
  CHECK(vals[0].number > 3);
  CHECK(vals[1].truth);

  s.push();
  const Symbol* x = tm.make_var("x", Sort::Int, 1, "x!1");
  Term xv = tm.var(x);
  s.assert_formula(tm.app(Op::Lt, {xv, tm.numeral(0, Sort::Int)}), "neg");
  s.assert_formula(tm.app(Op::Lt, {tm.numeral(5, Sort::Int), xv}), "big");
  s.assert_formula(tm.app(Op::Lt, {testing::term(tm, "a"), tm.numeral(100, Sort::Int)}), "loose");
  REQUIRE(s.check().unsat());
  auto core = s.get_unsat_core();
  CHECK(core.count("neg"));
  CHECK(core.count("big"));
  CHECK(!core.count("loose"));
  CHECK_THROWS_AS(s.assert_formula(testing::term(tm, "(< a 1)"), "neg"), BackendError);
  s.pop();
  CHECK(s.stack_depth() == 0);

  // x was declared inside the popped scope and must be declared again.
  s.push();
  s.assert_formula(tm.app(Op::Lt, {xv, tm.numeral(0, Sort::Int)}));
  CHECK(s.check().sat());
  s.pop();
  const std::string t = transcript.str();
  std::size_t first = t.find("(declare-fun x!1 () Int)");
  REQUIRE(first != std::string::npos);
  CHECK(t.find("(declare-fun x!1 () Int)", first + 1) != std::string::npos);
  CHECK(s.alive());
}
