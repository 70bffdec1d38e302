#include "doctest.h"
#include "helpers.hpp"
#include "random_problems.hpp"

#include "rdinst/errors.hpp"
#include "rdinst/model.hpp"

using namespace rdinst;

namespace {

struct Fixture {
  TermManager tm;
  const Symbol* f = tm.declare_fun("f", {Sort::Int}, Sort::Int);
  const Symbol* g = tm.declare_fun("g", {Sort::Int, Sort::Int}, Sort::Int);
  const Symbol* c = tm.declare_fun("c", {}, Sort::Int);
  const Symbol* p = tm.make_var("p", Sort::Int);
  const Symbol* q = tm.make_var("q", Sort::Int);
  Model m;

  Fixture() {
    TermParser parser(tm);
    parser.push_scope({{"p", tm.var(p)}, {"q", tm.var(q)}});
    m.set(f, {{p}, parser.parse(parse_sexprs("(ite (< p 0) (- p) (+ p 1))")[0])});
    m.set(g, {{p, q}, parser.parse(parse_sexprs("(- (* 2 p) q)")[0])});
    m.set(c, {{}, tm.numeral(3, Sort::Int)});
  }
};

/// Straightforward recursive evaluator used as a reference.
Rational ref_arith(Term t, const Model& m, const std::map<const Symbol*, Rational>& env);

bool ref_bool(Term t, const Model& m, const std::map<const Symbol*, Rational>& env) {
  auto kids = t.children();
  switch (t.head().op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !ref_bool(kids[0], m, env);
    case Op::And: return ref_bool(kids[0], m, env) && ref_bool(kids[1], m, env);
    case Op::Or: return ref_bool(kids[0], m, env) || ref_bool(kids[1], m, env);
    case Op::Le: return ref_arith(kids[0], m, env) <= ref_arith(kids[1], m, env);
    case Op::Lt: return ref_arith(kids[0], m, env) < ref_arith(kids[1], m, env);
    case Op::Eq: return ref_arith(kids[0], m, env) == ref_arith(kids[1], m, env);
    default: throw std::logic_error("reference evaluator: unexpected Bool head");
  }
}

Rational ref_arith(Term t, const Model& m, const std::map<const Symbol*, Rational>& env) {
  const Symbol& h = t.head();
  auto kids = t.children();
  if (h.is_numeral()) return h.value;
  if (h.is_var()) return env.at(&h);
  if (h.is_uninterpreted()) {
    const Interpretation& i = m.at(&h);
    std::map<const Symbol*, Rational> inner;
    for (std::size_t k = 0; k < kids.size(); ++k) inner[i.params[k]] = ref_arith(kids[k], m, env);
    return ref_arith(i.body, m, inner);
  }
  switch (h.op) {
    case Op::Add: return ref_arith(kids[0], m, env) + ref_arith(kids[1], m, env);
    case Op::Sub: return ref_arith(kids[0], m, env) - ref_arith(kids[1], m, env);
    case Op::Mul: return ref_arith(kids[0], m, env) * ref_arith(kids[1], m, env);
    case Op::Neg: return -ref_arith(kids[0], m, env);
    case Op::Ite: return ref_bool(kids[0], m, env) ? ref_arith(kids[1], m, env) : ref_arith(kids[2], m, env);
    default: throw std::logic_error("reference evaluator: unexpected arithmetic head");
  }
}

}  // namespace

TEST_CASE("evaluation agrees with a reference evaluator") {
  Fixture fx;
  std::mt19937 rng(3);
  testing::TermGen gen{fx.tm, rng, fx.f, fx.g, fx.c};
  for (int i = 0; i < 400; ++i) {
    Term t = i % 2 ? gen.arith(4) : gen.boolean(4);
    CAPTURE(print_smtlib(t));
    Value v = eval_ground(t, fx.m);
    if (t.sort() == Sort::Bool) {
      CHECK(v.truth == ref_bool(t, fx.m, {}));
    } else {
      CHECK(v.number == ref_arith(t, fx.m, {}));
    }
  }
}

TEST_CASE("apply_model then evaluate equals evaluate") {
  Fixture fx;
  std::mt19937 rng(5);
  testing::TermGen gen{fx.tm, rng, fx.f, fx.g, fx.c};
  for (int i = 0; i < 200; ++i) {
    Term t = gen.boolean(3);
    Term r = apply_model(fx.tm, t, fx.m);
    CHECK(r.is_bool_value());
    CHECK(r.is_true() == eval_ground(t, fx.m).truth);
  }
}

TEST_CASE("apply_model keeps free variables") {
  Fixture fx;
  const Symbol* xs = fx.tm.make_var("x", Sort::Int, 1);
  Term x = fx.tm.var(xs);
  Term body = fx.tm.app(Op::Lt, {fx.tm.app(fx.g, {x, fx.tm.constant(fx.c)}), x});
  Term r = apply_model(fx.tm, body, fx.m);
  CHECK(print_smtlib(r) == "(< (- (* 2 x) 3) x)");
  CHECK(evaluate(r, fx.m, {{xs, Value::arith(2, Sort::Int)}}).truth);
  CHECK(!evaluate(r, fx.m, {{xs, Value::arith(3, Sort::Int)}}).truth);
}

TEST_CASE("integer division follows SMT-LIB") {
  TermManager tm;
  Model m;
  auto ev = [&](const char* s) { return eval_ground(testing::term(tm, s), m).number; };
  CHECK(ev("(div 7 2)") == 3);
  CHECK(ev("(div (- 7) 2)") == -4);
  CHECK(ev("(mod (- 7) 2)") == 1);
  CHECK(ev("(div 7 (- 2))") == -3);
  CHECK(ev("(mod 7 (- 2))") == 1);
  CHECK(ev("(to_int (- (/ 1 2)))") == -1);
  CHECK(ev("(abs (- 4))") == 4);
  CHECK(ev("(/ (to_real 1) 3)") == Rational(1, 3));
  CHECK_THROWS_AS(ev("(div 1 0)"), EvalError);
}

TEST_CASE("simplify folds constants and identities") {
  TermManager tm;
  tm.declare_fun("a", {}, Sort::Int);
  CHECK(print_smtlib(simplify(tm, testing::term(tm, "(+ 1 2)"))) == "3");
  CHECK(print_smtlib(simplify(tm, testing::term(tm, "(and (< a 1) (< 0 1))"))) == "(< a 1)");
  CHECK(simplify(tm, testing::term(tm, "(or (< a 1) (< 0 1))")).is_true());
  CHECK(print_smtlib(simplify(tm, testing::term(tm, "(ite (< 2 1) a 5)"))) == "5");
}

TEST_CASE("model validation and completion") {
  Fixture fx;
  CHECK_THROWS_AS(fx.m.set(fx.f, {{}, fx.tm.numeral(1, Sort::Int)}), ModelError);
  CHECK_THROWS_AS(fx.m.set(fx.c, {{}, fx.tm.app(fx.f, {fx.tm.numeral(1, Sort::Int)})}), ModelError);
  Model empty;
  CHECK_THROWS_AS(empty.at(fx.f), ModelError);
  const Symbol* syms[] = {fx.f, fx.c};
  empty.complete(fx.tm, syms);
  CHECK(eval_ground(fx.tm.app(fx.f, {fx.tm.numeral(9, Sort::Int)}), empty).number == 0);
  CHECK(empty.to_string().find("(define-fun f (") != std::string::npos);
}
