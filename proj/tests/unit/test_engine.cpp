#include "doctest.h"
#include "helpers.hpp"

#include "rdinst/engine.hpp"
#include "rdinst/errors.hpp"

#include <functional>

using namespace rdinst;

namespace {

EngineConfig config(unsigned fraction = 3) {
  EngineConfig c;
  c.backend = testing::backend();
  c.preferred_fraction = fraction;
  c.trace = true;
  return c;
}

/// Whether `inst` is `pattern` with its free variables replaced consistently.
bool is_instance(Term pattern, Term inst, Binding& b) {
  if (pattern.is_var()) {
    auto [it, fresh] = b.emplace(&pattern.head(), inst);
    return fresh || it->second == inst;
  }
  if (&pattern.head() != &inst.head() || pattern.arity() != inst.arity()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    if (!is_instance(pattern.child(i), inst.child(i), b)) return false;
  }
  return true;
}

/// Ground part {3 < 4 + g(b)} and unit forall x. x < 4 + g(b), whose
/// relevant domain for x is {3, 4, g(b), 4 + g(b)}.
const char* kSmall = R"(
  (declare-fun g (Int) Int)
  (declare-const b Int)
  (assert (< 3 (+ 4 (g b))))
  (assert (forall ((x Int)) (< x (+ 4 (g b))))))";

Model small_model(TermManager& tm) {
  Model m;
  m.set(tm.lookup_fun("g"), {{tm.make_var("p", Sort::Int)}, tm.numeral(5, Sort::Int)});
  m.set(tm.lookup_fun("b"), {{}, tm.numeral(0, Sort::Int)});
  return m;
}

}  // namespace

TEST_CASE("select_term picks the first matching term in preference order") {
  TermManager tm;
  tm.declare_fun("g", {Sort::Int}, Sort::Int);
  tm.declare_fun("b", {}, Sort::Int);
  tm.declare_fun("c", {}, Sort::Int);
  Model m;
  m.set(tm.lookup_fun("g"), {{tm.make_var("p", Sort::Int)}, tm.numeral(5, Sort::Int)});
  m.set(tm.lookup_fun("b"), {{}, tm.numeral(0, Sort::Int)});
  m.set(tm.lookup_fun("c"), {{}, tm.numeral(9, Sort::Int)});
  std::vector<Term> dom{testing::term(tm, "(+ 4 (g b))"), testing::term(tm, "c")};
  CHECK(select_term(9, dom, m) == dom[0]);
  std::vector<Term> three{tm.numeral(3, Sort::Int)};
  CHECK(select_term(3, three, m) == three[0]);
  CHECK(!select_term(42, dom, m));
}

TEST_CASE("preferred restriction uses model values of domain terms") {
  if (!testing::have_backend()) return;
  TermManager tm;
  Engine engine(tm, testing::problem(tm, kSmall), config(1));
  RelevantDomains rd = engine.current_domains(engine.current_stats());
  const QuantifiedUnit& u = engine.problem().units[0];
  REQUIRE(rd.domain(u.vars[0]).terms.size() == 4);
  Model m = small_model(tm);
  Term negated = simplify(tm, tm.mk_not(apply_model(tm, u.body, m)));

  std::ostringstream transcript;
  BackendConfig bc = testing::backend();
  bc.transcript = &transcript;
  SolverSession s(bc);
  CexOutcome out = engine.find_counterexample(s, u, m, negated, rd);
  REQUIRE(out.kind == CexOutcome::Kind::Found);
  CHECK(out.checks == 2);
  CHECK(out.assignment[0].term == testing::term(tm, "(+ 4 (g b))"));
  CHECK(out.assignment[0].source == Source::RelevantDomain);
  CHECK(out.assignment[0].tier == Tier::Preferred);
  CHECK(out.assignment[0].value == 9);
  const std::string t = transcript.str();
  CHECK(t.find("(or (= x!1 4) (= x!1 5) (= x!1 9) (= x!1 3))") != std::string::npos);
  CHECK(s.stack_depth() == 0);
}

TEST_CASE("an unsat preferred restriction widens the core variable") {
  if (!testing::have_backend()) return;
  TermManager tm;
  Engine engine(tm, testing::problem(tm, kSmall), config(3));
  RelevantDomains rd = engine.current_domains(engine.current_stats());
  const QuantifiedUnit& u = engine.problem().units[0];
  Model m = small_model(tm);
  Term negated = simplify(tm, tm.mk_not(apply_model(tm, u.body, m)));
  SolverSession s(testing::backend());
  CexOutcome out = engine.find_counterexample(s, u, m, negated, rd);
  REQUIRE(out.kind == CexOutcome::Kind::Found);
  CHECK(out.widen_to_full == 1);
  CHECK(out.checks == 3);
  CHECK(out.assignment[0].tier == Tier::Full);
  CHECK(out.assignment[0].value == 9);
}

TEST_CASE("exhausted domains fall back to a backend numeral") {
  if (!testing::have_backend()) return;
  TermManager tm;
  Engine engine(tm, testing::problem(tm, R"(
    (declare-fun f (Int) Int)
    (assert (= (f 1) 0))
    (assert (forall ((x Int)) (or (= x 0) (= x 1) (= x (f 1))))))"), config());
  RelevantDomains rd = engine.current_domains(engine.current_stats());
  const QuantifiedUnit& u = engine.problem().units[0];
  Model m;
  m.set(tm.lookup_fun("f"), {{tm.make_var("p", Sort::Int)}, tm.numeral(0, Sort::Int)});
  Term negated = simplify(tm, tm.mk_not(apply_model(tm, u.body, m)));
  SolverSession s(testing::backend());
  CexOutcome out = engine.find_counterexample(s, u, m, negated, rd);
  REQUIRE(out.kind == CexOutcome::Kind::Found);
  CHECK(out.assignment[0].tier == Tier::Dropped);
  CHECK(out.assignment[0].source == Source::TheoryConstant);
  CHECK(out.assignment[0].term.is_numeral());
  CHECK(out.assignment[0].value != 0);
  CHECK(out.assignment[0].value != 1);
  CHECK(out.checks == 3);
}

TEST_CASE("ground contradiction is unsat at the first check") {
  if (!testing::have_backend()) return;
  TermManager tm;
  Engine engine(tm, testing::problem(tm, testing::fixture("ground_unsat.smt2")), config());
  SolveResult r = engine.solve();
  CHECK(r.verdict == Verdict::Unsat);
  CHECK(r.stats.iterations == 1);
  CHECK(r.stats.scratch_checks == 0);
}

TEST_CASE("valid body is sat in one iteration") {
  if (!testing::have_backend()) return;
  TermManager tm;
  Engine engine(tm, testing::problem(tm, testing::fixture("valid_body.smt2")), config());
  SolveResult r = engine.solve();
  CHECK(r.verdict == Verdict::Sat);
  CHECK(r.stats.iterations == 1);
  REQUIRE(r.model);
}

TEST_CASE("recurrence is refuted by relevant-domain instances") {
  if (!testing::have_backend()) return;
  TermManager tm;
  Engine engine(tm, testing::problem(tm, testing::fixture("recurrence.smt2")), config());
  SolveResult r = engine.solve();
  REQUIRE(r.verdict == Verdict::Unsat);
  CHECK(r.stats.iterations <= 100);
  CHECK(r.stats.scratch_bound_violations == 0);
  CHECK(r.stats.invalid_counterexamples == 0);
  CHECK(r.stats.theory_constant_picks == 0);

  // Every added conjunct is an instance of the unit body.
  const QuantifiedUnit& u = engine.problem().units[0];
  for (Term inst : r.instances) {
    Binding b;
    CAPTURE(print_smtlib(inst));
    CHECK(is_instance(u.body, inst, b));
  }
  // The final ground part is unsat on its own.
  SolverSession s(testing::backend());
  for (Term g : engine.ground()) s.assert_formula(g);
  CHECK(s.check().unsat());
}

TEST_CASE("sat answers come with a model of the ground part") {
  if (!testing::have_backend()) return;
  TermManager tm;
  Engine engine(tm, testing::problem(tm, testing::fixture("nonneg_sat.smt2")), config());
  SolveResult r = engine.solve();
  REQUIRE(r.verdict == Verdict::Sat);
  for (Term g : engine.ground()) CHECK(eval_ground(g, *r.model).truth);
}

TEST_CASE("trace format") {
  if (!testing::have_backend()) return;
  TermManager tm;
  Engine engine(tm, testing::problem(tm, testing::fixture("recurrence.smt2")), config());
  SolveResult r = engine.solve();
  REQUIRE(r.trace.size() > 3);
  CHECK(r.trace[0] == "[iter 1] ground: sat");
  CHECK(r.trace[1].rfind("[iter 1] unit 1: ", 0) == 0);
  CHECK(r.trace.back() == "result unsat");
  bool saw_add = false;
  for (const std::string& line : r.trace) saw_add |= line.rfind("[iter 1] add (=> (< 0 ", 0) == 0;
  CHECK(saw_add);
}

TEST_CASE("an unknown scratch check never yields sat") {
  TermManager tm;
  EngineConfig c;
  c.backend.command = {"python3", RDINST_SUPPORT "/fake_backend.py", "scratch-unknown"};
  Engine engine(tm, testing::problem(tm, "(declare-fun f (Int) Int)(assert (forall ((x Int)) (< x (f x))))"), c);
  SolveResult r = engine.solve();
  CHECK(r.verdict == Verdict::Unknown);
  CHECK(r.reason == "incomplete");
}

TEST_CASE("iteration budget gives unknown") {
  if (!testing::have_backend()) return;
  TermManager tm;
  EngineConfig c = config();
  c.max_iterations = 3;
  Engine engine(tm, testing::problem(tm, testing::fixture("worked_example.smt2")), c);
  SolveResult r = engine.solve();
  CHECK(r.verdict == Verdict::Unknown);
  CHECK(r.reason == "budget");
  CHECK(r.stats.iterations == 3);
}

TEST_CASE("backend spawn failure propagates") {
  TermManager tm;
  EngineConfig c;
  c.backend.command = {"/nonexistent/solver"};
  Engine engine(tm, testing::problem(tm, testing::fixture("recurrence.smt2")), c);
  CHECK_THROWS_AS(engine.solve(), BackendError);
}

TEST_CASE("add_ground keeps births sticky and rejects duplicates") {
  TermManager tm;
  Engine engine(tm, testing::problem(tm, testing::fixture("recurrence.smt2")), config());
  Term inst = testing::term(tm, "(< (f 3) (f 0))");
  CHECK(engine.add_ground(inst, 2));
  CHECK(!engine.add_ground(inst, 5));
  CHECK(engine.births().at(testing::term(tm, "(f 3)")) == 2);
  CHECK(engine.births().at(testing::term(tm, "(f 0)")) == 0);
}

TEST_CASE("identical runs give identical traces and stats") {
  if (!testing::have_backend()) return;
  std::vector<std::string> traces;
  std::vector<std::string> stats;
  for (int run = 0; run < 2; ++run) {
    TermManager tm;
    EngineConfig c = config();
    c.max_iterations = 8;
    Engine engine(tm, testing::problem(tm, testing::fixture("worked_example.smt2")), c);
    SolveResult r = engine.solve();
    std::string joined;
    for (const std::string& l : r.trace) joined += l + "\n";
    traces.push_back(joined);
    stats.push_back(r.stats.to_json(false));
  }
  CHECK(traces[0] == traces[1]);
  CHECK(stats[0] == stats[1]);
}
