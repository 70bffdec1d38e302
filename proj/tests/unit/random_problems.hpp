#pragma once

#include "rdinst/term.hpp"

#include <random>
#include <string>

namespace testing {

/// Random SMT-LIB scripts over Int constants a b c, unary f, binary g and
/// one- or two-variable universals. Small enough for quadratic oracles.
class ScriptGen {
 public:
  explicit ScriptGen(unsigned seed) : rng_(seed) {}

  std::string script(bool declare = true) {
    std::string s = declare ? "(declare-fun f (Int) Int)(declare-fun g (Int Int) Int)"
                              "(declare-const a Int)(declare-const b Int)(declare-const c Int)\n"
                            : "";
    const int ground = 1 + pick(3);
    for (int i = 0; i < ground; ++i) s += "(assert " + atom(2, false) + ")\n";
    const int units = 1 + pick(2);
    for (int i = 0; i < units; ++i) {
      two_vars_ = pick(2) == 0;
      s += two_vars_ ? "(assert (forall ((x Int) (y Int)) " : "(assert (forall ((x Int)) ";
      s += "(or " + atom(2, true) + " " + atom(2, true) + ")))\n";
    }
    return s;
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string leaf(bool vars) {
    const int r = pick(vars ? 6 : 4);
    switch (r) {
      case 0: return "a";
      case 1: return "b";
      case 2: return "c";
      case 3: return std::to_string(pick(6));
      case 4: return "x";
      default: return two_vars_ ? "y" : "x";
    }
  }

  std::string arith(int depth, bool vars) {
    if (depth == 0 || pick(3) == 0) return leaf(vars);
    switch (pick(6)) {
      case 0: return "(+ " + arith(depth - 1, vars) + " " + arith(depth - 1, vars) + ")";
      case 1: return "(- " + arith(depth - 1, vars) + " " + arith(depth - 1, vars) + ")";
      case 2: return "(* " + std::to_string(pick(3) + 1) + " " + arith(depth - 1, vars) + ")";
      case 3: return "(f " + arith(depth - 1, vars) + ")";
      case 4: return "(g " + arith(depth - 1, vars) + " " + arith(depth - 1, vars) + ")";
      default: return "(ite (< " + leaf(vars) + " 2) " + arith(depth - 1, vars) + " " + leaf(vars) + ")";
    }
  }

  std::string atom(int depth, bool vars) {
    static const char* ops[] = {"<=", "<", "=", ">="};
    return std::string("(") + ops[pick(4)] + " " + arith(depth, vars) + " " + arith(depth, vars) + ")";
  }

  std::mt19937 rng_;
  bool two_vars_ = false;
};

/// Random well-sorted ground terms over a small signature, avoiding forms the
/// parser canonicalizes differently (negated numerals, `>=`).
struct TermGen {
  using TermManager = rdinst::TermManager;
  using Term = rdinst::Term;
  using Symbol = rdinst::Symbol;
  using Op = rdinst::Op;
  using Sort = rdinst::Sort;

  TermManager& tm;
  std::mt19937& rng;
  const Symbol* f;
  const Symbol* g;
  const Symbol* c;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Term arith(int depth) {
    if (depth == 0 || pick(3) == 0) {
      if (pick(2) == 0) return tm.constant(c);
      return tm.numeral(pick(21) - 10, Sort::Int);
    }
    switch (pick(6)) {
      case 0: return tm.app(Op::Add, {arith(depth - 1), arith(depth - 1)});
      case 1: return tm.app(Op::Sub, {arith(depth - 1), arith(depth - 1)});
      case 2: return tm.app(Op::Mul, {arith(depth - 1), arith(depth - 1)});
      case 3: return tm.app(f, {arith(depth - 1)});
      case 4: return tm.app(g, {arith(depth - 1), arith(depth - 1)});
      default: return tm.app(Op::Ite, {boolean(depth - 1), arith(depth - 1), arith(depth - 1)});
    }
  }

  Term boolean(int depth) {
    if (depth == 0) return tm.app(Op::Le, {arith(0), arith(0)});
    switch (pick(5)) {
      case 0: return tm.app(Op::Le, {arith(depth - 1), arith(depth - 1)});
      case 1: return tm.app(Op::Lt, {arith(depth - 1), arith(depth - 1)});
      case 2: return tm.mk_eq(arith(depth - 1), arith(depth - 1));
      case 3: return tm.app(Op::And, {boolean(depth - 1), boolean(depth - 1)});
      default: return tm.app(Op::Not, {tm.app(Op::Or, {boolean(depth - 1), boolean(depth - 1)})});
    }
  }
};

}  // namespace testing
