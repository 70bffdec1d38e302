#pragma once

#include "rdinst/term.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rdinst {

/// A parsed, non-incremental SMT-LIB script.
struct Script {
  std::string logic;
  std::vector<const Symbol*> declarations;
  std::vector<Term> assertions;  // closed, Bool-sorted
  std::map<std::string, std::string> options;
  bool saw_check_sat = false;
};

/// One universally quantified conjunct `forall vars. body` with a
/// quantifier-free body whose free variables are exactly `vars`.
struct QuantifiedUnit {
  unsigned index = 0;  // 1-based
  std::vector<const Symbol*> vars;
  Term body;
};

/// Ground part plus quantified units.
struct Problem {
  std::string logic;
  std::vector<Term> ground;
  std::vector<QuantifiedUnit> units;
  std::vector<const Symbol*> skolems;
  std::vector<std::string> warnings;
};

/// Parses the supported command subset: set-logic, set-info, set-option,
/// declare-fun, declare-const, define-fun (inlined), assert, check-sat, exit.
Script parse_script(TermManager& tm, std::string_view text);

/// Brings the assertions into ground-part-plus-units form: negations are
/// pushed through the quantified structure, existentials in positive position
/// are Skolemized over the enclosing universals, universals are pulled out of
/// conjunctions and disjunctions, and the top-level conjunction is split.
/// Bodies are not clausified.
Problem normalize(TermManager& tm, const Script& script);

/// Reassembles a Problem into assertions (ground conjuncts followed by one
/// universal per unit).
Script to_script(TermManager& tm, const Problem& problem);

/// Uninterpreted symbols occurring in the problem, in first-occurrence order.
std::vector<const Symbol*> problem_symbols(const Problem& problem);

}  // namespace rdinst
