#pragma once

#include "rdinst/sexpr.hpp"
#include "rdinst/term.hpp"

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace rdinst {

/// Builds terms from s-expressions. Handles let, quantifiers, annotations and
/// the interpreted operators; user-level names are resolved through an
/// optional hook first (macros, model definitions) and then against the
/// manager's declared functions.
///
/// Rewrites applied while building: `>=`/`>` become `<=`/`<` with swapped
/// operands, chained comparisons become conjunctions, `distinct` becomes
/// pairwise disequalities, n-ary `-` is left-associated, and unary minus or
/// `/` over numerals folds into a single numeral.
class TermParser {
 public:
  /// Returns a term for `name(args...)`, or nullopt to fall through.
  using Hook = std::function<std::optional<Term>(const std::string& name, std::vector<Term>& args, const SExpr& at)>;

  explicit TermParser(TermManager& tm) : tm_(tm) {}

  void set_hook(Hook hook) { hook_ = std::move(hook); }
  /// Bare integer literals denote Real values (pure real logics).
  void set_real_numerals(bool on) { real_numerals_ = on; }

  Term parse(const SExpr& e);
  Sort parse_sort(const SExpr& e) const;

  void push_scope(std::unordered_map<std::string, Term> scope) { scopes_.push_back(std::move(scope)); }
  void pop_scope() { scopes_.pop_back(); }

  TermManager& manager() { return tm_; }

 private:
  Term parse_app(const SExpr& e);
  Term parse_let(const SExpr& e);
  Term parse_quantifier(const SExpr& e, Op q);
  Term build(const std::string& name, std::vector<Term> args, const SExpr& at);
  std::optional<Term> lookup_scoped(const std::string& name) const;
  void unify_numerals(std::vector<Term>& args) const;
  Term coerce(Term t, Sort target) const;

  TermManager& tm_;
  Hook hook_;
  bool real_numerals_ = false;
  std::vector<std::unordered_map<std::string, Term>> scopes_;
};

/// Parses a value printed by a backend (numerals, decimals, `(- v)`,
/// `(/ p q)`, true/false) into a value term of the requested sort.
Term parse_value(TermManager& tm, const SExpr& e, Sort sort);

}  // namespace rdinst
