#pragma once

#include "rdinst/term.hpp"

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rdinst {

/// Interpretation of one uninterpreted symbol: a lambda over `params` whose
/// body uses only interpreted operators, values and the parameters.
struct Interpretation {
  std::vector<const Symbol*> params;
  Term body;
};

class Model {
 public:
  /// Throws ModelError when the interpretation does not match the symbol's
  /// signature or mentions an uninterpreted symbol.
  void set(const Symbol* f, Interpretation interp);
  const Interpretation* find(const Symbol* f) const;
  /// Throws ModelError when `f` has no interpretation.
  const Interpretation& at(const Symbol* f) const;
  /// Gives every listed symbol without an interpretation the constant
  /// function 0 (Int/Real) or false (Bool).
  void complete(TermManager& tm, std::span<const Symbol* const> symbols);

  std::size_t size() const { return order_.size(); }
  const std::vector<const Symbol*>& symbols() const { return order_; }
  /// `(define-fun ...)` lines in insertion order.
  std::string to_string() const;

 private:
  std::unordered_map<const Symbol*, Interpretation> interp_;
  std::vector<const Symbol*> order_;
};

/// A Bool or an exact arithmetic value.
struct Value {
  Sort sort = Sort::Bool;
  bool truth = false;
  Rational number;

  static Value boolean(bool b) { return {Sort::Bool, b, 0}; }
  static Value arith(Rational v, Sort s) { return {s, false, std::move(v)}; }

  friend bool operator==(const Value& a, const Value& b) {
    return a.sort == b.sort && (a.sort == Sort::Bool ? a.truth == b.truth : a.number == b.number);
  }
  std::string to_string() const;
};

using Environment = std::unordered_map<const Symbol*, Value>;

Term value_term(TermManager& tm, const Value& v);

/// Exact evaluation of `t` under `m`, with bound variables read from `env`.
/// Throws EvalError on division by zero, unbound variables or quantifiers.
Value evaluate(Term t, const Model& m, const Environment& env = {});
/// Evaluation of a ground term.
Value eval_ground(Term t, const Model& m);

/// Constant folding and the obvious Boolean identities, bottom-up.
Term simplify(TermManager& tm, Term t);

/// Replaces every uninterpreted application by the model's interpretation
/// applied to the (already rewritten) arguments, then folds constants. The
/// result mentions only interpreted operators, values and the free variables
/// of `phi`.
Term apply_model(TermManager& tm, Term phi, const Model& m);

}  // namespace rdinst
