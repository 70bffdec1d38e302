#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rdinst {

using Integer = boost::multiprecision::cpp_int;
/// Exact rational, always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

enum class Sort : std::uint8_t { Bool, Int, Real };

std::string_view sort_name(Sort s);
inline bool is_arith(Sort s) { return s != Sort::Bool; }

enum class SymbolKind : std::uint8_t { Uninterpreted, Interpreted, Numeral, BoundVariable };

/// Interpreted operators. `>=`, `>`, `distinct` and n-ary `-` are rewritten
/// away by the parser and have no entry here.
enum class Op : std::uint8_t {
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Xor,
  Ite,
  Eq,
  Le,
  Lt,
  Add,
  Sub,
  Neg,
  Mul,
  Div,     // real division `/`
  IntDiv,  // `div`
  Mod,
  Abs,
  ToReal,
  ToInt,
  Forall,
  Exists,
};

std::string_view op_name(Op op);

struct Symbol {
  std::string name;      // display name
  std::string smt_name;  // name as printed on the wire
  SymbolKind kind = SymbolKind::Uninterpreted;
  std::vector<Sort> arg_sorts;
  Sort result_sort = Sort::Bool;
  Op op = Op::True;    // Interpreted only
  Rational value;      // Numeral only
  unsigned unit = 0;   // BoundVariable only: index j of the owning unit, 0 before normalization
  std::size_t id = 0;  // creation order inside the manager

  std::size_t arity() const { return arg_sorts.size(); }
  bool is_uninterpreted() const { return kind == SymbolKind::Uninterpreted; }
  bool is_var() const { return kind == SymbolKind::BoundVariable; }
  bool is_numeral() const { return kind == SymbolKind::Numeral; }
  bool is_op(Op o) const { return kind == SymbolKind::Interpreted && op == o; }
};

class Term;

namespace detail {
struct TermNode;
}

/// Handle to an interned term. Equality is identity, which under interning is
/// structural equality. A default-constructed handle is null.
class Term {
 public:
  Term() = default;

  const Symbol& head() const;
  std::span<const Term> children() const;
  const Term& child(std::size_t i) const { return children()[i]; }
  std::size_t arity() const { return children().size(); }
  Sort sort() const;
  bool is_ground() const;
  unsigned depth() const;
  std::uint64_t id() const;

  bool is_numeral() const { return head().is_numeral(); }
  bool is_var() const { return head().is_var(); }
  bool is_op(Op o) const { return head().is_op(o); }
  bool is_true() const { return is_op(Op::True); }
  bool is_false() const { return is_op(Op::False); }
  bool is_bool_value() const { return is_true() || is_false(); }
  bool is_value() const { return is_numeral() || is_bool_value(); }
  bool is_uninterpreted_app() const { return head().is_uninterpreted(); }
  const Rational& value() const { return head().value; }

  explicit operator bool() const { return node_ != nullptr; }
  friend bool operator==(const Term& a, const Term& b) { return a.node_ == b.node_; }
  /// Orders by creation id; deterministic for a fixed construction sequence.
  friend bool operator<(const Term& a, const Term& b);

  const detail::TermNode* node() const { return node_; }

 private:
  friend class TermManager;
  explicit Term(const detail::TermNode* n) : node_(n) {}
  const detail::TermNode* node_ = nullptr;
};

namespace detail {
struct TermNode {
  const Symbol* head;
  std::vector<Term> children;
  Sort sort;
  bool ground;
  unsigned depth;
  std::uint64_t id;
  std::size_t hash;
};
}  // namespace detail

inline const Symbol& Term::head() const { return *node_->head; }
inline std::span<const Term> Term::children() const { return node_->children; }
inline Sort Term::sort() const { return node_->sort; }
inline bool Term::is_ground() const { return node_->ground; }
inline unsigned Term::depth() const { return node_->depth; }
inline std::uint64_t Term::id() const { return node_->id; }
inline bool operator<(const Term& a, const Term& b) { return a.id() < b.id(); }

}  // namespace rdinst

template <>
struct std::hash<rdinst::Term> {
  std::size_t operator()(const rdinst::Term& t) const noexcept {
    return std::hash<const void*>{}(t.node());
  }
};

namespace rdinst {

using Binding = std::unordered_map<const Symbol*, Term>;

/// Owns every symbol and term node of one engine instance. Not thread-safe;
/// terms stay valid for the lifetime of the manager.
class TermManager {
 public:
  TermManager();
  TermManager(const TermManager&) = delete;
  TermManager& operator=(const TermManager&) = delete;

  /// Declares an uninterpreted function. Redeclaring with the same signature
  /// returns the existing symbol; a different signature is a SortError.
  const Symbol* declare_fun(const std::string& name, std::vector<Sort> args, Sort result);
  const Symbol* lookup_fun(std::string_view name) const;
  /// Fresh uninterpreted symbol whose name does not clash with any declared one.
  const Symbol* fresh_fun(const std::string& prefix, std::vector<Sort> args, Sort result);
  /// New bound variable. Every call yields a distinct symbol.
  const Symbol* make_var(const std::string& name, Sort sort, unsigned unit = 0,
                         std::string smt_name = {});
  /// Whether any symbol (declared function or variable wire name) uses `name`.
  bool name_in_use(std::string_view name) const;

  /// Interns `head(children...)`, checking sorts.
  Term intern(const Symbol* head, std::vector<Term> children);
  Term app(Op op, std::vector<Term> children);
  Term app(const Symbol* f, std::vector<Term> children) { return intern(f, std::move(children)); }
  Term var(const Symbol* v) { return intern(v, {}); }
  Term constant(const Symbol* c) { return intern(c, {}); }
  Term numeral(const Rational& value, Sort sort);
  Term numeral(long long value, Sort sort) { return numeral(Rational(value), sort); }
  Term boolean(bool b) { return app(b ? Op::True : Op::False, {}); }

  // Convenience builders that collapse degenerate arities.
  Term mk_not(Term t);
  Term mk_and(std::vector<Term> ts);
  Term mk_or(std::vector<Term> ts);
  Term mk_eq(Term a, Term b) { return app(Op::Eq, {a, b}); }

  const Symbol* op_symbol(Op op) const { return ops_[static_cast<std::size_t>(op)]; }
  const std::vector<const Symbol*>& declared_functions() const { return declared_order_; }
  /// Number of distinct term nodes allocated so far.
  std::size_t size() const { return nodes_.size(); }

 private:
  Symbol* new_symbol();
  Sort check_sorts(const Symbol* head, const std::vector<Term>& children) const;

  std::deque<Symbol> symbols_;
  std::deque<detail::TermNode> nodes_;
  std::unordered_multimap<std::size_t, const detail::TermNode*> table_;
  std::vector<const Symbol*> ops_;
  std::unordered_map<std::string, const Symbol*> functions_;
  std::vector<const Symbol*> declared_order_;
  std::unordered_map<std::string, const Symbol*> numerals_;
  std::unordered_map<std::string, const Symbol*> var_names_;
  std::size_t fresh_counter_ = 0;
};

/// Replaces bound variables according to `binding`. Variables outside the
/// binding are left in place.
Term substitute(TermManager& tm, Term t, const Binding& binding);
/// Like substitute, but throws EvalError unless the result is ground.
Term substitute_ground(TermManager& tm, Term t, const Binding& binding);

/// Free bound-variable symbols of `t`, in first-occurrence order.
std::vector<const Symbol*> free_vars(Term t);
bool contains_quantifier(Term t);
/// Calls `visit` once per distinct subterm, children before parents.
void for_each_subterm(Term t, const std::function<void(Term)>& visit);
void for_each_subterm(std::span<const Term> roots, const std::function<void(Term)>& visit);

struct TlsResult {
  enum class Kind { GroundAtom, Variable, UninterpretedHead, Undefined };
  Kind kind = Kind::Undefined;
  Term atom;                       // GroundAtom
  const Symbol* symbol = nullptr;  // Variable or UninterpretedHead

  unsigned unit() const { return symbol ? symbol->unit : 0; }
};

/// Top-level symbol of an arithmetic term. Applications and arithmetic
/// compounds resolve the same way whether or not they are ground; division,
/// ite and the other opaque heads are Undefined.
TlsResult tls(Term t);

/// SMT-LIB 2.6 rendering. Int numerals print bare or as `(- n)`, Real values
/// as `(/ p q)` or `(- (/ p q))`.
std::string print_smtlib(Term t);
std::string print_value(const Rational& v, Sort sort);
std::string quote_symbol(std::string_view name);

std::ostream& operator<<(std::ostream& os, Term t);

}  // namespace rdinst
