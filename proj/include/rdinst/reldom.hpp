#pragma once

#include "rdinst/frontend.hpp"
#include "rdinst/ordering.hpp"
#include "rdinst/term.hpp"
#include "rdinst/union_find.hpp"

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rdinst {

/// Names one of the sets the merge procedure works on: the domain of a
/// quantified variable, the result or an argument position of an
/// uninterpreted symbol, or the singleton of a ground term.
struct DomainKey {
  enum class Kind : std::uint8_t { Var, Func, FuncArg, Ground };

  Kind kind = Kind::Ground;
  const Symbol* symbol = nullptr;  // Var, Func, FuncArg
  unsigned arg = 0;                // FuncArg, 1-based
  Term term;                       // Ground

  static DomainKey var(const Symbol* x) { return {Kind::Var, x, 0, {}}; }
  static DomainKey func(const Symbol* f) { return {Kind::Func, f, 0, {}}; }
  static DomainKey func_arg(const Symbol* f, unsigned i) { return {Kind::FuncArg, f, i, {}}; }
  static DomainKey ground(Term u) { return {Kind::Ground, nullptr, 0, u}; }

  friend bool operator==(const DomainKey& a, const DomainKey& b) {
    return a.kind == b.kind && a.symbol == b.symbol && a.arg == b.arg && a.term == b.term;
  }
  std::string to_string() const;
};

struct DomainKeyHash {
  std::size_t operator()(const DomainKey& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.kind);
    h = h * 31 + std::hash<const void*>{}(k.symbol);
    h = h * 31 + k.arg;
    h = h * 31 + std::hash<Term>{}(k.term);
    return h;
  }
};

/// Set key for an arithmetic term, following its top-level symbol. Absent for
/// Bool terms and for terms whose top-level symbol is undefined.
std::optional<DomainKey> term_key(Term t);

/// The relevant domain of one quantified variable, in preference order.
struct VarDomain {
  const Symbol* var = nullptr;
  std::vector<Term> terms;
  bool default_injected = false;
};

class RelevantDomains {
 public:
  /// Runs the merge rules over every subterm of the ground conjuncts and the
  /// unit bodies, then reads off each variable's domain: the ground terms in
  /// its class, ordered by `stats`, or the default 0 of its sort when empty.
  static RelevantDomains build(TermManager& tm, std::span<const Term> ground, std::span<const QuantifiedUnit> units,
                               const StatsTable& stats);

  const std::vector<VarDomain>& domains() const { return domains_; }
  /// Throws std::out_of_range for a variable that belongs to no unit.
  const VarDomain& domain(const Symbol* var) const;

  bool has_key(const DomainKey& k) const { return index_.count(k) > 0; }
  /// Throws std::logic_error for an unregistered key.
  std::size_t key_index(const DomainKey& k) const;
  std::size_t find(const DomainKey& k) { return uf_.find(key_index(k)); }
  bool same_class(const DomainKey& a, const DomainKey& b) { return find(a) == find(b); }
  const std::vector<DomainKey>& keys() const { return keys_; }
  /// All classes, each listed in key registration order.
  std::vector<std::vector<DomainKey>> classes();

  /// One line per variable: `RD(x,j) = {t1, t2, ...}`.
  std::string dump() const;

  std::size_t register_key(const DomainKey& k);
  void merge(const DomainKey& a, const DomainKey& b);

 private:
  std::vector<DomainKey> keys_;
  std::unordered_map<DomainKey, std::size_t, DomainKeyHash> index_;
  UnionFind uf_;
  std::vector<VarDomain> domains_;
  std::unordered_map<const Symbol*, std::size_t> by_var_;
};

}  // namespace rdinst
