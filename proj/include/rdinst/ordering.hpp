#pragma once

#include "rdinst/frontend.hpp"
#include "rdinst/term.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rdinst {

struct TermStats {
  std::uint64_t occurrences = 0;  // syntactic (tree) occurrences, saturating
  unsigned depth = 0;
  unsigned birth = 0;  // iteration that first added the term; input terms are 0
};

/// Iteration at which each ground term first appeared. Entries are sticky.
using BirthMap = std::unordered_map<Term, unsigned>;

/// Statistics for every ground term of the current formula, plus a cache of
/// printed forms used for the final tie-break.
class StatsTable {
 public:
  const TermStats* find(Term t) const;
  /// Stats of `t`, or an "absent" record (0 occurrences, latest birth).
  TermStats get(Term t) const;
  const std::string& text(Term t) const;
  std::size_t size() const { return stats_.size(); }

  void set(Term t, TermStats s) { stats_[t] = s; }
  const std::unordered_map<Term, TermStats>& entries() const { return stats_; }

 private:
  std::unordered_map<Term, TermStats> stats_;
  mutable std::unordered_map<Term, std::string> text_;
};

/// Counts, for each ground subterm of `ground` and of the unit bodies, how
/// many times it occurs in the formula read as a tree.
StatsTable compute_stats(std::span<const Term> ground, std::span<const QuantifiedUnit> units, const BirthMap& birth);

/// Preference comparison: more occurrences first, then shallower, then
/// older, then lexicographically smaller SMT-LIB text. Returns <0 when `a`
/// precedes `b`, >0 when `b` precedes `a`, 0 only for identical terms.
int compare_terms(Term a, Term b, const StatsTable& stats);
inline bool precedes(Term a, Term b, const StatsTable& stats) { return compare_terms(a, b, stats) < 0; }

void sort_by_preference(std::vector<Term>& terms, const StatsTable& stats);

/// max(1, ceil(n / fraction)) for n > 0, else 0.
std::size_t preferred_count(std::size_t n, unsigned fraction = 3);
/// The preferred prefix of an already ordered list.
std::vector<Term> preferred(std::span<const Term> ordered, unsigned fraction = 3);

}  // namespace rdinst
